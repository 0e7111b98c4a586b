//! Command-line front end: parse a JSON decision model, analyze it, solve
//! its sequential game, check it by Monte Carlo, or dump curve data.

mod model;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use ambit_core::game::{first_mover_pref, second_mover_pref, solve_sequential_game, GameSpec};
use ambit_core::oracle::monte_carlo_pref;
use ambit_core::preference::{pref_with_distribution_normalized, preferred_choice};
use ambit_core::TOLERANCE;

use model::{parse_model, DecisionModel};
use report::csv_field;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid model: {0}")]
    Validation(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Validation(_) => 4,
        }
    }
}

/// Maps a core error raised by bad command arguments (rather than by a bad
/// model document) to a usage error.
fn usage_from(err: ambit_core::Error) -> CliError {
    use ambit_core::Error::*;
    match err {
        InvalidPlayerCount { .. }
        | ChainTooSmall { .. }
        | ChoiceOutOfRange { .. }
        | IdenticalChoices
        | InvalidGridStep { .. }
        | NoSamples => CliError::Usage(err.to_string()),
        other => CliError::Validation(other.to_string()),
    }
}

#[derive(Parser)]
#[command(
    name = "ambit",
    version,
    about = "Decision analysis over expected-utility intervals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Filter dominated alternatives, report crossing points, preference
    /// segments, and the preferred choice under the model's rho
    /// distribution
    Analyze {
        file: PathBuf,
        /// Emit a machine-readable report at full precision
        #[arg(long)]
        json: bool,
    },
    /// Solve the sequential game in which each player takes a distinct
    /// alternative and wants the highest expected utility among the taken
    /// ones
    Game {
        file: PathBuf,
        /// Number of players; defaults to the model's `players` field
        #[arg(long)]
        players: Option<usize>,
        /// Report the two-player first-mover guarantees instead of the
        /// solved line of play
        #[arg(long, conflicts_with = "second_mover_given")]
        first_mover: bool,
        /// Report the best answers to an opponent holding this choice
        /// number
        #[arg(long, value_name = "CHOICE")]
        second_mover_given: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Sample rho from the model's distribution and compare empirical win
    /// frequencies against the analytic preferences
    Mc {
        file: PathBuf,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Emit per-alternative expected-utility curves over rho as CSV
    Curve {
        file: PathBuf,
        /// Grid spacing in (0, 1]
        #[arg(long)]
        step: f64,
    },
}

fn main() -> ExitCode {
    // Die quietly when a consumer like `head` closes the pipe early.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Analyze { file, json } => cmd_analyze(&file, json),
        Command::Game {
            file,
            players,
            first_mover,
            second_mover_given,
            json,
        } => cmd_game(&file, players, first_mover, second_mover_given, json),
        Command::Mc {
            file,
            samples,
            seed,
            json,
        } => cmd_mc(&file, samples, seed, json),
        Command::Curve { file, step } => cmd_curve(&file, step),
    }
}

fn load_model(path: &Path) -> Result<DecisionModel, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_model(&text)
}

fn cmd_analyze(path: &Path, json: bool) -> Result<(), CliError> {
    let model = load_model(path)?;
    let analysis = preferred_choice(&model.alternatives, &model.rho)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    if json {
        let out = report::analyze_json(&model, &analysis);
        println!(
            "{}",
            serde_json::to_string_pretty(&out).expect("serializable")
        );
    } else {
        report::print_analyze(&model, &analysis);
    }
    Ok(())
}

fn cmd_game(
    path: &Path,
    players_flag: Option<usize>,
    first_mover: bool,
    second_mover_given: Option<usize>,
    json: bool,
) -> Result<(), CliError> {
    let model = load_model(path)?;
    // The game is played over the filtered chain under the shared
    // uniform-rho objective; the model's rho distribution only drives
    // `analyze` and `mc`.
    let analysis = preferred_choice(&model.alternatives, &model.rho)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let chain = &analysis.chain;
    let crossings = &analysis.crossings;

    if first_mover || second_mover_given.is_some() {
        if let Some(players) = players_flag {
            if players != 2 {
                return Err(CliError::Usage(
                    "the first/second-mover formulas describe a 2-player game".into(),
                ));
            }
        }
        let (mode, rows) = if let Some(k) = second_mover_given {
            chain.choice(k).map_err(usage_from)?;
            let rows = (1..=chain.len())
                .filter(|&j| j != k)
                .map(|j| {
                    Ok((
                        j,
                        second_mover_pref(chain, crossings, j, k).map_err(usage_from)?,
                    ))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            ("second_mover", rows)
        } else {
            let rows = (1..=chain.len())
                .map(|j| {
                    Ok((
                        j,
                        first_mover_pref(chain, crossings, j).map_err(usage_from)?,
                    ))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            ("first_mover", rows)
        };
        let recommended = recommend(&rows);
        let table = report::table_json(
            &model,
            &analysis,
            mode,
            second_mover_given,
            &rows,
            recommended,
        );
        if json {
            println!(
                "{}",
                serde_json::to_string_pretty(&table).expect("serializable")
            );
        } else {
            report::print_table(&model, &analysis, &table);
        }
        return Ok(());
    }

    let players = players_flag.or(model.players).ok_or_else(|| {
        CliError::Usage("--players is required (or set `players` in the model)".into())
    })?;
    let spec = GameSpec::new(chain, crossings, players).map_err(usage_from)?;
    let solution = solve_sequential_game(&spec).map_err(usage_from)?;
    if json {
        let out = report::game_json(&model, &analysis, players, &solution);
        println!(
            "{}",
            serde_json::to_string_pretty(&out).expect("serializable")
        );
    } else {
        report::print_game(&model, &analysis, &solution);
    }
    Ok(())
}

/// The row with the highest value, ties to the highest choice number.
fn recommend(rows: &[(usize, f64)]) -> usize {
    let max = rows
        .iter()
        .map(|&(_, v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    rows.iter()
        .filter(|&&(_, v)| v >= max - TOLERANCE)
        .map(|&(c, _)| c)
        .max()
        .expect("nonempty rows")
}

fn cmd_mc(path: &Path, samples: u64, seed: u64, json: bool) -> Result<(), CliError> {
    let model = load_model(path)?;
    let analysis = preferred_choice(&model.alternatives, &model.rho)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let mc = monte_carlo_pref(&analysis.chain, &model.rho, samples, seed).map_err(usage_from)?;
    // Frequencies are probabilities, so compare them against normalized
    // preferences (identical to the literal values except for bounded rho).
    let prefs = (1..=analysis.chain.len())
        .map(|j| {
            pref_with_distribution_normalized(&analysis.chain, &analysis.crossings, j, &model.rho)
        })
        .collect::<ambit_core::Result<Vec<f64>>>()
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let out = report::mc_json(&model, &analysis, &mc, &prefs);
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&out).expect("serializable")
        );
    } else {
        report::print_mc(&out);
    }
    Ok(())
}

fn cmd_curve(path: &Path, step: f64) -> Result<(), CliError> {
    if !(step.is_finite() && step > 0.0 && step <= 1.0) {
        return Err(CliError::Usage(format!(
            "--step must lie in (0, 1], got {step}"
        )));
    }
    let model = load_model(path)?;
    let header: Vec<String> = std::iter::once("rho".to_string())
        .chain(model.alternatives.iter().map(|a| csv_field(&a.name)))
        .collect();
    println!("{}", header.join(","));
    let points = ((1.0 / step) * (1.0 + 1e-9)).floor() as usize + 1;
    for t in 0..points {
        let rho = (t as f64 * step).min(1.0);
        let mut row = vec![format!("{rho}")];
        for alt in &model.alternatives {
            let value = alt
                .interval
                .at(rho)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            row.push(format!("{value}"));
        }
        println!("{}", row.join(","));
    }
    Ok(())
}
