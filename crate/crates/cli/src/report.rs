//! Output shaping: human tables round to three decimals, machine-readable
//! JSON carries every number at full precision.

use serde::Serialize;

use ambit_core::game::GameSolution;
use ambit_core::oracle::McReport;
use ambit_core::preference::{PreferenceReport, RhoDistribution};

use crate::model::DecisionModel;

pub fn name_of(model: &DecisionModel, id: usize) -> &str {
    &model.alternatives[id - 1].name
}

pub fn rho_label(dist: &RhoDistribution) -> String {
    match dist {
        RhoDistribution::Uniform => "uniform rho".into(),
        RhoDistribution::Bounded { lower, upper } => {
            format!("bounded rho [{lower:.3}, {upper:.3}], unnormalized overlap")
        }
        RhoDistribution::PiecewiseCdf(cdf) => {
            format!("cdf-distributed rho ({} knots)", cdf.knots().len())
        }
    }
}

#[derive(Serialize)]
pub struct AnalyzeJson {
    pub alternatives: Vec<AltJson>,
    pub chain: Vec<ChainJson>,
    pub crossings: Vec<CrossingJson>,
    pub segments: Vec<SegmentJson>,
    pub preferred: PreferredJson,
}

#[derive(Serialize)]
pub struct AltJson {
    pub id: usize,
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub kept: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub choice: Option<usize>,
    pub pref: f64,
}

#[derive(Serialize)]
pub struct ChainJson {
    pub choice: usize,
    pub id: usize,
    pub name: String,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Serialize)]
pub struct CrossingJson {
    pub inner: usize,
    pub outer: usize,
    pub rho: f64,
}

#[derive(Serialize)]
pub struct SegmentJson {
    pub choice: usize,
    pub from: f64,
    pub to: f64,
}

#[derive(Serialize)]
pub struct PreferredJson {
    pub choice: usize,
    pub id: usize,
    pub name: String,
    pub pref: f64,
}

pub fn analyze_json(model: &DecisionModel, report: &PreferenceReport) -> AnalyzeJson {
    let chain_number_of = |id: usize| -> Option<usize> {
        report
            .chain
            .choices()
            .iter()
            .position(|c| c.original_id == id)
            .map(|i| i + 1)
    };
    let alternatives = model
        .alternatives
        .iter()
        .map(|alt| {
            let choice = chain_number_of(alt.id);
            AltJson {
                id: alt.id,
                name: alt.name.clone(),
                lower: alt.interval.lower(),
                upper: alt.interval.upper(),
                kept: choice.is_some(),
                choice,
                pref: report
                    .alternative_prefs
                    .iter()
                    .find(|(id, _)| *id == alt.id)
                    .map_or(0.0, |&(_, p)| p),
            }
        })
        .collect();
    let chain = report
        .chain
        .choices()
        .iter()
        .enumerate()
        .map(|(i, c)| ChainJson {
            choice: i + 1,
            id: c.original_id,
            name: name_of(model, c.original_id).to_string(),
            lower: c.interval.lower(),
            upper: c.interval.upper(),
        })
        .collect();
    let n = report.chain.len();
    let mut crossings = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            crossings.push(CrossingJson {
                inner: i,
                outer: j,
                rho: report.crossings.rho(i, j).expect("valid pair"),
            });
        }
    }
    let segments = report
        .segments
        .segments()
        .iter()
        .map(|s| SegmentJson {
            choice: s.choice,
            from: s.lo,
            to: s.hi,
        })
        .collect();
    AnalyzeJson {
        alternatives,
        chain,
        crossings,
        segments,
        preferred: PreferredJson {
            choice: report.preferred_choice,
            id: report.preferred_id,
            name: name_of(model, report.preferred_id).to_string(),
            pref: report.preference,
        },
    }
}

pub fn print_analyze(model: &DecisionModel, report: &PreferenceReport) {
    println!("alternatives");
    for alt in &model.alternatives {
        let status = report
            .chain
            .choices()
            .iter()
            .position(|c| c.original_id == alt.id)
            .map_or("discarded (dominated)".to_string(), |i| {
                format!("kept as choice {}", i + 1)
            });
        println!(
            "  {:>3}  {:<16} [{:.3}, {:.3}]  {}",
            alt.id,
            alt.name,
            alt.interval.lower(),
            alt.interval.upper(),
            status
        );
    }
    let n = report.chain.len();
    if n > 1 {
        println!("crossing points");
        for i in 1..=n {
            for j in (i + 1)..=n {
                println!(
                    "  rho({i},{j}) = {:.3}",
                    report.crossings.rho(i, j).expect("valid pair")
                );
            }
        }
    }
    println!("preference segments");
    for s in report.segments.segments() {
        println!("  choice {}  rho in [{:.3}, {:.3}]", s.choice, s.lo, s.hi);
    }
    println!("preference ({})", rho_label(&model.rho));
    for (i, pref) in report.chain_prefs.iter().enumerate() {
        let id = report.chain.choices()[i].original_id;
        println!("  choice {}  {:<16} {:.3}", i + 1, name_of(model, id), pref);
    }
    println!(
        "preferred: choice {} ({}), preference {:.3}",
        report.preferred_choice,
        name_of(model, report.preferred_id),
        report.preference
    );
}

#[derive(Serialize)]
pub struct GameJson {
    pub players: usize,
    pub moves: Vec<MoveJson>,
}

#[derive(Serialize)]
pub struct MoveJson {
    pub player: usize,
    pub choice: usize,
    pub id: usize,
    pub name: String,
    pub pref: f64,
}

pub fn game_json(
    model: &DecisionModel,
    report: &PreferenceReport,
    players: usize,
    solution: &GameSolution,
) -> GameJson {
    GameJson {
        players,
        moves: solution
            .moves
            .iter()
            .map(|m| {
                let id = report.chain.choices()[m.choice - 1].original_id;
                MoveJson {
                    player: m.player,
                    choice: m.choice,
                    id,
                    name: name_of(model, id).to_string(),
                    pref: m.pref,
                }
            })
            .collect(),
    }
}

pub fn print_game(model: &DecisionModel, report: &PreferenceReport, solution: &GameSolution) {
    println!("solved line of play");
    for m in &solution.moves {
        let id = report.chain.choices()[m.choice - 1].original_id;
        println!(
            "  player {} -> choice {} ({})  realized preference {:.3}",
            m.player,
            m.choice,
            name_of(model, id),
            m.pref
        );
    }
}

/// A quick-formula table: per-choice values with a recommended choice.
#[derive(Serialize)]
pub struct TableJson {
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub given: Option<usize>,
    pub values: Vec<TableRowJson>,
    pub recommended: PreferredJson,
}

#[derive(Serialize)]
pub struct TableRowJson {
    pub choice: usize,
    pub id: usize,
    pub name: String,
    pub pref: f64,
}

pub fn table_json(
    model: &DecisionModel,
    report: &PreferenceReport,
    mode: &str,
    given: Option<usize>,
    rows: &[(usize, f64)],
    recommended: usize,
) -> TableJson {
    let values: Vec<TableRowJson> = rows
        .iter()
        .map(|&(choice, pref)| {
            let id = report.chain.choices()[choice - 1].original_id;
            TableRowJson {
                choice,
                id,
                name: name_of(model, id).to_string(),
                pref,
            }
        })
        .collect();
    let rec_id = report.chain.choices()[recommended - 1].original_id;
    let rec_pref = rows
        .iter()
        .find(|(c, _)| *c == recommended)
        .map_or(0.0, |&(_, p)| p);
    TableJson {
        mode: mode.to_string(),
        given,
        values,
        recommended: PreferredJson {
            choice: recommended,
            id: rec_id,
            name: name_of(model, rec_id).to_string(),
            pref: rec_pref,
        },
    }
}

pub fn print_table(model: &DecisionModel, report: &PreferenceReport, table: &TableJson) {
    match table.given {
        Some(k) => {
            let id = report.chain.choices()[k - 1].original_id;
            println!("answering choice {k} ({})", name_of(model, id));
        }
        None => println!("moving first against a best-responding opponent"),
    }
    for row in &table.values {
        println!("  choice {}  {:<16} {:.3}", row.choice, row.name, row.pref);
    }
    println!(
        "recommended: choice {} ({}), preference {:.3}",
        table.recommended.choice, table.recommended.name, table.recommended.pref
    );
}

#[derive(Serialize)]
pub struct McJson {
    pub samples: u64,
    pub seed: u64,
    pub rows: Vec<McRowJson>,
}

#[derive(Serialize)]
pub struct McRowJson {
    pub choice: usize,
    pub id: usize,
    pub name: String,
    pub pref: f64,
    pub frequency: f64,
    pub deviation: f64,
    pub half_width: f64,
}

pub fn mc_json(
    model: &DecisionModel,
    report: &PreferenceReport,
    mc: &McReport,
    prefs: &[f64],
) -> McJson {
    McJson {
        samples: mc.samples,
        seed: mc.seed,
        rows: (0..report.chain.len())
            .map(|i| {
                let id = report.chain.choices()[i].original_id;
                McRowJson {
                    choice: i + 1,
                    id,
                    name: name_of(model, id).to_string(),
                    pref: prefs[i],
                    frequency: mc.frequencies[i],
                    deviation: mc.frequencies[i] - prefs[i],
                    half_width: mc.half_width[i],
                }
            })
            .collect(),
    }
}

pub fn print_mc(mc: &McJson) {
    println!("samples {}, seed {}", mc.samples, mc.seed);
    println!("  choice  name              pref    freq    deviation  99% half-width");
    for row in &mc.rows {
        println!(
            "  {:<6}  {:<16}  {:.3}   {:.3}   {:>+.3}     {:.3}",
            row.choice, row.name, row.pref, row.frequency, row.deviation, row.half_width
        );
    }
}

/// RFC-style field quoting: only when the text needs it.
pub fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}
