//! The JSON decision-model document and its validation into core types.
//!
//! Schema:
//!
//! ```json
//! {
//!   "frame": [ {"label": "$1", "utility": 1.0}, ... ],
//!   "alternatives": [
//!     {"name": "decline", "interval": [6.0, 6.0]},
//!     {"name": "play", "bpa": [
//!       {"subset": ["$1"], "mass": 0.4},
//!       {"subset": "*", "mass": 0.1}
//!     ]}
//!   ],
//!   "rho": {"kind": "uniform"},
//!   "players": 2
//! }
//! ```
//!
//! `frame` and `players` are optional; `frame` becomes required as soon as
//! any alternative is given as a `bpa`. `rho` is one of
//! `{"kind": "uniform"}`, `{"kind": "bounded", "lower": a, "upper": b}`, or
//! `{"kind": "piecewise_cdf", "points": [[rho, F], ...]}`. The subset `"*"`
//! stands for the whole frame. Labels are cosmetic; the numeric `utility`
//! is what enters the arithmetic.

use std::collections::BTreeSet;

use serde::Deserialize;

use ambit_core::evidence::{Alternative, MassFunction, UtilityFrame, UtilityInterval};
use ambit_core::preference::RhoDistribution;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    #[serde(default)]
    frame: Option<Vec<OutcomeDoc>>,
    alternatives: Vec<AlternativeDoc>,
    rho: RhoDoc,
    #[serde(default)]
    players: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutcomeDoc {
    label: String,
    utility: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlternativeDoc {
    name: String,
    #[serde(default)]
    bpa: Option<Vec<FocalDoc>>,
    #[serde(default)]
    interval: Option<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FocalDoc {
    subset: SubsetDoc,
    mass: f64,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum SubsetDoc {
    Whole(String),
    Labels(Vec<String>),
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RhoDoc {
    Uniform,
    Bounded { lower: f64, upper: f64 },
    PiecewiseCdf { points: Vec<[f64; 2]> },
}

/// A validated decision model, ready for analysis. The frame, if any, has
/// already been folded into the computed alternative intervals.
#[derive(Debug, Clone)]
pub struct DecisionModel {
    pub alternatives: Vec<Alternative>,
    pub rho: RhoDistribution,
    pub players: Option<usize>,
}

/// Parses and validates a model document. Schema violations surface as
/// parse errors; semantic violations name the offending path.
pub fn parse_model(text: &str) -> Result<DecisionModel, CliError> {
    let doc: ModelDoc = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;

    let frame = match doc.frame {
        Some(outcomes) => Some(
            UtilityFrame::new(outcomes.into_iter().map(|o| (o.label, o.utility)).collect())
                .map_err(|e| CliError::Validation(format!("frame: {e}")))?,
        ),
        None => None,
    };

    if doc.alternatives.is_empty() {
        return Err(CliError::Validation(
            "alternatives: at least one alternative is required".into(),
        ));
    }

    let mut alternatives = Vec::with_capacity(doc.alternatives.len());
    for (index, alt) in doc.alternatives.into_iter().enumerate() {
        let path = format!("alternatives[{index}]");
        let id = index + 1;
        let built = match (alt.bpa, alt.interval) {
            (Some(_), Some(_)) => {
                return Err(CliError::Validation(format!(
                    "{path}: give either `bpa` or `interval`, not both"
                )))
            }
            (None, None) => {
                return Err(CliError::Validation(format!(
                    "{path}: one of `bpa` or `interval` is required"
                )))
            }
            (Some(focals), None) => {
                let frame = frame.as_ref().ok_or_else(|| {
                    CliError::Validation(format!(
                        "{path}.bpa: a top-level `frame` is required for bpa alternatives"
                    ))
                })?;
                let mass = build_mass(&path, frame, focals)?;
                Alternative::from_mass_function(id, alt.name, frame, mass)
                    .map_err(|e| CliError::Validation(format!("{path}.bpa: {e}")))?
            }
            (None, Some([lower, upper])) => {
                let interval = UtilityInterval::new(lower, upper)
                    .map_err(|e| CliError::Validation(format!("{path}.interval: {e}")))?;
                Alternative::from_interval(id, alt.name, interval)
                    .map_err(|e| CliError::Validation(format!("{path}: {e}")))?
            }
        };
        alternatives.push(built);
    }

    let rho = match doc.rho {
        RhoDoc::Uniform => RhoDistribution::Uniform,
        RhoDoc::Bounded { lower, upper } => RhoDistribution::bounded(lower, upper)
            .map_err(|e| CliError::Validation(format!("rho: {e}")))?,
        RhoDoc::PiecewiseCdf { points } => {
            RhoDistribution::piecewise_cdf(points.into_iter().map(|[x, f]| (x, f)).collect())
                .map_err(|e| CliError::Validation(format!("rho.points: {e}")))?
        }
    };

    Ok(DecisionModel {
        alternatives,
        rho,
        players: doc.players,
    })
}

fn build_mass(
    path: &str,
    frame: &UtilityFrame,
    focals: Vec<FocalDoc>,
) -> Result<MassFunction, CliError> {
    let mut elements = Vec::with_capacity(focals.len());
    for (i, focal) in focals.into_iter().enumerate() {
        let subset: BTreeSet<String> = match focal.subset {
            SubsetDoc::Whole(token) if token == "*" => frame.full_subset(),
            SubsetDoc::Whole(token) => {
                return Err(CliError::Validation(format!(
                    "{path}.bpa[{i}].subset: expected a list of labels or \"*\", got \"{token}\""
                )))
            }
            SubsetDoc::Labels(labels) => {
                for l in &labels {
                    if !frame.contains(l) {
                        return Err(CliError::Validation(format!(
                            "{path}.bpa[{i}].subset: unknown outcome label `{l}`"
                        )));
                    }
                }
                labels.into_iter().collect()
            }
        };
        elements.push((subset, focal.mass));
    }
    MassFunction::new(elements).map_err(|e| CliError::Validation(format!("{path}.bpa: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    const WHEEL: &str = r#"{
        "frame": [
            {"label": "$1", "utility": 1},
            {"label": "$5", "utility": 5},
            {"label": "$10", "utility": 10},
            {"label": "$20", "utility": 20}
        ],
        "alternatives": [
            {"name": "decline", "interval": [6.0, 6.0]},
            {"name": "play", "bpa": [
                {"subset": ["$1"], "mass": 0.4},
                {"subset": ["$5"], "mass": 0.2},
                {"subset": ["$10"], "mass": 0.2},
                {"subset": ["$20"], "mass": 0.1},
                {"subset": "*", "mass": 0.1}
            ]}
        ],
        "rho": {"kind": "uniform"}
    }"#;

    #[test]
    fn parses_the_wheel_model() {
        let model = parse_model(WHEEL).unwrap();
        assert_eq!(model.alternatives.len(), 2);
        let play = &model.alternatives[1];
        assert!((play.interval.lower() - 5.50).abs() < 1e-9);
        assert!((play.interval.upper() - 7.40).abs() < 1e-9);
        let decline = &model.alternatives[0];
        assert_eq!(decline.interval.lower(), 6.0);
        assert_eq!(decline.interval.upper(), 6.0);
    }

    #[test]
    fn rejects_bad_mass_sum_with_path() {
        let text = r#"{
            "frame": [{"label": "a", "utility": 1}],
            "alternatives": [{"name": "x", "bpa": [{"subset": ["a"], "mass": 0.9}]}],
            "rho": {"kind": "uniform"}
        }"#;
        let err = parse_model(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("alternatives[0].bpa"), "{msg}");
        assert!(msg.contains("sum"), "{msg}");
    }

    #[test]
    fn rejects_unknown_label_with_path() {
        let text = r#"{
            "frame": [{"label": "a", "utility": 1}],
            "alternatives": [{"name": "x", "bpa": [{"subset": ["b"], "mass": 1.0}]}],
            "rho": {"kind": "uniform"}
        }"#;
        let msg = parse_model(text).unwrap_err().to_string();
        assert!(msg.contains("alternatives[0].bpa[0].subset"), "{msg}");
    }

    #[test]
    fn rejects_bpa_without_frame() {
        let text = r#"{
            "alternatives": [{"name": "x", "bpa": [{"subset": ["a"], "mass": 1.0}]}],
            "rho": {"kind": "uniform"}
        }"#;
        let msg = parse_model(text).unwrap_err().to_string();
        assert!(msg.contains("frame"), "{msg}");
    }

    #[test]
    fn rejects_malformed_cdf_with_path() {
        let text = r#"{
            "alternatives": [{"name": "x", "interval": [0, 1]}],
            "rho": {"kind": "piecewise_cdf", "points": [[0, 0], [0.5, 0.9], [1, 0.8]]}
        }"#;
        let msg = parse_model(text).unwrap_err().to_string();
        assert!(msg.contains("rho.points"), "{msg}");
    }

    #[test]
    fn rejects_schema_violations_as_parse_errors() {
        assert!(matches!(
            parse_model("{not json").unwrap_err(),
            CliError::Parse(_)
        ));
        // Unknown top-level keys are schema violations.
        let text = r#"{"alternatives": [], "rho": {"kind": "uniform"}, "extra": 1}"#;
        assert!(matches!(parse_model(text).unwrap_err(), CliError::Parse(_)));
    }

    #[test]
    fn degenerate_direct_interval_is_accepted() {
        let text = r#"{
            "alternatives": [{"name": "sure", "interval": [6.0, 6.0]}],
            "rho": {"kind": "uniform"}
        }"#;
        let model = parse_model(text).unwrap();
        assert_eq!(model.alternatives[0].interval.length(), 0.0);
    }
}
