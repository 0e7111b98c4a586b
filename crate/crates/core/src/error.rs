use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced while building models or evaluating operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("utility frame must contain at least one outcome")]
    EmptyFrame,
    #[error("duplicate outcome label `{0}` in utility frame")]
    DuplicateLabel(String),
    #[error("utility of outcome `{label}` must be finite, got {value}")]
    NonFiniteUtility { label: String, value: f64 },
    #[error("unknown outcome label `{0}`")]
    UnknownLabel(String),
    #[error("focal element {index} is the empty set")]
    EmptyFocalElement { index: usize },
    #[error("focal element {index} duplicates an earlier subset")]
    DuplicateFocalElement { index: usize },
    #[error("mass of focal element {index} must lie in (0, 1], got {mass}")]
    MassOutOfRange { index: usize, mass: f64 },
    #[error("focal masses sum to {sum}, expected 1 within tolerance")]
    MassSumMismatch { sum: f64 },
    #[error("interval bounds must be finite with lower <= upper, got [{lower}, {upper}]")]
    InvalidInterval { lower: f64, upper: f64 },
    #[error("alternative id must be a positive integer")]
    InvalidAlternativeId,
    #[error("rho must lie in [0, 1], got {0}")]
    RhoOutOfRange(f64),
    #[error("intervals have equal length; no unique indifference point exists")]
    DegenerateIntervalPair,
    #[error("intervals are not nested; the pair is ordered by dominance, filter first")]
    IntervalsNotNested,
    #[error("at least one alternative is required")]
    NoAlternatives,
    #[error("choice {choice} outside chain 1..={len}")]
    ChoiceOutOfRange { choice: usize, len: usize },
    #[error("choice {0} is not a member of the candidate set")]
    ChoiceNotInSet(usize),
    #[error("choices must differ")]
    IdenticalChoices,
    #[error("operation needs a chain of at least {required} choices, got {len}")]
    ChainTooSmall { required: usize, len: usize },
    #[error("chain of {len} choices exceeds the supported maximum of {max}")]
    ChainTooLarge { len: usize, max: usize },
    #[error("crossing table built for {crossings} choices, chain has {chain}")]
    CrossingSizeMismatch { crossings: usize, chain: usize },
    #[error("rho bounds must satisfy 0 <= lower < upper <= 1, got [{lower}, {upper}]")]
    InvalidRhoBounds { lower: f64, upper: f64 },
    #[error("invalid cdf knots: {0}")]
    InvalidCdf(String),
    #[error("player count {players} must lie in 1..={choices}")]
    InvalidPlayerCount { players: usize, choices: usize },
    #[error("grid step must lie in (0, {max}], got {step}")]
    InvalidGridStep { step: f64, max: f64 },
    #[error("sample count must be at least 1")]
    NoSamples,
}
