use thiserror::Error;

/// Errors produced by the guessing-sequence library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("lexicographic position {value} is out of range for level {level}")]
    RankOutOfRange { value: String, level: usize },

    #[error("word has length {actual}, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("pi({level}) = {value} exceeds 2^{level}")]
    PiExceedsLevel { level: usize, value: String },

    #[error("level {level} would need {size} explicit members, above the sampling bound of {bound}")]
    SamplingBound { level: usize, size: String, bound: u64 },

    #[error("depth {depth} exceeds the limit of {max}")]
    DepthTooLarge { depth: usize, max: usize },

    #[error("level {level} is beyond the sequence horizon {horizon}")]
    BeyondHorizon { level: usize, horizon: usize },

    #[error("no dominance cutoff N <= {horizon} exists")]
    NoDominanceCutoff { horizon: usize },

    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("stage count {stages} exceeds the cap of {cap}")]
    StageCap { stages: usize, cap: usize },

    #[error("no level with pi = {width} found in [{from}, {horizon})")]
    PiSearchExhausted { width: usize, from: usize, horizon: usize },

    #[error("tree is missing stage {0}")]
    MissingStage(usize),

    #[error("witness construction failed: {0}")]
    Witness(String),

    #[error("expected an even n >= 2, got {0}")]
    OddOrZero(u64),

    #[error("unsupported walk dimension {0}")]
    InvalidDimension(usize),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(input: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.into(),
            reason: reason.into(),
        }
    }
}
