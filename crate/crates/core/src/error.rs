use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("no value assigned to unknown {0}")]
    UnassignedUnknown(String),
    #[error("requested {requested} digits, at most {available} available in double precision")]
    PrecisionUnavailable { requested: u32, available: u32 },
    #[error("series cutoffs differ: {0} vs {1}")]
    CutoffMismatch(usize, usize),
    #[error("series is not group-like")]
    NotGroupLike,
    #[error("point {0} lies outside the certified disk of the expansion at 0")]
    OutOfDomain(String),
    #[error("path passes within {clearance:e} of a singular point (minimum {minimum:e})")]
    PathTooClose { clearance: f64, minimum: f64 },
    #[error("word {word} is not a basis word of class {class}")]
    WordNotInClass { word: String, class: String },
    #[error("point {0} lies on the real axis")]
    RealAxis(String),
    #[error("cutoff {have} too small, need {need}")]
    CutoffTooSmall { have: usize, need: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
