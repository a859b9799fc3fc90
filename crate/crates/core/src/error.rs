use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count {n} outside supported range 1..={max}")]
    QubitCount { n: u32, max: u32 },
    #[error("target index {index} out of range for database of size {size}")]
    IndexOutOfRange { index: u64, size: u64 },
    #[error("duplicate target index {0}")]
    DuplicateIndex(u64),
    #[error("target set must not be empty")]
    EmptyTargets,
    #[error("malformed pattern {pattern:?}: {reason}")]
    MalformedPattern { pattern: String, reason: String },
    #[error("alpha = {0} outside (0, 1) U (1, 2]")]
    AlphaOutOfRange(f64),
    #[error("probability vector invalid: {0}")]
    InvalidProbabilities(String),
    #[error("density matrix invalid: {0}")]
    InvalidDensityMatrix(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("reference state is not diagonal")]
    NotDiagonal,
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("normalizing maximum must be positive, got {0}")]
    NonPositiveMaximum(f64),
    #[error("t = {0} has no tabulated gamma; use the spectrum-based evaluator")]
    UntabulatedTargetCount(u64),
    #[error("trajectory too short: need {needed} iterations, have {have}")]
    TrajectoryTooShort { needed: usize, have: usize },
    #[error("trajectory lacks stage {0}")]
    MissingStage(&'static str),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
