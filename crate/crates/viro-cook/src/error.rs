use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("missing ingredient for dimension {0}")]
    MissingDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unknown leaf `{0}`")]
    UnknownLeaf(String),

    #[error("frontier at dimension {dim} exceeds the cap of {cap} vectors")]
    CapExceeded { dim: usize, cap: usize },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
