use thiserror::Error;

/// Errors raised when an input violates an operation's preconditions.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("base dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("base dimension {0} outside 1..=14")]
    BaseDimension(usize),

    #[error("index {index} outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("indices must be strictly increasing: {0:?}")]
    UnsortedIndices(Vec<usize>),

    #[error("form is not homogeneous of bidegree ({p},{q})")]
    NotHomogeneous { p: usize, q: usize },

    #[error("form is not real: imaginary norm {imag_norm:e} exceeds {limit:e}")]
    NotReal { imag_norm: f64, limit: f64 },

    #[error("expected {expected} items, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("frame change matrix is singular")]
    Singular,

    #[error("invalid partition {parts:?}: {reason}")]
    InvalidPartition { parts: Vec<u32>, reason: String },

    #[error("theorem hypothesis unmet: {0}")]
    HypothesisUnmet(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("parse error at {field}: {message}")]
    Parse { field: String, message: String },
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
