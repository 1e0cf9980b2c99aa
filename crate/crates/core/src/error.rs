use thiserror::Error;

/// Errors raised by problem setup, sampling, optimizers and hybrid runners.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// The objective (or a constraint) produced NaN or infinity.
    #[error("non-finite objective value {value} at position {position:?}")]
    NonFiniteObjective { position: Vec<f64>, value: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
