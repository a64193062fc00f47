use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A formula was evaluated outside its domain (e.g. a division by zero).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported divergent series: {0}")]
    UnsupportedSeries(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("grid too narrow: boundary amplitude {amplitude:e} exceeds {limit:e}")]
    GridTooNarrow { amplitude: f64, limit: f64 },

    #[error("non-finite values after step {step}")]
    NumericalBlowup { step: usize },

    #[error("potential evaluation failed at x = {x}, t = {t}: {reason}")]
    Potential { x: String, t: f64, reason: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
