use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("frame mismatch between points")]
    FrameMismatch,

    #[error("singular tridiagonal system at row {row}")]
    SingularSystem { row: usize },

    #[error("solver produced a non-finite value at t = {t}")]
    Unstable { t: f64 },

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("inapplicable: {0}")]
    Inapplicable(String),

    #[error("level mismatch {mismatch:e} exceeds tolerance {tolerance:e}")]
    LevelMismatch { mismatch: f64, tolerance: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
