use thiserror::Error;

/// Errors raised by the engine, the geometry builders and the CLI front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScdrError {
    #[error("structural mismatch: {0}")]
    Structural(String),

    #[error("coordinate index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("substitution {0} has a nonzero constant term and recentering was not requested")]
    ConstantTerm(usize),

    #[error("parse error at offset {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("expression is not homogeneous in parity")]
    NonHomogeneous,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("singular input: {0}")]
    Singular(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, ScdrError>;
