use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid algebra context: {0}")]
    InvalidContext(String),

    #[error("context mismatch: {0} vs {1}")]
    ContextMismatch(String, String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("weight {weight} is not antidominant: {violated}")]
    NotAntidominant { weight: String, violated: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("truncation: {0}")]
    Truncation(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
