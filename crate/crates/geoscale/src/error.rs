use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("numerically singular: {0}")]
    Singular(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error("randomness failure (retry with another seed): {0}")]
    RandomnessFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
