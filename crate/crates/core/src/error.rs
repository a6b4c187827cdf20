use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid scenario: {0}")]
    Scenario(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("behavior violates {what} by {excess:e}")]
    InvalidBehavior { what: &'static str, excess: f64 },
    #[error("strategy enumeration needs {needed} vertices, cap is {cap}")]
    EnumerationCap { needed: u128, cap: u128 },
    #[error("linear program stalled after {iterations} iterations")]
    LpStall { iterations: usize },
    #[error("linear program became numerically singular")]
    LpSingular,
    #[error("{failed} of {samples} samples failed the LP (limit 0.1%)")]
    TooManyFailures { failed: u64, samples: u64 },
    #[error("inequality file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
