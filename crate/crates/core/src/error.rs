use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    ParameterInvalid(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("linear system has no solution")]
    NoSolution,

    #[error("brute-force oracle refused instance: {0}")]
    OracleTooLarge(String),

    #[error("expected weight {expected}, got {actual}")]
    WeightMismatch { expected: usize, actual: usize },

    #[error("index out of range")]
    IndexOutOfRange,

    #[error("word weight {actual} is not admissible (expected {expected})")]
    WeightInvalid { expected: usize, actual: usize },

    #[error("syndrome is not decodable")]
    Undecodable,

    #[error("attempt budget of {0} exhausted")]
    AttemptBudgetExceeded(u64),

    #[error("key generation exhausted after {0} tries")]
    KeygenExhausted(u64),

    #[error("the zero message cannot be signed")]
    ZeroMessage,

    #[error("unknown scheme: {0}")]
    UnknownScheme(String),

    #[error("malformed encoding: {0}")]
    Malformed(String),

    #[error("{0}")]
    Failure(String),
}

impl Error {
    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::Malformed(msg.into())
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::ParameterInvalid(msg.into())
    }
}
