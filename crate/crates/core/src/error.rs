use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {0} out of range (expected 1..=64)")]
    DimensionOutOfRange(usize),

    #[error("value {value:#x} does not fit in {dim} bits")]
    ValueTooWide { value: u64, dim: usize },

    #[error("field degree {0} unsupported (expected 2..=32)")]
    UnsupportedDegree(usize),

    #[error("frobenius exponent {k} invalid for degree {n} (expected 1 <= k < n)")]
    FrobeniusExponent { k: usize, n: usize },

    #[error("not a transversal: {0}")]
    NotTransversal(String),

    #[error("index out of bounds: {0}")]
    IndexOutOfBounds(String),

    #[error("enumeration budget exceeded: need {needed}, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("invalid subgroup chain: {0}")]
    InvalidChain(String),

    #[error("invalid blueprint: {0}")]
    InvalidBlueprint(String),

    #[error("amalgamating blocks {first} and {second} gives {got} distinct elements, expected {expected}")]
    AmalgamationCollision {
        first: usize,
        second: usize,
        got: usize,
        expected: usize,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("factorization failed: {0}")]
    Factorization(String),

    #[error("decryption failed: {0}")]
    Decryption(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
