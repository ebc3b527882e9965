use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid scalar: {0}")]
    InvalidScalar(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("inconsistent presentation: {0} reduces to a nonzero scalar")]
    Contradiction(String),
    #[error("completion needs a rule of degree {degree} above the bound {bound}")]
    BoundExceeded { degree: usize, bound: usize },
    #[error("search space of size {size} exceeds the bound {bound}")]
    SearchSizeExceeded { size: u128, bound: u64 },
    #[error("operation requires a prime field, got {0}")]
    NotFinite(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
