use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular (rank {rank} of {size})")]
    Singular { rank: usize, size: usize },

    #[error("input vectors are linearly dependent (rank {rank} of {count})")]
    Dependent { rank: usize, count: usize },

    #[error("dense matrix with {cols} columns exceeds the limit of {limit}")]
    TooWide { cols: usize, limit: usize },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("polynomial has degree {degree} > 2 (offending monomial {monomial})")]
    DegreeTooHigh { degree: usize, monomial: String },

    #[error("variables x{i} and x{j} have no cross term x{i}*x{j}")]
    MissingCrossTerm { i: usize, j: usize },

    #[error("index {index} out of range for {len} variables")]
    IndexOutOfRange { index: usize, len: usize },

    #[error(
        "enumeration of 2^{log2_size} elements exceeds the cap of 2^{cap}; raise it with --cap"
    )]
    CapExceeded { log2_size: usize, cap: usize },

    #[error("{n} variables exceed the truth-table limit of {limit}")]
    TooManyVariables { n: usize, limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;
