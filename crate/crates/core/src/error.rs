use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} requires {requested} items, above the configured cap of {limit}")]
    CapExceeded {
        what: &'static str,
        requested: u128,
        limit: u128,
    },
    #[error("size mismatch: expected {expected}, got {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("parameter entries sum to {sum}, which exceeds one")]
    SumExceedsOne { sum: String },
    #[error("alpha, beta and gamma sum to {sum} instead of one")]
    SumNotOne { sum: String },
    #[error("negative parameter entry {value}")]
    NegativeEntry { value: String },
    #[error("value {value} outside the domain {domain}")]
    Domain { value: String, domain: &'static str },
    #[error("operation requires gamma = 0, got gamma = {gamma}")]
    NonZeroGamma { gamma: String },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid Young diagram: {0}")]
    InvalidDiagram(String),
}

pub type Result<T> = std::result::Result<T, Error>;
