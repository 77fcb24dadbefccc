use thiserror::Error;

/// Errors raised by the engine.
///
/// Checked signals that are part of normal operation (non-divisibility,
/// non-membership in a y-polynomial ring) have their own types in
/// [`crate::laurent`] and are not folded into this enum.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("index {index} out of range (rank {rank})")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("resource cap exceeded: {0}")]
    Resource(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An internal consistency check failed. Indicates a bug or corrupted input.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
