use thiserror::Error;

/// Errors produced by the arithmetic layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input outside an operation's domain (non-coprime pair, index out of
    /// range, value out of its window, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A chain or composite collapsed to something that is not a cyclic
    /// quotient singularity.
    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    /// An operation was applied to a value that violates its contract
    /// (flip of a divisorial neighborhood, Mori sequence from a
    /// non-initial neighborhood, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// An identity the theory guarantees failed to hold. Reaching this
    /// indicates a bug, not bad user input.
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
