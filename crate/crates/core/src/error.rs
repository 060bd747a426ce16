use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range user input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two values built over different groups were combined.
    #[error("group mismatch: {0}")]
    SpecMismatch(String),

    /// Cyclotomic values with different moduli were combined.
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("group order {order} exceeds the configured cap {cap}")]
    CapExceeded { order: u64, cap: u64 },

    /// A structural invariant of a value was violated.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// Two independent computations that must agree did not.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("verification failure: {0}")]
    VerificationFailure(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
