use thiserror::Error;

use crate::rational_core::Natural;

/// Everything that can go wrong in this crate.
///
/// Every variant except [`Error::Internal`] is a precondition violation: the
/// caller asked for something outside an operation's domain.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 1")]
    ZeroModulus,

    #[error("gcd({lhs}, {rhs}) = {shared} ≠ 1")]
    NotCoprime {
        lhs: Natural,
        rhs: Natural,
        shared: Natural,
    },

    #[error("{0} is not prime")]
    NotPrime(Natural),

    #[error("exponent tuple below threshold: every k must be ≥ {required}")]
    BelowThreshold { required: u64 },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("{0}")]
    Domain(String),

    /// A constructive step produced data that failed its own check. This is
    /// a defect in the implementation, never a consequence of the input.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn is_precondition(&self) -> bool {
        !matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
