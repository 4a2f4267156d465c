use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The factoring budget ran out before the integer was fully split.
    #[error("incomplete factorization: composite cofactor {0} remains")]
    IncompleteFactorization(String),

    /// A value that must be prime is not.
    #[error("{0} is not prime")]
    NotPrime(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
