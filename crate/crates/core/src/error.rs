use thiserror::Error;

/// Errors raised by kernel evaluation, sampling and verification.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of a kernel, transform or sampler.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter violates its positivity or range constraint.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A grid is malformed (not strictly increasing, empty, repeated points).
    #[error("invalid grid: {0}")]
    Grid(String),

    /// Cholesky factorization failed even at the largest jitter.
    #[error("matrix is not positive semidefinite: leading minor {minor} failed at jitter {jitter:e}")]
    NotPsd { minor: usize, jitter: f64 },

    /// Inputs that must agree (grids, replicate shapes) do not.
    #[error("mismatch: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
