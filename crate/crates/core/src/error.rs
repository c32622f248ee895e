use alloc::boxed::Box;
use alloc::string::String;

use crate::chain::StationaryVector;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("outside of domain: {0}")]
    Domain(String),

    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("series has a vanishing constant term and cannot be inverted")]
    SingularSeries,

    #[error("unsupported analytics: {0}")]
    Unsupported(String),

    #[error("tail certification failed: {0}")]
    Certification(String),

    #[error(
        "stationary solver did not converge after {} iterations (residual {:e})",
        .0.iterations,
        .0.residual
    )]
    Convergence(Box<StationaryVector>),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
