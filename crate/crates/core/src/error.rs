use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("point is not on the {domain} (deviation {deviation:e})")]
    OffDomain { domain: &'static str, deviation: f64 },
    #[error("non-finite integrand value at node {index}")]
    NonFinite { index: usize },
    #[error("tridiagonal eigen-solver did not converge for eigenvalue {index}")]
    EigenNoConvergence { index: usize },
    #[error("degenerate norm for degree {degree}")]
    DegenerateNorm { degree: usize },
    #[error("unsupported configuration: {0}")]
    Unsupported(&'static str),
    #[error("quadrature resolution {available} below the required degree {required}")]
    ResolutionShortfall { required: usize, available: usize },
    #[error("ill-conditioned fit: {0}")]
    IllConditionedFit(&'static str),
    #[error("length mismatch: expected at least {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter { name, value, reason }
}
