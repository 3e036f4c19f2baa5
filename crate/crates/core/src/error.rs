use thiserror::Error;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input is outside the set of admissible values (non-positive length, zero scale, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// The inputs are valid but the requested closed form or boundary pair is not supported there.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
    /// A special function was asked for a value outside its real domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative method did not converge or a truncation limit was hit.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
