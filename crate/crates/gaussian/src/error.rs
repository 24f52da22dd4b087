use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaussianError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unphysical state: {0}")]
    Unphysical(String),

    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    #[error("entropic function undefined for nu = {0} < 1")]
    EntropyDomain(f64),

    #[error("singular matrix while {0}")]
    Singular(&'static str),
}

pub type Result<T> = std::result::Result<T, GaussianError>;

pub(crate) fn invalid(msg: impl Into<String>) -> GaussianError {
    GaussianError::InvalidArgument(msg.into())
}
