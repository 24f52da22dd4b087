use thiserror::Error;
use twoway_gaussian::GaussianError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QkdError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unphysical attack: {0}")]
    UnphysicalAttack(String),

    #[error("outside the physical regime of the closed form: {0}")]
    UnphysicalRegime(String),

    #[error("security threshold diverges: key rate still positive at omega = {0}")]
    DivergentThreshold(f64),

    #[error("key rate not monotone in omega: R({upper}) = {r_upper} > R({lower}) = {r_lower}")]
    NonMonotone {
        lower: f64,
        upper: f64,
        r_lower: f64,
        r_upper: f64,
    },

    #[error("key rate still depends on the modulation: {0}")]
    ModulationDependence(String),

    #[error(transparent)]
    Gaussian(#[from] GaussianError),

    #[error("output error: {0}")]
    Output(String),
}

pub type Result<T> = std::result::Result<T, QkdError>;

pub(crate) fn invalid(msg: impl Into<String>) -> QkdError {
    QkdError::InvalidParameter(msg.into())
}
