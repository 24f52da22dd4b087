//! Security analysis of two-way coherent-state CV-QKD in direct reconciliation
//! under two-mode coherent attacks.
//!
//! [`attacks`] describes Eve's correlated ancillas, [`protocol`] builds the
//! covariance matrices of the entanglement-based protocol, [`rates`] holds the
//! closed-form asymptotic key rate, and [`security`], [`scan`], [`oneway`] and
//! [`appendix`] build on it. [`export`] writes results as CSV or JSON.

pub mod appendix;
pub mod attacks;
pub mod error;
pub mod export;
pub mod oneway;
pub mod protocol;
pub mod rates;
pub mod scan;
pub mod security;

pub use attacks::{attack_from_class, AttackClass, AttackParams};
pub use error::{QkdError, Result};
pub use rates::{keyrate_asymptotic, KeyRateReport, DEFAULT_MODULATION};

/// `origin + k·step`, snapped to the nearest multiple of 1e-12 so grid values
/// such as 0.85 print as written.
pub(crate) fn grid_point(origin: f64, k: i64, step: f64) -> f64 {
    ((origin + k as f64 * step) * 1e12).round() / 1e12
}
