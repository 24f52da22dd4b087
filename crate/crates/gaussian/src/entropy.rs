use std::f64::consts::{E, LN_2};

use crate::covariance::{CovarianceMatrix, BONA_FIDE_TOL};
use crate::error::{GaussianError, Result};
use crate::spectrum::symplectic_spectrum;

/// Entropy in bits contributed by one symplectic eigenvalue:
/// `((ν+1)/2) log₂((ν+1)/2) - ((ν-1)/2) log₂((ν-1)/2)`.
///
/// Values within `BONA_FIDE_TOL` below 1 are clamped to 1, where `h = 0`.
pub fn entropic_h(nu: f64) -> Result<f64> {
    if nu.is_nan() || nu < 1.0 - BONA_FIDE_TOL {
        return Err(GaussianError::EntropyDomain(nu));
    }
    let nu = nu.max(1.0);
    let plus = 0.5 * (nu + 1.0);
    let minus = 0.5 * (nu - 1.0);
    if minus == 0.0 {
        return Ok(0.0);
    }
    // plus·log₂(plus) - minus·log₂(minus) rearranged to avoid cancellation at large ν.
    Ok(plus.log2() + minus * (1.0 / minus).ln_1p() / LN_2)
}

/// Large-ν form of [`entropic_h`]: `log₂((e/2) ν)`.
pub fn entropic_h_asymptotic(nu: f64) -> Result<f64> {
    if !(nu > 0.0) {
        return Err(GaussianError::EntropyDomain(nu));
    }
    Ok((0.5 * E * nu).log2())
}

/// Von Neumann entropy in bits, `Σ h(ν_k)` over the symplectic spectrum.
pub fn von_neumann_entropy(v: &CovarianceMatrix) -> Result<f64> {
    symplectic_spectrum(v)?
        .iter()
        .map(|&nu| entropic_h(nu))
        .sum()
}
