//! Closed-form asymptotic entropies, Holevo bound, mutual information and key
//! rate in the limits `η → 1` and `μ → ∞`.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};
use twoway_gaussian::entropic_h;

use crate::attacks::AttackParams;
use crate::error::{invalid, QkdError, Result};

/// Modulation at which the asymptotic limit is evaluated by default.
pub const DEFAULT_MODULATION: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TotalSpectrum {
    pub nu1: f64,
    pub nu2: f64,
    pub nu3nu4_product: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalSpectrum {
    pub nubar1: f64,
    pub nubar2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutualInformation {
    pub i_ab: f64,
    pub sigma: f64,
    pub sigma_prime: f64,
    pub delta: f64,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeyRateReport {
    pub nu1: f64,
    pub nu2: f64,
    pub nu3nu4_product: f64,
    pub nubar1: f64,
    pub nubar2: f64,
    pub S_E: f64,
    pub S_E_cond: f64,
    pub I_AB: f64,
    pub chi_EA: f64,
    pub R: f64,
    pub sigma: f64,
    pub sigma_prime: f64,
    pub Delta: f64,
}

pub(crate) fn check_transmissivity(t: f64) -> Result<()> {
    if t > 0.0 && t < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("transmissivity T = {t} outside (0, 1)")))
    }
}

fn check_modulation(mu: f64) -> Result<()> {
    if mu > 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("modulation mu = {mu} must be positive")))
    }
}

fn check(t: f64, a: &AttackParams, mu: f64) -> Result<()> {
    check_transmissivity(t)?;
    check_modulation(mu)?;
    a.check_physical()
}

fn root(radicand: f64, what: &str) -> Result<f64> {
    if radicand < 0.0 {
        return Err(QkdError::UnphysicalRegime(format!(
            "{what} has negative radicand {radicand}"
        )));
    }
    Ok(radicand.sqrt())
}

pub fn asymptotic_total_spectrum(t: f64, a: &AttackParams, mu: f64) -> Result<TotalSpectrum> {
    check(t, a, mu)?;
    total_spectrum_unchecked(t, a, mu)
}

fn total_spectrum_unchecked(t: f64, a: &AttackParams, mu: f64) -> Result<TotalSpectrum> {
    let AttackParams { omega, g, g_prime } = *a;
    Ok(TotalSpectrum {
        nu1: root((omega - g) * (omega - g_prime), "nu1")?,
        nu2: root((omega + g) * (omega + g_prime), "nu2")?,
        nu3nu4_product: (1.0 - t).powi(2) * mu * mu,
    })
}

pub fn total_entropy_asymptotic(t: f64, a: &AttackParams, mu: f64) -> Result<f64> {
    let s = asymptotic_total_spectrum(t, a, mu)?;
    Ok(entropic_h(s.nu1)? + entropic_h(s.nu2)? + (0.25 * E * E * s.nu3nu4_product).log2())
}

pub fn conditional_spectrum_asymptotic(
    t: f64,
    a: &AttackParams,
    mu: f64,
) -> Result<ConditionalSpectrum> {
    check(t, a, mu)?;
    conditional_spectrum_unchecked(t, a, mu)
}

fn conditional_spectrum_unchecked(
    t: f64,
    a: &AttackParams,
    mu: f64,
) -> Result<ConditionalSpectrum> {
    let c = 2.0 * t.sqrt() / (1.0 + t);
    Ok(ConditionalSpectrum {
        nubar1: root(a.omega + c * a.g, "nubar1")? * root(a.omega + c * a.g_prime, "nubar1")?,
        nubar2: (1.0 - t * t) * mu,
    })
}

/// Entropy of Eve's output conditioned on Alice's data.
pub fn conditional_entropy_asymptotic(t: f64, a: &AttackParams, mu: f64) -> Result<f64> {
    let s = conditional_spectrum_asymptotic(t, a, mu)?;
    Ok(entropic_h(s.nubar1)? + (0.5 * E * s.nubar2).log2())
}

pub fn holevo_asymptotic(t: f64, a: &AttackParams, mu: f64) -> Result<f64> {
    check(t, a, mu)?;
    holevo_unchecked(t, a, mu)
}

fn holevo_unchecked(t: f64, a: &AttackParams, mu: f64) -> Result<f64> {
    let s = total_spectrum_unchecked(t, a, mu)?;
    let c = conditional_spectrum_unchecked(t, a, mu)?;
    Ok(
        entropic_h(s.nu1)? + entropic_h(s.nu2)? - entropic_h(c.nubar1)?
            + (0.5 * E * (1.0 - t) / (1.0 + t) * mu).log2(),
    )
}

pub fn mutual_information_asymptotic(
    t: f64,
    a: &AttackParams,
    mu: f64,
) -> Result<MutualInformation> {
    check(t, a, mu)?;
    mutual_information_unchecked(t, a, mu)
}

fn mutual_information_unchecked(t: f64, a: &AttackParams, mu: f64) -> Result<MutualInformation> {
    let (sigma, sigma_prime, delta) = sigmas(t, a)?;
    Ok(MutualInformation {
        i_ab: 0.5 * (t * t * mu * mu / (sigma * sigma_prime)).log2(),
        sigma,
        sigma_prime,
        delta,
    })
}

fn sigmas(t: f64, a: &AttackParams) -> Result<(f64, f64, f64)> {
    let delta = 1.0 + t * t + (1.0 - t * t) * a.omega;
    let c = 2.0 * (1.0 - t) * t.sqrt();
    let (sigma, sigma_prime) = (delta + c * a.g, delta + c * a.g_prime);
    if sigma <= 0.0 || sigma_prime <= 0.0 {
        return Err(QkdError::UnphysicalRegime(format!(
            "conditional variances sigma = {sigma}, sigma' = {sigma_prime} must be positive"
        )));
    }
    Ok((sigma, sigma_prime, delta))
}

/// Asymptotic key rate in bits per use; independent of the modulation.
pub fn keyrate_asymptotic(t: f64, a: &AttackParams) -> Result<f64> {
    check_transmissivity(t)?;
    a.check_physical()?;
    keyrate_unchecked(t, a)
}

/// [`keyrate_asymptotic`] without the physicality check, for attacks that are
/// physical by construction.
pub(crate) fn keyrate_unchecked(t: f64, a: &AttackParams) -> Result<f64> {
    let s = total_spectrum_unchecked(t, a, 1.0)?;
    let c = conditional_spectrum_unchecked(t, a, 1.0)?;
    let (sigma, sigma_prime, _) = sigmas(t, a)?;
    let lead = (2.0 * t * (1.0 + t) / (E * (1.0 - t) * (sigma * sigma_prime).sqrt())).log2();
    Ok(lead - entropic_h(s.nu1)? - entropic_h(s.nu2)? + entropic_h(c.nubar1)?)
}

pub fn keyrate_report(t: f64, a: &AttackParams, mu: f64) -> Result<KeyRateReport> {
    check(t, a, mu)?;
    let s = total_spectrum_unchecked(t, a, mu)?;
    let c = conditional_spectrum_unchecked(t, a, mu)?;
    let mi = mutual_information_unchecked(t, a, mu)?;
    let s_e = entropic_h(s.nu1)? + entropic_h(s.nu2)? + (0.25 * E * E * s.nu3nu4_product).log2();
    let s_e_cond = entropic_h(c.nubar1)? + (0.5 * E * c.nubar2).log2();
    Ok(KeyRateReport {
        nu1: s.nu1,
        nu2: s.nu2,
        nu3nu4_product: s.nu3nu4_product,
        nubar1: c.nubar1,
        nubar2: c.nubar2,
        S_E: s_e,
        S_E_cond: s_e_cond,
        I_AB: mi.i_ab,
        chi_EA: holevo_unchecked(t, a, mu)?,
        R: keyrate_unchecked(t, a)?,
        sigma: mi.sigma,
        sigma_prime: mi.sigma_prime,
        Delta: mi.delta,
    })
}
