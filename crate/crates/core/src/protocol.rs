//! Covariance matrices of the two-way protocol in entanglement-based form.
//!
//! Bob's EPR source `B1 B1'` sends `B1'` through the channel (`E1` enters),
//! Alice mixes it with `A'` of her EPR source `A A'` on a beam splitter of
//! transmissivity `η`, and sends it back (`E2` enters). Outputs are ordered
//! `(B1, A, A'', B2)`.

use twoway_gaussian::extended::{ExtendedCovariance, Real, TwoFloat};
use twoway_gaussian::{
    apply_symplectic, beam_splitter, partial_trace, symplectic_spectrum, tensor, CovarianceMatrix,
    SymplecticMatrix,
};

use crate::attacks::{eve_cm, AttackParams};
use crate::error::{invalid, Result};

pub const MODE_B1: usize = 0;
pub const MODE_A: usize = 1;
pub const MODE_A2: usize = 2;
pub const MODE_B2: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    pub transmissivity: f64,
    pub eta: f64,
    pub mu_b: f64,
    pub mu_a: f64,
}

impl ProtocolParams {
    pub fn new(transmissivity: f64, eta: f64, mu_b: f64, mu_a: f64) -> Result<Self> {
        let p = Self {
            transmissivity,
            eta,
            mu_b,
            mu_a,
        };
        p.validate()?;
        Ok(p)
    }

    /// Modulation `μ` on Bob's side and the divergent displacement variance
    /// `μ/(1-η)` on Alice's: `μ_B = μ + 1`, `μ_A = μ/(1-η) + 1`.
    pub fn displacement_limit(transmissivity: f64, eta: f64, mu: f64) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(invalid(format!("modulation mu = {mu} must be positive")));
        }
        if !(eta > 0.0 && eta < 1.0) {
            return Err(invalid(format!("eta = {eta} outside (0, 1)")));
        }
        Self::new(transmissivity, eta, mu + 1.0, mu / (1.0 - eta) + 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        let Self {
            transmissivity: t,
            eta,
            mu_b,
            mu_a,
        } = *self;
        if !(t > 0.0 && t < 1.0) {
            return Err(invalid(format!("transmissivity T = {t} outside (0, 1)")));
        }
        if !(eta > 0.0 && eta < 1.0) {
            return Err(invalid(format!("eta = {eta} outside (0, 1)")));
        }
        if !(mu_b >= 1.0) || !mu_b.is_finite() {
            return Err(invalid(format!(
                "mu_B = {mu_b} must be a finite value >= 1"
            )));
        }
        if !(mu_a >= 1.0) || !mu_a.is_finite() {
            return Err(invalid(format!(
                "mu_A = {mu_a} must be a finite value >= 1"
            )));
        }
        Ok(())
    }
}

fn validate_attack(a: &AttackParams) -> Result<()> {
    AttackParams::new(a.omega, a.g, a.g_prime).map(|_| ())
}

/// Closed-form total covariance matrix, row-major `8 x 8`, in any scalar type.
pub fn total_cm_entries<S: Real>(p: &ProtocolParams, a: &AttackParams) -> Result<Vec<S>> {
    p.validate()?;
    validate_attack(a)?;
    let f = S::from_f64;
    let one = S::one();
    let (t, eta, mu_b, mu_a) = (f(p.transmissivity), f(p.eta), f(p.mu_b), f(p.mu_a));
    let (omega, g, gp) = (f(a.omega), f(a.g), f(a.g_prime));
    let (one_t, one_eta) = (one - t, one - eta);

    let mu_b_sq = mu_b * mu_b - one;
    let mu_a_sq = mu_a * mu_a - one;
    let phi = -(t * one_eta * mu_b_sq).square_root();
    let theta = t * (eta * mu_b_sq).square_root();
    let k = eta * mu_a + one_eta * (t * mu_b + one_t * omega);
    let xi = (eta * mu_a_sq).square_root();
    let tau = (t * one_eta * mu_a_sq).square_root();
    let eps = t * t * eta * mu_b + t * one_eta * mu_a + (t * eta + one) * one_t * omega;
    let g_eps = f(2.0) * one_t * (eta * t).square_root();
    let delta = (t * eta * one_eta).square_root() * (mu_a - t * mu_b - one_t * omega);
    let g_delta = -one_t * one_eta.square_root();

    let mut v = vec![S::zero(); 64];
    let mut put = |i: usize, j: usize, x: S| {
        v[i * 8 + j] = x;
        v[j * 8 + i] = x;
    };
    // Diagonal blocks: (q, p) entries of modes B1, A, A'', B2.
    put(0, 0, mu_b);
    put(1, 1, mu_b);
    put(2, 2, mu_a);
    put(3, 3, mu_a);
    put(4, 4, k);
    put(5, 5, k);
    put(6, 6, eps + g_eps * g);
    put(7, 7, eps + g_eps * gp);
    // Z-type correlations.
    for (m, n, c) in [(0, 2, phi), (0, 3, theta), (1, 2, xi), (1, 3, tau)] {
        put(2 * m, 2 * n, c);
        put(2 * m + 1, 2 * n + 1, -c);
    }
    put(4, 6, delta + g_delta * g);
    put(5, 7, delta + g_delta * gp);
    Ok(v)
}

pub fn total_cm(p: &ProtocolParams, a: &AttackParams) -> Result<CovarianceMatrix> {
    let v = total_cm_entries::<f64>(p, a)?;
    Ok(CovarianceMatrix::from_row_slice(8, &v)?)
}

/// [`total_cm`] evaluated in double-double arithmetic, for the large-modulation limit.
pub fn total_cm_extended(p: &ProtocolParams, a: &AttackParams) -> Result<ExtendedCovariance> {
    let v = total_cm_entries::<TwoFloat>(p, a)?;
    Ok(ExtendedCovariance::from_entries(8, v)?)
}

/// The total covariance matrix obtained by propagating the six-mode state
/// `B1, B1', A, A', E1, E2` through the three beam splitters.
pub fn total_cm_circuit(p: &ProtocolParams, a: &AttackParams) -> Result<CovarianceMatrix> {
    p.validate()?;
    validate_attack(a)?;
    let input = tensor(
        &tensor(
            &CovarianceMatrix::two_mode_squeezed(p.mu_b)?,
            &CovarianceMatrix::two_mode_squeezed(p.mu_a)?,
        ),
        &eve_cm(a)?,
    );
    let (b1p, a_p, e1, e2) = (1, 3, 4, 5);
    let forward = beam_splitter(p.transmissivity, (b1p, e1), 6)?;
    let alice = beam_splitter(p.eta, (b1p, a_p), 6)?;
    let backward = beam_splitter(p.transmissivity, (b1p, e2), 6)?;
    let circuit: SymplecticMatrix = backward.then_after(&alice)?.then_after(&forward)?;
    let out = apply_symplectic(&circuit, &input)?;
    Ok(partial_trace(&out, &[0, 2, a_p, b1p])?)
}

/// Bob's reduced state on `(B1, B2)`.
pub fn bob_cm(p: &ProtocolParams, a: &AttackParams) -> Result<CovarianceMatrix> {
    Ok(partial_trace(&total_cm(p, a)?, &[MODE_B1, MODE_B2])?)
}

/// Bob's state given Alice's data, modelled by removing Alice's modulation (`μ_A = 1`).
pub fn conditional_cm(p: &ProtocolParams, a: &AttackParams) -> Result<CovarianceMatrix> {
    bob_cm(&ProtocolParams { mu_a: 1.0, ..*p }, a)
}

/// Largest relative difference between the symplectic spectra of
/// [`conditional_cm`] and of Bob's modes after heterodyning `A` on the total state.
///
/// Both spectra are computed in double-double arithmetic.
pub fn conditioning_deviation(p: &ProtocolParams, a: &AttackParams) -> Result<f64> {
    let exact = total_cm_extended(p, a)?
        .heterodyne_condition(&[MODE_A])?
        .partial_trace(&[0, 2])?
        .symplectic_spectrum()?;
    let substituted = ExtendedCovariance::from_entries(
        4,
        bob_entries_extended(&ProtocolParams { mu_a: 1.0, ..*p }, a)?,
    )?
    .symplectic_spectrum()?;
    Ok(exact
        .iter()
        .zip(substituted.iter())
        .map(|(x, y)| (x - y).abs() / x.abs())
        .fold(0.0, f64::max))
}

fn bob_entries_extended(p: &ProtocolParams, a: &AttackParams) -> Result<Vec<TwoFloat>> {
    let full = total_cm_entries::<TwoFloat>(p, a)?;
    let idx = [0, 1, 6, 7];
    let full = &full;
    Ok(idx
        .iter()
        .flat_map(|&r| idx.iter().map(move |&c| full[r * 8 + c]))
        .collect())
}

/// Symplectic spectrum of [`conditional_cm`] in double-double arithmetic.
pub fn conditional_spectrum_extended(p: &ProtocolParams, a: &AttackParams) -> Result<Vec<f64>> {
    let v = ExtendedCovariance::from_entries(
        4,
        bob_entries_extended(&ProtocolParams { mu_a: 1.0, ..*p }, a)?,
    )?;
    Ok(v.symplectic_spectrum()?.values().to_vec())
}

/// Symplectic spectrum of [`total_cm`] in double-double arithmetic.
pub fn total_spectrum_extended(p: &ProtocolParams, a: &AttackParams) -> Result<Vec<f64>> {
    Ok(total_cm_extended(p, a)?
        .symplectic_spectrum()?
        .values()
        .to_vec())
}

/// Symplectic spectrum of the f64 [`conditional_cm`].
pub fn conditional_spectrum(p: &ProtocolParams, a: &AttackParams) -> Result<Vec<f64>> {
    Ok(symplectic_spectrum(&conditional_cm(p, a)?)?
        .values()
        .to_vec())
}
