//! One-way coherent-state protocol with heterodyne detection in direct
//! reconciliation, under a single-mode collective (entangling-cloner) attack.
//!
//! Entanglement-based form: Alice heterodynes mode `A` of an EPR pair and sends
//! `A'` through a beam splitter of transmissivity `T` that mixes in a thermal
//! mode of variance `ω`. Eve holds the purification of `(A, B)`, so
//! `χ = S(AB) - S(B|α)`.

use twoway_gaussian::extended::{ExtendedCovariance, Real};
use twoway_gaussian::{
    apply_symplectic, beam_splitter, heterodyne_condition, partial_trace, tensor,
    von_neumann_entropy, CovarianceMatrix,
};

use crate::error::{invalid, QkdError, Result};
use crate::rates::check_transmissivity;

/// Alice's EPR variance for [`oneway_keyrate`].
pub const ONEWAY_MU_A: f64 = 1e9 + 1.0;
/// Variance used to confirm the rate no longer depends on the modulation.
pub const ONEWAY_MU_A_CHECK: f64 = 1e10 + 1.0;
pub const ONEWAY_MU_TOL: f64 = 1e-6;

fn check_inputs(t: f64, omega: f64, mu_a: f64) -> Result<()> {
    check_transmissivity(t)?;
    if !(omega >= 1.0) || !omega.is_finite() {
        return Err(invalid(format!(
            "thermal variance omega = {omega} below vacuum noise"
        )));
    }
    if !(mu_a >= 1.0) || !mu_a.is_finite() {
        return Err(invalid(format!(
            "mu_A = {mu_a} must be a finite value >= 1"
        )));
    }
    Ok(())
}

/// Heterodyne mutual information from Bob's unconditional and conditional variances.
fn heterodyne_information(v_b: f64, v_b_cond: f64) -> f64 {
    ((v_b + 1.0) / (v_b_cond + 1.0)).log2()
}

/// Key rate in the large-modulation limit, evaluated in double-double arithmetic.
///
/// Fails with [`QkdError::ModulationDependence`] if raising the modulation
/// tenfold still moves the rate by more than `ONEWAY_MU_TOL`.
pub fn oneway_keyrate(t: f64, omega: f64) -> Result<f64> {
    let r = oneway_keyrate_extended(t, omega, ONEWAY_MU_A)?;
    let check = oneway_keyrate_extended(t, omega, ONEWAY_MU_A_CHECK)?;
    if (r - check).abs() > ONEWAY_MU_TOL {
        return Err(QkdError::ModulationDependence(format!(
            "one-way rate {r} at mu_A = {ONEWAY_MU_A} vs {check} at mu_A = {ONEWAY_MU_A_CHECK}"
        )));
    }
    Ok(r)
}

pub fn oneway_keyrate_extended(t: f64, omega: f64, mu_a: f64) -> Result<f64> {
    check_inputs(t, omega, mu_a)?;
    let ab = ExtendedCovariance::two_mode_squeezed(mu_a)?
        .tensor(&ExtendedCovariance::thermal(omega)?)
        .apply_beam_splitter(t, (1, 2))?
        .partial_trace(&[0, 1])?;
    let b_cond = ab.heterodyne_condition(&[0])?;
    let info = heterodyne_information(ab.entry(2, 2).to_f64(), b_cond.entry(0, 0).to_f64());
    Ok(info - ab.von_neumann_entropy()? + b_cond.von_neumann_entropy()?)
}

/// Same rate in plain `f64` at a chosen modulation; accurate while `μ_A ≲ 10^6`.
pub fn oneway_keyrate_at(t: f64, omega: f64, mu_a: f64) -> Result<f64> {
    check_inputs(t, omega, mu_a)?;
    let input = tensor(
        &CovarianceMatrix::two_mode_squeezed(mu_a)?,
        &CovarianceMatrix::thermal(omega)?,
    );
    let out = apply_symplectic(&beam_splitter(t, (1, 2), 3)?, &input)?;
    let ab = partial_trace(&out, &[0, 1])?;
    let b_cond = heterodyne_condition(&ab, &[0])?;
    let info = heterodyne_information(ab.matrix()[(2, 2)], b_cond.matrix()[(0, 0)]);
    Ok(info - von_neumann_entropy(&ab)? + von_neumann_entropy(&b_cond)?)
}
