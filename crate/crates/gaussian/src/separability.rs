use crate::covariance::{CovarianceMatrix, BONA_FIDE_TOL};
use crate::error::{invalid, Result};
use crate::spectrum::symplectic_spectrum;

/// Partial transposition of the last mode: flips the sign of its p quadrature.
pub fn partial_transpose(v: &CovarianceMatrix) -> CovarianceMatrix {
    let mut m = v.matrix().clone();
    let p = 2 * v.modes() - 1;
    for k in 0..m.nrows() {
        if k != p {
            m[(p, k)] = -m[(p, k)];
            m[(k, p)] = -m[(k, p)];
        }
    }
    CovarianceMatrix::new(m).expect("sign flip preserves symmetry")
}

/// PPT test for a two-mode state; necessary and sufficient for 1x1 Gaussian states.
pub fn ppt_separable(v: &CovarianceMatrix) -> Result<bool> {
    if v.modes() != 2 {
        return Err(invalid(format!(
            "PPT test needs a two-mode state, got {} modes",
            v.modes()
        )));
    }
    let spectrum = symplectic_spectrum(&partial_transpose(v))?;
    Ok(spectrum.min() >= 1.0 - BONA_FIDE_TOL)
}
