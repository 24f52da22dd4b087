use nalgebra::Schur;

use crate::covariance::CovarianceMatrix;
use crate::error::{GaussianError, Result};
use crate::extended::symplectic_eigenvalues;
use crate::symplectic::symplectic_form;

/// Largest real part tolerated in an eigenvalue of `ΩV`, relative to `max(1, |λ|)`.
const REAL_PART_RESIDUE: f64 = 1e-8;

const SCHUR_MAX_ITERATIONS: usize = 1_000;

/// Symplectic eigenvalues, sorted in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticSpectrum {
    values: Vec<f64>,
}

impl SymplecticSpectrum {
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::NAN)
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(f64::NAN)
    }

    pub fn product(&self) -> f64 {
        self.values.iter().product()
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.values.iter()
    }
}

/// Symplectic eigenvalues of a positive-definite covariance matrix.
///
/// The eigenvalues of `ΩV` come in `±iν` pairs; the `n` moduli are returned.
/// The general (non-symmetric) eigensolver is used so no standard form is
/// assumed.
pub fn symplectic_spectrum(v: &CovarianceMatrix) -> Result<SymplecticSpectrum> {
    if !v.is_positive_definite() {
        return Err(GaussianError::Unphysical(
            "covariance matrix is not positive definite".into(),
        ));
    }
    let n = v.modes();
    let omega = symplectic_form(n)?;
    let Some(schur) = Schur::try_new(omega * v.matrix(), f64::EPSILON, SCHUR_MAX_ITERATIONS) else {
        // Unconverged Schur iteration: fall back to the Cholesky route, which needs no convergence luck.
        let entries: Vec<f64> = v.matrix().iter().copied().collect();
        return Ok(SymplecticSpectrum::new(symplectic_eigenvalues(
            &entries,
            2 * n,
        )?));
    };
    let eigenvalues = schur.complex_eigenvalues();

    let mut moduli = Vec::with_capacity(2 * n);
    for lambda in eigenvalues.iter() {
        let modulus = lambda.norm();
        if lambda.re.abs() > REAL_PART_RESIDUE * modulus.max(1.0) {
            return Err(GaussianError::NumericalDegeneracy(format!(
                "eigenvalue {} + {}i of ΩV is not purely imaginary",
                lambda.re, lambda.im
            )));
        }
        moduli.push(modulus);
    }
    moduli.sort_by(|a, b| b.total_cmp(a));
    let values = moduli
        .chunks(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect();
    Ok(SymplecticSpectrum::new(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;

    fn correlated_pair(omega: f64, g: f64, g_prime: f64) -> CovarianceMatrix {
        CovarianceMatrix::from_row_slice(
            4,
            &[
                omega, 0.0, g, 0.0, //
                0.0, omega, 0.0, g_prime, //
                g, 0.0, omega, 0.0, //
                0.0, g_prime, 0.0, omega,
            ],
        )
        .unwrap()
    }

    #[test]
    fn vacuum_spectrum_is_unity() {
        let s = symplectic_spectrum(&CovarianceMatrix::vacuum(2).unwrap()).unwrap();
        assert_eq!(s.len(), 2);
        for &nu in s.values() {
            assert_relative_eq!(nu, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn thermal_spectrum() {
        let s = symplectic_spectrum(&CovarianceMatrix::thermal(2.0).unwrap()).unwrap();
        assert_eq!(s.values().len(), 1);
        assert_relative_eq!(s.values()[0], 2.0, epsilon = 1e-14);
    }

    #[test]
    fn maximally_entangled_ancilla_pair_is_pure() {
        // ω=2, g=-g'=√3: ν±² = ω² + gg' ± ω|g+g'| = 4 - 3.
        let s = symplectic_spectrum(&correlated_pair(2.0, 3f64.sqrt(), -(3f64.sqrt()))).unwrap();
        for &nu in s.values() {
            assert_relative_eq!(nu, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn correlated_pair_matches_block_closed_form() {
        let (omega, g, gp) = (2.5, 0.7, -1.1);
        let s = symplectic_spectrum(&correlated_pair(omega, g, gp)).unwrap();
        let plus = (omega * omega + g * gp + omega * (g + gp).abs()).sqrt();
        let minus = (omega * omega + g * gp - omega * (g + gp).abs()).sqrt();
        assert_relative_eq!(s.max(), plus, epsilon = 1e-12);
        assert_relative_eq!(s.min(), minus, epsilon = 1e-12);
    }

    #[test]
    fn descending_order() {
        let v = crate::covariance::tensor(
            &CovarianceMatrix::thermal(1.5).unwrap(),
            &CovarianceMatrix::thermal(4.0).unwrap(),
        );
        let s = symplectic_spectrum(&v).unwrap();
        assert!(s.values()[0] > s.values()[1]);
        assert_relative_eq!(s.values()[0], 4.0, epsilon = 1e-13);
    }

    #[test]
    fn indefinite_matrix_is_unphysical() {
        let v = CovarianceMatrix::new(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            1.0, -1.0,
        ])))
        .unwrap();
        assert!(matches!(
            symplectic_spectrum(&v),
            Err(GaussianError::Unphysical(_))
        ));
        // ω=3, g=5 is symmetric but not positive definite.
        assert!(matches!(
            symplectic_spectrum(&correlated_pair(3.0, 5.0, 0.0)),
            Err(GaussianError::Unphysical(_))
        ));
    }

    #[test]
    fn unconverged_schur_falls_back() {
        // Schur iteration stalls on this matrix; the result must still match the closed form.
        let v = correlated_pair(1.0, 0.0, 0.8);
        let omega = symplectic_form(2).unwrap();
        assert!(Schur::try_new(omega * v.matrix(), f64::EPSILON, SCHUR_MAX_ITERATIONS).is_none());
        let s = symplectic_spectrum(&v).unwrap();
        assert_relative_eq!(s.values()[0], 1.8f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(s.values()[1], 0.2f64.sqrt(), epsilon = 1e-12);
    }
}
