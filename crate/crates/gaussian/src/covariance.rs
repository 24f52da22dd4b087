use nalgebra::{DMatrix, Matrix2};

use crate::error::{invalid, GaussianError, Result};
use crate::spectrum::symplectic_spectrum;
use crate::symplectic::SymplecticMatrix;

/// Symmetry tolerance, relative to `max(1, max |V_ij|)`.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// A state is bona fide when every symplectic eigenvalue is at least `1 - BONA_FIDE_TOL`.
pub const BONA_FIDE_TOL: f64 = 1e-9;

/// Covariance matrix of an `n`-mode Gaussian state in shot-noise units.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    matrix: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Wraps a symmetric `2n x 2n` matrix. Physicality is not checked here,
    /// see [`CovarianceMatrix::is_bona_fide`].
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols || rows == 0 || rows % 2 != 0 {
            return Err(invalid(format!(
                "covariance matrix must be 2n x 2n, got {rows} x {cols}"
            )));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(invalid("covariance matrix has non-finite entries"));
        }
        let scale = matrix.amax().max(1.0);
        let asym = (&matrix - matrix.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(invalid(format!(
                "covariance matrix is not symmetric (residual {asym:e})"
            )));
        }
        Ok(Self {
            matrix: symmetrized(matrix),
        })
    }

    pub fn from_row_slice(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(invalid(format!(
                "expected {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn vacuum(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("state needs at least one mode"));
        }
        Ok(Self {
            matrix: DMatrix::identity(2 * n, 2 * n),
        })
    }

    /// Single-mode thermal state `ω I`.
    pub fn thermal(omega: f64) -> Result<Self> {
        if !(omega >= 1.0) {
            return Err(invalid(format!("thermal variance {omega} below vacuum")));
        }
        Ok(Self {
            matrix: DMatrix::from_diagonal_element(2, 2, omega),
        })
    }

    /// Two-mode squeezed vacuum `[[μI, √(μ²-1) Z], [√(μ²-1) Z, μI]]`.
    pub fn two_mode_squeezed(mu: f64) -> Result<Self> {
        if !(mu >= 1.0) || !mu.is_finite() {
            return Err(invalid(format!("EPR variance {mu} must be >= 1")));
        }
        let c = (mu * mu - 1.0).sqrt();
        let z = Matrix2::new(c, 0.0, 0.0, -c);
        let mut m = DMatrix::from_diagonal_element(4, 4, mu);
        m.view_mut((0, 2), (2, 2)).copy_from(&z);
        m.view_mut((2, 0), (2, 2)).copy_from(&z);
        Ok(Self { matrix: m })
    }

    pub fn modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    /// The 2x2 block coupling modes `i` and `j`.
    pub fn block(&self, i: usize, j: usize) -> Matrix2<f64> {
        self.matrix.fixed_view::<2, 2>(2 * i, 2 * j).into_owned()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.matrix.clone().cholesky().is_some()
    }

    pub fn is_bona_fide(&self) -> bool {
        match symplectic_spectrum(self) {
            Ok(spectrum) => spectrum.min() >= 1.0 - BONA_FIDE_TOL,
            Err(_) => false,
        }
    }
}

fn symmetrized(m: DMatrix<f64>) -> DMatrix<f64> {
    let t = m.transpose();
    (m + t) * 0.5
}

fn check_modes(n: usize, modes: &[usize], what: &str) -> Result<()> {
    for (k, &m) in modes.iter().enumerate() {
        if m >= n {
            return Err(invalid(format!(
                "{what}: mode {m} out of range for {n} modes"
            )));
        }
        if modes[..k].contains(&m) {
            return Err(invalid(format!("{what}: mode {m} listed twice")));
        }
    }
    Ok(())
}

fn quadrature_indices(modes: &[usize]) -> Vec<usize> {
    modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect()
}

/// `S V Sᵀ`.
pub fn apply_symplectic(s: &SymplecticMatrix, v: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    if s.modes() != v.modes() {
        return Err(invalid(format!(
            "symplectic map on {} modes applied to {}-mode state",
            s.modes(),
            v.modes()
        )));
    }
    let out = s.matrix() * v.matrix() * s.matrix().transpose();
    Ok(CovarianceMatrix {
        matrix: symmetrized(out),
    })
}

/// Direct sum `V₁ ⊕ V₂`; the modes of `second` follow those of `first`.
pub fn tensor(first: &CovarianceMatrix, second: &CovarianceMatrix) -> CovarianceMatrix {
    let (a, b) = (first.matrix.nrows(), second.matrix.nrows());
    let mut m = DMatrix::zeros(a + b, a + b);
    m.view_mut((0, 0), (a, a)).copy_from(&first.matrix);
    m.view_mut((a, a), (b, b)).copy_from(&second.matrix);
    CovarianceMatrix { matrix: m }
}

/// Reduced state on `keep`, in the order given.
pub fn partial_trace(v: &CovarianceMatrix, keep: &[usize]) -> Result<CovarianceMatrix> {
    if keep.is_empty() {
        return Err(invalid("partial trace must keep at least one mode"));
    }
    check_modes(v.modes(), keep, "partial trace")?;
    let idx = quadrature_indices(keep);
    Ok(CovarianceMatrix {
        matrix: v.matrix.select_rows(&idx).select_columns(&idx),
    })
}

/// State of the unmeasured modes after heterodyne detection of `measured`.
///
/// Returns `V_keep - C (V_meas + I)⁻¹ Cᵀ` on the remaining modes in
/// ascending order. The result does not depend on the measurement outcome.
pub fn heterodyne_condition(v: &CovarianceMatrix, measured: &[usize]) -> Result<CovarianceMatrix> {
    let n = v.modes();
    if measured.is_empty() || measured.len() >= n {
        return Err(invalid(
            "heterodyne conditioning needs a proper nonempty subset of modes",
        ));
    }
    check_modes(n, measured, "heterodyne conditioning")?;
    let keep: Vec<usize> = (0..n).filter(|m| !measured.contains(m)).collect();
    let ki = quadrature_indices(&keep);
    let mi = quadrature_indices(measured);

    let v_keep = v.matrix.select_rows(&ki).select_columns(&ki);
    let cross = v.matrix.select_rows(&ki).select_columns(&mi);
    let mut v_meas = v.matrix.select_rows(&mi).select_columns(&mi);
    v_meas += DMatrix::identity(mi.len(), mi.len());

    let chol = v_meas.cholesky().ok_or(GaussianError::Singular(
        "inverting the measured block plus vacuum noise",
    ))?;
    let solved = chol.solve(&cross.transpose());
    let out = v_keep - &cross * solved;
    Ok(CovarianceMatrix {
        matrix: symmetrized(out),
    })
}
