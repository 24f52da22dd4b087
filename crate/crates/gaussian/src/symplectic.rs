use nalgebra::DMatrix;

use crate::error::{invalid, Result};

/// Tolerance on `S Ω Sᵀ = Ω`.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// The symplectic form: a direct sum of `n` copies of `[[0, 1], [-1, 0]]`.
pub fn symplectic_form(n: usize) -> Result<DMatrix<f64>> {
    if n == 0 {
        return Err(invalid("symplectic form needs at least one mode"));
    }
    let mut omega = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    Ok(omega)
}

/// A real `2n x 2n` matrix preserving the symplectic form.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    matrix: DMatrix<f64>,
}

impl SymplecticMatrix {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols || rows == 0 || rows % 2 != 0 {
            return Err(invalid(format!(
                "symplectic matrix must be 2n x 2n, got {rows} x {cols}"
            )));
        }
        let omega = symplectic_form(rows / 2)?;
        let residual = (&matrix * &omega * matrix.transpose() - &omega).amax();
        if residual > SYMPLECTIC_TOL {
            return Err(invalid(format!(
                "matrix is not symplectic (residual {residual:e})"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("symplectic matrix needs at least one mode"));
        }
        Ok(Self {
            matrix: DMatrix::identity(2 * n, 2 * n),
        })
    }

    pub fn modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `self · other`, i.e. `other` acts first.
    pub fn then_after(&self, other: &SymplecticMatrix) -> Result<Self> {
        if self.modes() != other.modes() {
            return Err(invalid("cannot compose symplectic maps of different sizes"));
        }
        Ok(Self {
            matrix: &self.matrix * &other.matrix,
        })
    }
}

/// Beam splitter of the given transmissivity acting on `modes = (i, j)` of an
/// `n`-mode system.
///
/// Output `i` is `√T a_i + √(1-T) a_j`, output `j` is `-√(1-T) a_i + √T a_j`.
pub fn beam_splitter(
    transmissivity: f64,
    modes: (usize, usize),
    n: usize,
) -> Result<SymplecticMatrix> {
    if !(0.0..=1.0).contains(&transmissivity) {
        return Err(invalid(format!(
            "transmissivity {transmissivity} outside [0, 1]"
        )));
    }
    let (i, j) = modes;
    if i == j || i >= n || j >= n {
        return Err(invalid(format!(
            "beam splitter modes ({i}, {j}) invalid for {n} modes"
        )));
    }
    let t = transmissivity.sqrt();
    let r = (1.0 - transmissivity).sqrt();
    let mut s = DMatrix::identity(2 * n, 2 * n);
    for k in 0..2 {
        let (a, b) = (2 * i + k, 2 * j + k);
        s[(a, a)] = t;
        s[(b, b)] = t;
        s[(a, b)] = r;
        s[(b, a)] = -r;
    }
    Ok(SymplecticMatrix { matrix: s })
}
