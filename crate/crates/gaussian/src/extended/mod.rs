//! Double-double precision route for badly scaled covariance matrices.
//!
//! When a state mixes variances of order `10^12` with symplectic eigenvalues
//! of order one, rounding the matrix to `f64` already destroys the small
//! eigenvalues. [`ExtendedCovariance`] keeps entries as [`TwoFloat`] (about 32
//! significant digits) and computes the spectrum through a Cholesky factor
//! `V = L Lᵀ`: the singular values of the antisymmetric `Lᵀ Ω L` are the
//! symplectic eigenvalues, each appearing twice. They are extracted with a
//! cyclic Jacobi sweep on `(Lᵀ Ω L)ᵀ (Lᵀ Ω L)`.

mod real;

pub use real::Real;
pub use twofloat::TwoFloat;

use crate::covariance::{CovarianceMatrix, SYMMETRY_TOL};
use crate::entropy::entropic_h;
use crate::error::{invalid, GaussianError, Result};
use crate::spectrum::SymplecticSpectrum;

const MAX_JACOBI_SWEEPS: usize = 100;

/// Covariance matrix with double-double entries, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedCovariance {
    dim: usize,
    entries: Vec<TwoFloat>,
}

impl ExtendedCovariance {
    pub fn from_entries(dim: usize, entries: Vec<TwoFloat>) -> Result<Self> {
        if dim == 0 || !dim.is_multiple_of(2) || entries.len() != dim * dim {
            return Err(invalid(format!(
                "extended covariance needs 2n x 2n entries, got dim {dim} with {} entries",
                entries.len()
            )));
        }
        if entries.iter().any(|x| !x.is_valid() || !x.hi().is_finite()) {
            return Err(invalid("extended covariance has non-finite entries"));
        }
        let scale = entries.iter().map(|x| x.hi().abs()).fold(1.0, f64::max);
        for i in 0..dim {
            for j in 0..i {
                let diff = (entries[i * dim + j] - entries[j * dim + i]).hi().abs();
                if diff > SYMMETRY_TOL * scale {
                    return Err(invalid(format!(
                        "extended covariance not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn from_f64(v: &CovarianceMatrix) -> Self {
        let dim = v.matrix().nrows();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(TwoFloat::from(v.matrix()[(i, j)]));
            }
        }
        Self { dim, entries }
    }

    /// Rounds every entry to `f64`.
    pub fn to_f64(&self) -> CovarianceMatrix {
        let values: Vec<f64> = self.entries.iter().map(|x| x.hi() + x.lo()).collect();
        CovarianceMatrix::from_row_slice(self.dim, &values).expect("symmetric by construction")
    }

    pub fn vacuum(n: usize) -> Result<Self> {
        Ok(Self::from_f64(&CovarianceMatrix::vacuum(n)?))
    }

    pub fn thermal(omega: f64) -> Result<Self> {
        Ok(Self::from_f64(&CovarianceMatrix::thermal(omega)?))
    }

    /// Two-mode squeezed vacuum with the correlation `√(μ²-1)` evaluated in
    /// double-double precision.
    pub fn two_mode_squeezed(mu: f64) -> Result<Self> {
        if !(mu >= 1.0) || !mu.is_finite() {
            return Err(invalid(format!("EPR variance {mu} must be >= 1")));
        }
        let m = TwoFloat::from(mu);
        let c = (m * m - TwoFloat::from(1.0)).square_root();
        let zero = TwoFloat::from(0.0);
        #[rustfmt::skip]
        let entries = vec![
            m, zero, c, zero,
            zero, m, zero, -c,
            c, zero, m, zero,
            zero, -c, zero, m,
        ];
        Self::from_entries(4, entries)
    }

    pub fn modes(&self) -> usize {
        self.dim / 2
    }

    pub fn entry(&self, i: usize, j: usize) -> TwoFloat {
        self.entries[i * self.dim + j]
    }

    pub fn tensor(&self, other: &ExtendedCovariance) -> Self {
        let dim = self.dim + other.dim;
        let mut entries = vec![TwoFloat::from(0.0); dim * dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                entries[i * dim + j] = self.entry(i, j);
            }
        }
        for i in 0..other.dim {
            for j in 0..other.dim {
                entries[(self.dim + i) * dim + self.dim + j] = other.entry(i, j);
            }
        }
        Self { dim, entries }
    }

    /// Applies the beam splitter of [`crate::beam_splitter`] to modes `(i, j)`,
    /// with `√T` and `√(1-T)` evaluated in double-double precision.
    pub fn apply_beam_splitter(&self, transmissivity: f64, modes: (usize, usize)) -> Result<Self> {
        if !(0.0..=1.0).contains(&transmissivity) {
            return Err(invalid(format!(
                "transmissivity {transmissivity} outside [0, 1]"
            )));
        }
        let (i, j) = modes;
        let n = self.modes();
        if i == j || i >= n || j >= n {
            return Err(invalid(format!(
                "beam splitter modes ({i}, {j}) invalid for {n} modes"
            )));
        }
        let t = TwoFloat::from(transmissivity);
        let c = t.square_root();
        let s = (TwoFloat::from(1.0) - t).square_root();

        // Rows then columns: out = S V Sᵀ, touching only the four affected indices.
        let mut m = self.entries.clone();
        let d = self.dim;
        for k in 0..2 {
            let (a, b) = (2 * i + k, 2 * j + k);
            for col in 0..d {
                let (va, vb) = (m[a * d + col], m[b * d + col]);
                m[a * d + col] = c * va + s * vb;
                m[b * d + col] = c * vb - s * va;
            }
        }
        for k in 0..2 {
            let (a, b) = (2 * i + k, 2 * j + k);
            for row in 0..d {
                let (va, vb) = (m[row * d + a], m[row * d + b]);
                m[row * d + a] = c * va + s * vb;
                m[row * d + b] = c * vb - s * va;
            }
        }
        Ok(Self { dim: d, entries: m })
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(invalid("partial trace must keep at least one mode"));
        }
        check_modes(self.modes(), keep)?;
        let idx = quadratures(keep);
        Ok(Self {
            dim: idx.len(),
            entries: self.select(&idx, &idx),
        })
    }

    /// Heterodyne detection of `measured`; remaining modes in ascending order.
    pub fn heterodyne_condition(&self, measured: &[usize]) -> Result<Self> {
        let n = self.modes();
        if measured.is_empty() || measured.len() >= n {
            return Err(invalid(
                "heterodyne conditioning needs a proper nonempty subset of modes",
            ));
        }
        check_modes(n, measured)?;
        let keep: Vec<usize> = (0..n).filter(|m| !measured.contains(m)).collect();
        let (ki, mi) = (quadratures(&keep), quadratures(measured));

        let v_keep = self.select(&ki, &ki);
        let cross = self.select(&ki, &mi);
        let mut v_meas = self.select(&mi, &mi);
        for k in 0..mi.len() {
            v_meas[k * mi.len() + k] += TwoFloat::from(1.0);
        }
        let chol = cholesky(&v_meas, mi.len()).ok_or(GaussianError::Singular(
            "inverting the measured block plus vacuum noise",
        ))?;

        let (rows, cols) = (ki.len(), mi.len());
        let mut out = v_keep;
        // out -= C (V_meas + I)⁻¹ Cᵀ, one row of C at a time.
        let mut solved = Vec::with_capacity(rows);
        for r in 0..rows {
            let row: Vec<TwoFloat> = (0..cols).map(|c| cross[r * cols + c]).collect();
            solved.push(cholesky_solve(&chol, cols, &row));
        }
        for r in 0..rows {
            for c in 0..rows {
                let dot = (0..cols)
                    .map(|k| cross[c * cols + k] * solved[r][k])
                    .fold(TwoFloat::from(0.0), |acc, x| acc + x);
                out[r * rows + c] -= dot;
            }
        }
        symmetrize(&mut out, rows);
        Ok(Self {
            dim: rows,
            entries: out,
        })
    }

    /// Symplectic eigenvalues, rounded to `f64` after the extended-precision solve.
    pub fn symplectic_spectrum(&self) -> Result<SymplecticSpectrum> {
        let values = symplectic_eigenvalues(&self.entries, self.dim)?;
        Ok(SymplecticSpectrum::new(
            values.iter().map(|x| x.to_f64()).collect(),
        ))
    }

    pub fn von_neumann_entropy(&self) -> Result<f64> {
        self.symplectic_spectrum()?
            .iter()
            .map(|&nu| entropic_h(nu))
            .sum()
    }

    /// Row-major `rows x cols` submatrix.
    fn select(&self, rows: &[usize], cols: &[usize]) -> Vec<TwoFloat> {
        rows.iter()
            .flat_map(|&r| cols.iter().map(move |&c| self.entry(r, c)))
            .collect()
    }
}

fn check_modes(n: usize, modes: &[usize]) -> Result<()> {
    for (k, &m) in modes.iter().enumerate() {
        if m >= n || modes[..k].contains(&m) {
            return Err(invalid(format!(
                "mode {m} invalid or repeated for {n} modes"
            )));
        }
    }
    Ok(())
}

fn quadratures(modes: &[usize]) -> Vec<usize> {
    modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect()
}

fn symmetrize<S: Real>(a: &mut [S], n: usize) {
    let half = S::from_f64(0.5);
    for i in 0..n {
        for j in 0..i {
            let avg = (a[i * n + j] + a[j * n + i]) * half;
            a[i * n + j] = avg;
            a[j * n + i] = avg;
        }
    }
}

/// Lower Cholesky factor of a row-major symmetric matrix, `None` unless positive definite.
pub(crate) fn cholesky<S: Real>(a: &[S], n: usize) -> Option<Vec<S>> {
    let mut l = vec![S::zero(); n * n];
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d = d - l[j * n + k] * l[j * n + k];
        }
        if !(d > S::zero()) {
            return None;
        }
        let djj = d.square_root();
        l[j * n + j] = djj;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s = s - l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s.quotient(djj);
        }
    }
    Some(l)
}

fn cholesky_solve<S: Real>(l: &[S], n: usize, b: &[S]) -> Vec<S> {
    let mut y = vec![S::zero(); n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s = s - l[i * n + k] * y[k];
        }
        y[i] = s.quotient(l[i * n + i]);
    }
    let mut x = vec![S::zero(); n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s = s - l[k * n + i] * x[k];
        }
        x[i] = s.quotient(l[i * n + i]);
    }
    x
}

/// Eigenvalues of a symmetric row-major matrix by cyclic Jacobi rotations, descending.
pub(crate) fn symmetric_eigenvalues<S: Real>(a: &[S], n: usize) -> Vec<S> {
    let mut a = a.to_vec();
    let eps = S::from_f64(S::EPS);
    let two = S::from_f64(2.0);
    let frob = a.iter().fold(S::zero(), |acc, &x| acc + x * x);
    let target = eps * eps * frob;

    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut off = S::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off = off + a[i * n + j] * a[i * n + j];
                }
            }
        }
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let (app, aqq) = (a[p * n + p], a[q * n + q]);
                let smaller = if app.magnitude() < aqq.magnitude() {
                    app.magnitude()
                } else {
                    aqq.magnitude()
                };
                if apq.magnitude() <= eps * smaller {
                    a[p * n + q] = S::zero();
                    a[q * n + p] = S::zero();
                    continue;
                }
                let theta = (aqq - app).quotient(two * apq);
                let t = if theta.magnitude() > S::from_f64(S::EPS.sqrt().recip()) {
                    S::one().quotient(two * theta)
                } else {
                    let t = S::one()
                        .quotient(theta.magnitude() + (theta * theta + S::one()).square_root());
                    if theta < S::zero() {
                        -t
                    } else {
                        t
                    }
                };
                let c = S::one().quotient((t * t + S::one()).square_root());
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = S::zero();
                a[q * n + p] = S::zero();
            }
        }
    }
    let mut diag: Vec<S> = (0..n).map(|i| a[i * n + i]).collect();
    diag.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    diag
}

/// Symplectic eigenvalues (descending) via `V = L Lᵀ` and the singular values of `Lᵀ Ω L`.
pub(crate) fn symplectic_eigenvalues<S: Real>(v: &[S], dim: usize) -> Result<Vec<S>> {
    let l = cholesky(v, dim).ok_or_else(|| {
        GaussianError::Unphysical("covariance matrix is not positive definite".into())
    })?;

    // Ω L: row 2k gets row 2k+1 of L, row 2k+1 gets minus row 2k.
    let mut omega_l = vec![S::zero(); dim * dim];
    for k in 0..dim / 2 {
        for c in 0..dim {
            omega_l[2 * k * dim + c] = l[(2 * k + 1) * dim + c];
            omega_l[(2 * k + 1) * dim + c] = -l[2 * k * dim + c];
        }
    }
    // M = Lᵀ (Ω L)
    let mut m = vec![S::zero(); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut s = S::zero();
            for k in 0..dim {
                s = s + l[k * dim + i] * omega_l[k * dim + j];
            }
            m[i * dim + j] = s;
        }
    }
    // K = Mᵀ M
    let mut gram = vec![S::zero(); dim * dim];
    for i in 0..dim {
        for j in 0..=i {
            let mut s = S::zero();
            for k in 0..dim {
                s = s + m[k * dim + i] * m[k * dim + j];
            }
            gram[i * dim + j] = s;
            gram[j * dim + i] = s;
        }
    }
    let squares = symmetric_eigenvalues(&gram, dim);
    let half = S::from_f64(0.5);
    Ok(squares
        .chunks(2)
        .map(|pair| {
            let mean = (pair[0] + pair[1]) * half;
            if mean > S::zero() {
                mean.square_root()
            } else {
                S::zero()
            }
        })
        .collect())
}
