//! Eve's two-mode coherent attack: ancillas `E1`, `E2` in a correlated
//! thermal state `[[ωI, G], [G, ωI]]`, `G = diag(g, g')`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use twoway_gaussian::{ppt_separable, symplectic_spectrum, CovarianceMatrix, BONA_FIDE_TOL};

use crate::error::{invalid, QkdError, Result};

/// `g = g' = 0` is treated as a collective attack below this magnitude.
const COLLECTIVE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttackParams {
    pub omega: f64,
    pub g: f64,
    pub g_prime: f64,
}

impl AttackParams {
    /// Validates `ω ≥ 1` and finiteness only; see [`AttackParams::check_physical`].
    pub fn new(omega: f64, g: f64, g_prime: f64) -> Result<Self> {
        if !omega.is_finite() || !g.is_finite() || !g_prime.is_finite() {
            return Err(invalid(format!(
                "attack parameters must be finite, got ({omega}, {g}, {g_prime})"
            )));
        }
        if omega < 1.0 {
            return Err(invalid(format!(
                "thermal variance omega = {omega} below vacuum noise"
            )));
        }
        Ok(Self { omega, g, g_prime })
    }

    pub fn collective(omega: f64) -> Result<Self> {
        Self::new(omega, 0.0, 0.0)
    }

    /// Rejects parameters whose ancilla state is not a bona fide Gaussian state,
    /// naming the check that failed.
    pub fn check_physical(&self) -> Result<()> {
        let Self { omega, g, g_prime } = *self;
        if g.abs() >= omega || g_prime.abs() >= omega {
            return Err(QkdError::UnphysicalAttack(format!(
                "|g| < omega and |g'| < omega violated for (omega, g, g') = ({omega}, {g}, {g_prime})"
            )));
        }
        let spectrum = symplectic_spectrum(&eve_cm(self)?).map_err(|e| {
            QkdError::UnphysicalAttack(format!("ancilla covariance matrix rejected: {e}"))
        })?;
        if spectrum.min() < 1.0 - BONA_FIDE_TOL {
            return Err(QkdError::UnphysicalAttack(format!(
                "minimum symplectic eigenvalue {} < 1 for (omega, g, g') = ({omega}, {g}, {g_prime})",
                spectrum.min()
            )));
        }
        Ok(())
    }

    pub fn is_physical(&self) -> bool {
        self.check_physical().is_ok()
    }
}

/// Named attack families. The usual curve letters map as
/// (a) = `EprPos`/`EprNeg`, (b) = `SepSymPos`, (c) = `SepAntiPos`/`SepAntiNeg`, (d) = `SepSymNeg`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AttackClass {
    Collective,
    EprPos,
    EprNeg,
    SepSymPos,
    SepSymNeg,
    SepAntiPos,
    SepAntiNeg,
    Custom { g: f64, g_prime: f64 },
}

impl AttackClass {
    pub const NAMED: [AttackClass; 7] = [
        AttackClass::Collective,
        AttackClass::EprPos,
        AttackClass::EprNeg,
        AttackClass::SepSymPos,
        AttackClass::SepSymNeg,
        AttackClass::SepAntiPos,
        AttackClass::SepAntiNeg,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            AttackClass::Collective => "collective",
            AttackClass::EprPos => "epr+",
            AttackClass::EprNeg => "epr-",
            AttackClass::SepSymPos => "sep-sym+",
            AttackClass::SepSymNeg => "sep-sym-",
            AttackClass::SepAntiPos => "sep-anti+",
            AttackClass::SepAntiNeg => "sep-anti-",
            AttackClass::Custom { .. } => "custom",
        }
    }

    /// The (g, g') pair this class selects at thermal variance `omega`.
    pub fn correlations(&self, omega: f64) -> (f64, f64) {
        let epr = (omega * omega - 1.0).max(0.0).sqrt();
        let sep = omega - 1.0;
        match *self {
            AttackClass::Collective => (0.0, 0.0),
            AttackClass::EprPos => (epr, -epr),
            AttackClass::EprNeg => (-epr, epr),
            AttackClass::SepSymPos => (sep, sep),
            AttackClass::SepSymNeg => (-sep, -sep),
            AttackClass::SepAntiPos => (sep, -sep),
            AttackClass::SepAntiNeg => (-sep, sep),
            AttackClass::Custom { g, g_prime } => (g, g_prime),
        }
    }
}

impl fmt::Display for AttackClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttackClass::Custom { g, g_prime } => write!(f, "custom({g},{g_prime})"),
            other => f.write_str(other.label()),
        }
    }
}

impl FromStr for AttackClass {
    type Err = QkdError;

    /// Accepts the canonical labels and the figure letters `a`-`d`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "collective" => Ok(AttackClass::Collective),
            "epr+" | "a" => Ok(AttackClass::EprPos),
            "epr-" => Ok(AttackClass::EprNeg),
            "sep-sym+" | "b" => Ok(AttackClass::SepSymPos),
            "sep-sym-" | "d" => Ok(AttackClass::SepSymNeg),
            "sep-anti+" | "c" => Ok(AttackClass::SepAntiPos),
            "sep-anti-" => Ok(AttackClass::SepAntiNeg),
            "custom" => Err(invalid("custom attacks need explicit g and g' values")),
            other => Err(invalid(format!(
                "unknown attack class '{other}' (expected collective, epr+, epr-, sep-sym+, sep-sym-, sep-anti+, sep-anti-, custom or a-d)"
            ))),
        }
    }
}

/// Correlation type of the ancilla pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Correlation {
    Collective,
    SeparableCorrelated,
    Entangled,
}

/// Ancilla covariance matrix, modes `(E1, E2)`.
pub fn eve_cm(params: &AttackParams) -> Result<CovarianceMatrix> {
    let AttackParams { omega, g, g_prime } = *params;
    if !(omega >= 1.0) {
        return Err(invalid(format!(
            "thermal variance omega = {omega} below vacuum noise"
        )));
    }
    #[rustfmt::skip]
    let entries = [
        omega, 0.0, g, 0.0,
        0.0, omega, 0.0, g_prime,
        g, 0.0, omega, 0.0,
        0.0, g_prime, 0.0, omega,
    ];
    Ok(CovarianceMatrix::from_row_slice(4, &entries)?)
}

pub fn attack_from_class(class: AttackClass, omega: f64) -> Result<AttackParams> {
    let (g, g_prime) = class.correlations(omega);
    AttackParams::new(omega, g, g_prime)
}

pub fn classify(params: &AttackParams) -> Result<Correlation> {
    params.check_physical()?;
    if params.g.abs() <= COLLECTIVE_TOL && params.g_prime.abs() <= COLLECTIVE_TOL {
        return Ok(Correlation::Collective);
    }
    if ppt_separable(&eve_cm(params)?)? {
        Ok(Correlation::SeparableCorrelated)
    } else {
        Ok(Correlation::Entangled)
    }
}

/// Physical `(g, g')` on the lattice `step · Z²` inside `[-ω, ω]²`, row-major
/// (g outer, g' inner, both ascending).
///
/// The lattice is anchored at the origin so it always contains `(0, 0)` and is
/// closed under `g ↔ g'` and `(g, g') → (-g, -g')`.
pub fn physical_region_grid(omega: f64, step: f64) -> Result<Vec<AttackParams>> {
    if !(omega >= 1.0) || !omega.is_finite() {
        return Err(invalid(format!(
            "thermal variance omega = {omega} below vacuum noise"
        )));
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(invalid(format!("grid step must be positive, got {step}")));
    }
    let half = (omega / step + 1e-9).floor() as i64;
    let axis: Vec<f64> = (-half..=half)
        .map(|k| crate::grid_point(0.0, k, step))
        .collect();
    let candidates: Vec<AttackParams> = axis
        .iter()
        .flat_map(|&g| {
            axis.iter()
                .map(move |&g_prime| AttackParams { omega, g, g_prime })
        })
        .collect();
    Ok(candidates
        .into_par_iter()
        .filter(AttackParams::is_physical)
        .collect())
}
