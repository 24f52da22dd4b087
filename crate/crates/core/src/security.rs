//! Security thresholds: the thermal noise `ω*` at which the key rate vanishes,
//! and the corresponding tolerable excess noise.

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::attacks::{attack_from_class, AttackClass};
use crate::error::{invalid, QkdError, Result};
use crate::oneway::oneway_keyrate;
use crate::rates::{check_transmissivity, keyrate_unchecked};

/// Bisection stops once the bracket is this narrow and the residual is below [`RESIDUAL_TOL`].
pub const BRACKET_TOL: f64 = 1e-10;
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Largest `ω` tried while bracketing the root.
pub const OMEGA_CAP: f64 = 65536.0;

/// Slack allowed for rounding when checking that `R` decreases along the bracket.
const MONOTONE_SLACK: f64 = 1e-12;

/// `N = [T - 1 + (1-T)ω]/T`.
pub fn excess_noise(t: f64, omega: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(invalid(format!("transmissivity T = {t} outside (0, 1]")));
    }
    if !(omega >= 1.0) {
        return Err(invalid(format!(
            "thermal variance omega = {omega} below vacuum noise"
        )));
    }
    Ok((1.0 - t) * (omega - 1.0) / t)
}

/// Inverse of [`excess_noise`] for `0 < T < 1`.
pub fn omega_from_excess(t: f64, n: f64) -> Result<f64> {
    check_transmissivity(t)?;
    if !(n >= 0.0) {
        return Err(invalid(format!("excess noise {n} must be nonnegative")));
    }
    Ok(1.0 + n * t / (1.0 - t))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdOutcome {
    Threshold(f64),
    /// `R ≤ 0` already at `ω = 1`.
    NoSecureRegion,
}

/// Root of a key rate that decreases in `ω`, by bracket doubling from 2 and bisection.
pub fn threshold_for<F>(rate: F) -> Result<ThresholdOutcome>
where
    F: Fn(f64) -> Result<f64>,
{
    let r_one = rate(1.0)?;
    if r_one <= 0.0 {
        return Ok(ThresholdOutcome::NoSecureRegion);
    }
    let (mut lo, mut r_lo) = (1.0, r_one);
    let mut hi = 2.0;
    let mut r_hi = loop {
        let r = rate(hi)?;
        ensure_decreasing(lo, r_lo, hi, r)?;
        if r < 0.0 {
            break r;
        }
        if r == 0.0 {
            return Ok(ThresholdOutcome::Threshold(hi));
        }
        (lo, r_lo) = (hi, r);
        if hi >= OMEGA_CAP {
            return Err(QkdError::DivergentThreshold(hi));
        }
        hi *= 2.0;
    };

    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // Floating-point resolution reached; return the endpoint with the smaller residual.
            let (w, r) = if r_lo.abs() <= r_hi.abs() {
                (lo, r_lo)
            } else {
                (hi, r_hi)
            };
            return if r.abs() <= RESIDUAL_TOL {
                Ok(ThresholdOutcome::Threshold(w))
            } else {
                Err(QkdError::NonMonotone {
                    lower: lo,
                    upper: hi,
                    r_lower: r_lo,
                    r_upper: r_hi,
                })
            };
        }
        let r = rate(mid)?;
        if r > r_lo + MONOTONE_SLACK || r < r_hi - MONOTONE_SLACK {
            return Err(QkdError::NonMonotone {
                lower: lo,
                upper: mid,
                r_lower: r_lo,
                r_upper: r,
            });
        }
        if hi - lo <= BRACKET_TOL && r.abs() <= RESIDUAL_TOL {
            return Ok(ThresholdOutcome::Threshold(mid));
        }
        if r > 0.0 {
            (lo, r_lo) = (mid, r);
        } else if r < 0.0 {
            (hi, r_hi) = (mid, r);
        } else {
            return Ok(ThresholdOutcome::Threshold(mid));
        }
    }
}

fn ensure_decreasing(lo: f64, r_lo: f64, hi: f64, r_hi: f64) -> Result<()> {
    if r_hi > r_lo + MONOTONE_SLACK {
        Err(QkdError::NonMonotone {
            lower: lo,
            upper: hi,
            r_lower: r_lo,
            r_upper: r_hi,
        })
    } else {
        Ok(())
    }
}

/// Threshold thermal noise of the two-way protocol against an attack class.
pub fn threshold_omega(t: f64, class: AttackClass) -> Result<ThresholdOutcome> {
    check_transmissivity(t)?;
    threshold_for(|omega| keyrate_unchecked(t, &attack_from_class(class, omega)?))
}

/// Threshold thermal noise of the one-way baseline.
pub fn oneway_threshold_omega(t: f64) -> Result<ThresholdOutcome> {
    check_transmissivity(t)?;
    threshold_for(|omega| oneway_keyrate(t, omega))
}

/// What a threshold curve is computed for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveSource {
    TwoWay(AttackClass),
    OneWay,
}

impl CurveSource {
    pub fn label(&self) -> String {
        match self {
            CurveSource::TwoWay(class) => class.to_string(),
            CurveSource::OneWay => "oneway".to_string(),
        }
    }

    pub fn threshold(&self, t: f64) -> Result<ThresholdOutcome> {
        match *self {
            CurveSource::TwoWay(class) => threshold_omega(t, class),
            CurveSource::OneWay => oneway_threshold_omega(t),
        }
    }

    /// Key rate at `(T, ω)` for this source.
    pub fn keyrate(&self, t: f64, omega: f64) -> Result<f64> {
        check_transmissivity(t)?;
        match *self {
            CurveSource::TwoWay(class) => keyrate_unchecked(t, &attack_from_class(class, omega)?),
            CurveSource::OneWay => oneway_keyrate(t, omega),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStatus {
    Secure,
    Insecure,
    Divergent,
    NonMonotone,
    Error,
}

impl PointStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            PointStatus::Secure => "true",
            PointStatus::Insecure => "false",
            PointStatus::Divergent => "divergent",
            PointStatus::NonMonotone => "non_monotone",
            PointStatus::Error => "error",
        }
    }
}

impl Serialize for PointStatus {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PointStatus::Secure => serializer.serialize_bool(true),
            PointStatus::Insecure => serializer.serialize_bool(false),
            other => serializer.serialize_str(other.as_str()),
        }
    }
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdPoint {
    pub T: f64,
    pub omega_star: Option<f64>,
    pub N_star: Option<f64>,
    pub secure: PointStatus,
    /// Error message for points that could not be resolved.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdCurve {
    pub attack_class: String,
    pub points: Vec<ThresholdPoint>,
}

impl ThresholdCurve {
    /// Excess-noise threshold at each grid point; `None` where unresolved.
    pub fn n_star(&self) -> Vec<Option<f64>> {
        self.points.iter().map(|p| p.N_star).collect()
    }
}

fn threshold_point(source: CurveSource, t: f64) -> ThresholdPoint {
    let resolved = |omega: f64, secure: PointStatus| match excess_noise(t, omega) {
        Ok(n) => ThresholdPoint {
            T: t,
            omega_star: Some(omega),
            N_star: Some(n),
            secure,
            detail: None,
        },
        Err(e) => failed(t, PointStatus::Error, e),
    };
    match source.threshold(t) {
        Ok(ThresholdOutcome::Threshold(omega)) => resolved(omega, PointStatus::Secure),
        Ok(ThresholdOutcome::NoSecureRegion) => resolved(1.0, PointStatus::Insecure),
        Err(e @ QkdError::DivergentThreshold(_)) => failed(t, PointStatus::Divergent, e),
        Err(e @ QkdError::NonMonotone { .. }) => failed(t, PointStatus::NonMonotone, e),
        Err(e) => failed(t, PointStatus::Error, e),
    }
}

fn failed(t: f64, secure: PointStatus, e: QkdError) -> ThresholdPoint {
    ThresholdPoint {
        T: t,
        omega_star: None,
        N_star: None,
        secure,
        detail: Some(e.to_string()),
    }
}

/// Threshold at every `T` of a strictly increasing grid in `(0, 1)`.
///
/// Points are computed in parallel and returned in grid order; failures are
/// recorded per point.
pub fn threshold_curve(source: CurveSource, t_grid: &[f64]) -> Result<ThresholdCurve> {
    validate_t_grid(t_grid)?;
    let points = t_grid
        .par_iter()
        .map(|&t| threshold_point(source, t))
        .collect();
    Ok(ThresholdCurve {
        attack_class: source.label(),
        points,
    })
}

pub fn validate_t_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(invalid("transmissivity grid is empty"));
    }
    for &t in t_grid {
        check_transmissivity(t)?;
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("transmissivity grid must be strictly increasing"));
    }
    Ok(())
}

/// `t_min, t_min + step, ...` up to `t_max` inclusive, built by index to avoid drift.
pub fn t_grid(t_min: f64, t_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(t_min > 0.0 && t_min < t_max && t_max < 1.0) {
        return Err(invalid(format!(
            "need 0 < t_min < t_max < 1, got {t_min}, {t_max}"
        )));
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(invalid(format!("grid step must be positive, got {step}")));
    }
    let count = ((t_max - t_min) / step + 1e-9).floor() as usize;
    Ok((0..=count as i64)
        .map(|k| crate::grid_point(t_min, k, step))
        .collect())
}
