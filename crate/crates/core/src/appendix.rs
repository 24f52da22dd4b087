//! Mutual information and Holevo bound per attack class, and the relative
//! variations of attack (d) with respect to the collective attack.

use serde::Serialize;

use crate::attacks::{attack_from_class, AttackClass};
use crate::error::{invalid, Result};
use crate::rates::{check_transmissivity, holevo_asymptotic, mutual_information_asymptotic};

/// Smallest modulation accepted as asymptotic.
pub const MIN_APPENDIX_MODULATION: f64 = 1e3;

/// Classes (a)-(d) and the collective attack.
pub const APPENDIX_CLASSES: [AttackClass; 5] = [
    AttackClass::EprPos,
    AttackClass::SepSymPos,
    AttackClass::SepAntiPos,
    AttackClass::SepSymNeg,
    AttackClass::Collective,
];

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AppendixRow {
    pub T: f64,
    pub omega: f64,
    pub attack: String,
    pub I_AB: f64,
    pub chi_EA: f64,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelativeVariation {
    pub T: f64,
    pub omega: f64,
    pub delta_I_AB: Option<f64>,
    pub delta_chi_EA: Option<f64>,
    /// Set when a collective reference value is not positive.
    pub flagged: bool,
}

fn check(t: f64, mu: f64, omega_grid: &[f64]) -> Result<()> {
    check_transmissivity(t)?;
    if !(mu >= MIN_APPENDIX_MODULATION) || !mu.is_finite() {
        return Err(invalid(format!(
            "modulation mu = {mu} below the asymptotic regime ({MIN_APPENDIX_MODULATION})"
        )));
    }
    if omega_grid.is_empty() {
        return Err(invalid("omega grid is empty"));
    }
    if let Some(w) = omega_grid.iter().find(|&&w| !(w >= 1.0) || !w.is_finite()) {
        return Err(invalid(format!(
            "thermal variance omega = {w} below vacuum noise"
        )));
    }
    Ok(())
}

fn information(t: f64, class: AttackClass, omega: f64, mu: f64) -> Result<(f64, f64)> {
    let a = attack_from_class(class, omega)?;
    Ok((
        mutual_information_asymptotic(t, &a, mu)?.i_ab,
        holevo_asymptotic(t, &a, mu)?,
    ))
}

/// `I_AB` and `χ_EA` for every class in [`APPENDIX_CLASSES`], grouped by `ω`.
pub fn appendix_rows(t: f64, mu: f64, omega_grid: &[f64]) -> Result<Vec<AppendixRow>> {
    check(t, mu, omega_grid)?;
    let mut rows = Vec::with_capacity(omega_grid.len() * APPENDIX_CLASSES.len());
    for &omega in omega_grid {
        for class in APPENDIX_CLASSES {
            let (i_ab, chi) = information(t, class, omega, mu)?;
            rows.push(AppendixRow {
                T: t,
                omega,
                attack: class.to_string(),
                I_AB: i_ab,
                chi_EA: chi,
            });
        }
    }
    Ok(rows)
}

/// `(X_d - X_c)/X_c` for `X = I_AB, χ_EA`, attack (d) against collective.
pub fn relative_variations(t: f64, mu: f64, omega_grid: &[f64]) -> Result<Vec<RelativeVariation>> {
    check(t, mu, omega_grid)?;
    omega_grid
        .iter()
        .map(|&omega| {
            let (i_d, chi_d) = information(t, AttackClass::SepSymNeg, omega, mu)?;
            let (i_c, chi_c) = information(t, AttackClass::Collective, omega, mu)?;
            let rel = |x: f64, c: f64| (c > 0.0).then(|| (x - c) / c);
            let (delta_i, delta_chi) = (rel(i_d, i_c), rel(chi_d, chi_c));
            Ok(RelativeVariation {
                T: t,
                omega,
                delta_I_AB: delta_i,
                delta_chi_EA: delta_chi,
                flagged: delta_i.is_none() || delta_chi.is_none(),
            })
        })
        .collect()
}

/// `1, 1 + step, ...` up to `omega_max` inclusive.
pub fn omega_grid(omega_min: f64, omega_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(omega_min >= 1.0 && omega_max >= omega_min) || !omega_max.is_finite() {
        return Err(invalid(format!(
            "need 1 <= omega_min <= omega_max, got {omega_min}, {omega_max}"
        )));
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(invalid(format!("grid step must be positive, got {step}")));
    }
    let count = ((omega_max - omega_min) / step + 1e-9).floor() as usize;
    Ok((0..=count as i64)
        .map(|k| crate::grid_point(omega_min, k, step))
        .collect())
}
