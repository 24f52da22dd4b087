//! Brute-force search for the attack correlations that minimise the key rate.

use rayon::prelude::*;
use serde::Serialize;

use crate::attacks::{physical_region_grid, AttackParams};
use crate::error::Result;
use crate::rates::{check_transmissivity, keyrate_unchecked};

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanResult {
    pub T: f64,
    pub omega: f64,
    pub best_g: f64,
    pub best_g_prime: f64,
    pub R_min: f64,
    pub grid_resolution: f64,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanPoint {
    pub g: f64,
    pub g_prime: f64,
    pub R: f64,
}

/// Key rate at every physical point of the `(g, g')` grid, row-major.
pub fn scan_grid(t: f64, omega: f64, step: f64) -> Result<Vec<ScanPoint>> {
    check_transmissivity(t)?;
    let grid = physical_region_grid(omega, step)?;
    grid.par_iter()
        .map(|a: &AttackParams| {
            Ok(ScanPoint {
                g: a.g,
                g_prime: a.g_prime,
                R: keyrate_unchecked(t, a)?,
            })
        })
        .collect()
}

/// Grid minimiser of the key rate; ties go to the smallest `g`, then `g'`.
pub fn optimal_attack_scan(t: f64, omega: f64, step: f64) -> Result<ScanResult> {
    Ok(minimise(t, omega, step, &scan_grid(t, omega, step)?))
}

/// Minimiser of an already computed [`scan_grid`].
pub fn minimise(t: f64, omega: f64, step: f64, grid: &[ScanPoint]) -> ScanResult {
    // The grid always contains (0, 0), so it is never empty.
    let best = grid
        .iter()
        .fold(grid[0], |best, p| if p.R < best.R { *p } else { best });
    ScanResult {
        T: t,
        omega,
        best_g: best.g,
        best_g_prime: best.g_prime,
        R_min: best.R,
        grid_resolution: step,
    }
}
