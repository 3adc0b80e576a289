//! Closed-form solutions of the quadratic (δ = 0) trading equation.

use std::f64::consts::PI;

use crate::amplitude::{Amplitude, AmplitudeGrid};
use crate::error::{Error, Result};
use crate::grid::UniformGrid;

use super::density::DensityGrid;
use super::params::{EnergyLevel, ModelParams};

/// Largest order accepted by [`hermite`].
pub const HERMITE_MAX_ORDER: usize = 60;
/// Largest level accepted by the closed-form densities.
pub const HARMONIC_MAX_LEVEL: usize = 30;
/// Default node count for return grids.
pub const DEFAULT_GRID_POINTS: usize = 4097;
/// Default return-grid half-width in units of the ground-level σ.
pub const DEFAULT_HALF_WIDTH_SIGMAS: f64 = 12.0;

/// Physicists' Hermite polynomial `H_n(ξ)` by upward recurrence.
pub fn hermite(n: usize, xi: f64) -> Result<f64> {
    if n > HERMITE_MAX_ORDER {
        return Err(Error::domain(format!("hermite order {n} exceeds {HERMITE_MAX_ORDER}")));
    }
    Ok(hermite_unchecked(n, xi))
}

fn hermite_unchecked(n: usize, xi: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * xi;
    for k in 1..n {
        let next = 2.0 * xi * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn require_harmonic(params: &ModelParams) -> Result<()> {
    if params.delta != 0.0 {
        return Err(Error::domain(format!(
            "delta = {} is non-zero; use the anharmonic or numeric solver",
            params.delta
        )));
    }
    Ok(())
}

/// Level `n` of the harmonic spectrum: Ω = 2n + 1.
pub fn harmonic_level(n: usize, params: &ModelParams) -> Result<EnergyLevel> {
    require_harmonic(params)?;
    Ok(EnergyLevel::new(n, (2 * n + 1) as f64, params))
}

/// Return grid wide enough for level `n`: ±12σ, widened past the classical
/// turning point for high levels.
pub fn default_return_grid(params: &ModelParams, n: usize) -> UniformGrid {
    let return_per_xi = params.xi_per_return().recip();
    let base = DEFAULT_HALF_WIDTH_SIGMAS * params.sigma();
    let turning = ((2 * n + 1) as f64).sqrt() + 5.0;
    let half = base.max(turning * return_per_xi);
    UniformGrid::symmetric(half, DEFAULT_GRID_POINTS).expect("positive half-width")
}

/// `ln(A_n²)` in return units: `¼ln(α/h) − n ln 2 − ln n! − ½ ln π`.
fn log_norm_sq(n: usize, params: &ModelParams) -> f64 {
    let log_fact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
    0.25 * (params.alpha / params.h).ln() - n as f64 * std::f64::consts::LN_2 - log_fact - 0.5 * PI.ln()
}

fn check_level(n: usize) -> Result<()> {
    if n > HARMONIC_MAX_LEVEL {
        return Err(Error::domain(format!(
            "harmonic level {n} exceeds {HARMONIC_MAX_LEVEL}"
        )));
    }
    Ok(())
}

/// Signed eigenfunction value `A_n e^{-ξ²/2} H_n(ξ)` at return `r`.
fn eigenfunction(n: usize, log_a2: f64, xi: f64) -> f64 {
    let h = hermite_unchecked(n, xi);
    if h == 0.0 {
        return 0.0;
    }
    let magnitude = (0.5 * log_a2 - 0.5 * xi * xi + h.abs().ln()).exp();
    magnitude.copysign(h)
}

/// Real eigen-amplitude of level `n` on `grid`.
pub fn harmonic_amplitude(n: usize, params: &ModelParams, grid: UniformGrid) -> Result<AmplitudeGrid> {
    require_harmonic(params)?;
    check_level(n)?;
    let log_a2 = log_norm_sq(n, params);
    let scale = params.xi_per_return();
    let values = grid
        .nodes()
        .into_iter()
        .map(|r| Amplitude::from_real(eigenfunction(n, log_a2, scale * r)))
        .collect();
    AmplitudeGrid::new(grid, values)
}

/// Return density `A_n² e^{-ξ²} H_n(ξ)²` of level `n` on the default grid.
pub fn harmonic_density(n: usize, params: &ModelParams) -> Result<DensityGrid> {
    harmonic_density_on(n, params, default_return_grid(params, n))
}

pub fn harmonic_density_on(n: usize, params: &ModelParams, grid: UniformGrid) -> Result<DensityGrid> {
    require_harmonic(params)?;
    check_level(n)?;
    let log_a2 = log_norm_sq(n, params);
    let scale = params.xi_per_return();
    let values = grid
        .nodes()
        .into_iter()
        .map(|r| {
            let xi = scale * r;
            let h = hermite_unchecked(n, xi);
            if h == 0.0 {
                0.0
            } else {
                (log_a2 - xi * xi + 2.0 * h.abs().ln()).exp()
            }
        })
        .collect();
    DensityGrid::new(grid, values)
}
