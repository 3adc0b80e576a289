//! Fourier decomposition of an amplitude into ω-markets and the trading
//! volume functionals built on it.
//!
//! Transform pair:
//! `c(ω) = (1/2π) ∫ Ψ(r) e^{−iωr} dr` and `Ψ(r) = ∫ c(ω) e^{iωr} dω`,
//! both evaluated by direct trapezoid quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amplitude::AmplitudeGrid;
use crate::error::{Error, Result};
use crate::grid::UniformGrid;

/// Modulus an amplitude or spectrum must fall below at its grid edges.
pub const EDGE_DECAY_LIMIT: f64 = 1e-8;
/// Accepted deviation of `∫|Ψ|²` from one for the volume functionals.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// Spectral coefficients `c(ω)` on a uniform ω grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid {
    grid: UniformGrid,
    coefficients: Vec<Complex64>,
}

impl SpectrumGrid {
    pub fn new(grid: UniformGrid, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() != grid.points {
            return Err(Error::domain("coefficient count does not match the ω grid"));
        }
        Ok(Self { grid, coefficients })
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// `∫|c(ω)|² dω`.
    pub fn weight(&self) -> f64 {
        let w: Vec<f64> = self.coefficients.iter().map(|c| c.norm_sqr()).collect();
        self.grid.trapezoid(&w)
    }

    pub fn is_weight_normalized(&self, tol: f64) -> bool {
        (self.weight() - 1.0).abs() <= tol
    }

    fn edge_modulus(&self) -> f64 {
        let n = self.coefficients.len();
        self.coefficients[0].norm().max(self.coefficients[n - 1].norm())
    }
}

/// ω grid matched to a return grid: `±π/(2Δr)` with the same node count.
///
/// The ω spacing is then `π/(r_max − r_min)`, so the periodic images produced
/// by the inverse quadrature stay outside the return window.
pub fn default_omega_grid(r_grid: &UniformGrid) -> UniformGrid {
    let half = PI / (2.0 * r_grid.spacing());
    UniformGrid::symmetric(half, r_grid.points).expect("positive spacing")
}

fn quadrature_weights(grid: &UniformGrid) -> Vec<f64> {
    let step = grid.spacing();
    let mut w = vec![step; grid.points];
    w[0] *= 0.5;
    w[grid.points - 1] *= 0.5;
    w
}

/// Forward transform of `psi` onto `omega_grid`.
pub fn decompose(psi: &AmplitudeGrid, omega_grid: &UniformGrid) -> Result<SpectrumGrid> {
    let edge = psi.edge_modulus();
    if edge > EDGE_DECAY_LIMIT {
        return Err(Error::Truncation {
            edge,
            limit: EDGE_DECAY_LIMIT,
        });
    }
    let rs = psi.grid().nodes();
    let weighted: Vec<Complex64> = psi
        .to_complex()
        .into_iter()
        .zip(quadrature_weights(psi.grid()))
        .map(|(v, w)| v * w)
        .collect();
    let coefficients = omega_grid
        .nodes()
        .into_par_iter()
        .map(|omega| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (v, r) in weighted.iter().zip(&rs) {
                let (s, c) = (omega * r).sin_cos();
                acc += v * Complex64::new(c, -s);
            }
            acc / (2.0 * PI)
        })
        .collect();
    SpectrumGrid::new(*omega_grid, coefficients)
}

/// Inverse transform of `spectrum` onto `r_grid`.
pub fn reconstruct(spectrum: &SpectrumGrid, r_grid: &UniformGrid) -> Result<AmplitudeGrid> {
    let edge = spectrum.edge_modulus();
    if edge > EDGE_DECAY_LIMIT {
        return Err(Error::Truncation {
            edge,
            limit: EDGE_DECAY_LIMIT,
        });
    }
    let omegas = spectrum.grid.nodes();
    let weighted: Vec<Complex64> = spectrum
        .coefficients
        .iter()
        .zip(quadrature_weights(&spectrum.grid))
        .map(|(c, w)| c * w)
        .collect();
    let values: Vec<Complex64> = r_grid
        .nodes()
        .into_par_iter()
        .map(|r| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, omega) in weighted.iter().zip(&omegas) {
                let (s, co) = (omega * r).sin_cos();
                acc += c * Complex64::new(co, s);
            }
            acc
        })
        .collect();
    AmplitudeGrid::from_complex(*r_grid, &values)
}

/// How the realized-volume functional is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VolumeMethod {
    /// `∫ (h/2)ω² w(ω) dω` with `w = |c|²` scaled to unit mass.
    Spectral,
    /// `∫ Ψ* (−h/2 d²/dr²) Ψ dr` with central second differences.
    Realspace,
}

fn require_normalized(psi: &AmplitudeGrid) -> Result<()> {
    let norm = psi.norm_sq();
    if (norm - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::domain(format!("amplitude is not normalized: ∫|Ψ|² = {norm}")));
    }
    Ok(())
}

/// Expected realized trading volume `Q̄`.
pub fn realized_volume(psi: &AmplitudeGrid, h: f64, method: VolumeMethod) -> Result<f64> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::domain(format!("h must be positive, got {h}")));
    }
    require_normalized(psi)?;
    match method {
        VolumeMethod::Spectral => {
            let spectrum = decompose(psi, &default_omega_grid(psi.grid()))?;
            let grid = spectrum.grid;
            let weights: Vec<f64> = spectrum.coefficients.iter().map(|c| c.norm_sqr()).collect();
            let mass = grid.trapezoid(&weights);
            let moment: Vec<f64> = grid.nodes().iter().zip(&weights).map(|(w, p)| w * w * p).collect();
            Ok(0.5 * h * grid.trapezoid(&moment) / mass)
        }
        VolumeMethod::Realspace => {
            let values = psi.to_complex();
            let step = psi.grid().spacing();
            let n = values.len();
            let mut integrand = vec![0.0; n];
            for i in 1..n - 1 {
                let second = (values[i + 1] - 2.0 * values[i] + values[i - 1]) / (step * step);
                integrand[i] = (values[i].conj() * second).re * (-0.5 * h);
            }
            Ok(psi.grid().trapezoid(&integrand))
        }
    }
}

/// Expected potential (latent) trading volume `V̄ = ∫ (α/2 r² + δ/4 r⁴)|Ψ|² dr`.
pub fn potential_volume(psi: &AmplitudeGrid, alpha: f64, delta: f64) -> Result<f64> {
    require_normalized(psi)?;
    let integrand: Vec<f64> = psi
        .grid()
        .nodes()
        .iter()
        .zip(psi.values())
        .map(|(r, a)| {
            let r2 = r * r;
            (0.5 * alpha * r2 + 0.25 * delta * r2 * r2) * a.density()
        })
        .collect();
    Ok(psi.grid().trapezoid(&integrand))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeReport {
    pub realized: f64,
    pub potential: f64,
    pub intrinsic: f64,
}

impl VolumeReport {
    pub fn new(realized: f64, potential: f64) -> Self {
        Self {
            realized,
            potential,
            intrinsic: realized + potential,
        }
    }
}

/// Intrinsic volume `Ē = Q̄ + V̄`.
pub fn intrinsic_volume(
    psi: &AmplitudeGrid,
    h: f64,
    alpha: f64,
    delta: f64,
    method: VolumeMethod,
) -> Result<VolumeReport> {
    let realized = realized_volume(psi, h, method)?;
    let potential = potential_volume(psi, alpha, delta)?;
    Ok(VolumeReport::new(realized, potential))
}
