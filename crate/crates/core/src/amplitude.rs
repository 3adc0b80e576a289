//! Complex trading-intention amplitudes in polar form.
//!
//! An amplitude `φ·e^{iθ}` carries an intensity `φ ≥ 0` and a property angle
//! `θ`. Its real part is the position-rebalancing intention (positive means
//! adding) and its imaginary part the emotional intention (positive means
//! bearish). The return density contributed by an amplitude is `φ²`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::UniformGrid;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Amplitude {
    modulus: f64,
    /// Stored as given; not reduced into `(-π, π]`.
    phase: f64,
}

impl Amplitude {
    pub const ZERO: Amplitude = Amplitude {
        modulus: 0.0,
        phase: 0.0,
    };

    pub fn new(modulus: f64, phase: f64) -> Result<Self> {
        if !(modulus.is_finite() && modulus >= 0.0) {
            return Err(Error::domain(format!(
                "amplitude modulus must be finite and >= 0, got {modulus}"
            )));
        }
        if !phase.is_finite() {
            return Err(Error::domain("amplitude phase must be finite"));
        }
        Ok(Self { modulus, phase })
    }

    /// Polar form of a complex number. A zero value gets phase 0.
    pub fn from_complex(z: Complex64) -> Self {
        let modulus = z.norm();
        let phase = if modulus == 0.0 { 0.0 } else { z.arg() };
        Self { modulus, phase }
    }

    /// Rebuilds an amplitude from its rebalancing (`a`) and emotional (`b`) parts.
    pub fn from_components(a: f64, b: f64) -> Self {
        Self::from_complex(Complex64::new(a, b))
    }

    /// A real signed value; negative values carry phase π.
    pub fn from_real(x: f64) -> Self {
        if x < 0.0 {
            Self {
                modulus: -x,
                phase: std::f64::consts::PI,
            }
        } else {
            Self { modulus: x, phase: 0.0 }
        }
    }

    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn density(&self) -> f64 {
        self.modulus * self.modulus
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.modulus, self.phase)
    }

    /// `(a, b) = (φ cos θ, φ sin θ)`.
    pub fn components(&self) -> (f64, f64) {
        let (s, c) = self.phase.sin_cos();
        (self.modulus * c, self.modulus * s)
    }

    /// Phase reduced into `[0, 2π)`.
    pub fn reduced_phase(&self) -> f64 {
        self.phase.rem_euclid(TAU)
    }

    /// Compares moduli within `tol` and phases modulo 2π within `tol`.
    /// Phases are ignored when both moduli are within `tol` of zero.
    pub fn approx_eq(&self, other: &Amplitude, tol: f64) -> bool {
        if (self.modulus - other.modulus).abs() > tol {
            return false;
        }
        if self.modulus <= tol && other.modulus <= tol {
            return true;
        }
        let d = (self.phase - other.phase).rem_euclid(TAU);
        d.min(TAU - d) <= tol
    }
}

impl From<Amplitude> for Complex64 {
    fn from(a: Amplitude) -> Self {
        a.to_complex()
    }
}

/// Sum of amplitudes: the market formed by the combined traders.
pub fn superpose(parts: &[Amplitude]) -> Result<Amplitude> {
    if parts.is_empty() {
        return Err(Error::domain("superpose needs at least one amplitude"));
    }
    let sum: Complex64 = parts.iter().map(Amplitude::to_complex).sum();
    Ok(Amplitude::from_complex(sum))
}

/// Density of the combined market `φ1² + φ2² + 2φ1φ2 cos(θ1 − θ2)`.
pub fn interference_density(first: &Amplitude, second: &Amplitude) -> f64 {
    let cross = 2.0 * first.modulus * second.modulus * (first.phase - second.phase).cos();
    (first.density() + second.density() + cross).max(0.0)
}

/// Amplitude sampled at every node of a uniform return grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeGrid {
    grid: UniformGrid,
    values: Vec<Amplitude>,
}

impl AmplitudeGrid {
    pub fn new(grid: UniformGrid, values: Vec<Amplitude>) -> Result<Self> {
        if values.len() != grid.points {
            return Err(Error::domain(format!(
                "grid has {} nodes but {} amplitudes were given",
                grid.points,
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: UniformGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid
            .nodes()
            .into_iter()
            .map(|r| Amplitude::from_complex(f(r)))
            .collect();
        Self { grid, values }
    }

    pub fn from_complex(grid: UniformGrid, values: &[Complex64]) -> Result<Self> {
        Self::new(grid, values.iter().copied().map(Amplitude::from_complex).collect())
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Amplitude] {
        &self.values
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.values.iter().map(Amplitude::to_complex).collect()
    }

    pub fn densities(&self) -> Vec<f64> {
        self.values.iter().map(Amplitude::density).collect()
    }

    /// Trapezoid integral of `|Ψ|²`.
    pub fn norm_sq(&self) -> f64 {
        self.grid.trapezoid(&self.densities())
    }

    /// True when `|Ψ|²` integrates to one within `tol`.
    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sq() - 1.0).abs() <= tol
    }

    /// Rescales so that `|Ψ|²` integrates to one.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sq();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::domain("amplitude has zero norm and cannot be normalized"));
        }
        let scale = norm.sqrt().recip();
        let values = self
            .values
            .iter()
            .map(|a| Amplitude {
                modulus: a.modulus * scale,
                phase: a.phase,
            })
            .collect();
        Ok(Self {
            grid: self.grid,
            values,
        })
    }

    /// Multiplies every node by `e^{iθ0}`.
    pub fn with_global_phase(&self, theta0: f64) -> Self {
        let values = self
            .values
            .iter()
            .map(|a| Amplitude {
                modulus: a.modulus,
                phase: a.phase + theta0,
            })
            .collect();
        Self {
            grid: self.grid,
            values,
        }
    }

    /// Largest modulus at the two end nodes.
    pub fn edge_modulus(&self) -> f64 {
        let n = self.values.len();
        self.values[0].modulus.max(self.values[n - 1].modulus)
    }
}
