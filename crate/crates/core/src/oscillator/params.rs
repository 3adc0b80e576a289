use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constants of the trading equation
/// `-(h/2)Ψ'' + (α/2 r² + δ/4 r⁴)Ψ = Ē Ψ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Shares traded per decision.
    pub h: f64,
    /// Quadratic supply-demand-gap coefficient.
    pub alpha: f64,
    /// Quartic supply-demand-gap coefficient.
    pub delta: f64,
}

impl ModelParams {
    pub fn new(h: f64, alpha: f64, delta: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::domain(format!("h must be positive, got {h}")));
        }
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::domain(format!("alpha must be positive, got {alpha}")));
        }
        if !delta.is_finite() {
            return Err(Error::domain("delta must be finite"));
        }
        Ok(Self { h, alpha, delta })
    }

    pub fn harmonic(h: f64, alpha: f64) -> Result<Self> {
        Self::new(h, alpha, 0.0)
    }

    /// Dimensionless anharmonic coupling `δ/(2α)·√(h/α)`.
    pub fn lambda(&self) -> f64 {
        self.delta / (2.0 * self.alpha) * (self.h / self.alpha).sqrt()
    }

    /// Standard deviation of the ground-level density, `(h/(4α))^{1/4}`.
    pub fn sigma(&self) -> f64 {
        (self.h / (4.0 * self.alpha)).powf(0.25)
    }

    /// `(α/h)^{1/4}`: multiply a return by this to get the dimensionless coordinate ξ.
    pub fn xi_per_return(&self) -> f64 {
        (self.alpha / self.h).powf(0.25)
    }

    /// `½√(αh)`: intrinsic volume per unit of normalized level Ω.
    pub fn volume_unit(&self) -> f64 {
        0.5 * (self.alpha * self.h).sqrt()
    }
}

/// Order-book microfoundation of the supply-demand gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SdgParams {
    /// Rational speculators' base trend coefficient.
    pub a: f64,
    /// Irrational speculators' trend coefficient.
    pub b: f64,
    /// Liquidity providers' perceived trend coefficient.
    pub c: f64,
    /// Liquidity counteraction ratio.
    pub gamma: f64,
    /// Rational speculators' risk-aversion curvature.
    pub lambda_a: f64,
    /// Liquidity providers' perceived curvature.
    pub lambda_c: f64,
}

impl SdgParams {
    pub fn alpha(&self) -> f64 {
        self.a + self.b - self.c * self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.gamma * self.lambda_c - self.lambda_a
    }

    /// Model constants for a given per-decision volume `h`.
    pub fn model(&self, h: f64) -> Result<ModelParams> {
        let nonneg = [self.a, self.b, self.c, self.lambda_a, self.lambda_c];
        if nonneg.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::domain("a, b, c, lambda_a and lambda_c must be non-negative"));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::domain("gamma must be positive"));
        }
        let alpha = self.alpha();
        if alpha <= 0.0 {
            return Err(Error::domain(format!("a + b - c*gamma = {alpha} must be positive")));
        }
        ModelParams::new(h, alpha, self.delta())
    }
}

/// One admissible trading level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyLevel {
    pub n: usize,
    /// Normalized intrinsic volume Ω.
    pub omega: f64,
    /// Intrinsic volume Ē = ½√(αh)·Ω, in shares.
    pub e_bar: f64,
}

impl EnergyLevel {
    pub fn new(n: usize, omega: f64, params: &ModelParams) -> Self {
        Self {
            n,
            omega,
            e_bar: params.volume_unit() * omega,
        }
    }
}
