//! Uniform one-dimensional grids and trapezoid quadrature.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A uniform grid of `points` nodes spanning `[min, max]` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl UniformGrid {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        if points < 3 {
            return Err(Error::domain(format!("grid needs at least 3 points, got {points}")));
        }
        if !(min.is_finite() && max.is_finite() && max > min) {
            return Err(Error::domain(format!(
                "grid bounds must satisfy min < max, got [{min}, {max}]"
            )));
        }
        Ok(Self { min, max, points })
    }

    /// Symmetric grid about zero.
    pub fn symmetric(half_width: f64, points: usize) -> Result<Self> {
        Self::new(-half_width, half_width, points)
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.points - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        // Interpolate from both ends so that symmetric grids stay symmetric.
        let t = i as f64 / (self.points - 1) as f64;
        self.min * (1.0 - t) + self.max * t
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.node(i)).collect()
    }

    /// Same bounds, with the interval count doubled.
    pub fn refined(&self) -> Self {
        Self {
            points: 2 * self.points - 1,
            ..*self
        }
    }

    /// Trapezoid rule over samples taken at this grid's nodes.
    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        trapezoid(values, self.spacing())
    }
}

/// Trapezoid rule for equally spaced samples.
pub fn trapezoid(values: &[f64], spacing: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => {
            let interior: f64 = values[1..n - 1].iter().sum();
            spacing * (interior + 0.5 * (values[0] + values[n - 1]))
        }
    }
}

/// Running trapezoid integral; element `i` integrates from the first node to node `i`.
pub fn cumulative_trapezoid(values: &[f64], spacing: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            acc += 0.5 * spacing * (values[i - 1] + v);
        }
        out.push(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_grid_has_zero_node() {
        let g = UniformGrid::symmetric(12.0, 4097).unwrap();
        assert_eq!(g.node(2048), 0.0);
        assert_eq!(g.node(0), -12.0);
        assert_eq!(g.node(4096), 12.0);
        for i in 0..g.points {
            assert_eq!(g.node(i), -g.node(g.points - 1 - i));
        }
    }

    #[test]
    fn trapezoid_is_exact_for_linear() {
        let g = UniformGrid::new(0.0, 2.0, 5).unwrap();
        let v: Vec<f64> = g.nodes().iter().map(|x| 3.0 * x + 1.0).collect();
        assert!((g.trapezoid(&v) - 8.0).abs() < 1e-14);
        let c = cumulative_trapezoid(&v, g.spacing());
        assert!((c[4] - 8.0).abs() < 1e-14);
        assert_eq!(c[0], 0.0);
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(UniformGrid::new(0.0, 1.0, 2).is_err());
        assert!(UniformGrid::new(1.0, 1.0, 10).is_err());
        assert!(UniformGrid::new(0.0, f64::NAN, 10).is_err());
    }

    #[test]
    fn refined_halves_spacing() {
        let g = UniformGrid::symmetric(1.0, 11).unwrap();
        assert!((g.refined().spacing() * 2.0 - g.spacing()).abs() < 1e-15);
    }
}
