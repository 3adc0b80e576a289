//! Return densities sampled on a uniform grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{cumulative_trapezoid, UniformGrid};

/// Default relative prominence for [`count_modes`].
pub const DEFAULT_PROMINENCE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityGrid {
    grid: UniformGrid,
    values: Vec<f64>,
}

impl DensityGrid {
    pub fn new(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.points {
            return Err(Error::domain(format!(
                "grid has {} nodes but {} density values were given",
                grid.points,
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::domain(format!(
                "density value at node {i} is negative or not finite"
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at_node(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn integral(&self) -> f64 {
        self.grid.trapezoid(&self.values)
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.integral() - 1.0).abs() <= tol
    }

    /// Running integral from the left end of the grid.
    pub fn cumulative(&self) -> Vec<f64> {
        cumulative_trapezoid(&self.values, self.grid.spacing())
    }

    /// `∫ r^k f(r) dr` by the trapezoid rule.
    pub fn raw_moment(&self, k: i32) -> f64 {
        let weighted: Vec<f64> = self
            .grid
            .nodes()
            .iter()
            .zip(&self.values)
            .map(|(r, f)| r.powi(k) * f)
            .collect();
        self.grid.trapezoid(&weighted)
    }

    /// Excess kurtosis about the density's mean.
    pub fn excess_kurtosis(&self) -> f64 {
        let mass = self.integral();
        let mean = self.raw_moment(1) / mass;
        let central = |k: i32| {
            let w: Vec<f64> = self
                .grid
                .nodes()
                .iter()
                .zip(&self.values)
                .map(|(r, f)| (r - mean).powi(k) * f)
                .collect();
            self.grid.trapezoid(&w) / mass
        };
        let var = central(2);
        central(4) / (var * var) - 3.0
    }
}

/// Pointwise convex combination of densities sharing one grid.
pub fn mixture_density(weights: &[f64], levels: &[DensityGrid]) -> Result<DensityGrid> {
    if weights.is_empty() || weights.len() != levels.len() {
        return Err(Error::domain(format!(
            "need one weight per density, got {} weights for {} densities",
            weights.len(),
            levels.len()
        )));
    }
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::domain("mixture weights must be non-negative"));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!("mixture weights sum to {total}, not 1")));
    }
    let grid = levels[0].grid;
    if levels.iter().any(|d| d.grid != grid) {
        return Err(Error::domain("mixture components are on different grids"));
    }
    let mut values = vec![0.0; grid.points];
    for (w, d) in weights.iter().zip(levels) {
        for (acc, v) in values.iter_mut().zip(&d.values) {
            *acc += w * v;
        }
    }
    DensityGrid::new(grid, values)
}

/// Counts local maxima that rise more than `prominence · max(d)` above the
/// higher of their two flanking minima.
///
/// Maxima failing the threshold are merged into their neighbours one at a
/// time, smallest first, so that noise on a flank does not split a peak.
pub fn count_modes(d: &DensityGrid, prominence: f64) -> usize {
    let peak = d.values.iter().copied().fold(0.0, f64::max);
    if peak <= 0.0 {
        return 0;
    }
    let threshold = prominence * peak;

    let mut runs: Vec<f64> = Vec::with_capacity(d.values.len());
    for &v in &d.values {
        if runs.last() != Some(&v) {
            runs.push(v);
        }
    }
    if runs.len() == 1 {
        return 1;
    }

    // Alternating extrema: valleys[i] and valleys[i + 1] flank peaks[i].
    // An absent valley means the peak sits on the grid edge.
    let mut peaks: Vec<f64> = Vec::new();
    let mut valleys: Vec<Option<f64>> = Vec::new();
    let last = runs.len() - 1;
    let mut running_min: Option<f64> = None;
    for i in 0..runs.len() {
        let left_ok = i == 0 || runs[i] > runs[i - 1];
        let right_ok = i == last || runs[i] > runs[i + 1];
        if left_ok && right_ok {
            valleys.push(running_min);
            peaks.push(runs[i]);
            running_min = None;
        } else {
            running_min = Some(running_min.map_or(runs[i], |m: f64| m.min(runs[i])));
        }
    }
    valleys.push(running_min);

    let prominence_of = |peaks: &[f64], valleys: &[Option<f64>], i: usize| -> f64 {
        match (valleys[i], valleys[i + 1]) {
            (Some(l), Some(r)) => peaks[i] - l.max(r),
            (Some(v), None) | (None, Some(v)) => peaks[i] - v,
            (None, None) => peaks[i],
        }
    };

    loop {
        let weakest = (0..peaks.len())
            .map(|i| (i, prominence_of(&peaks, &valleys, i)))
            .filter(|&(_, p)| p <= threshold)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        let Some((i, _)) = weakest else { break };
        let merged = match (valleys[i], valleys[i + 1]) {
            (Some(l), Some(r)) => Some(l.min(r)),
            (Some(v), None) | (None, Some(v)) => Some(v),
            (None, None) => None,
        };
        peaks.remove(i);
        valleys.remove(i + 1);
        valleys[i] = merged;
        if peaks.is_empty() {
            break;
        }
    }
    peaks.len()
}
