//! Finite-difference solution of `−φ'' + (ξ² + λξ⁴)φ = Ωφ`.
//!
//! The equation is discretized on a uniform ξ grid with the three-point
//! second-difference stencil and Dirichlet ends, giving a symmetric
//! tridiagonal matrix. Eigenvalues come from Sturm bisection and
//! eigenvectors from inverse iteration.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::UniformGrid;

use super::density::DensityGrid;
use super::params::ModelParams;
use super::tridiag::SymTridiagonal;

pub const DEFAULT_XI_HALF_WIDTH: f64 = 12.0;
pub const DEFAULT_XI_POINTS: usize = 4097;
/// Largest eigenvalue shift tolerated when the grid is refined.
pub const RESOLUTION_TOLERANCE: f64 = 1e-3;

/// One computed level.
#[derive(Debug, Clone, Serialize)]
pub struct NumericLevel {
    pub n: usize,
    pub omega: f64,
    /// Eigenvector on every node of the ξ grid, end nodes included (zero).
    /// Trapezoid norm 1; leftmost significant component positive.
    pub vector: Vec<f64>,
    /// False when Ω lies above the potential barrier of a negative coupling.
    pub physical: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct NumericSpectrum {
    pub lambda: f64,
    pub grid: UniformGrid,
    /// Barrier height `max(ξ² + λξ⁴)` for negative couplings.
    pub barrier: Option<f64>,
    pub levels: Vec<NumericLevel>,
}

/// Potential `ξ² + λξ⁴`.
pub fn potential(lambda: f64, xi: f64) -> f64 {
    let x2 = xi * xi;
    x2 + lambda * x2 * x2
}

/// Location of the potential maximum for negative couplings.
pub fn barrier_position(lambda: f64) -> Option<f64> {
    (lambda < 0.0).then(|| (-0.5 / lambda).sqrt())
}

/// Default ξ grid: ±12 with 4097 nodes, clipped to the barrier tops when the
/// coupling is negative.
pub fn default_xi_grid(lambda: f64) -> UniformGrid {
    let half = barrier_position(lambda).map_or(DEFAULT_XI_HALF_WIDTH, |b| b.min(DEFAULT_XI_HALF_WIDTH));
    UniformGrid::symmetric(half, DEFAULT_XI_POINTS).expect("positive half-width")
}

fn hamiltonian(lambda: f64, grid: &UniformGrid) -> SymTridiagonal {
    let step = grid.spacing();
    let inv_sq = 1.0 / (step * step);
    let interior = grid.points - 2;
    let diag = (1..=interior)
        .map(|i| 2.0 * inv_sq + potential(lambda, grid.node(i)))
        .collect();
    let off = vec![-inv_sq; interior - 1];
    SymTridiagonal::new(diag, off)
}

fn lowest(lambda: f64, grid: &UniformGrid, count: usize) -> (SymTridiagonal, Vec<f64>) {
    let h = hamiltonian(lambda, grid);
    let values = h.lowest_eigenvalues(count);
    (h, values)
}

/// Lowest `n_max + 1` levels on `grid` (or [`default_xi_grid`]).
///
/// The eigenvalues are recomputed with the interval count doubled; a shift
/// above [`RESOLUTION_TOLERANCE`] is reported as [`Error::Resolution`].
pub fn numeric_spectrum(lambda: f64, n_max: usize, grid: Option<UniformGrid>) -> Result<NumericSpectrum> {
    if !lambda.is_finite() {
        return Err(Error::domain("lambda must be finite"));
    }
    let grid = grid.unwrap_or_else(|| default_xi_grid(lambda));
    let count = n_max + 1;
    if grid.points < count + 3 {
        return Err(Error::domain(format!(
            "{} grid points cannot resolve {count} levels",
            grid.points
        )));
    }

    let (h, values) = lowest(lambda, &grid, count);
    let (_, fine) = lowest(lambda, &grid.refined(), count);
    for (n, (a, b)) in values.iter().zip(&fine).enumerate() {
        let change = (a - b).abs();
        if change > RESOLUTION_TOLERANCE {
            return Err(Error::Resolution { n, change });
        }
    }

    let barrier = barrier_position(lambda).map(|b| potential(lambda, b));
    let step = grid.spacing();
    let levels = values
        .iter()
        .enumerate()
        .map(|(n, &omega)| {
            let inner = h.eigenvector(omega);
            let mut vector = Vec::with_capacity(grid.points);
            vector.push(0.0);
            vector.extend(inner);
            vector.push(0.0);
            fix_norm_and_sign(&mut vector, step);
            NumericLevel {
                n,
                omega,
                vector,
                physical: barrier.is_none_or(|b| omega <= b),
            }
        })
        .collect();

    Ok(NumericSpectrum {
        lambda,
        grid,
        barrier,
        levels,
    })
}

fn fix_norm_and_sign(v: &mut [f64], step: f64) {
    let sq: Vec<f64> = v.iter().map(|x| x * x).collect();
    let norm = crate::grid::trapezoid(&sq, step).sqrt();
    let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    // Far-tail components sit at rounding level; judge sign where it is resolved.
    let first = v.iter().find(|x| x.abs() > 1e-8 * peak).copied().unwrap_or(1.0);
    let scale = norm.recip().copysign(first);
    v.iter_mut().for_each(|x| *x *= scale);
}

/// Return density `|φ(ξ)|² (α/h)^{1/4}` on the r grid matching `xi_grid`.
pub fn density_from_state(xi_grid: &UniformGrid, vector: &[f64], params: &ModelParams) -> Result<DensityGrid> {
    if vector.len() != xi_grid.points {
        return Err(Error::domain("eigenvector length does not match its grid"));
    }
    let jacobian = params.xi_per_return();
    let r_grid = UniformGrid::new(xi_grid.min / jacobian, xi_grid.max / jacobian, xi_grid.points)?;
    let mut values: Vec<f64> = vector.iter().map(|v| v * v * jacobian).collect();
    let mass = r_grid.trapezoid(&values);
    if !(mass > 0.0) {
        return Err(Error::domain("state has zero norm"));
    }
    values.iter_mut().for_each(|v| *v /= mass);
    DensityGrid::new(r_grid, values)
}
