//! Solutions of the trading equation: closed-form harmonic levels, the cubic
//! anharmonic level rule and a finite-difference eigensolver.

mod anharmonic;
mod density;
mod harmonic;
mod numeric;
mod params;
pub mod tridiag;

pub use anharmonic::{anharmonic_level, anharmonic_levels, branch_root, breakdown_beta, level_beta};
pub use density::{count_modes, mixture_density, DensityGrid, DEFAULT_PROMINENCE};
pub use harmonic::{
    default_return_grid, harmonic_amplitude, harmonic_density, harmonic_density_on, harmonic_level, hermite,
    DEFAULT_GRID_POINTS, HARMONIC_MAX_LEVEL, HERMITE_MAX_ORDER,
};
pub use numeric::{
    barrier_position, default_xi_grid, density_from_state, numeric_spectrum, potential, NumericLevel, NumericSpectrum,
    DEFAULT_XI_HALF_WIDTH, DEFAULT_XI_POINTS, RESOLUTION_TOLERANCE,
};
pub use params::{EnergyLevel, ModelParams, SdgParams};
