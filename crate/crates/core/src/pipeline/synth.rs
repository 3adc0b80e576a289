//! Synthetic markets whose return density switches level with volume.

use chrono::{Days, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal};

use crate::error::{Error, Result};
use crate::grid::UniformGrid;
use crate::oscillator::{
    default_return_grid, default_xi_grid, density_from_state, harmonic_density_on, numeric_spectrum, DensityGrid,
    ModelParams, HARMONIC_MAX_LEVEL,
};

use super::returns::ReturnRecord;

/// Median daily volume of synthetic markets, in shares.
pub const SYNTH_VOLUME_MEDIAN: f64 = 1.0e6;
/// Standard deviation of log volume in synthetic markets.
pub const SYNTH_VOLUME_LOG_SD: f64 = 0.8;

fn synth_start_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2011, 1, 3).expect("valid date")
}

/// Inverse-CDF sampler over a tabulated density, linear between nodes.
#[derive(Debug, Clone)]
pub struct DensitySampler {
    nodes: Vec<f64>,
    cdf: Vec<f64>,
}

impl DensitySampler {
    pub fn new(density: &DensityGrid) -> Result<Self> {
        let mut cdf = density.cumulative();
        let total = *cdf.last().expect("grid has nodes");
        if !(total > 0.0) {
            return Err(Error::domain("density has zero mass"));
        }
        cdf.iter_mut().for_each(|c| *c /= total);
        Ok(Self {
            nodes: density.grid().nodes(),
            cdf,
        })
    }

    /// Maps a uniform draw in `[0, 1)` to a return.
    pub fn quantile(&self, u: f64) -> f64 {
        let j = self.cdf.partition_point(|&c| c < u).clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[j - 1], self.cdf[j]);
        let t = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
        self.nodes[j - 1] + t * (self.nodes[j] - self.nodes[j - 1])
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random::<f64>())
    }
}

/// `n` i.i.d. returns drawn from `level`.
pub fn sample_returns(level: &DensityGrid, n: usize, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let sampler = DensitySampler::new(level)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| sampler.sample(&mut rng)).collect())
}

/// Density of level `n`: closed form when `δ = 0`, finite differences otherwise.
pub fn level_density(params: &ModelParams, n: usize) -> Result<DensityGrid> {
    Ok(level_densities(params, &[n], None)?.remove(0))
}

/// Densities of several levels on one shared grid of `points` nodes (the
/// default grid when `None`). The grid is in `r` for `δ = 0` and in `ξ` otherwise.
pub fn level_densities(params: &ModelParams, levels: &[usize], points: Option<usize>) -> Result<Vec<DensityGrid>> {
    let Some(&top) = levels.iter().max() else {
        return Ok(Vec::new());
    };
    if top > HARMONIC_MAX_LEVEL {
        return Err(Error::domain(format!("level {top} exceeds {HARMONIC_MAX_LEVEL}")));
    }
    if params.delta == 0.0 {
        let mut grid = default_return_grid(params, top);
        if let Some(p) = points {
            grid = UniformGrid::new(grid.min, grid.max, p)?;
        }
        return levels.iter().map(|&n| harmonic_density_on(n, params, grid)).collect();
    }
    let lambda = params.lambda();
    let mut grid = default_xi_grid(lambda);
    if let Some(p) = points {
        grid = UniformGrid::new(grid.min, grid.max, p)?;
    }
    let spectrum = numeric_spectrum(lambda, top, Some(grid))?;
    levels
        .iter()
        .map(|&n| {
            let level = &spectrum.levels[n];
            if !level.physical {
                return Err(Error::domain(format!("level {n} lies above the potential barrier")));
            }
            density_from_state(&spectrum.grid, &level.vector, params)
        })
        .collect()
}

/// Daily records with log-normal volumes. Days whose volume falls below the
/// `threshold_percentile` (0–100) of the drawn volumes take returns from
/// `low_level`; the rest from `high_level`.
pub fn synthesize_market(
    params: &ModelParams,
    low_level: usize,
    high_level: usize,
    threshold_percentile: f64,
    n_days: usize,
    seed: u64,
) -> Result<Vec<ReturnRecord>> {
    if !(threshold_percentile > 0.0 && threshold_percentile < 100.0) {
        return Err(Error::domain(format!(
            "threshold percentile {threshold_percentile} must lie in (0, 100)"
        )));
    }
    let low = DensitySampler::new(&level_density(params, low_level)?)?;
    let high = DensitySampler::new(&level_density(params, high_level)?)?;
    if n_days == 0 {
        return Ok(Vec::new());
    }

    let mut vol_rng = ChaCha8Rng::seed_from_u64(seed);
    vol_rng.set_stream(0);
    let mut ret_rng = ChaCha8Rng::seed_from_u64(seed);
    ret_rng.set_stream(1);

    let volume_dist = LogNormal::new(SYNTH_VOLUME_MEDIAN.ln(), SYNTH_VOLUME_LOG_SD).expect("valid log-normal");
    let volumes: Vec<f64> = (0..n_days).map(|_| volume_dist.sample(&mut vol_rng)).collect();
    let threshold = planted_threshold(&volumes, threshold_percentile);

    let start = synth_start_date();
    Ok(volumes
        .into_iter()
        .enumerate()
        .map(|(i, volume)| {
            let sampler = if volume < threshold { &low } else { &high };
            ReturnRecord {
                date: start + Days::new(i as u64),
                r: sampler.sample(&mut ret_rng),
                volume,
            }
        })
        .collect())
}

/// Volume at the given percentile: the smallest drawn volume with at least
/// `percentile`% of days strictly below it.
pub fn planted_threshold(volumes: &[f64], percentile: f64) -> f64 {
    let mut sorted = volumes.to_vec();
    sorted.sort_by(f64::total_cmp);
    let idx = ((percentile / 100.0) * sorted.len() as f64).floor() as usize;
    sorted[idx.min(sorted.len() - 1)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::harmonic_density;

    fn harmonic(h: f64) -> ModelParams {
        ModelParams::harmonic(h, 1.0).unwrap()
    }

    #[test]
    fn ground_level_samples_have_unit_sd() {
        // h = 4, α = 1 gives σ = 1
        let d = harmonic_density(0, &harmonic(4.0)).unwrap();
        let xs = sample_returns(&d, 100_000, 11).unwrap();
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        assert!((sd - 1.0).abs() < 0.02, "sd {sd}");
    }

    #[test]
    fn first_level_samples_are_centred() {
        let d = harmonic_density(1, &harmonic(4.0)).unwrap();
        let xs = sample_returns(&d, 100_000, 12).unwrap();
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        assert!(mean.abs() < 3.0 * sd / n.sqrt(), "mean {mean}");
    }

    #[test]
    fn zero_draws() {
        let d = harmonic_density(0, &harmonic(1.0)).unwrap();
        assert!(sample_returns(&d, 0, 1).unwrap().is_empty());
    }

    #[test]
    fn sampling_is_seeded() {
        let d = harmonic_density(2, &harmonic(1.0)).unwrap();
        assert_eq!(sample_returns(&d, 50, 5).unwrap(), sample_returns(&d, 50, 5).unwrap());
        assert_ne!(sample_returns(&d, 50, 5).unwrap(), sample_returns(&d, 50, 6).unwrap());
    }

    #[test]
    fn quantile_inverts_piecewise_linear_cdf() {
        // uniform density on [0, 2]
        let g = UniformGrid::new(0.0, 2.0, 5).unwrap();
        let d = DensityGrid::new(g, vec![0.5; 5]).unwrap();
        let s = DensitySampler::new(&d).unwrap();
        for u in [0.0, 0.1, 0.5, 0.9, 0.999] {
            assert!((s.quantile(u) - 2.0 * u).abs() < 1e-12);
        }
    }

    #[test]
    fn market_split_by_volume() {
        let p = harmonic(1.0);
        let recs = synthesize_market(&p, 0, 1, 60.0, 500, 4).unwrap();
        assert_eq!(recs.len(), 500);
        assert!(recs.windows(2).all(|w| w[1].date == w[0].date + Days::new(1)));
        let vols: Vec<f64> = recs.iter().map(|r| r.volume).collect();
        let t = planted_threshold(&vols, 60.0);
        assert_eq!(vols.iter().filter(|v| **v < t).count(), 300);
        assert_eq!(synthesize_market(&p, 0, 1, 60.0, 500, 4).unwrap(), recs);
    }

    #[test]
    fn empty_market_and_bad_inputs() {
        let p = harmonic(1.0);
        assert!(synthesize_market(&p, 0, 1, 60.0, 0, 1).unwrap().is_empty());
        assert!(synthesize_market(&p, 0, 31, 60.0, 10, 1).is_err());
        assert!(synthesize_market(&p, 0, 1, 100.0, 10, 1).is_err());
    }

    #[test]
    fn anharmonic_levels_use_numeric_densities() {
        let p = ModelParams::new(1.0, 1.0, 0.1).unwrap();
        let d = level_density(&p, 1).unwrap();
        assert!((d.integral() - 1.0).abs() < 1e-6);
    }
}
