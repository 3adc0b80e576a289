//! Volume-threshold search for the ground trading level.
//!
//! Days are split at a volume threshold `V*` into those below it and those
//! at or above it. The returns of the upper set are tested for unimodality;
//! the first threshold at which unimodality is rejected estimates the
//! ground level `E₀`. Otherwise `V*` rises in fixed steps of the volume range
//! until fewer than `min_subset_days` days remain above it.

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::modality::{modality_pvalue, Sample};

use super::returns::ReturnRecord;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    /// First threshold as a fraction of the volume range above the minimum.
    pub start_fraction: f64,
    /// Threshold increment as a fraction of the volume range.
    pub step_fraction: f64,
    pub n_boot: usize,
    /// Rejection level for the unimodality test.
    pub alpha_sig: f64,
    /// Smallest upper subset that is still tested.
    pub min_subset_days: usize,
    pub seed: u64,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        Self {
            start_fraction: 0.05,
            step_fraction: 0.05,
            n_boot: 100,
            alpha_sig: 0.05,
            min_subset_days: 22,
            seed: 0,
        }
    }
}

impl DetectionConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| v > 0.0 && v < 1.0;
        if !unit(self.start_fraction) || !unit(self.step_fraction) {
            return Err(Error::domain("start and step fractions must lie in (0, 1)"));
        }
        if self.start_fraction + self.step_fraction > 1.0 {
            return Err(Error::domain("start_fraction + step_fraction must not exceed 1"));
        }
        if self.n_boot == 0 {
            return Err(Error::domain("n_boot must be at least 1"));
        }
        if !unit(self.alpha_sig) {
            return Err(Error::domain("alpha_sig must lie in (0, 1)"));
        }
        if self.min_subset_days < crate::modality::MIN_SAMPLE {
            return Err(Error::domain(format!(
                "min_subset_days must be at least {}",
                crate::modality::MIN_SAMPLE
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub threshold: f64,
    pub subset_size: usize,
    pub dip: f64,
    pub p_value: f64,
}

/// Normalized ground level `E₀ / V^max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Eta {
    Ratio(f64),
    /// No rejection before the upper subset became too small: `E₀ > V^max`.
    AboveMax,
}

impl Eta {
    pub fn ratio(&self) -> Option<f64> {
        match self {
            Eta::Ratio(v) => Some(*v),
            Eta::AboveMax => None,
        }
    }
}

impl std::fmt::Display for Eta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Eta::Ratio(v) => write!(f, "{v}"),
            Eta::AboveMax => f.write_str(">1"),
        }
    }
}

impl Serialize for Eta {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Eta::Ratio(v) => s.serialize_f64(*v),
            Eta::AboveMax => s.serialize_str(">1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionResult {
    pub e0: Option<f64>,
    pub eta: Eta,
    pub v_max: f64,
    pub v_min: f64,
    pub config: DetectionConfig,
    pub trace: Vec<TraceStep>,
}

/// Threshold tested at step `k`.
pub fn threshold_at(k: usize, v_min: f64, v_max: f64, config: &DetectionConfig) -> f64 {
    v_min + (config.start_fraction + k as f64 * config.step_fraction) * (v_max - v_min)
}

/// Seed for the bootstrap at step `k`.
fn step_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_add((k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn detect_ground_level(records: &[ReturnRecord], config: &DetectionConfig) -> Result<DetectionResult> {
    config.validate()?;
    if records.len() < config.min_subset_days {
        return Err(Error::domain(format!(
            "{} records is fewer than the {} needed for one test",
            records.len(),
            config.min_subset_days
        )));
    }
    if records.iter().any(|r| !(r.volume.is_finite() && r.r.is_finite())) {
        return Err(Error::domain("records contain non-finite returns or volumes"));
    }
    let v_min = records.iter().map(|r| r.volume).fold(f64::INFINITY, f64::min);
    let v_max = records.iter().map(|r| r.volume).fold(f64::NEG_INFINITY, f64::max);
    if v_max == v_min {
        return Err(Error::domain("all volumes are equal; no threshold can split the days"));
    }

    let mut trace = Vec::new();
    let mut e0 = None;
    for k in 0.. {
        let threshold = threshold_at(k, v_min, v_max, config);
        let upper: Vec<f64> = records.iter().filter(|r| r.volume >= threshold).map(|r| r.r).collect();
        if upper.len() < config.min_subset_days {
            break;
        }
        let subset_size = upper.len();
        let verdict = modality_pvalue(&Sample::new(upper)?, config.n_boot, step_seed(config.seed, k))?;
        trace.push(TraceStep {
            threshold,
            subset_size,
            dip: verdict.statistic,
            p_value: verdict.p_value,
        });
        if verdict.p_value < config.alpha_sig {
            e0 = Some(threshold);
            break;
        }
    }

    let eta = e0.map_or(Eta::AboveMax, |e| Eta::Ratio(e / v_max));
    Ok(DetectionResult {
        e0,
        eta,
        v_max,
        v_min,
        config: *config,
        trace,
    })
}
