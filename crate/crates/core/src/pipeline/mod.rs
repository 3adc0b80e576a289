//! Daily bar ingestion, log returns, ground-level detection and synthetic
//! market fixtures.

mod bars;
mod detect;
mod returns;
mod synth;

pub use bars::{load_bars, write_bars, DailyBar, BARS_HEADER};
pub use detect::{detect_ground_level, threshold_at, DetectionConfig, DetectionResult, Eta, TraceStep};
pub use returns::{
    bars_from_returns, compute_returns, eligible, ReturnRecord, DEFAULT_MIN_HISTORY_DAYS, TRADING_DAYS_PER_YEAR,
};
pub use synth::{
    level_densities, level_density, planted_threshold, sample_returns, synthesize_market, DensitySampler,
    SYNTH_VOLUME_LOG_SD, SYNTH_VOLUME_MEDIAN,
};
