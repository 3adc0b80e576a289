use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::bars::DailyBar;

/// Trading days per year implied by 2432 days over ten years.
pub const TRADING_DAYS_PER_YEAR: usize = 243;
/// Four years of history.
pub const DEFAULT_MIN_HISTORY_DAYS: usize = 4 * TRADING_DAYS_PER_YEAR;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnRecord {
    pub date: NaiveDate,
    /// Intraday log return `ln(close) − ln(open)`.
    pub r: f64,
    pub volume: f64,
}

pub fn compute_returns(bars: &[DailyBar]) -> Vec<ReturnRecord> {
    bars.iter()
        .map(|b| ReturnRecord {
            date: b.date,
            r: b.close.ln() - b.open.ln(),
            volume: b.volume,
        })
        .collect()
}

/// Whether a series has at least `min_days` records.
pub fn eligible(records: &[ReturnRecord], min_days: usize) -> bool {
    records.len() >= min_days
}

/// Bars whose open is 100 and whose close reproduces each return.
pub fn bars_from_returns(records: &[ReturnRecord]) -> Vec<DailyBar> {
    records
        .iter()
        .map(|rec| {
            let open = 100.0;
            let close = open * rec.r.exp();
            DailyBar {
                date: rec.date,
                open,
                high: Some(open.max(close)),
                low: Some(open.min(close)),
                close,
                volume: rec.volume,
            }
        })
        .collect()
}
