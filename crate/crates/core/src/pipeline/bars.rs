use std::io::{Read, Write};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Header every bars file must carry, in this order.
pub const BARS_HEADER: [&str; 6] = ["date", "open", "high", "low", "close", "volume"];
const DATE_FORMAT: &str = "%Y-%m-%d";

/// One trading day of OHLCV data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DailyBar {
    pub date: NaiveDate,
    pub open: f64,
    pub high: Option<f64>,
    pub low: Option<f64>,
    pub close: f64,
    pub volume: f64,
}

impl DailyBar {
    fn validate(&self, line: u64) -> Result<()> {
        let invalid = |message: String| Err(Error::Validation { line, message });
        if !(self.open > 0.0) {
            return invalid(format!("open must be positive, got {}", self.open));
        }
        if !(self.close > 0.0) {
            return invalid(format!("close must be positive, got {}", self.close));
        }
        if !(self.volume >= 0.0) {
            return invalid(format!("volume must be non-negative, got {}", self.volume));
        }
        let body_lo = self.open.min(self.close);
        let body_hi = self.open.max(self.close);
        if let Some(low) = self.low {
            if !(low > 0.0 && low <= body_lo) {
                return invalid(format!("low {low} must be positive and at most min(open, close)"));
            }
        }
        if let Some(high) = self.high {
            if high < body_hi {
                return invalid(format!("high {high} is below max(open, close)"));
            }
        }
        Ok(())
    }
}

fn parse_number(field: &str, name: &str, line: u64) -> Result<f64> {
    let value: f64 = field.parse().map_err(|_| Error::Parse {
        line,
        message: format!("{name}: '{field}' is not a number"),
    })?;
    if !value.is_finite() {
        return Err(Error::Parse {
            line,
            message: format!("{name}: '{field}' is not finite"),
        });
    }
    Ok(value)
}

fn parse_optional(field: &str, name: &str, line: u64) -> Result<Option<f64>> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse_number(field, name, line).map(Some)
    }
}

fn csv_error(err: csv::Error) -> Error {
    let line = err.position().map_or(0, |p| p.line());
    match err.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        kind => Error::Parse {
            line,
            message: format!("{kind:?}"),
        },
    }
}

/// Reads a `date,open,high,low,close,volume` file. Lines starting with `#`
/// are comments. Bars come back sorted by date; repeated dates are rejected.
pub fn load_bars<R: Read>(source: R) -> Result<Vec<DailyBar>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(source);

    let header = reader.headers().map_err(csv_error)?.clone();
    if header.iter().ne(BARS_HEADER.iter().copied()) {
        return Err(Error::Parse {
            line: header.position().map_or(1, |p| p.line()),
            message: format!(
                "header must be '{}', got '{}'",
                BARS_HEADER.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }

    let mut bars: Vec<(u64, DailyBar)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        let date = NaiveDate::parse_from_str(&record[0], DATE_FORMAT).map_err(|e| Error::Parse {
            line,
            message: format!("date '{}': {e}", &record[0]),
        })?;
        let bar = DailyBar {
            date,
            open: parse_number(&record[1], "open", line)?,
            high: parse_optional(&record[2], "high", line)?,
            low: parse_optional(&record[3], "low", line)?,
            close: parse_number(&record[4], "close", line)?,
            volume: parse_number(&record[5], "volume", line)?,
        };
        bar.validate(line)?;
        bars.push((line, bar));
    }

    bars.sort_by_key(|(_, b)| b.date);
    for pair in bars.windows(2) {
        if pair[0].1.date == pair[1].1.date {
            let line = pair[0].0.max(pair[1].0);
            return Err(Error::Validation {
                line,
                message: format!("duplicate date {}", pair[1].1.date),
            });
        }
    }
    Ok(bars.into_iter().map(|(_, b)| b).collect())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes bars in the format [`load_bars`] reads, after optional `#` comment lines.
pub fn write_bars<W: Write>(mut out: W, comments: &[String], bars: &[DailyBar]) -> Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "{}", BARS_HEADER.join(","))?;
    for b in bars {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            b.date.format(DATE_FORMAT),
            b.open,
            fmt_opt(b.high),
            fmt_opt(b.low),
            b.close,
            b.volume
        )?;
    }
    Ok(())
}
