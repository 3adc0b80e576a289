use std::fs::File;
use std::io::{BufReader, Read, Write};

use clap::{Args, ValueEnum};
use serde::Serialize;

use quantret::modality::{modality_pvalue, Sample, DEFAULT_BOOTSTRAP};
use quantret::oscillator::{
    anharmonic_level, count_modes, mixture_density, numeric_spectrum, EnergyLevel, ModelParams, DEFAULT_PROMINENCE,
};
use quantret::pipeline::{
    bars_from_returns, compute_returns, detect_ground_level, eligible, level_densities, load_bars, planted_threshold,
    synthesize_market, write_bars, DetectionConfig, DetectionResult, DEFAULT_MIN_HISTORY_DAYS,
};
use quantret::Error;

use crate::output::{num, open, Invocation};
use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Closed-form cubic approximation.
    Cubic,
    /// Finite-difference eigenvalues, with the cubic deviation per level.
    Numeric,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Cubic => "cubic",
            Method::Numeric => "numeric",
        }
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct LevelsArgs {
    /// Dimensionless anharmonicity; derived from h, alpha and delta when omitted.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, default_value_t = 5)]
    pub n_max: usize,
    #[arg(long, default_value_t = 1.0)]
    pub h: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    #[arg(long, value_enum, default_value_t = Method::Cubic)]
    pub method: Method,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    pub out: Option<String>,
}

pub fn levels(a: &LevelsArgs) -> Result<(), Failure> {
    let params = ModelParams::new(a.h, a.alpha, a.delta)?;
    let lambda = a.lambda.unwrap_or_else(|| params.lambda());
    let inv = Invocation::new("levels")
        .flag("lambda", lambda)
        .flag("n-max", a.n_max)
        .flag("h", a.h)
        .flag("alpha", a.alpha)
        .flag("delta", a.delta)
        .flag("method", a.method.name());

    let cubic = |n: usize| match anharmonic_level(lambda, n, &params) {
        Ok(level) => Ok(Some(level)),
        Err(Error::LevelBreakdown { .. }) => Ok(None),
        Err(e) => Err(e),
    };

    let mut out = open(a.out.as_deref())?;
    writeln!(out, "# {}", inv.line())?;
    match a.method {
        Method::Cubic => {
            writeln!(out, "n,omega,e_bar,status")?;
            for n in 0..=a.n_max {
                match cubic(n)? {
                    Some(l) => writeln!(out, "{n},{},{},ok", num(l.omega), num(l.e_bar))?,
                    None => writeln!(out, "{n},,,breakdown")?,
                }
            }
        }
        Method::Numeric => {
            let spectrum = numeric_spectrum(lambda, a.n_max, None)?;
            writeln!(out, "n,omega,e_bar,status,cubic_omega,relative_deviation")?;
            for level in &spectrum.levels {
                let e = EnergyLevel::new(level.n, level.omega, &params);
                let status = if level.physical { "ok" } else { "above_barrier" };
                let (c, dev) = match cubic(level.n)? {
                    Some(c) => (num(c.omega), num((c.omega - level.omega) / level.omega)),
                    None => (String::new(), String::new()),
                };
                writeln!(out, "{},{},{},{status},{c},{dev}", level.n, num(e.omega), num(e.e_bar))?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct DensityArgs {
    /// Single level.
    #[arg(long, conflicts_with_all = ["levels", "weights"], required_unless_present = "levels")]
    pub n: Option<usize>,
    /// Comma-separated mixture levels.
    #[arg(long, value_delimiter = ',', requires = "weights")]
    pub levels: Option<Vec<usize>>,
    /// Comma-separated mixture weights summing to 1.
    #[arg(long, value_delimiter = ',', requires = "levels")]
    pub weights: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    pub h: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    /// Grid node count; the level's default grid when omitted.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Minimum peak prominence, relative to the highest peak, counted as a mode.
    #[arg(long, default_value_t = DEFAULT_PROMINENCE)]
    pub prominence: f64,
    #[arg(long)]
    pub out: Option<String>,
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

pub fn density(a: &DensityArgs) -> Result<(), Failure> {
    let params = ModelParams::new(a.h, a.alpha, a.delta)?;
    let (levels, weights) = match (a.n, &a.levels, &a.weights) {
        (Some(n), _, _) => (vec![n], vec![1.0]),
        (None, Some(l), Some(w)) => (l.clone(), w.clone()),
        _ => return Err(Failure::validation("give --n or both --levels and --weights")),
    };
    if levels.len() != weights.len() {
        return Err(Failure::validation("--levels and --weights differ in length"));
    }
    let inv = match a.n {
        Some(n) => Invocation::new("density").flag("n", n),
        None => Invocation::new("density")
            .flag("levels", join(&levels))
            .flag("weights", join(&weights)),
    }
    .flag("h", a.h)
    .flag("alpha", a.alpha)
    .flag("delta", a.delta)
    .opt("grid", a.grid)
    .flag("prominence", a.prominence);

    let parts = level_densities(&params, &levels, a.grid)?;
    let d = mixture_density(&weights, &parts)?;
    let modes = count_modes(&d, a.prominence);
    let cdf = d.cumulative();

    let mut out = open(a.out.as_deref())?;
    writeln!(out, "# {}", inv.line())?;
    writeln!(out, "r,f,cdf")?;
    for (i, (f, c)) in d.values().iter().zip(&cdf).enumerate() {
        writeln!(out, "{},{},{}", num(d.grid().node(i)), num(*f), num(*c))?;
    }
    out.flush()?;
    report(
        a.out.is_some(),
        &format!("modes {modes}\nintegral {}", num(d.integral())),
    );
    Ok(())
}

/// Summary lines go to stdout when the table went to a file, else to stderr.
fn report(to_stdout: bool, text: &str) {
    if to_stdout {
        println!("{text}");
    } else {
        eprintln!("{text}");
    }
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Bars CSV with header date,open,high,low,close,volume.
    #[arg(long)]
    pub input: String,
    #[arg(long, default_value_t = DEFAULT_BOOTSTRAP)]
    pub boot: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha_sig: f64,
    /// Threshold increment as a fraction of the volume range.
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    /// First threshold as a fraction of the volume range.
    #[arg(long, default_value_t = 0.05)]
    pub start: f64,
    #[arg(long, default_value_t = 22)]
    pub min_subset: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Minimum history length for a series to be analysed.
    #[arg(long, default_value_t = DEFAULT_MIN_HISTORY_DAYS)]
    pub min_days: usize,
    /// Result JSON; standard output when omitted.
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Serialize)]
struct DetectReport<'a> {
    invocation: String,
    input: &'a str,
    min_days: usize,
    records: usize,
    #[serde(flatten)]
    result: &'a DetectionResult,
}

fn read_file(path: &str) -> Result<BufReader<File>, Failure> {
    File::open(path).map(BufReader::new).map_err(|e| Failure::io(path, e))
}

pub fn detect(a: &DetectArgs) -> Result<(), Failure> {
    let config = DetectionConfig {
        start_fraction: a.start,
        step_fraction: a.step,
        n_boot: a.boot,
        alpha_sig: a.alpha_sig,
        min_subset_days: a.min_subset,
        seed: a.seed,
    };
    config.validate()?;
    let inv = Invocation::new("detect")
        .flag("input", &a.input)
        .flag("boot", a.boot)
        .flag("alpha-sig", a.alpha_sig)
        .flag("step", a.step)
        .flag("start", a.start)
        .flag("min-subset", a.min_subset)
        .flag("seed", a.seed)
        .flag("min-days", a.min_days);

    let bars = load_bars(read_file(&a.input)?)?;
    let records = compute_returns(&bars);
    if !eligible(&records, a.min_days) {
        return Err(Failure::validation(format!(
            "{} trading days; at least {} required",
            records.len(),
            a.min_days
        )));
    }
    let result = detect_ground_level(&records, &config)?;

    let report_doc = DetectReport {
        invocation: inv.line(),
        input: &a.input,
        min_days: a.min_days,
        records: records.len(),
        result: &result,
    };
    let mut out = open(a.out.as_deref())?;
    serde_json::to_writer_pretty(&mut out, &report_doc).map_err(std::io::Error::from)?;
    writeln!(out)?;
    out.flush()?;
    let e0 = result.e0.map_or_else(|| "none".to_string(), num);
    report(a.out.is_some(), &format!("e0 {e0}\neta {}", result.eta));
    Ok(())
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SynthArgs {
    /// Level of days below the volume threshold.
    #[arg(long, default_value_t = 0)]
    pub low: usize,
    /// Level of days at or above the volume threshold.
    #[arg(long, default_value_t = 1)]
    pub high: usize,
    /// Volume percentile (0-100) separating the two levels.
    #[arg(long, default_value_t = 60.0)]
    pub threshold_pct: f64,
    #[arg(long, default_value_t = 2000)]
    pub days: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Defaults give a ground-level return deviation of 0.02.
    #[arg(long, default_value_t = 6.4e-7)]
    pub h: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    /// Bars CSV; standard output when omitted.
    #[arg(long)]
    pub out: Option<String>,
}

pub fn synth(a: &SynthArgs) -> Result<(), Failure> {
    let params = ModelParams::new(a.h, a.alpha, a.delta)?;
    let inv = Invocation::new("synth")
        .flag("low", a.low)
        .flag("high", a.high)
        .flag("threshold-pct", a.threshold_pct)
        .flag("days", a.days)
        .flag("seed", a.seed)
        .flag("h", a.h)
        .flag("alpha", a.alpha)
        .flag("delta", a.delta);
    let records = synthesize_market(&params, a.low, a.high, a.threshold_pct, a.days, a.seed)?;
    let mut comments = vec![inv.line()];
    if !records.is_empty() {
        let volumes: Vec<f64> = records.iter().map(|r| r.volume).collect();
        comments.push(format!(
            "planted_threshold {}",
            num(planted_threshold(&volumes, a.threshold_pct))
        ));
    }
    let mut out = open(a.out.as_deref())?;
    write_bars(&mut out, &comments, &bars_from_returns(&records))?;
    out.flush()?;
    Ok(())
}

#[derive(Debug, Args)]
pub struct DipArgs {
    /// One number per line; an optional header line and `#` comments are skipped.
    #[arg(long)]
    pub input: String,
    #[arg(long, default_value_t = DEFAULT_BOOTSTRAP)]
    pub boot: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn read_column(mut source: impl Read) -> Result<Vec<f64>, Failure> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    let mut values = Vec::new();
    let mut seen_line = false;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let first = !seen_line;
        seen_line = true;
        match line.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => {
                return Err(Error::Validation {
                    line: i as u64 + 1,
                    message: format!("non-finite value {line}"),
                }
                .into())
            }
            Err(_) if first => {}
            Err(_) => {
                return Err(Error::Parse {
                    line: i as u64 + 1,
                    message: format!("not a number: {line}"),
                }
                .into())
            }
        }
    }
    Ok(values)
}

pub fn dip(a: &DipArgs) -> Result<(), Failure> {
    let values = read_column(read_file(&a.input)?)?;
    let verdict = modality_pvalue(&Sample::new(values)?, a.boot, a.seed)?;
    println!(
        "dip {}\np_value {}\nn_boot {}\nseed {}",
        num(verdict.statistic),
        num(verdict.p_value),
        verdict.n_boot,
        verdict.seed
    );
    Ok(())
}
