use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn quantret(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quantret"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Data rows of a CSV with `#` comments and a header line.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn col(rows: &[Vec<String>], i: usize) -> Vec<f64> {
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn assert_error_line(o: &Output, code: i32) {
    assert_eq!(o.status.code(), Some(code), "stderr: {}", stderr(o));
    let err = stderr(o);
    let line = err.trim();
    assert_eq!(line.lines().count(), 1);
    let v: serde_json::Value = serde_json::from_str(line).unwrap();
    assert_eq!(v["exit"], code);
    assert!(v["message"].is_string());
}

#[test]
fn levels_cubic_harmonic() {
    let o = quantret(&["levels", "--lambda", "0", "--n-max", "3", "--method", "cubic"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# quantret levels --lambda 0 --n-max 3"));
    assert_eq!(col(&rows(&text), 1), vec![1.0, 3.0, 5.0, 7.0]);
}

#[test]
fn levels_numeric_harmonic() {
    let o = quantret(&["levels", "--lambda", "0", "--n-max", "5", "--method", "numeric"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    for (n, omega) in col(&r, 1).into_iter().enumerate() {
        assert!((omega - (2 * n + 1) as f64).abs() < 1e-3);
    }
    assert!(r.iter().all(|row| row.len() == 6 && row[3] == "ok"));
}

#[test]
fn levels_positive_lambda_gaps_widen() {
    let o = quantret(&["levels", "--lambda", "0.05", "--n-max", "2", "--method", "cubic"]);
    let omega = col(&rows(&stdout(&o)), 1);
    let gaps: Vec<f64> = omega.windows(2).map(|w| w[1] - w[0]).collect();
    assert!(gaps.iter().all(|g| *g > 2.0));
    assert!(gaps[1] > gaps[0]);
}

#[test]
fn levels_negative_lambda_reports_breakdown_per_row() {
    let o = quantret(&["levels", "--lambda", "-0.05", "--n-max", "9"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 10);
    assert_eq!(r[7][3], "ok");
    assert_eq!(r[8][3], "breakdown");
    assert_eq!(r[9][3], "breakdown");
}

#[test]
fn density_ground_peak() {
    let o = quantret(&["density", "--n", "0", "--h", "4", "--alpha", "1"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    let (rs, fs) = (col(&r, 0), col(&r, 1));
    let (i, peak) = fs
        .iter()
        .enumerate()
        .fold((0, 0.0), |m, (i, f)| if *f > m.1 { (i, *f) } else { m });
    assert_eq!(rs[i], 0.0);
    assert!((peak - 0.398942).abs() < 5e-7);
    assert!(stderr(&o).contains("modes 1"));
}

#[test]
fn density_reports_modes_with_out_file() {
    let dir = TempDir::new().unwrap();
    let out = p(&dir, "d3.csv");
    let o = quantret(&["density", "--n", "3", "--out", &out]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "modes 4"));
    assert!(fs::read_to_string(&out).unwrap().contains("r,f,cdf"));
}

#[test]
fn density_mixture_integrates_to_one() {
    let o = quantret(&["density", "--levels", "0,1", "--weights", "0.5,0.5"]);
    assert!(o.status.success());
    let cdf = col(&rows(&stdout(&o)), 2);
    assert!((cdf.last().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn density_bad_weights() {
    let o = quantret(&["density", "--levels", "0,1", "--weights", "0.5,0.6"]);
    assert_error_line(&o, 1);
}

#[test]
fn synth_zero_days_is_header_only() {
    let o = quantret(&["synth", "--days", "0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data, vec!["date,open,high,low,close,volume"]);
}

#[test]
fn synth_invalid_level() {
    assert_error_line(&quantret(&["synth", "--high", "31", "--days", "10"]), 1);
}

fn synth_file(dir: &TempDir, name: &str, extra: &[&str]) -> String {
    let out = p(dir, name);
    let mut args = vec!["synth", "--out", &out];
    args.extend_from_slice(extra);
    let o = quantret(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    out
}

fn detect_json(input: &str, out: &str, extra: &[&str]) -> serde_json::Value {
    let mut args = vec!["detect", "--input", input, "--out", out];
    args.extend_from_slice(extra);
    let o = quantret(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap()
}

#[test]
fn synth_then_detect_round_trip() {
    let dir = TempDir::new().unwrap();
    let bars = synth_file(&dir, "bars.csv", &["--seed", "3"]);
    let text = fs::read_to_string(&bars).unwrap();
    assert_eq!(rows(&text).len(), 2000);
    let planted: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# planted_threshold "))
        .unwrap()
        .parse()
        .unwrap();

    let v = detect_json(&bars, &p(&dir, "r.json"), &["--seed", "3"]);
    let e0 = v["e0"].as_f64().unwrap();
    let step = 0.05 * (v["v_max"].as_f64().unwrap() - v["v_min"].as_f64().unwrap());
    assert!((e0 - planted).abs() <= step);
    assert_eq!(v["config"]["seed"], 3);
    assert!(v["invocation"].as_str().unwrap().contains("--seed 3"));
    assert!(!v["trace"].as_array().unwrap().is_empty());
}

#[test]
fn null_market_is_flagged() {
    let dir = TempDir::new().unwrap();
    let bars = synth_file(&dir, "null.csv", &["--low", "0", "--high", "0", "--seed", "5"]);
    let out = p(&dir, "r.json");
    let v = detect_json(&bars, &out, &[]);
    assert!(v["e0"].is_null());
    assert_eq!(v["eta"], ">1");
}

#[test]
fn detect_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let bars = synth_file(&dir, "bars.csv", &["--seed", "9"]);
    let (a, b) = (p(&dir, "a.json"), p(&dir, "b.json"));
    detect_json(&bars, &a, &["--seed", "11"]);
    detect_json(&bars, &b, &["--seed", "11"]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn detect_prints_summary() {
    let dir = TempDir::new().unwrap();
    let bars = synth_file(&dir, "bars.csv", &[]);
    let o = quantret(&["detect", "--input", &bars, "--out", &p(&dir, "r.json")]);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("e0 ")));
    assert!(text.lines().any(|l| l.starts_with("eta ")));
}

#[test]
fn detect_missing_file() {
    assert_error_line(&quantret(&["detect", "--input", "/nonexistent/bars.csv"]), 2);
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn detect_malformed_csv() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "bad.csv",
        "date,open,high,low,close,volume\n2020-01-02,ten,,,10,5\n",
    );
    let o = quantret(&["detect", "--input", path_str(&f)]);
    assert_error_line(&o, 2);
    assert!(stderr(&o).contains("line 2"));
}

#[test]
fn detect_short_history() {
    let dir = TempDir::new().unwrap();
    let bars = synth_file(&dir, "short.csv", &["--days", "100"]);
    assert_error_line(&quantret(&["detect", "--input", &bars]), 1);
}

fn dip_output(dir: &TempDir, values: &[f64]) -> Output {
    let text: String = values.iter().map(|v| format!("{v}\n")).collect();
    let f = write(dir, "col.csv", &format!("r\n{text}"));
    quantret(&["dip", "--input", path_str(&f), "--seed", "1"])
}

fn field(o: &Output, key: &str) -> f64 {
    stdout(o)
        .lines()
        .find_map(|l| l.strip_prefix(key))
        .unwrap()
        .trim()
        .parse()
        .unwrap()
}

#[test]
fn dip_arithmetic_progression() {
    let dir = TempDir::new().unwrap();
    let o = dip_output(&dir, &[1.0, 2.0, 3.0, 4.0]);
    assert!(o.status.success());
    assert!((field(&o, "dip ") - 0.125).abs() < 1e-15);
}

#[test]
fn dip_identical_values() {
    let dir = TempDir::new().unwrap();
    let o = dip_output(&dir, &[2.5; 10]);
    assert!((field(&o, "dip ") - 0.05).abs() < 1e-15);
    assert_eq!(field(&o, "p_value "), 1.0);
}

#[test]
fn dip_two_clusters() {
    let dir = TempDir::new().unwrap();
    let o = dip_output(&dir, &[0.0, 0.01, 0.02, 1.0, 1.01, 1.02]);
    assert!(field(&o, "dip ") >= 0.2);
}

#[test]
fn dip_too_few_values() {
    let dir = TempDir::new().unwrap();
    assert_error_line(&dip_output(&dir, &[1.0, 2.0, 3.0]), 1);
}
