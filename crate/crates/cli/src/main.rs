use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod output;

use commands::{DensityArgs, DetectArgs, DipArgs, LevelsArgs, SynthArgs};

/// Trading-level model toolkit: energy levels, return densities, unimodality
/// tests and ground-level detection on daily bars.
#[derive(Debug, Parser)]
#[command(name = "quantret", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate trading energy levels.
    Levels(LevelsArgs),
    /// Tabulate the return density of one level or a mixture of levels.
    Density(DensityArgs),
    /// Estimate the ground-level volume threshold from daily bars.
    Detect(DetectArgs),
    /// Write a synthetic bars file whose return law switches with volume.
    Synth(SynthArgs),
    /// Dip statistic and bootstrap p-value for a column of numbers.
    Dip(DipArgs),
}

/// Failure reported on stderr as one JSON line.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            kind: "validation",
            message: message.into(),
        }
    }

    pub fn io(path: &str, err: std::io::Error) -> Self {
        Self {
            code: 2,
            kind: "io",
            message: format!("{path}: {err}"),
        }
    }
}

impl From<quantret::Error> for Failure {
    fn from(err: quantret::Error) -> Self {
        let kind = match &err {
            quantret::Error::Parse { .. } => "parse",
            quantret::Error::Io(_) => "io",
            quantret::Error::Validation { .. } => "validation",
            _ => "domain",
        };
        let code = if err.is_input_error() { 2 } else { 1 };
        Self {
            code,
            kind,
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Self {
            code: 2,
            kind: "io",
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Levels(a) => commands::levels(&a),
        Command::Density(a) => commands::density(&a),
        Command::Detect(a) => commands::detect(&a),
        Command::Synth(a) => commands::synth(&a),
        Command::Dip(a) => commands::dip(&a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let line = serde_json::json!({ "error": f.kind, "message": f.message, "exit": f.code });
            eprintln!("{line}");
            ExitCode::from(f.code)
        }
    }
}
