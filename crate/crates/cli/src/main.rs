//! `gsnn`: enumerate, describe and verify invariant shallow ReLU architectures
//! of a finite orthogonal group.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gsnn_core::GsnnError;

#[derive(Parser, Debug)]
#[command(name = "gsnn", version, about)]
pub struct Cli {
    /// Group preset (C6, D4, Q8, C2^3, C2xC4, C6-rot, D6-rot@15, ...) or inline JSON.
    #[arg(long, global = true, conflicts_with = "group_file")]
    pub group: Option<String>,
    /// File holding a JSON group specification.
    #[arg(long, global = true)]
    pub group_file: Option<PathBuf>,
    /// Arithmetic: exact rationals, floats, or exact unless the group needs floats.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Auto)]
    pub mode: Mode,
    /// Equality and pivot tolerance in float mode; also the verification threshold.
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = positive)]
    pub eps: f64,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random inputs per architecture for `verify`.
    #[arg(long, global = true, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, global = true, default_value_t = 48, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_order: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Auto,
    Exact,
    Float,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write one JSON file per architecture and a summary CSV.
    Enumerate,
    /// Print subgroups, pair classes and cohomology groups.
    Describe,
    /// Check invariance of a sampled instance of every architecture.
    Verify {
        /// Zero the affine term before checking, which breaks type-2 instances.
        #[arg(long)]
        zero_c: bool,
    },
    /// Write the morphism graph and per-architecture cohomology pictures as DOT.
    Graph,
    /// Count admissible architectures per type for a list of groups.
    Table {
        /// Comma-separated presets; defaults to the standard list of groups of order at most 8.
        #[arg(long, value_delimiter = ',')]
        groups: Option<Vec<String>>,
    },
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(String),
}

impl From<GsnnError> for CliError {
    fn from(e: GsnnError) -> Self {
        match e {
            GsnnError::InvalidSpec(_)
            | GsnnError::UnsupportedMode
            | GsnnError::Json(_)
            | GsnnError::NonOrthogonalGenerator { .. }
            | GsnnError::OrderBoundExceeded { .. }
            | GsnnError::DimensionMismatch { .. } => CliError::Usage(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
