//! `epkit` command-line front end.

mod commands;
pub mod config;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::classify::ClassifyError;
use crate::models::ModelError;
use crate::sublattice::SublatticeError;
use config::{ConfigError, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "epkit",
    version,
    about = "Exceptional points of sublattice-symmetric non-Hermitian Bloch Hamiltonians"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the zero-energy degeneracy at a momentum
    Classify(RunArgs),
    /// Scan a ray toward q* and write energies and quantum distances as CSV
    PathScan(RunArgs),
    /// Fit |E| ~ |dq|^p per branch
    Fit(RunArgs),
    /// Search a momentum domain for zeros of the smallest singular value
    BzScan(RunArgs),
    /// List catalog models and their parameters
    Models(OutputArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Emit JSON (JSON lines for tables)
    #[arg(long)]
    pub json: bool,
    /// Write the main output here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Flat `key = value` config file
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Same as `model=<id>`
    #[arg(long)]
    pub model: Option<String>,
    /// Use the model's own q* (same as `q=qstar`)
    #[arg(long)]
    pub at_qstar: bool,
    /// Same as `q=<qx,qy>`
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// Same as `theta=<list>`
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// `key=value` overrides applied after the config file
    #[arg(value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig, ConfigError> {
        let mut pairs = match &self.config {
            Some(path) => config::read_file(path)?,
            None => Vec::new(),
        };
        let flag = |k: &str, v: &Option<String>| v.as_ref().map(|v| (k.to_string(), v.clone()));
        pairs.extend(flag("model", &self.model));
        pairs.extend(flag("q", &self.q));
        pairs.extend(flag("theta", &self.theta));
        for o in &self.overrides {
            let (k, v) = o.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: 0,
                msg: format!("override `{o}` is not `key=value`"),
            })?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        if self.at_qstar {
            pairs.push(("q".into(), "qstar".into()));
        }
        RunConfig::from_pairs(&pairs)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
    #[error("scan degraded: {0}")]
    Degraded(String),
    #[error("{0}")]
    Failed(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::CrossCheck(_) => 3,
            CliError::Degraded(_) => 4,
            CliError::Failed(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Sublattice(_) | ModelError::Linalg(_) => CliError::Failed(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::CrossCheckMismatch { .. } => CliError::CrossCheck(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<SublatticeError> for CliError {
    fn from(e: SublatticeError) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::InvalidRadii(_) | AnalysisError::InvalidGrid(_) => CliError::Config(e.to_string()),
            AnalysisError::DegenerateAtSample => CliError::Degraded(e.to_string()),
            AnalysisError::Classify(inner) => inner.into(),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Classify(a) => commands::classify(&a.resolve()?, &a.output),
        Command::PathScan(a) => commands::path_scan(&a.resolve()?, &a.output),
        Command::Fit(a) => commands::fit(&a.resolve()?, &a.output),
        Command::BzScan(a) => commands::bz_scan(&a.resolve()?, &a.output),
        Command::Models(o) => commands::models(o),
    }
}

/// Worker count from `EPKIT_THREADS`; `None` when unset.
pub fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var("EPKIT_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!(
                "EPKIT_THREADS must be a positive integer, got `{v}`"
            ))),
        },
    }
}
