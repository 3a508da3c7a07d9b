//! Configuration-driven runner for the level-set Cauchy solvers: config
//! parsing, built-in experiments and CSV/summary output.

use std::path::{Path, PathBuf};

pub mod config;
pub mod experiments;
pub mod output;
pub mod runner;

use config::{ConfigError, RunConfig};
use experiments::{run_experiment, Experiment, Report};

/// Environment variable that overrides the output root.
pub const OUTPUT_ROOT_VAR: &str = "CAUCHY_OUTPUT_ROOT";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("unknown experiment `{0}` (expected exp1, exp2 or exp3)")]
    UnknownExperiment(String),
    #[error("solver failure: {0}")]
    Solver(#[from] cauchy_ls_core::Error),
    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 2 for bad input, 3 for failures while solving or writing results.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::UnknownExperiment(_) => 2,
            CliError::Solver(_) | CliError::Io { .. } => 3,
        }
    }
}

pub fn output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ROOT_VAR)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Runs one configured reconstruction; returns the run directory.
pub fn cmd_solve(config_path: &Path, root: &Path) -> Result<PathBuf, CliError> {
    let cfg = RunConfig::load(config_path)?;
    let outcome = runner::run(&cfg)?;
    let dir = root.join(&cfg.output_dir);
    output::write_run(&dir, &cfg, &outcome)?;
    Ok(dir)
}

pub fn cmd_experiment(name: &str, root: &Path) -> Result<Report, CliError> {
    let exp = Experiment::from_name(name).ok_or_else(|| CliError::UnknownExperiment(name.to_string()))?;
    run_experiment(exp, root)
}

/// Writes `sigma.csv` and `sigma_summary.txt`; returns the fitted slope.
pub fn cmd_svd(config_path: &Path, root: &Path) -> Result<f64, CliError> {
    let cfg = RunConfig::load(config_path)?;
    let spectrum = runner::spectrum(&cfg)?;
    output::write_spectrum(&root.join(&cfg.output_dir), &cfg, &spectrum)?;
    Ok(spectrum.slope)
}
