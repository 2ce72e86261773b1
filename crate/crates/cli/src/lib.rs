//! Experiment driver for `emergent-core`: configuration, experiments and reports.
//!
//! Exit statuses: [`EXIT_PASS`] when every asserted check passes,
//! [`EXIT_CHECK_FAILED`] when one fails, [`EXIT_ERROR`] for configuration,
//! domain and I/O errors.

pub mod config;
pub mod experiments;
pub mod report;

use std::fmt;

pub use config::{list_experiments, Experiment, ExperimentConfig, Format, RawConfig};
pub use experiments::run_experiment;
pub use report::{emit_report, CheckEntry, Report};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Config(String),
    Core(emergent_core::Error),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Core(e) => write!(f, "domain error: {e}"),
            CliError::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<emergent_core::Error> for CliError {
    fn from(e: emergent_core::Error) -> Self {
        match e {
            emergent_core::Error::Config(msg) => CliError::Config(msg),
            other => CliError::Core(other),
        }
    }
}

/// Runs the experiment and writes its report; returns the report.
pub fn execute(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let report = run_experiment(cfg)?;
    emit_report(&report, cfg.format, &cfg.out)?;
    Ok(report)
}

pub fn exit_code(outcome: &Result<Report, CliError>) -> i32 {
    match outcome {
        Ok(r) if r.passed() => EXIT_PASS,
        Ok(_) => EXIT_CHECK_FAILED,
        Err(_) => EXIT_ERROR,
    }
}
