//! Command-line front end for the `approxmono` checks: resolves a function
//! and an error function, runs a named suite, and writes a JSON report and
//! optional plot data.

pub mod config;
pub mod plot;
pub mod report;
pub mod suites;

use std::fs;
use std::path::{Path, PathBuf};

use approxmono::csv::read_sampled_csv;
use approxmono::{ErrorSpec, Grid, Interp, RealFunction, SampledTable};
use thiserror::Error;

use crate::config::{FunctionSource, RunConfig};
use crate::plot::{emit_plot_data, PlotSeries};
use crate::report::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] approxmono::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("report serialization: {0}")]
    Json(#[from] serde_json::Error),
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    AllHold = 0,
    SomeFail = 1,
    InputError = 2,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn from_report(report: &Report) -> Self {
        if report.all_hold() {
            ExitStatus::AllHold
        } else {
            ExitStatus::SomeFail
        }
    }
}

pub struct Outcome {
    pub report: Report,
    pub plots: Vec<PlotSeries>,
}

impl Outcome {
    pub fn status(&self) -> ExitStatus {
        ExitStatus::from_report(&self.report)
    }
}

fn resolve_path(base: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_owned()
    } else {
        base.join(path)
    }
}

pub fn load_function(config: &RunConfig, spec: &str) -> Result<RealFunction, CliError> {
    match FunctionSource::parse(spec) {
        FunctionSource::Expression(src) => Ok(RealFunction::parse(config.interval, &src)?),
        FunctionSource::Table(path) => {
            let pairs = read_sampled_csv(&resolve_path(&config.base_dir, &path))?;
            let table = SampledTable::from_pairs(&pairs, Interp::Linear)?;
            Ok(RealFunction::sampled(config.interval, table)?)
        }
    }
}

/// Runs the configured suites without touching the filesystem beyond input
/// tables.
pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let function = config.function_spec.as_deref().map(|s| load_function(config, s)).transpose()?;
    let error = ErrorSpec::parse(&config.error_spec)?.resolve(config.interval.length(), &config.base_dir)?;
    let grid = Grid::with_default_margin(config.interval, config.grid_n)?;
    let inputs = suites::Inputs { config, function, error, grid };
    let out = suites::run(&inputs)?;
    let report = Report { config: config.echo(), checks: out.checks, certificates: out.certificates };
    Ok(Outcome { report, plots: out.plots })
}

/// Runs, then writes the report (to `config.output` or stdout) and plot
/// files.
pub fn execute(config: &RunConfig) -> Result<ExitStatus, CliError> {
    let outcome = run(config)?;
    let json = outcome.report.to_json()?;
    match &config.output {
        Some(path) => fs::write(path, &json).map_err(|source| CliError::Io { path: path.clone(), source })?,
        None => print!("{json}"),
    }
    if let Some(dir) = &config.plots {
        emit_plot_data(&outcome.plots, dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
    }
    Ok(outcome.status())
}
