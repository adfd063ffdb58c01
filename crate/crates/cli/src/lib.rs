//! Experiment runner for the `mpcvc` simulator: configuration, pipelines,
//! reports, and plot-ready CSV.

pub mod config;
pub mod error;
pub mod plot;
pub mod report;
pub mod run;

pub use config::{Command, ExperimentConfig, GenSpec, GraphSource, OutputFormat, PartialConfig, SeedRange};
pub use error::{CliError, Result};
pub use plot::{emit_plot_data, AxesSpec, Level};
pub use report::{ExperimentReport, RunReport};
pub use run::{run_experiment, run_with_threads};

/// The report as it is written: pretty JSON, or CSV shaped by the config's axes.
pub fn render(report: &ExperimentReport) -> Result<String> {
    match report.config.format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report)
                .map_err(|e| CliError::Config(format!("json: {e}")))?;
            s.push('\n');
            Ok(s)
        }
        OutputFormat::Csv => emit_plot_data(std::slice::from_ref(report), &report.config.axes),
    }
}

/// Writes the rendered report to the configured path, or returns the text
/// when no path is set.
pub fn write_report(report: &ExperimentReport) -> Result<Option<String>> {
    let text = render(report)?;
    match &report.config.out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|source| CliError::Io { path: path.clone(), source })?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}
