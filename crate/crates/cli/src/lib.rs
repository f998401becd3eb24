//! Command-line driver for the `einstein-core` toolkit: tables, scaling
//! studies and verification reports as CSV or JSON.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{execute, resolve};
pub use config::{load_config, Command, Format, OutputSpec, Params, RunConfig};
pub use error::CliError;
pub use output::{write_atomic, Cell, Report};

/// Renders the report in the configured format.
pub fn render(report: &Report) -> Result<String, CliError> {
    match report.config.output.format {
        Format::Csv => Ok(report.to_csv()),
        Format::Json => report.to_json(),
    }
}

/// Runs a configuration and writes its output; returns the rendered text.
pub fn run(cfg: &RunConfig) -> Result<String, CliError> {
    let report = execute(cfg)?;
    let text = render(&report)?;
    match &cfg.output.path {
        Some(path) => write_atomic(path, &text)?,
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(text)
}
