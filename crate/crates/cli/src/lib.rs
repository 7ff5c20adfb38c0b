//! Command-line layer over `upq-core`: single jobs, sweeps, and their JSON/CSV
//! reports.

pub mod error;
pub mod job;
pub mod output;
pub mod report;
pub mod sweep;

use std::path::Path;

pub use error::JobError;
pub use job::{Command, Format, JobSpec};
pub use report::Report;

pub fn load_config(path: &Path) -> Result<JobSpec, JobError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Run a merged job (single or sweep) and render it in the requested format.
pub fn run(spec: &JobSpec) -> Result<String, JobError> {
    let report = match spec.command {
        Some(Command::Sweep) => sweep::run_sweep(spec)?,
        _ => report::execute(&spec.resolve()?)?,
    };
    match spec.format() {
        Format::Json => output::render_json(&report),
        Format::Csv => output::render_csv(&report),
    }
}
