use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use upq_core::findim::{DEFAULT_BRANCH_RANGE, DEFAULT_SCAN_LIMIT};
use upq_core::qnum::DEFAULT_PARAM_TOL;
use upq_core::{Complex64, DeformationParams, Spin};

use crate::error::JobError;
use crate::sweep::SweepGrid;

pub const SCHEMA_VERSION: u32 = 1;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_TRUNC: usize = 32;
pub const DEFAULT_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    RepBuild,
    RepCheck,
    Casimir,
    FindimScan,
    SpinForDim,
    Limits,
    Sweep,
    Unitarity,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::RepBuild => "rep-build",
            Command::RepCheck => "rep-check",
            Command::Casimir => "casimir",
            Command::FindimScan => "findim-scan",
            Command::SpinForDim => "spin-for-dim",
            Command::Limits => "limits",
            Command::Sweep => "sweep",
            Command::Unitarity => "unitarity",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// A job as read from a config file or assembled from flags. Unset fields take
/// the centralized defaults when the job is resolved.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JobSpec {
    pub command: Option<Command>,
    pub p: Option<[f64; 2]>,
    pub q: Option<[f64; 2]>,
    pub two_j: Option<[f64; 2]>,
    pub trunc: Option<usize>,
    pub tol: Option<f64>,
    pub nmax: Option<u64>,
    pub branches: Option<u32>,
    pub dim: Option<u64>,
    pub epsilon: Option<f64>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    /// Sweep grids and the command run at each point.
    pub sweep: Option<SweepGrid>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($field:ident),*) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field.clone(); } )*
    };
}

impl JobSpec {
    /// Fields set in `top` win.
    pub fn overlay(mut self, top: &JobSpec) -> JobSpec {
        overlay!(self, top, command, p, q, two_j, trunc, tol, nmax, branches, dim, epsilon, format, output, sweep);
        self
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn resolve(&self) -> Result<ResolvedJob, JobError> {
        let command = self.command.ok_or_else(|| JobError::Validation("no command given".into()))?;
        let tol = self.tol.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(JobError::Validation(format!("tol must be positive and finite, got {tol}")));
        }
        let epsilon = self.epsilon.unwrap_or(DEFAULT_EPSILON);
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(JobError::Validation(format!("epsilon must be positive and finite, got {epsilon}")));
        }
        let trunc = self.trunc.unwrap_or(DEFAULT_TRUNC);
        if trunc == 0 {
            return Err(JobError::Validation("trunc must be at least 1".into()));
        }
        for (name, v) in [("p", self.p), ("q", self.q), ("two_j", self.two_j)] {
            if let Some([re, im]) = v {
                if !(re.is_finite() && im.is_finite()) {
                    return Err(JobError::Validation(format!("{name} must be finite")));
                }
            }
        }
        if let Some(0) = self.dim {
            return Err(JobError::Validation("dim must be at least 1".into()));
        }
        Ok(ResolvedJob {
            command,
            p: self.p,
            q: self.q,
            two_j: self.two_j,
            trunc,
            tol,
            nmax: self.nmax.unwrap_or(DEFAULT_SCAN_LIMIT),
            branches: self.branches.unwrap_or(DEFAULT_BRANCH_RANGE),
            dim: self.dim,
            epsilon,
        })
    }
}

/// A job with defaults applied and scalar fields checked.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedJob {
    pub command: Command,
    pub p: Option<[f64; 2]>,
    pub q: Option<[f64; 2]>,
    pub two_j: Option<[f64; 2]>,
    pub trunc: usize,
    pub tol: f64,
    pub nmax: u64,
    pub branches: u32,
    pub dim: Option<u64>,
    pub epsilon: f64,
}

fn to_complex([re, im]: [f64; 2]) -> Complex64 {
    Complex64::new(re, im)
}

impl ResolvedJob {
    fn required(v: Option<[f64; 2]>, name: &str) -> Result<Complex64, JobError> {
        v.map(to_complex)
            .ok_or_else(|| JobError::Validation(format!("missing {name} (set --{name}-re/--{name}-im or the config field)")))
    }

    pub fn params(&self) -> Result<DeformationParams, JobError> {
        let p = Self::required(self.p, "p")?;
        let q = Self::required(self.q, "q")?;
        Ok(DeformationParams::new(p, q, DEFAULT_PARAM_TOL)?)
    }

    pub fn q_only(&self) -> Result<Complex64, JobError> {
        Self::required(self.q, "q")
    }

    pub fn spin(&self) -> Result<Spin, JobError> {
        let two_j = self
            .two_j
            .map(to_complex)
            .ok_or_else(|| JobError::Validation("missing two_j (set --two-j-re/--two-j-im)".into()))?;
        Ok(Spin::new(two_j)?)
    }

    pub fn dim(&self) -> Result<u64, JobError> {
        self.dim.ok_or_else(|| JobError::Validation("missing dim (set --dim)".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parses_kebab_commands() {
        let spec: JobSpec = serde_json::from_str(r#"{"command": "spin-for-dim", "p": [2, 0], "q": [3, 0], "dim": 2}"#).unwrap();
        assert_eq!(spec.command, Some(Command::SpinForDim));
        let job = spec.resolve().unwrap();
        assert_eq!(job.trunc, DEFAULT_TRUNC);
        assert_eq!(job.tol, DEFAULT_TOL);
        assert_eq!(job.nmax, 1000);
        assert_eq!(job.branches, 5);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(serde_json::from_str::<JobSpec>(r#"{"comand": "rep-build"}"#).is_err());
    }

    #[test]
    fn overlay_prefers_top() {
        let file = JobSpec {
            p: Some([2.0, 0.0]),
            trunc: Some(4),
            ..Default::default()
        };
        let flags = JobSpec {
            trunc: Some(8),
            ..Default::default()
        };
        let merged = file.overlay(&flags);
        assert_eq!(merged.p, Some([2.0, 0.0]));
        assert_eq!(merged.trunc, Some(8));
    }

    #[test]
    fn bad_scalars_are_validation_errors() {
        let base = JobSpec {
            command: Some(Command::RepBuild),
            ..Default::default()
        };
        for bad in [
            JobSpec { tol: Some(0.0), ..base.clone() },
            JobSpec { trunc: Some(0), ..base.clone() },
            JobSpec { p: Some([f64::NAN, 0.0]), ..base.clone() },
            JobSpec { command: None, ..base.clone() },
        ] {
            assert!(matches!(bad.resolve(), Err(JobError::Validation(_))));
        }
    }
}
