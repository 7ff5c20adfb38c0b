//! Parameter sweeps: one single-job report per grid point.
//!
//! Points are ordered row-major: `p` outermost, then `q`, then `2j`; within a
//! rectangle the real index is outer and the imaginary index inner.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::JobError;
use crate::job::{Command, JobSpec};
use crate::report::{execute, inputs_of, Report};

/// Complex rectangle `[re_lo, re_hi] × [im_lo, im_hi]` sampled on a
/// `steps[0] × steps[1]` lattice. A single step samples the lower corner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rect {
    pub re: [f64; 2],
    #[serde(default)]
    pub im: [f64; 2],
    pub steps: [usize; 2],
}

fn linspace([lo, hi]: [f64; 2], n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

impl Rect {
    /// Parse `RE_LO:RE_HI:N_RE[,IM_LO:IM_HI:N_IM]`.
    pub fn parse(s: &str) -> Result<Self, JobError> {
        let bad = || JobError::Validation(format!("bad grid '{s}', expected RE_LO:RE_HI:N[,IM_LO:IM_HI:N]"));
        let axis = |part: &str| -> Result<([f64; 2], usize), JobError> {
            let f: Vec<&str> = part.split(':').collect();
            if f.len() != 3 {
                return Err(bad());
            }
            let lo = f[0].trim().parse().map_err(|_| bad())?;
            let hi = f[1].trim().parse().map_err(|_| bad())?;
            let n = f[2].trim().parse().map_err(|_| bad())?;
            Ok(([lo, hi], n))
        };
        let mut parts = s.split(',');
        let (re, n_re) = axis(parts.next().ok_or_else(bad)?)?;
        let (im, n_im) = match parts.next() {
            Some(part) => axis(part)?,
            None => ([0.0, 0.0], 1),
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(Self {
            re,
            im,
            steps: [n_re, n_im],
        })
    }

    fn validate(&self, name: &str) -> Result<(), JobError> {
        let bad = |why: &str| Err(JobError::Validation(format!("{name} grid: {why}")));
        if self.steps.contains(&0) {
            return bad("step counts must be at least 1");
        }
        for [lo, hi] in [self.re, self.im] {
            if !(lo.is_finite() && hi.is_finite()) {
                return bad("bounds must be finite");
            }
            if lo > hi {
                return bad("lower bound exceeds upper bound");
            }
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<[f64; 2]> {
        let im = linspace(self.im, self.steps[1]);
        linspace(self.re, self.steps[0])
            .into_iter()
            .flat_map(|re| im.iter().map(move |&im| [re, im]))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    pub per_point: Command,
    #[serde(default)]
    pub p: Option<Rect>,
    #[serde(default)]
    pub q: Option<Rect>,
    #[serde(default)]
    pub two_j: Option<Rect>,
}

type Point = (Option<[f64; 2]>, Option<[f64; 2]>, Option<[f64; 2]>);

impl SweepGrid {
    fn validate(&self) -> Result<(), JobError> {
        if self.per_point == Command::Sweep {
            return Err(JobError::Validation("per_point cannot be sweep".into()));
        }
        if self.p.is_none() && self.q.is_none() && self.two_j.is_none() {
            return Err(JobError::Validation("sweep needs at least one of p, q, two_j grids".into()));
        }
        for (name, rect) in [("p", &self.p), ("q", &self.q), ("two_j", &self.two_j)] {
            if let Some(rect) = rect {
                rect.validate(name)?;
            }
        }
        Ok(())
    }

    fn axis(rect: &Option<Rect>) -> Vec<Option<[f64; 2]>> {
        match rect {
            Some(r) => r.points().into_iter().map(Some).collect(),
            None => vec![None],
        }
    }

    fn points(&self) -> Vec<Point> {
        let ps = Self::axis(&self.p);
        let qs = Self::axis(&self.q);
        let js = Self::axis(&self.two_j);
        let mut out = Vec::with_capacity(ps.len() * qs.len() * js.len());
        for p in &ps {
            for q in &qs {
                for j in &js {
                    out.push((*p, *q, *j));
                }
            }
        }
        out
    }
}

/// The single job run at one grid point; grid values replace the fixed ones.
pub fn point_job(base: &JobSpec, grid: &SweepGrid, (p, q, two_j): Point) -> JobSpec {
    JobSpec {
        command: Some(grid.per_point),
        p: p.or(base.p),
        q: q.or(base.q),
        two_j: two_j.or(base.two_j),
        sweep: None,
        output: None,
        format: None,
        ..base.clone()
    }
}

fn row(index: usize, job: &JobSpec) -> Result<Value, JobError> {
    let resolved = job.resolve()?;
    match execute(&resolved) {
        Ok(report) => Ok(json!({
            "point": index,
            "status": "ok",
            "inputs": report.inputs,
            "results": report.results,
            "flags": report.flags,
        })),
        Err(JobError::Validation(msg)) => Err(JobError::Validation(msg)),
        Err(err) => {
            let status = if err.exit_code() == 3 { "singular" } else { "error" };
            Ok(json!({
                "point": index,
                "status": status,
                "diagnostic": err.to_string(),
                "inputs": inputs_of(&resolved),
                "results": Value::Null,
                "flags": [status],
            }))
        }
    }
}

pub fn run_sweep(base: &JobSpec) -> Result<Report, JobError> {
    let grid = base
        .sweep
        .as_ref()
        .ok_or_else(|| JobError::Validation("sweep needs a 'sweep' section or --*-grid flags".into()))?;
    grid.validate()?;
    // Fixed fields are checked once, up front.
    let probe = JobSpec {
        command: Some(grid.per_point),
        ..base.clone()
    };
    probe.resolve()?;

    let points = grid.points();
    let rows = points
        .par_iter()
        .enumerate()
        .map(|(i, pt)| row(i, &point_job(base, grid, *pt)))
        .collect::<Result<Vec<_>, _>>()?;

    let mut inputs = Map::new();
    inputs.insert("grid".into(), serde_json::to_value(grid)?);
    inputs.insert(
        "fixed".into(),
        Value::Object(crate::report::inputs_of(&probe.resolve()?)),
    );
    let mut results = Map::new();
    results.insert("per_point".into(), json!(grid.per_point.name()));
    results.insert("points".into(), json!(points.len()));
    results.insert("rows".into(), Value::Array(rows));
    Ok(Report {
        command: Command::Sweep,
        inputs,
        results,
        flags: Vec::new(),
        table: Some("rows"),
    })
}
