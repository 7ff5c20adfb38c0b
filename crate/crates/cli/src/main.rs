use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use upq_cli::sweep::{Rect, SweepGrid};
use upq_cli::{load_config, run, Command, Format, JobError, JobSpec};

#[derive(Parser)]
#[command(name = "upq", version, about = "Representations of the two-parameter quantum group U_{p,q}[sl(2)]")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Build the truncated matrices H, E+, E−.
    RepBuild(JobArgs),
    /// Check the defining relations on a truncated representation.
    RepCheck(JobArgs),
    /// Build and check the Casimir operator.
    Casimir(JobArgs),
    /// Scan for integer roots of the finite-dimensionality equation.
    FindimScan(JobArgs),
    /// Complex spins whose representation has dimension --dim.
    SpinForDim(JobArgs),
    /// Compare with the one-parameter and undeformed limits.
    Limits(JobArgs),
    /// Run a per-point command over a parameter grid.
    Sweep(SweepArgs),
    /// Unitarizability ratios and verdict.
    Unitarity(JobArgs),
}

#[derive(clap::Args)]
struct JobArgs {
    #[arg(long, allow_hyphen_values = true)]
    p_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    p_im: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    q_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    q_im: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    two_j_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    two_j_im: Option<f64>,
    /// Truncation N (number of ladder states).
    #[arg(long)]
    trunc: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Largest n scanned for integer roots.
    #[arg(long)]
    nmax: Option<u64>,
    /// Logarithm branches k = −K..=K.
    #[arg(long)]
    branches: Option<u32>,
    /// Target dimension D for spin-for-dim.
    #[arg(long)]
    dim: Option<u64>,
    /// Offset of p = q = 1 + ε for the undeformed limit.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON job file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SweepArgs {
    #[command(flatten)]
    job: JobArgs,
    /// Command run at each grid point.
    #[arg(long, value_enum)]
    per_point: Option<Command>,
    /// RE_LO:RE_HI:N[,IM_LO:IM_HI:N]
    #[arg(long, allow_hyphen_values = true)]
    p_grid: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q_grid: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    two_j_grid: Option<String>,
}

fn merge_pair(base: Option<[f64; 2]>, re: Option<f64>, im: Option<f64>) -> Option<[f64; 2]> {
    if re.is_none() && im.is_none() {
        return base;
    }
    let [b_re, b_im] = base.unwrap_or([0.0, 0.0]);
    Some([re.unwrap_or(b_re), im.unwrap_or(b_im)])
}

impl JobArgs {
    fn spec(&self, command: Command) -> Result<JobSpec, JobError> {
        let file = match &self.config {
            Some(path) => load_config(path)?,
            None => JobSpec::default(),
        };
        let flags = JobSpec {
            command: Some(command),
            p: merge_pair(file.p, self.p_re, self.p_im),
            q: merge_pair(file.q, self.q_re, self.q_im),
            two_j: merge_pair(file.two_j, self.two_j_re, self.two_j_im),
            trunc: self.trunc,
            tol: self.tol,
            nmax: self.nmax,
            branches: self.branches,
            dim: self.dim,
            epsilon: self.epsilon,
            format: self.format,
            output: self.out.clone(),
            sweep: None,
        };
        Ok(file.overlay(&flags))
    }
}

impl SweepArgs {
    fn spec(&self) -> Result<JobSpec, JobError> {
        let mut spec = self.job.spec(Command::Sweep)?;
        let any_flag = self.per_point.is_some() || self.p_grid.is_some() || self.q_grid.is_some() || self.two_j_grid.is_some();
        if any_flag {
            let parse = |s: &Option<String>| s.as_deref().map(Rect::parse).transpose();
            let file = spec.sweep.take();
            let per_point = self
                .per_point
                .or(file.as_ref().map(|g| g.per_point))
                .ok_or_else(|| JobError::Validation("sweep needs --per-point".into()))?;
            spec.sweep = Some(SweepGrid {
                per_point,
                p: parse(&self.p_grid)?.or(file.as_ref().and_then(|g| g.p.clone())),
                q: parse(&self.q_grid)?.or(file.as_ref().and_then(|g| g.q.clone())),
                two_j: parse(&self.two_j_grid)?.or(file.and_then(|g| g.two_j)),
            });
        }
        Ok(spec)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let spec = match &cli.command {
        Sub::RepBuild(a) => a.spec(Command::RepBuild),
        Sub::RepCheck(a) => a.spec(Command::RepCheck),
        Sub::Casimir(a) => a.spec(Command::Casimir),
        Sub::FindimScan(a) => a.spec(Command::FindimScan),
        Sub::SpinForDim(a) => a.spec(Command::SpinForDim),
        Sub::Limits(a) => a.spec(Command::Limits),
        Sub::Sweep(a) => a.spec(),
        Sub::Unitarity(a) => a.spec(Command::Unitarity),
    };
    let result = spec.and_then(|spec| {
        let text = run(&spec)?;
        match &spec.output {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("upq: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
