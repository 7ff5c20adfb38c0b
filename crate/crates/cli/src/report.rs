//! Execution of single jobs and the versioned report they produce.

use serde_json::{json, Map, Value};
use upq_core::findim::{roundtrip_check, scan_integer_roots, spin_for_dimension, FiniteDimVerdict};
use upq_core::ladder::{classical_ladder, deformed_ladder, unitarizability_ratios, unitarizability_verdict};
use upq_core::ladder::{is_real_positive, UnitarityVerdict};
use upq_core::repmat::{build_rep, casimir_highest_weight, casimir_matrix, check_casimir, check_relations};
use upq_core::repmat::{limit_compare, matrix_rows};
use upq_core::{Complex64, DeformationParams, LadderSpectrum};

use crate::error::JobError;
use crate::job::{Command, ResolvedJob, SCHEMA_VERSION};

/// `[re, im]`.
pub fn cx(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn pair(v: Option<[f64; 2]>) -> Value {
    v.map_or(Value::Null, |[re, im]| json!([re, im]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: Command,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub flags: Vec<String>,
    /// Key in `results` holding the array rendered as CSV records.
    pub table: Option<&'static str>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command.name(),
            "inputs": self.inputs,
            "results": self.results,
            "flags": self.flags,
        })
    }
}

pub fn inputs_of(job: &ResolvedJob) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("p".into(), pair(job.p));
    m.insert("q".into(), pair(job.q));
    m.insert("two_j".into(), pair(job.two_j));
    m.insert("trunc".into(), json!(job.trunc));
    m.insert("tol".into(), json!(job.tol));
    m.insert("nmax".into(), json!(job.nmax));
    m.insert("branches".into(), json!(job.branches));
    m.insert("dim".into(), json!(job.dim));
    m.insert("epsilon".into(), json!(job.epsilon));
    m
}

fn param_flags(params: &DeformationParams, flags: &mut Vec<String>) {
    if params.equal_squares() {
        flags.push("p2=q2".into());
    }
}

/// Deformed spectrum when `p` and `q` are given, undeformed when both are absent.
fn spectrum(job: &ResolvedJob) -> Result<(LadderSpectrum, Option<DeformationParams>), JobError> {
    let spin = job.spin()?;
    if job.p.is_none() && job.q.is_none() {
        return Ok((classical_ladder(spin, job.trunc)?, None));
    }
    let params = job.params()?;
    Ok((deformed_ladder(spin, &params, job.trunc)?, Some(params)))
}

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("report bodies are objects"),
    }
}

/// Run one non-sweep job.
pub fn execute(job: &ResolvedJob) -> Result<Report, JobError> {
    let mut flags = Vec::new();
    let mut table = None;
    let results = match job.command {
        Command::RepBuild => {
            let (lad, params) = spectrum(job)?;
            match &params {
                Some(params) => param_flags(params, &mut flags),
                None => flags.push("classical".into()),
            }
            let rep = build_rep(&lad);
            let ladder: Vec<Value> = (0..rep.dim())
                .map(|n| {
                    json!({
                        "n": n,
                        "weight": cx(rep.weight(n)),
                        "coeff": cx(lad.coeffs()[n]),
                        "coeff_squared": cx(lad.squares()[n]),
                    })
                })
                .collect();
            table = Some("ladder");
            json!({
                "dimension": rep.dim(),
                "ladder": ladder,
                "h": matrix_rows(&rep.h),
                "e_plus": matrix_rows(&rep.e_plus),
                "e_minus": matrix_rows(&rep.e_minus),
            })
        }
        Command::RepCheck => {
            let (lad, params) = spectrum(job)?;
            match &params {
                Some(params) => param_flags(params, &mut flags),
                None => flags.push("classical".into()),
            }
            let rep = build_rep(&lad);
            let r = check_relations(&rep, params.as_ref(), job.tol)?;
            if r.boundary_residual / r.residual_scale >= job.tol {
                flags.push("truncation-defect".into());
            }
            json!({
                "h_relation_residual": r.max_residual_h_epm,
                "interior_residual": r.max_residual_ep_em_interior,
                "interior_end": r.interior_range.end,
                "boundary_residual": r.boundary_residual,
                "boundary_defect": cx(r.boundary_defect),
                "last_coeff_squared_modulus": lad.coeffs()[rep.dim() - 1].norm_sqr(),
                "residual_scale": r.residual_scale,
                "h_relations_pass": r.h_relations_pass,
                "interior_pass": r.ep_em_interior_pass,
                "passed": r.passed(),
            })
        }
        Command::Casimir => {
            let params = job.params()?;
            param_flags(&params, &mut flags);
            let spin = job.spin()?;
            let rep = build_rep(&deformed_ladder(spin, &params, job.trunc)?);
            let r = check_casimir(&rep, &params, job.tol)?;
            let m = casimir_matrix(&rep, &params)?;
            json!({
                "eigenvalue": cx(r.eigenvalue),
                "highest_weight_value": cx(casimir_highest_weight(spin, &params)?),
                "max_offdiag": r.max_offdiag,
                "max_diag_deviation": r.max_diag_deviation,
                "max_commutator_residual": r.max_commutator_residual,
                "passed": r.passed,
                "matrix": matrix_rows(&m),
            })
        }
        Command::FindimScan => {
            let params = job.params()?;
            param_flags(&params, &mut flags);
            let r = scan_integer_roots(job.spin()?, &params, job.nmax, job.tol)?;
            if r.unbounded_below() {
                flags.push("unbounded-below-evidence".into());
            }
            let verdict = match r.verdict {
                FiniteDimVerdict::Finite { .. } => "FINITE",
                FiniteDimVerdict::NoRootUpTo { .. } => "NO_ROOT_UP_TO",
            };
            let roots: Vec<Value> = r
                .roots
                .iter()
                .map(|e| json!({"n": e.n, "scaled_residual": e.scaled_residual}))
                .collect();
            table = Some("roots");
            json!({
                "verdict": verdict,
                "dimension": r.dimension,
                "smallest_root": r.smallest_root,
                "scan_limit": r.scan_limit,
                "min_residual": r.min_residual,
                "min_residual_at": r.min_residual_at,
                "unbounded_below": r.unbounded_below(),
                "roots": roots,
            })
        }
        Command::SpinForDim => {
            let params = job.params()?;
            param_flags(&params, &mut flags);
            let dim = job.dim()?;
            let set = spin_for_dimension(dim, &params, job.branches)?;
            if !set.rejected.is_empty() {
                flags.push("rejected-branches".into());
            }
            let nmax = job.nmax.max(dim - 1);
            let trip = roundtrip_check(dim, &params, job.branches, nmax)?;
            let solutions: Vec<Value> = set
                .branch_solutions
                .iter()
                .zip(&trip.entries)
                .map(|(s, t)| {
                    json!({
                        "k": s.k,
                        "two_j": cx(s.two_j),
                        "residual": s.residual,
                        "is_root": t.is_root,
                        "is_smallest": t.is_smallest,
                        "smallest_root": t.smallest_root,
                    })
                })
                .collect();
            table = Some("solutions");
            json!({
                "dimension": dim,
                "branch_range": job.branches,
                "rejected": set.rejected.len(),
                "solutions": solutions,
            })
        }
        Command::Limits => {
            let spin = job.spin()?;
            let cmp = limit_compare(spin, job.q_only()?, job.trunc, job.epsilon)?;
            json!({
                "one_parameter_deviation": cmp.one_parameter_deviation,
                "classical_deviation": cmp.classical_deviation,
            })
        }
        Command::Unitarity => {
            let params = job.params()?;
            param_flags(&params, &mut flags);
            let ratios = unitarizability_ratios(job.spin()?, &params, job.trunc)?;
            let r = unitarizability_verdict(&ratios, job.tol)?;
            let (verdict, up_to) = match r.verdict {
                UnitarityVerdict::UnitarizableUpTo(n) => ("UNITARIZABLE_UP_TO", Some(n)),
                UnitarityVerdict::NotUnitarizable => ("NOT_UNITARIZABLE", None),
            };
            let rows: Vec<Value> = ratios
                .iter()
                .enumerate()
                .map(|(i, r)| json!({"n": i + 1, "ratio": cx(*r), "real_positive": is_real_positive(*r, job.tol)}))
                .collect();
            table = Some("ratios");
            json!({
                "verdict": verdict,
                "unitarizable_up_to": up_to,
                "first_failure": r.first_failure,
                "ratios": rows,
            })
        }
        Command::Sweep => return Err(JobError::Validation("sweep cannot run as a single job".into())),
    };
    Ok(Report {
        command: job.command,
        inputs: inputs_of(job),
        results: obj(results),
        flags,
        table,
    })
}
