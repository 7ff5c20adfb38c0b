//! Finite-dimensional subrepresentations and the spin of a given dimension.
//!
//! The lowering coefficient `c_n` vanishes exactly when
//! `f(n) = q^{2j−n}[n+1]_q − p^{−2j+n}[n+1]_p` does, and the first such
//! non-negative integer `𝒩` cuts out an invariant subspace of dimension
//! `𝒩 + 1`. Conversely, asking for `f(D−1) = 0` at fixed `D` and solving for
//! `2j` gives `(pq)^{2j−D+1} = [D]_p / [D]_q`, a multivalued equation whose
//! solutions are enumerated branch by branch.
//!
//! Roots are judged by a scaled residual
//! `|f(n)| / (|q^{2j−n}[n+1]_q| + |p^{−2j+n}[n+1]_p| + 1)`, evaluated in a
//! log-shifted form so that scans to large `n` never overflow.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ladder::Spin;
use crate::qnum::{c, ensure_finite, principal_ln, DeformationParams};

/// Default scan depth for infinite-dimensionality evidence.
pub const DEFAULT_SCAN_LIMIT: u64 = 1000;
/// Default half-width of the logarithm branch window.
pub const DEFAULT_BRANCH_RANGE: u32 = 5;
/// Residual a computed spin must reach to be reported, and the root threshold
/// used by [`roundtrip_check`].
pub const SPIN_RESIDUAL_TOL: f64 = 1e-9;

/// `f(x) = q^{2j−x}[x+1]_q − p^{−2j+x}[x+1]_p`, evaluated directly.
pub fn f_eval(x: Complex64, spin: Spin, params: &DeformationParams) -> Result<Complex64> {
    let shift = spin.two_j() - x;
    let width = x + 1.0;
    let up = params.q_pow(shift)? * params.q_sym_bracket(width)?;
    let down = params.p_pow(-shift)? * params.p_sym_bracket(width)?;
    ensure_finite(up - down, "f")
}

/// The two halves of `f(x)` and the constant `1`, all multiplied by a common
/// factor `e^{−M}` chosen so the largest exponential has modulus at most one.
struct ShiftedF {
    up: Complex64,
    down: Complex64,
    unit: f64,
}

impl ShiftedF {
    fn new(x: Complex64, spin: Spin, params: &DeformationParams) -> Result<Self> {
        let two_j = spin.two_j();
        let log_q = params.log_q();
        let log_p = params.log_p();
        let q = params.q();
        let p = params.p();
        let ln_dq = principal_ln(q - q.inv())?;
        let ln_dp = principal_ln(p - p.inv())?;
        // q^{2j−x}[x+1]_q = (q^{2j+1} − q^{2j−2x−1}) / (q − q⁻¹), same for p.
        let logs = [
            (two_j + 1.0) * log_q - ln_dq,
            (two_j - x * 2.0 - 1.0) * log_q - ln_dq,
            (x * 2.0 + 1.0 - two_j) * log_p - ln_dp,
            (-two_j - 1.0) * log_p - ln_dp,
        ];
        let shift = logs.iter().map(|l| l.re).fold(0.0, f64::max);
        if !shift.is_finite() {
            return Err(Error::NonFinite("f"));
        }
        let e = |l: Complex64| (l - shift).exp();
        Ok(Self {
            up: e(logs[0]) - e(logs[1]),
            down: e(logs[2]) - e(logs[3]),
            unit: (-shift).exp(),
        })
    }

    fn residual(&self) -> f64 {
        (self.up - self.down).norm() / (self.up.norm() + self.down.norm() + self.unit)
    }
}

/// Scaled residual of `f(x)`; overflow-safe for any `x`.
pub fn scaled_residual(x: Complex64, spin: Spin, params: &DeformationParams) -> Result<f64> {
    let r = ShiftedF::new(x, spin, params)?.residual();
    if r.is_finite() {
        Ok(r)
    } else {
        Err(Error::NonFinite("f residual"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootEntry {
    pub n: u64,
    pub scaled_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiniteDimVerdict {
    Finite { dimension: u64 },
    /// Evidence, not proof, that the ladder never terminates.
    NoRootUpTo { n_max: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDimReport {
    pub spin: Spin,
    pub params: DeformationParams,
    pub scan_limit: u64,
    pub tol: f64,
    /// Ascending in `n`.
    pub roots: Vec<RootEntry>,
    pub smallest_root: Option<u64>,
    pub dimension: Option<u64>,
    pub verdict: FiniteDimVerdict,
    /// Smallest scaled residual seen, and where.
    pub min_residual: f64,
    pub min_residual_at: u64,
}

impl FiniteDimReport {
    /// True when no lowering coefficient vanished in the scanned range.
    pub fn unbounded_below(&self) -> bool {
        matches!(self.verdict, FiniteDimVerdict::NoRootUpTo { .. })
    }

    pub fn has_root(&self, n: u64) -> bool {
        self.roots.iter().any(|r| r.n == n)
    }
}

/// Scan `n = 0..=n_max` for integer roots of `f`.
pub fn scan_integer_roots(spin: Spin, params: &DeformationParams, n_max: u64, tol: f64) -> Result<FiniteDimReport> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    let mut roots = Vec::new();
    let mut min_residual = f64::INFINITY;
    let mut min_residual_at = 0;
    for n in 0..=n_max {
        let r = scaled_residual(c(n as f64, 0.0), spin, params)?;
        if r < min_residual {
            min_residual = r;
            min_residual_at = n;
        }
        if r < tol {
            roots.push(RootEntry { n, scaled_residual: r });
        }
    }
    let smallest_root = roots.first().map(|r| r.n);
    let dimension = smallest_root.map(|n| n + 1);
    let verdict = match dimension {
        Some(dimension) => FiniteDimVerdict::Finite { dimension },
        None => FiniteDimVerdict::NoRootUpTo { n_max },
    };
    Ok(FiniteDimReport {
        spin,
        params: *params,
        scan_limit: n_max,
        tol,
        roots,
        smallest_root,
        dimension,
        verdict,
        min_residual,
        min_residual_at,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchSolution {
    pub k: i64,
    pub two_j: Complex64,
    /// Scaled residual of `f(D−1)` at this spin.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinSolutionSet {
    pub dimension: u64,
    pub params: DeformationParams,
    /// Ascending in `k`.
    pub branch_solutions: Vec<BranchSolution>,
    /// Branches dropped because their residual missed [`SPIN_RESIDUAL_TOL`].
    pub rejected: Vec<BranchSolution>,
}

impl SpinSolutionSet {
    pub fn branch(&self, k: i64) -> Option<&BranchSolution> {
        self.branch_solutions.iter().find(|s| s.k == k)
    }
}

fn log_of_bracket(d: f64, log_base: Complex64, base: Complex64, name: &str) -> Result<Complex64> {
    let up = (log_base * d).exp();
    let down = (-log_base * d).exp();
    let num = up - down;
    if num.norm() <= 4.0 * f64::EPSILON * (up.norm() + down.norm()) {
        return Err(Error::LogUndefined(format!("[{d}]_{name} vanishes")));
    }
    let bracket = ensure_finite(num / (base - base.inv()), "bracket")?;
    principal_ln(bracket).map_err(|_| Error::LogUndefined(format!("[{d}]_{name} vanishes")))
}

/// Every `2j` on branches `k = −K..=K` that makes `D` the dimension of a
/// terminating ladder:
/// `2j = (Log[D]_p − Log[D]_q + 2πik) / (Log p + Log q) + D − 1`.
///
/// The denominator is the sum of the principal logarithms rather than
/// `Log(pq)`, because those are the logarithms every power `q^x`, `p^x` in
/// `f` is built from; the two differ by `2πi` when `arg p + arg q` leaves
/// `(−π, π]`.
pub fn spin_for_dimension(dimension: u64, params: &DeformationParams, branch_range: u32) -> Result<SpinSolutionSet> {
    if dimension == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    let d = dimension as f64;
    let log_ratio =
        log_of_bracket(d, params.log_p(), params.p(), "p")? - log_of_bracket(d, params.log_q(), params.q(), "q")?;
    let log_pq = params.log_p() + params.log_q();
    if log_pq.norm() <= f64::EPSILON {
        return Err(Error::LogUndefined("log(pq) vanishes".into()));
    }
    let top = c(d - 1.0, 0.0);
    let k_max = i64::from(branch_range);
    let mut branch_solutions = Vec::new();
    let mut rejected = Vec::new();
    for k in -k_max..=k_max {
        let two_j = (log_ratio + c(0.0, 2.0 * PI * k as f64)) / log_pq + top;
        let spin = Spin::new(two_j)?;
        let sol = BranchSolution {
            k,
            two_j,
            residual: scaled_residual(top, spin, params)?,
        };
        if sol.residual < SPIN_RESIDUAL_TOL {
            branch_solutions.push(sol);
        } else {
            rejected.push(sol);
        }
    }
    Ok(SpinSolutionSet {
        dimension,
        params: *params,
        branch_solutions,
        rejected,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundTripEntry {
    pub k: i64,
    pub two_j: Complex64,
    /// `D − 1` is among the scan's roots.
    pub is_root: bool,
    /// `D − 1` is the smallest root, so the terminating subspace has dimension `D`.
    pub is_smallest: bool,
    pub smallest_root: Option<u64>,
    pub scan: FiniteDimReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundTripReport {
    pub dimension: u64,
    pub entries: Vec<RoundTripEntry>,
}

impl RoundTripReport {
    pub fn all_roots(&self) -> bool {
        self.entries.iter().all(|e| e.is_root)
    }
}

/// Feed every branch spin back into the integer-root scan.
pub fn roundtrip_check(
    dimension: u64,
    params: &DeformationParams,
    branch_range: u32,
    n_max: u64,
) -> Result<RoundTripReport> {
    if n_max + 1 < dimension {
        return Err(Error::Domain(format!("scan limit {n_max} is below D − 1 = {}", dimension.saturating_sub(1))));
    }
    let set = spin_for_dimension(dimension, params, branch_range)?;
    let target = dimension - 1;
    let entries = set
        .branch_solutions
        .iter()
        .map(|sol| {
            let scan = scan_integer_roots(Spin::new(sol.two_j)?, params, n_max, SPIN_RESIDUAL_TOL)?;
            Ok(RoundTripEntry {
                k: sol.k,
                two_j: sol.two_j,
                is_root: scan.has_root(target),
                is_smallest: scan.smallest_root == Some(target),
                smallest_root: scan.smallest_root,
                scan,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RoundTripReport { dimension, entries })
}
