//! Truncated matrix realizations of `H`, `E+`, `E−` and checks of the
//! defining relations and of the Casimir operator.
//!
//! Row/column `n` is the state `|j, j−n⟩`, so weights descend down the
//! diagonal and `E−` sits on the first subdiagonal.
//!
//! Truncating an infinite ladder to `N` states clips the action of `E−` on the
//! last state, so `[E+, E−] = [2H]_{p,q}` fails on column `N−1` by exactly
//! `−c_{N−1}²`. That column is reported separately and never counts as a
//! failure. The Casimir operator is assembled with `E−E+` which, unlike
//! `E+E−`, is unaffected by the clipping.
//!
//! All residuals are scaled: `‖R‖_max / (1 + max(‖A‖_max, ‖B‖_max))` for an
//! identity `A = B` with residual `R`.

use std::ops::Range;

use ndarray::{s, Array2, ArrayView2};
use num_complex::Complex64;

use crate::error::{Error, Locus, Result};
use crate::ladder::{classical_ladder, deformed_ladder, LadderSpectrum, Spin};
use crate::qnum::{c, ensure_finite, pq_bracket, DeformationParams};

/// `H`, `E+`, `E−` over the first `N` states of a weight ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct RepRealization {
    pub spectrum: LadderSpectrum,
    pub h: Array2<Complex64>,
    pub e_plus: Array2<Complex64>,
    pub e_minus: Array2<Complex64>,
}

impl RepRealization {
    pub fn dim(&self) -> usize {
        self.spectrum.truncation()
    }

    /// Weight `j − n` of basis state `n`.
    pub fn weight(&self, n: usize) -> Complex64 {
        self.spectrum.spin().j() - n as f64
    }

    fn check_shapes(&self) -> Result<usize> {
        let n = self.dim();
        for (name, m) in [("H", &self.h), ("E+", &self.e_plus), ("E-", &self.e_minus)] {
            if m.dim() != (n, n) {
                return Err(Error::ShapeMismatch(format!(
                    "{name} is {}x{}, spectrum has {n} states",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(n)
    }
}

pub fn build_rep(spectrum: &LadderSpectrum) -> RepRealization {
    let n = spectrum.truncation();
    let j = spectrum.spin().j();
    let h = Array2::from_shape_fn((n, n), |(r, col)| if r == col { j - r as f64 } else { c(0.0, 0.0) });
    let mut e_plus = Array2::zeros((n, n));
    let mut e_minus = Array2::zeros((n, n));
    for (k, &coeff) in spectrum.coeffs().iter().enumerate().take(n.saturating_sub(1)) {
        e_minus[[k + 1, k]] = coeff;
        e_plus[[k, k + 1]] = coeff;
    }
    RepRealization {
        spectrum: spectrum.clone(),
        h,
        e_plus,
        e_minus,
    }
}

/// Largest entry modulus. Zero for an empty view.
pub fn max_norm(m: ArrayView2<'_, Complex64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn commutator(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    a.dot(b) - b.dot(a)
}

fn scaled(residual: f64, a: f64, b: f64) -> f64 {
    residual / (1.0 + a.max(b))
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

/// Right-hand side of `[E+, E−]` on state `n`: `[2(j−n)]_{p,q}`, or `2(j−n)`
/// when no deformation is given.
fn cartan_target(rep: &RepRealization, params: Option<&DeformationParams>, n: usize) -> Result<Complex64> {
    let two_weight = rep.weight(n) * 2.0;
    match params {
        Some(params) => pq_bracket(two_weight, params),
        None => Ok(two_weight),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationReport {
    /// Worst scaled residual of `[H, E±] = ±E±` over both signs, all states.
    pub max_residual_h_epm: f64,
    /// Scaled residual of `[E+, E−] = [2H]` over columns `0..N−1`.
    pub max_residual_ep_em_interior: f64,
    /// Unscaled max-norm of the `[E+, E−]` residual on the last column.
    pub boundary_residual: f64,
    /// Diagonal entry of that residual; `−c_{N−1}²` in exact arithmetic.
    pub boundary_defect: Complex64,
    /// Denominator used for the `[E+, E−]` scaling.
    pub residual_scale: f64,
    pub interior_range: Range<usize>,
    pub h_relations_pass: bool,
    pub ep_em_interior_pass: bool,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.h_relations_pass && self.ep_em_interior_pass
    }
}

/// Check the defining relations. `params = None` checks the undeformed
/// relation `[E+, E−] = 2H`.
pub fn check_relations(rep: &RepRealization, params: Option<&DeformationParams>, tol: f64) -> Result<RelationReport> {
    check_tol(tol)?;
    let n = rep.check_shapes()?;

    let mut max_residual_h_epm = 0.0f64;
    for (e, sign) in [(&rep.e_plus, 1.0), (&rep.e_minus, -1.0)] {
        let lhs = commutator(&rep.h, e);
        let rhs = e.mapv(|z| z * sign);
        let r = max_norm((&lhs - &rhs).view());
        max_residual_h_epm = max_residual_h_epm.max(scaled(r, max_norm(lhs.view()), max_norm(rhs.view())));
    }

    let lhs = commutator(&rep.e_plus, &rep.e_minus);
    let mut rhs = Array2::zeros((n, n));
    for k in 0..n {
        rhs[[k, k]] = cartan_target(rep, params, k)?;
    }
    let residual = &lhs - &rhs;
    let residual_scale = 1.0 + max_norm(lhs.view()).max(max_norm(rhs.view()));
    let interior_range = 0..n - 1;
    let interior = max_norm(residual.slice(s![.., interior_range.clone()])) / residual_scale;
    let boundary_residual = max_norm(residual.slice(s![.., n - 1..]));
    let boundary_defect = residual[[n - 1, n - 1]];

    Ok(RelationReport {
        max_residual_h_epm,
        max_residual_ep_em_interior: interior,
        boundary_residual,
        boundary_defect,
        residual_scale,
        interior_range,
        h_relations_pass: max_residual_h_epm < tol,
        ep_em_interior_pass: interior < tol,
    })
}

/// The three summands of the Casimir operator, kept apart so residuals can be
/// scaled by the size of the pieces rather than of their (much smaller) sum.
struct CasimirParts {
    cartan_q: Array2<Complex64>,
    cartan_p: Array2<Complex64>,
    ladder: Array2<Complex64>,
}

impl CasimirParts {
    fn new(rep: &RepRealization, params: &DeformationParams) -> Result<Self> {
        let n = rep.check_shapes()?;
        let one = c(1.0, 0.0);
        let q = params.q();
        let p = params.p();
        let q_den = one - (q * q).inv();
        let p_den = one - p * p;
        let guard = f64::EPSILON * (1.0 + q.norm() + p.norm());
        if q_den.norm() <= guard {
            return Err(Error::SingularDenominator(Locus::QSquaredOne));
        }
        if p_den.norm() <= guard {
            return Err(Error::SingularDenominator(Locus::PSquaredOne));
        }
        let mut cartan_q = Array2::zeros((n, n));
        let mut cartan_p = Array2::zeros((n, n));
        for k in 0..n {
            let two_h = rep.h[[k, k]] * 2.0;
            cartan_q[[k, k]] = params.q_pow(two_h)? / q_den;
            cartan_p[[k, k]] = -params.p_pow(-two_h)? / p_den;
        }
        let ladder = rep.e_minus.dot(&rep.e_plus) * params.pq_denominator();
        Ok(Self {
            cartan_q,
            cartan_p,
            ladder,
        })
    }

    fn sum(&self) -> Array2<Complex64> {
        &self.cartan_q + &self.cartan_p + &self.ladder
    }

    fn iter(&self) -> impl Iterator<Item = &Array2<Complex64>> {
        [&self.cartan_q, &self.cartan_p, &self.ladder].into_iter()
    }

    fn scale(&self) -> f64 {
        1.0 + self.iter().map(|m| max_norm(m.view())).fold(0.0, f64::max)
    }

    /// `1 + max ‖P·X‖, ‖X·P‖` over the summands `P`, on the given columns.
    fn commutator_scale(&self, x: &Array2<Complex64>, cols: Range<usize>) -> f64 {
        1.0 + self
            .iter()
            .flat_map(|part| [part.dot(x), x.dot(part)])
            .map(|m| max_norm(m.slice(s![.., cols.clone()])))
            .fold(0.0, f64::max)
    }
}

/// `C = q^{2H}/(1−q^{−2}) − p^{−2H}/(1−p²) + (q − p⁻¹)·E−E+`.
pub fn casimir_matrix(rep: &RepRealization, params: &DeformationParams) -> Result<Array2<Complex64>> {
    let c_mat = CasimirParts::new(rep, params)?.sum();
    if c_mat.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(c_mat)
    } else {
        Err(Error::NonFinite("casimir"))
    }
}

/// Casimir eigenvalue read off the highest-weight vector, where `E+` vanishes:
/// `q^{2j}/(1−q^{−2}) − p^{−2j}/(1−p²)`.
pub fn casimir_highest_weight(spin: Spin, params: &DeformationParams) -> Result<Complex64> {
    let one = c(1.0, 0.0);
    let q = params.q();
    let p = params.p();
    let value = params.q_pow(spin.two_j())? / (one - (q * q).inv()) - params.p_pow(-spin.two_j())? / (one - p * p);
    ensure_finite(value, "casimir")
}

#[derive(Debug, Clone, PartialEq)]
pub struct CasimirReport {
    /// `C[0][0]`.
    pub eigenvalue: Complex64,
    pub max_offdiag: f64,
    pub max_diag_deviation: f64,
    pub max_commutator_residual: f64,
    pub passed: bool,
}

/// Check that `C` is scalar on the whole truncated space, commutes with `H`
/// everywhere and with `E±` on columns `0..N−1`.
pub fn check_casimir(rep: &RepRealization, params: &DeformationParams, tol: f64) -> Result<CasimirReport> {
    check_tol(tol)?;
    let parts = CasimirParts::new(rep, params)?;
    let c_mat = parts.sum();
    let n = c_mat.nrows();
    let scale = parts.scale();
    let eigenvalue = c_mat[[0, 0]];

    let mut max_offdiag = 0.0f64;
    let mut max_diag_deviation = 0.0f64;
    for ((r, col), z) in c_mat.indexed_iter() {
        if r == col {
            max_diag_deviation = max_diag_deviation.max((z - eigenvalue).norm());
        } else {
            max_offdiag = max_offdiag.max(z.norm());
        }
    }
    max_offdiag /= scale;
    max_diag_deviation /= scale;

    let mut max_commutator_residual = 0.0f64;
    for (x, cols) in [(&rep.h, 0..n), (&rep.e_plus, 0..n - 1), (&rep.e_minus, 0..n - 1)] {
        let comm = commutator(&c_mat, x);
        let r = max_norm(comm.slice(s![.., cols.clone()]));
        max_commutator_residual = max_commutator_residual.max(r / parts.commutator_scale(x, cols));
    }

    let all = [max_offdiag, max_diag_deviation, max_commutator_residual];
    if all.iter().any(|v| !v.is_finite()) || !(eigenvalue.re.is_finite() && eigenvalue.im.is_finite()) {
        return Err(Error::NonFinite("casimir"));
    }
    Ok(CasimirReport {
        eigenvalue,
        max_offdiag,
        max_diag_deviation,
        max_commutator_residual,
        passed: all.iter().all(|v| *v < tol),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitComparison {
    /// Deformed ladder at `p = q` against `[n+1]_q [2j−n]_q`.
    pub one_parameter_deviation: f64,
    /// Deformed ladder at `p = q = 1 + ε` against `(n+1)(2j−n)`.
    pub classical_deviation: f64,
}

/// `|a − b| / max(|b|, 1)`.
pub fn floored_relative(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

/// Compare the deformed ladder with its two limits. Both deviations are the
/// worst [`floored_relative`] difference of `c_n²` over `n < truncation`.
pub fn limit_compare(spin: Spin, q: Complex64, truncation: usize, epsilon: f64) -> Result<LimitComparison> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let tol = crate::qnum::DEFAULT_PARAM_TOL;

    let same = DeformationParams::new(q, q, tol)?;
    let lad = deformed_ladder(spin, &same, truncation)?;
    let mut one_parameter_deviation = 0.0f64;
    for (n, sq) in lad.squares().iter().enumerate() {
        let oracle = same.q_sym_bracket(c(n as f64 + 1.0, 0.0))? * same.q_sym_bracket(spin.two_j() - n as f64)?;
        one_parameter_deviation = one_parameter_deviation.max(floored_relative(*sq, oracle));
    }

    let near = c(1.0 + epsilon, 0.0);
    let near = DeformationParams::new(near, near, tol)?;
    let lad = deformed_ladder(spin, &near, truncation)?;
    let classical = classical_ladder(spin, truncation)?;
    let classical_deviation = lad
        .squares()
        .iter()
        .zip(classical.squares())
        .map(|(a, b)| floored_relative(*a, *b))
        .fold(0.0, f64::max);

    Ok(LimitComparison {
        one_parameter_deviation,
        classical_deviation,
    })
}

/// Row-major `[re, im]` pairs, the export layout for matrices.
pub fn matrix_rows(m: &Array2<Complex64>) -> Vec<Vec<[f64; 2]>> {
    m.rows().into_iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ladder::deformed_ladder;

    fn generic() -> DeformationParams {
        DeformationParams::real(2.0, 3.0).unwrap()
    }

    #[test]
    fn spin_half_classical_matrices() {
        let rep = build_rep(&classical_ladder(Spin::real(1.0).unwrap(), 2).unwrap());
        assert_eq!(rep.h[[0, 0]], c(0.5, 0.0));
        assert_eq!(rep.h[[1, 1]], c(-0.5, 0.0));
        assert_eq!(rep.e_plus[[0, 1]], c(1.0, 0.0));
        assert_eq!(rep.e_minus[[1, 0]], c(1.0, 0.0));
        assert_eq!(rep.e_plus[[1, 0]], c(0.0, 0.0));
        assert_eq!(matrix_rows(&rep.e_plus), vec![vec![[0.0, 0.0], [1.0, 0.0]], vec![[0.0, 0.0], [0.0, 0.0]]]);
    }

    #[test]
    fn trivial_rep_is_zero() {
        let rep = build_rep(&deformed_ladder(Spin::real(0.0).unwrap(), &generic(), 1).unwrap());
        for m in [&rep.h, &rep.e_plus, &rep.e_minus] {
            assert_eq!(m.dim(), (1, 1));
            assert_eq!(m[[0, 0]].norm(), 0.0);
        }
    }

    #[test]
    fn deformed_lowering_entry() {
        let rep = build_rep(&deformed_ladder(Spin::real(3.0).unwrap(), &generic(), 2).unwrap());
        assert!((rep.e_minus[[1, 0]] - c(10.75f64.sqrt(), 0.0)).norm() < 1e-13);
        // highest-weight condition
        assert!(rep.e_plus.column(0).iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn relations_on_complete_classical_ladder() {
        let rep = build_rep(&classical_ladder(Spin::real(1.0).unwrap(), 2).unwrap());
        let report = check_relations(&rep, None, 1e-12).unwrap();
        assert_eq!(report.max_residual_h_epm, 0.0);
        assert_eq!(report.max_residual_ep_em_interior, 0.0);
        assert_eq!(report.boundary_residual, 0.0);
        assert!(report.passed());
    }

    #[test]
    fn classical_spin_one_commutator_is_two_h() {
        let rep = build_rep(&classical_ladder(Spin::real(2.0).unwrap(), 3).unwrap());
        // brute force: E+E− − E−E+ by explicit index loops
        let mut diag = [0.0; 3];
        for (k, d) in diag.iter_mut().enumerate() {
            let mut acc = c(0.0, 0.0);
            for m in 0..3 {
                acc += rep.e_plus[[k, m]] * rep.e_minus[[m, k]] - rep.e_minus[[k, m]] * rep.e_plus[[m, k]];
            }
            *d = acc.re;
        }
        for (got, want) in diag.iter().zip([2.0, 0.0, -2.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        let report = check_relations(&rep, None, 1e-12).unwrap();
        assert!(report.max_residual_ep_em_interior < 1e-15);
        assert!(report.boundary_residual < 1e-15);
    }

    #[test]
    fn generic_truncation_leaves_boundary_defect() {
        let params = generic();
        let lad = deformed_ladder(Spin::real(1.0).unwrap(), &params, 10).unwrap();
        let rep = build_rep(&lad);
        let report = check_relations(&rep, Some(&params), 1e-10).unwrap();
        assert!(report.max_residual_ep_em_interior < 1e-10);
        assert!(report.passed());
        let last = lad.coeffs()[9].norm_sqr();
        assert!(last > 1.0);
        assert!((report.boundary_residual - last).abs() / report.residual_scale < 1e-10);
        assert!((report.boundary_defect + lad.squares()[9]).norm() / report.residual_scale < 1e-10);
        assert_eq!(report.interior_range, 0..9);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let mut rep = build_rep(&classical_ladder(Spin::real(1.0).unwrap(), 2).unwrap());
        rep.h = Array2::zeros((3, 3));
        assert!(matches!(check_relations(&rep, None, 1e-10), Err(Error::ShapeMismatch(_))));
        assert!(matches!(check_casimir(&rep, &generic(), 1e-10), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn casimir_trivial_rep() {
        let params = generic();
        let rep = build_rep(&deformed_ladder(Spin::real(0.0).unwrap(), &params, 1).unwrap());
        let m = casimir_matrix(&rep, &params).unwrap();
        let expected = 1.0 / (1.0 - 1.0 / 9.0) - 1.0 / (1.0 - 4.0);
        assert!((m[[0, 0]] - c(expected, 0.0)).norm() < 1e-14);
        let report = check_casimir(&rep, &params, 1e-10).unwrap();
        assert_eq!(report.max_offdiag, 0.0);
        assert_eq!(report.max_diag_deviation, 0.0);
        assert_eq!(report.max_commutator_residual, 0.0);
    }

    #[test]
    fn casimir_top_entry_matches_highest_weight_formula() {
        let params = DeformationParams::new(c(1.2, 0.5), c(0.8, -0.9), 1e-12).unwrap();
        let spin = Spin::new(c(2.5, 0.7)).unwrap();
        let rep = build_rep(&deformed_ladder(spin, &params, 6).unwrap());
        let m = casimir_matrix(&rep, &params).unwrap();
        let hw = casimir_highest_weight(spin, &params).unwrap();
        assert!((m[[0, 0]] - hw).norm() / (1.0 + hw.norm()) < 1e-13);
    }

    #[test]
    fn casimir_near_classical_limit() {
        let eps = 1e-6;
        let params = DeformationParams::real(1.0 + eps, 1.0 + eps).unwrap();
        let spin = Spin::real(1.0).unwrap();
        let rep = build_rep(&deformed_ladder(spin, &params, 2).unwrap());
        let m = casimir_matrix(&rep, &params).unwrap();
        let hw = casimir_highest_weight(spin, &params).unwrap();
        for k in 0..2 {
            assert!((m[[k, k]] - hw).norm() / hw.norm() < 1e-4);
        }
        let lad = deformed_ladder(Spin::real(2.0).unwrap(), &params, 3).unwrap();
        let report = check_casimir(&build_rep(&lad), &params, 1e-4).unwrap();
        assert!(report.passed);
    }

    #[test]
    fn casimir_scalar_for_complex_spin() {
        let params = generic();
        let rep = build_rep(&deformed_ladder(Spin::new(c(0.5, 0.5)).unwrap(), &params, 8).unwrap());
        let report = check_casimir(&rep, &params, 1e-10).unwrap();
        assert!(report.passed, "{report:?}");

        // brute-force oracle: every diagonal entry against the closed form
        let m = casimir_matrix(&rep, &params).unwrap();
        let hw = casimir_highest_weight(rep.spectrum.spin(), &params).unwrap();
        for k in 0..8 {
            let two_h = rep.h[[k, k]] * 2.0;
            let piece = 1.0 + params.q_pow(two_h).unwrap().norm() + params.p_pow(-two_h).unwrap().norm();
            assert!((m[[k, k]] - hw).norm() / piece < 1e-12);
        }
    }

    #[test]
    fn equal_params_integral_spin_terminates() {
        let params = DeformationParams::real(1.7, 1.7).unwrap();
        for two_j in 0..=6usize {
            let lad = deformed_ladder(Spin::real(two_j as f64).unwrap(), &params, two_j + 1).unwrap();
            assert!(lad.squares()[two_j].norm() < 1e-12);
            let rep = build_rep(&lad);
            let report = check_relations(&rep, Some(&params), 1e-10).unwrap();
            assert!(report.boundary_residual / report.residual_scale < 1e-12);
            // lowest-weight condition on the last state
            assert!(rep.e_minus.column(two_j).iter().all(|z| z.norm() < 1e-6));
        }
    }

    #[test]
    fn limit_examples() {
        let cmp = limit_compare(Spin::real(1.0).unwrap(), c(2.0, 0.0), 4, 1e-6).unwrap();
        assert!(cmp.one_parameter_deviation < 1e-12);
        let cmp = limit_compare(Spin::real(3.0).unwrap(), c(2.0, 0.0), 4, 1e-6).unwrap();
        assert!(cmp.classical_deviation < 1e-4);
        let cmp = limit_compare(Spin::real(0.0).unwrap(), c(2.0, 0.0), 1, 1e-6).unwrap();
        assert_eq!(cmp.one_parameter_deviation, 0.0);
        assert_eq!(cmp.classical_deviation, 0.0);
        assert!(limit_compare(Spin::real(0.0).unwrap(), c(2.0, 0.0), 1, 0.0).is_err());
    }
}
