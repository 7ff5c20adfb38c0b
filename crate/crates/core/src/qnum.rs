//! Deformed numbers and complex powers.
//!
//! Every power `z^w` in this crate is taken on the principal branch,
//! `exp(w · Log z)` with `Im Log z ∈ (−π, π]`. A signed zero in the imaginary
//! part is normalized to `+0` first so that the negative real axis always maps
//! to `+π`.

use num_complex::Complex64;

use crate::error::{Error, Locus, Result};

/// Numeric carrier for every deformed quantity. Values leaving this module are
/// checked finite.
pub type ComplexScalar = Complex64;

/// Default singularity tolerance for [`DeformationParams::new`].
pub const DEFAULT_PARAM_TOL: f64 = 1e-12;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn ensure_finite(z: Complex64, what: &'static str) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(what))
    }
}

fn normalize_signed_zero(z: Complex64) -> Complex64 {
    // -0.0 == 0.0, so this maps both zeros to +0.
    if z.im == 0.0 {
        c(z.re, 0.0)
    } else {
        z
    }
}

/// Principal logarithm with imaginary part in `(−π, π]`.
pub fn principal_ln(z: Complex64) -> Result<Complex64> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::ZeroBase);
    }
    ensure_finite(normalize_signed_zero(z).ln(), "principal_ln")
}

/// Principal square root: non-negative real part, and non-negative imaginary
/// part on the cut.
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    normalize_signed_zero(z).sqrt()
}

/// Principal-branch complex power `z^w = exp(w · Log z)`.
pub fn cpow(z: Complex64, w: Complex64) -> Result<Complex64> {
    let log_z = principal_ln(z)?;
    exp_with_log(log_z, w)
}

fn exp_with_log(log_base: Complex64, w: Complex64) -> Result<Complex64> {
    if w.re == 0.0 && w.im == 0.0 {
        return Ok(c(1.0, 0.0));
    }
    ensure_finite((w * log_base).exp(), "cpow")
}

/// A validated pair of deformation parameters `(p, q)`.
///
/// Construction rejects the loci where a denominator of the two-parameter
/// bracket, the one-parameter brackets or the Casimir operator vanishes. The
/// reduction `p = q` is allowed; `p² = q²` is only flagged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationParams {
    p: Complex64,
    q: Complex64,
    log_p: Complex64,
    log_q: Complex64,
    equal_squares: bool,
}

impl DeformationParams {
    /// Validate `(p, q)`. A locus counts as hit when its denominator has
    /// modulus below `tol · (1 + |p| + |q|)`.
    pub fn new(p: Complex64, q: Complex64, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidTolerance(tol));
        }
        let p = ensure_finite(p, "parameter p")?;
        let q = ensure_finite(q, "parameter q")?;
        if p.norm() < tol {
            return Err(Error::ZeroParameter("p"));
        }
        if q.norm() < tol {
            return Err(Error::ZeroParameter("q"));
        }
        let guard = tol * (1.0 + p.norm() + q.norm());
        if (q - p.inv()).norm() < guard {
            return Err(Error::SingularDenominator(Locus::PqOne));
        }
        if (q - q.inv()).norm() < guard {
            return Err(Error::SingularDenominator(Locus::QSquaredOne));
        }
        if (p - p.inv()).norm() < guard {
            return Err(Error::SingularDenominator(Locus::PSquaredOne));
        }
        Ok(Self {
            p,
            q,
            log_p: principal_ln(p)?,
            log_q: principal_ln(q)?,
            equal_squares: (p * p - q * q).norm() < guard,
        })
    }

    /// Shorthand for real parameters with the default tolerance.
    pub fn real(p: f64, q: f64) -> Result<Self> {
        Self::new(c(p, 0.0), c(q, 0.0), DEFAULT_PARAM_TOL)
    }

    pub fn p(&self) -> Complex64 {
        self.p
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn log_p(&self) -> Complex64 {
        self.log_p
    }

    pub fn log_q(&self) -> Complex64 {
        self.log_q
    }

    /// `p² = q²` within tolerance. Not an error: `p = q` is the one-parameter
    /// reduction.
    pub fn equal_squares(&self) -> bool {
        self.equal_squares
    }

    /// `q − p⁻¹`, the two-parameter bracket denominator. Never zero.
    pub fn pq_denominator(&self) -> Complex64 {
        self.q - self.p.inv()
    }

    /// `q^w` on the principal branch.
    pub fn q_pow(&self, w: Complex64) -> Result<Complex64> {
        exp_with_log(self.log_q, w)
    }

    /// `p^w` on the principal branch.
    pub fn p_pow(&self, w: Complex64) -> Result<Complex64> {
        exp_with_log(self.log_p, w)
    }

    /// `[x]_q`, the symmetric bracket in `q`.
    pub fn q_sym_bracket(&self, x: Complex64) -> Result<Complex64> {
        let num = self.q_pow(x)? - self.q_pow(-x)?;
        ensure_finite(num / (self.q - self.q.inv()), "q_bracket")
    }

    /// `[x]_p`, the symmetric bracket in `p`.
    pub fn p_sym_bracket(&self, x: Complex64) -> Result<Complex64> {
        let num = self.p_pow(x)? - self.p_pow(-x)?;
        ensure_finite(num / (self.p - self.p.inv()), "q_bracket")
    }
}

/// Same as [`DeformationParams::new`].
pub fn validate_params(p: Complex64, q: Complex64, tol: f64) -> Result<DeformationParams> {
    DeformationParams::new(p, q, tol)
}

/// Two-parameter deformed number `[x]_{p,q} = (q^x − p^{−x}) / (q − p⁻¹)`.
pub fn pq_bracket(x: Complex64, params: &DeformationParams) -> Result<Complex64> {
    let num = params.q_pow(x)? - params.p_pow(-x)?;
    ensure_finite(num / params.pq_denominator(), "pq_bracket")
}

/// Symmetric one-parameter deformed number `[x]_b = (b^x − b^{−x}) / (b − b⁻¹)`.
pub fn q_bracket(x: Complex64, base: Complex64) -> Result<Complex64> {
    let log_b = principal_ln(base)?;
    let den = base - base.inv();
    if den.norm() <= f64::EPSILON * (1.0 + base.norm()) {
        return Err(Error::SingularDenominator(Locus::BaseSquaredOne));
    }
    let num = exp_with_log(log_b, x)? - exp_with_log(log_b, -x)?;
    ensure_finite(num / den, "q_bracket")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::{E, PI};

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / (1.0 + b.norm())
    }

    #[test]
    fn validate_accepts_generic_and_rejects_loci() {
        assert!(validate_params(c(2.0, 0.0), c(3.0, 0.0), 1e-12).is_ok());
        assert_eq!(
            validate_params(c(2.0, 0.0), c(0.5, 0.0), 1e-12),
            Err(Error::SingularDenominator(Locus::PqOne))
        );
        assert_eq!(
            validate_params(c(2.0, 0.0), c(1.0, 0.0), 1e-12),
            Err(Error::SingularDenominator(Locus::QSquaredOne))
        );
        assert_eq!(
            validate_params(c(-1.0, 0.0), c(3.0, 0.0), 1e-12),
            Err(Error::SingularDenominator(Locus::PSquaredOne))
        );
        assert_eq!(
            validate_params(c(0.0, 0.0), c(3.0, 0.0), 1e-12),
            Err(Error::ZeroParameter("p"))
        );
        assert_eq!(
            validate_params(c(2.0, 0.0), c(3.0, 0.0), 0.0),
            Err(Error::InvalidTolerance(0.0))
        );
    }

    #[test]
    fn near_classical_params_are_valid() {
        let p = c(1.0 + 1e-6, 0.0);
        // |p² − 1| ≈ 2e-6, far above 1e-12 · (1 + 2 + …)
        assert!(((p * p) - 1.0).norm() > 1.9e-6);
        let params = validate_params(p, p, 1e-12).unwrap();
        assert!(params.equal_squares());
    }

    #[test]
    fn imaginary_unit_pair_is_flagged_but_valid() {
        // p = 2i, q = −2i: p² = q², nothing singular.
        let params = validate_params(c(0.0, 2.0), c(0.0, -2.0), 1e-12).unwrap();
        assert!(params.equal_squares());
        let generic = DeformationParams::real(2.0, 3.0).unwrap();
        assert!(!generic.equal_squares());
    }

    #[test]
    fn cpow_examples() {
        assert_relative_eq!(cpow(c(E, 0.0), c(1.0, 0.0)).unwrap().re, E, epsilon = 1e-15);
        let r = cpow(c(4.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!(rel(r, c(2.0, 0.0)) < 1e-15);
        // −1 on the cut: Log(−1) = iπ, so (−1)^½ = exp(iπ/2) = i.
        let oracle = c(0.0, 0.5 * PI).exp();
        let r = cpow(c(-1.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!(rel(r, oracle) < 1e-15);
        assert!(rel(r, c(0.0, 1.0)) < 1e-15);
        // signed zero does not flip the branch
        let r2 = cpow(c(-1.0, -0.0), c(0.5, 0.0)).unwrap();
        assert!(rel(r2, c(0.0, 1.0)) < 1e-15);
        assert_eq!(cpow(c(0.0, 0.0), c(1.0, 0.0)), Err(Error::ZeroBase));
    }

    #[test]
    fn principal_sqrt_on_cut() {
        assert!(rel(principal_sqrt(c(-4.0, -0.0)), c(0.0, 2.0)) < 1e-15);
        assert!(principal_sqrt(c(3.0, -4.0)).re > 0.0);
    }

    #[test]
    fn pq_bracket_examples() {
        let params = DeformationParams::real(2.0, 3.0).unwrap();
        assert_eq!(pq_bracket(c(0.0, 0.0), &params).unwrap(), c(0.0, 0.0));
        assert!(rel(pq_bracket(c(1.0, 0.0), &params).unwrap(), c(1.0, 0.0)) < 1e-15);
        // [2]_{p,q} = q + p⁻¹
        let direct = (c(9.0, 0.0) - c(0.25, 0.0)) / (c(3.0, 0.0) - c(0.5, 0.0));
        let r = pq_bracket(c(2.0, 0.0), &params).unwrap();
        assert!(rel(r, direct) < 1e-15);
        assert!(rel(r, c(3.5, 0.0)) < 1e-14);
    }

    #[test]
    fn q_bracket_examples() {
        assert!(rel(q_bracket(c(1.0, 0.0), c(5.0, 0.0)).unwrap(), c(1.0, 0.0)) < 1e-15);
        assert!(rel(q_bracket(c(2.0, 0.0), c(3.0, 0.0)).unwrap(), c(10.0 / 3.0, 0.0)) < 1e-14);
        let near = q_bracket(c(3.0, 0.0), c(1.0 + 1e-8, 0.0)).unwrap();
        assert!((near - c(3.0, 0.0)).norm() < 1e-6);
        assert_eq!(
            q_bracket(c(2.0, 0.0), c(-1.0, 0.0)),
            Err(Error::SingularDenominator(Locus::BaseSquaredOne))
        );
    }

    fn arb_complex(lo: f64, hi: f64) -> impl Strategy<Value = Complex64> {
        (lo..hi, lo..hi).prop_map(|(re, im)| c(re, im))
    }

    fn arb_params() -> impl Strategy<Value = DeformationParams> {
        (0.5f64..2.0, -PI..PI, 0.5f64..2.0, -PI..PI).prop_filter_map("singular", |(rp, ap, rq, aq)| {
            let p = Complex64::from_polar(rp, ap);
            let q = Complex64::from_polar(rq, aq);
            DeformationParams::new(p, q, 1e-3).ok()
        })
    }

    proptest! {
        #[test]
        fn pq_bracket_defining_identity(params in arb_params(), x in arb_complex(-4.0, 4.0)) {
            let lhs = pq_bracket(x, &params).unwrap() * params.pq_denominator() + params.p_pow(-x).unwrap();
            let rhs = params.q_pow(x).unwrap();
            let scale = 1.0 + rhs.norm() + params.p_pow(-x).unwrap().norm();
            prop_assert!((lhs - rhs).norm() / scale < 1e-12);
        }

        #[test]
        fn q_bracket_is_odd(base in arb_complex(0.3, 2.0), x in arb_complex(-4.0, 4.0)) {
            prop_assume!((base - base.inv()).norm() > 1e-3);
            let a = q_bracket(x, base).unwrap();
            let b = q_bracket(-x, base).unwrap();
            prop_assert!((a + b).norm() / (1.0 + a.norm()) < 1e-12);
        }

        #[test]
        fn pq_bracket_reduces_to_q_bracket(params in arb_params(), x in arb_complex(-4.0, 4.0)) {
            let q = params.q();
            prop_assume!((q * q - c(1.0, 0.0)).norm() > 1e-3);
            let same = DeformationParams::new(q, q, 1e-12).unwrap();
            let a = pq_bracket(x, &same).unwrap();
            let b = q_bracket(x, q).unwrap();
            prop_assert!((a - b).norm() / (1.0 + b.norm()) < 1e-12);
        }

        #[test]
        fn cpow_adds_real_exponents(z in arb_complex(-3.0, 3.0), a in -3.0f64..3.0, b in -3.0f64..3.0) {
            prop_assume!(z.norm() > 1e-2);
            let lhs = cpow(z, c(a, 0.0)).unwrap() * cpow(z, c(b, 0.0)).unwrap();
            let rhs = cpow(z, c(a + b, 0.0)).unwrap();
            prop_assert!((lhs - rhs).norm() / (1.0 + rhs.norm()) < 1e-12);
        }
    }
}
