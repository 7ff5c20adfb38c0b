//! Weight-ladder coefficients.
//!
//! Basis state `n` is `|j, j−n⟩`. The coefficient `c_n` is the matrix element
//! of `E−` for `|n⟩ → |n+1⟩` and, by the reindexing symmetry of the deformed
//! matrix elements, also of `E+` for `|n+1⟩ → |n⟩`. Sharing one square root
//! between the two generators means `E+E−` and `E−E+` only ever see `c_n²`,
//! so the choice of branch for the root is pure gauge.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qnum::{c, ensure_finite, principal_sqrt, DeformationParams};

const INTEGRAL_TOL: f64 = 1e-12;

/// Highest weight `j`, stored as `2j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spin {
    two_j: Complex64,
}

impl Spin {
    pub fn new(two_j: Complex64) -> Result<Self> {
        Ok(Self {
            two_j: ensure_finite(two_j, "spin")?,
        })
    }

    pub fn real(two_j: f64) -> Result<Self> {
        Self::new(c(two_j, 0.0))
    }

    pub fn two_j(&self) -> Complex64 {
        self.two_j
    }

    pub fn j(&self) -> Complex64 {
        self.two_j * 0.5
    }

    /// `Some(2j)` when `2j` is a non-negative integer within `1e-12`.
    pub fn integral_two_j(&self) -> Option<u64> {
        let r = self.two_j.re.round();
        let exact = self.two_j.im.abs() <= INTEGRAL_TOL
            && r >= 0.0
            && (self.two_j.re - r).abs() <= INTEGRAL_TOL
            && r < u64::MAX as f64;
        exact.then_some(r as u64)
    }

    /// Classical (half-)integral spin.
    pub fn is_exact(&self) -> bool {
        self.integral_two_j().is_some()
    }
}

/// Ladder coefficients of a truncated highest-weight representation.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderSpectrum {
    spin: Spin,
    params: Option<DeformationParams>,
    squares: Vec<Complex64>,
    coeffs: Vec<Complex64>,
}

impl LadderSpectrum {
    fn from_squares(spin: Spin, params: Option<DeformationParams>, squares: Vec<Complex64>) -> Self {
        let coeffs = squares.iter().copied().map(principal_sqrt).collect();
        Self {
            spin,
            params,
            squares,
            coeffs,
        }
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    /// `None` for the undeformed algebra.
    pub fn params(&self) -> Option<&DeformationParams> {
        self.params.as_ref()
    }

    pub fn is_classical(&self) -> bool {
        self.params.is_none()
    }

    /// `c_0 … c_{N−1}`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `c_n²` as evaluated, before the square root.
    pub fn squares(&self) -> &[Complex64] {
        &self.squares
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }
}

/// `c_n² = (q^{2j−n}[n+1]_q − p^{−(2j−n)}[n+1]_p) / (q − p⁻¹)`.
pub fn ladder_square(n: usize, spin: Spin, params: &DeformationParams) -> Result<Complex64> {
    let shift = spin.two_j() - n as f64;
    let width = c(n as f64 + 1.0, 0.0);
    let up = params.q_pow(shift)? * params.q_sym_bracket(width)?;
    let down = params.p_pow(-shift)? * params.p_sym_bracket(width)?;
    ensure_finite((up - down) / params.pq_denominator(), "ladder coefficient")
}

/// Deformed ladder truncated to `truncation` states.
pub fn deformed_ladder(spin: Spin, params: &DeformationParams, truncation: usize) -> Result<LadderSpectrum> {
    if truncation == 0 {
        return Err(Error::InvalidTruncation);
    }
    let squares = (0..truncation)
        .map(|n| ladder_square(n, spin, params))
        .collect::<Result<Vec<_>>>()?;
    Ok(LadderSpectrum::from_squares(spin, Some(*params), squares))
}

/// Undeformed ladder, `c_n² = (n+1)(2j−n)`.
pub fn classical_ladder(spin: Spin, truncation: usize) -> Result<LadderSpectrum> {
    if truncation == 0 {
        return Err(Error::InvalidTruncation);
    }
    let squares = (0..truncation)
        .map(|n| ensure_finite((spin.two_j() - n as f64) * (n as f64 + 1.0), "ladder coefficient"))
        .collect::<Result<Vec<_>>>()?;
    Ok(LadderSpectrum::from_squares(spin, None, squares))
}

fn normalizer_domain(n: u64, spin: Spin) -> Result<u64> {
    let two_j = spin
        .integral_two_j()
        .ok_or_else(|| Error::Domain(format!("2j = {} is not a non-negative integer", spin.two_j())))?;
    if n > two_j {
        return Err(Error::Domain(format!("n = {n} exceeds 2j = {two_j}")));
    }
    Ok(two_j)
}

/// Exact `A_n² = (2j)!·n!/(2j−n)!` for the undeformed finite-dimensional
/// representation. This is `‖(E−)^n |j,j⟩‖²`, so `A_n² / A_{n−1}² = n(2j−n+1)`.
pub fn classical_normalizer_squared(n: u64, spin: Spin) -> Result<u128> {
    let two_j = normalizer_domain(n, spin)?;
    let overflow = || Error::Domain(format!("A_{n}² overflows u128 for 2j = {two_j}"));
    (0..n).try_fold(1u128, |acc, k| {
        let step = u128::from(k + 1).checked_mul(u128::from(two_j - k)).ok_or_else(overflow)?;
        acc.checked_mul(step).ok_or_else(overflow)
    })
}

/// `A_n = √((2j)!·n!/(2j−n)!)`.
pub fn classical_normalizer(n: u64, spin: Spin) -> Result<f64> {
    let two_j = normalizer_domain(n, spin)?;
    let sq: f64 = (0..n).map(|k| (k + 1) as f64 * (two_j - k) as f64).product();
    Ok(sq.sqrt())
}

/// `r_n = (q^{2j−n+1}[n]_q − p^{−2j+n−1}[n]_p) / (q − p⁻¹)` for `n = 1..=count`,
/// the value a unitary structure would require of `|A_{n−1}/A_n|²`.
pub fn unitarizability_ratios(spin: Spin, params: &DeformationParams, count: usize) -> Result<Vec<Complex64>> {
    (1..=count)
        .map(|n| {
            let n_c = c(n as f64, 0.0);
            let exponent = spin.two_j() - n_c + 1.0;
            let up = params.q_pow(exponent)? * params.q_sym_bracket(n_c)?;
            let down = params.p_pow(-exponent)? * params.p_sym_bracket(n_c)?;
            ensure_finite((up - down) / params.pq_denominator(), "unitarizability ratio")
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitarityVerdict {
    /// `r_1 … r_n` are all real-positive.
    UnitarizableUpTo(usize),
    NotUnitarizable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitarityReport {
    pub verdict: UnitarityVerdict,
    /// 1-based index of the first ratio that is not real-positive.
    pub first_failure: Option<usize>,
    pub ratios_checked: usize,
}

/// A ratio passes when `|Im r|/(1+|r|) < tol` and `Re r > tol`.
pub fn is_real_positive(r: Complex64, tol: f64) -> bool {
    r.im.abs() / (1.0 + r.norm()) < tol && r.re > tol
}

pub fn unitarizability_verdict(ratios: &[Complex64], tol: f64) -> Result<UnitarityReport> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    let passing = ratios.iter().take_while(|r| is_real_positive(**r, tol)).count();
    let verdict = if passing == 0 {
        UnitarityVerdict::NotUnitarizable
    } else {
        UnitarityVerdict::UnitarizableUpTo(passing)
    };
    Ok(UnitarityReport {
        verdict,
        first_failure: (passing < ratios.len()).then_some(passing + 1),
        ratios_checked: ratios.len(),
    })
}
