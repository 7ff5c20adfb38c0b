//! Highest-weight representations of the two-parameter quantum group
//! `U_{p,q}[sl(2)]`.
//!
//! The algebra is generated by `H`, `E+`, `E−` with
//! `[H, E±] = ±E±` and `[E+, E−] = [2H]_{p,q}`, where
//! `[x]_{p,q} = (q^x − p^{−x}) / (q − p⁻¹)`.
//!
//! * [`qnum`]: deformed numbers, principal-branch powers, parameter validation.
//! * [`ladder`]: ladder coefficients, classical normalizers, unitarity ratios.
//! * [`repmat`]: truncated matrix realizations, relation and Casimir checks.
//! * [`findim`]: integer-root scan for finite-dimensional subrepresentations
//!   and the complex spin of a given dimension.

pub mod error;
pub mod findim;
pub mod ladder;
pub mod qnum;
pub mod repmat;

pub use error::{Error, Locus, Result};
pub use findim::{
    f_eval, roundtrip_check, scan_integer_roots, scaled_residual, spin_for_dimension, BranchSolution,
    FiniteDimReport, FiniteDimVerdict, RootEntry, RoundTripEntry, RoundTripReport, SpinSolutionSet,
};
pub use ladder::{
    classical_ladder, classical_normalizer, classical_normalizer_squared, deformed_ladder, ladder_square,
    unitarizability_ratios, unitarizability_verdict, LadderSpectrum, Spin, UnitarityReport, UnitarityVerdict,
};
pub use num_complex::Complex64;
pub use qnum::{cpow, pq_bracket, q_bracket, validate_params, ComplexScalar, DeformationParams};
pub use repmat::{
    build_rep, casimir_highest_weight, casimir_matrix, check_casimir, check_relations, limit_compare,
    CasimirReport, LimitComparison, RelationReport, RepRealization,
};
