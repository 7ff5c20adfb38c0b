//! Shared inputs for the criterion benches.

use upq_core::{Complex64, DeformationParams, Spin};

/// A generic complex parameter point well away from every singular locus.
pub fn generic_params() -> DeformationParams {
    DeformationParams::new(Complex64::new(1.3, 0.4), Complex64::new(0.7, -0.9), 1e-12).expect("valid parameters")
}

pub fn complex_spin() -> Spin {
    Spin::new(Complex64::new(2.5, 0.75)).expect("finite spin")
}
