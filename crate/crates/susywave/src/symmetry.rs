//! Parity, time-reversal and combined PT checks.
//!
//! Parity maps z to -z; time reversal is complex conjugation. A profile
//! is PT-symmetric when n(z) = conj(n(-z)), i.e. an even real part and an
//! odd imaginary part.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::profiles::ComplexField;

/// Verdict tolerance on the PT defect max |n(z) - conj(n(-z))|.
pub const PT_TOLERANCE: f64 = 1e-10;

/// Outcome of a PT symmetry scan.
#[derive(Debug, Clone, Copy)]
pub struct SymmetryReport {
    pub max_violation: f64,
    pub is_pt_symmetric: bool,
    pub tested_points: usize,
    pub tolerance: f64,
}

/// Scan max |n(z) - conj(n(-z))| over `count` points of [-half_width,
/// half_width]. The evaluator is called at exact +-z pairs, so an
/// analytically PT-symmetric profile reports a violation of zero.
pub fn pt_check_analytic(
    index: impl Fn(f64) -> Complex64,
    half_width: f64,
    count: usize,
) -> SymmetryReport {
    assert!(half_width > 0.0 && count >= 2);
    let step = half_width / (count - 1) as f64;
    let mut max_violation = 0.0f64;
    for i in 0..count {
        let z = i as f64 * step;
        let defect = (index(z) - index(-z).conj()).norm();
        max_violation = max_violation.max(defect);
    }
    SymmetryReport {
        max_violation,
        is_pt_symmetric: max_violation <= PT_TOLERANCE,
        tested_points: count,
        tolerance: PT_TOLERANCE,
    }
}

/// Reverse a field in z. The grid must be symmetric about z = 0, since
/// the reflected samples are reattached to the same nodes.
pub fn parity_reflect(field: &ComplexField) -> Result<ComplexField> {
    let grid = field.grid();
    if !grid.is_symmetric() {
        return Err(Error::AsymmetricGrid {
            z_start: grid.z_start(),
            z_end: grid.z_end(),
        });
    }
    let mut values = field.values().to_vec();
    values.reverse();
    ComplexField::new(grid, values)
}

/// Conjugate every sample.
pub fn time_reverse(field: &ComplexField) -> ComplexField {
    let values = field.values().iter().map(|v| v.conj()).collect();
    ComplexField::new(field.grid(), values).expect("conjugation preserves finiteness")
}
