//! Quadrature on the real line and the unit circle, and sums over ℤ.

mod circle;
mod gk;
mod real_line;
mod sums;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use circle::{integrate_unit_circle, integrate_unit_circle_adaptive, integrate_unit_circle_gk};
pub use real_line::{estimate_scale, integrate_real_line, integrate_real_line_with, RealLineOptions};
pub use sums::{sum_over_integers, sum_over_integers_detailed, SumTerm};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
    pub refinements_used: usize,
    /// Magnitude of the part supplied by tail extrapolation rather than sampling.
    pub tail_estimate: f64,
    pub converged: bool,
    /// Fitted algebraic decay exponent p of the integrand or the terms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decay_exponent: Option<f64>,
    /// Length scale used: L of the real-line map, or the final window M of a sum.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
}

impl QuadratureResult {
    pub(crate) fn simple(value: Complex64, err: f64, evaluations: usize, converged: bool) -> Self {
        QuadratureResult {
            value,
            abs_error_estimate: err,
            evaluations,
            refinements_used: 0,
            tail_estimate: 0.0,
            converged,
            decay_exponent: None,
            scale: None,
        }
    }
}
