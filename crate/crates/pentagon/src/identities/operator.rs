use std::time::Instant;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use super::{IdentityId, VerificationReport};
use crate::error::Result;
use crate::weyl_series::check_operator_pentagon_any_degree;

#[derive(Serialize)]
struct Point {
    max_degree: u32,
    q: String,
}

/// The operator pentagon as a report. The sides are series, not numbers, so
/// lhs and rhs are left at zero; term counts go into the diagnostics and only
/// an exactly zero difference passes.
pub fn verify_operator_pentagon(max_degree: u32, q: &BigRational) -> Result<VerificationReport> {
    let start = Instant::now();
    let check = check_operator_pentagon_any_degree(max_degree, q)?;
    let mut r = VerificationReport::new(
        IdentityId::Operator,
        &Point {
            max_degree,
            q: check.q.clone(),
        },
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
    );
    r.abs_residual = check.max_abs_residual;
    r.rel_residual = if check.exact_zero { 0.0 } else { check.max_abs_residual.max(f64::MIN_POSITIVE) };
    r.evaluate();
    Ok(r.with_diagnostic("lhs_terms", check.lhs.len() as f64)
        .with_diagnostic("rhs_terms", check.rhs.len() as f64)
        .with_diagnostic("difference_terms", check.difference.len() as f64)
        .with_wall_time(start.elapsed()))
}
