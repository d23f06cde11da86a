use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use super::{IdentityId, VerificationReport};
use crate::error::{Error, Result};
use crate::special_functions::rogers_l;

#[derive(Serialize)]
struct Point {
    x: f64,
    y: f64,
}

/// Both sides of L(x) + L(y) − L(xy) = L(x(1−y)/(1−xy)) + L(y(1−x)/(1−xy)).
fn sides(x: f64, y: f64) -> Result<(f64, f64)> {
    for (name, v) in [("x", x), ("y", y)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::Domain {
                function: "classical pentagon",
                value: format!("{name} = {v}"),
                domain: "(0, 1)",
            });
        }
    }
    let d = 1.0 - x * y;
    let lhs = rogers_l(x)? + rogers_l(y)? - rogers_l(x * y)?;
    let rhs = rogers_l(x * (1.0 - y) / d)? + rogers_l(y * (1.0 - x) / d)?;
    Ok((lhs, rhs))
}

/// Signed residual of the five-term relation at (x, y).
pub fn classical_residual(x: f64, y: f64) -> Result<f64> {
    let (l, r) = sides(x, y)?;
    Ok(l - r)
}

pub fn verify_classical_pentagon(x: f64, y: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    let (l, r) = sides(x, y)?;
    Ok(VerificationReport::new(
        IdentityId::Classical,
        &Point { x, y },
        Complex64::new(l, 0.0),
        Complex64::new(r, 0.0),
    )
    .with_wall_time(start.elapsed()))
}
