use std::f64::consts::PI;

use num_complex::Complex64;

use super::{gk, QuadratureResult};
use crate::error::{Error, Result};
use crate::special_functions::TruncationPolicy;

fn node(k: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

fn mean_over<F: Fn(Complex64) -> Complex64>(f: &F, n: usize, odd_only: bool) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    let (start, step, count) = if odd_only { (1, 2, n / 2) } else { (0, 1, n) };
    let mut k = start;
    while k < n {
        let v = f(node(k, n));
        if !v.is_finite() {
            return Err(Error::NonFinite("unit-circle integrand"));
        }
        acc += v;
        k += step;
    }
    Ok(acc / count as f64)
}

/// (1/N) Σₖ f(e^{2πik/N}), the trapezoid rule for ∮ f(z) dz/(2πiz).
///
/// For even N the error estimate is the change from the N/2-point rule, which
/// reuses the even nodes.
pub fn integrate_unit_circle<F: Fn(Complex64) -> Complex64>(
    f: F,
    num_points: usize,
) -> Result<QuadratureResult> {
    if num_points == 0 {
        return Err(Error::Policy("num_points must be at least 1".into()));
    }
    if num_points % 2 == 1 {
        let value = mean_over(&f, num_points, false)?;
        return Ok(QuadratureResult::simple(value, f64::INFINITY, num_points, false));
    }
    let half = mean_over(&f, num_points / 2, false)?;
    let odd = mean_over(&f, num_points, true)?;
    let value = 0.5 * (half + odd);
    let err = (value - half).norm();
    Ok(QuadratureResult::simple(value, err, num_points, true))
}

/// Trapezoid rule doubled from `circle_points_start` until two successive
/// rules agree within the quadrature tolerance.
pub fn integrate_unit_circle_adaptive<F: Fn(Complex64) -> Complex64>(
    f: F,
    policy: &TruncationPolicy,
) -> Result<QuadratureResult> {
    let mut n = policy.circle_points_start.max(1);
    let mut value = mean_over(&f, n, false)?;
    let mut refinements = 0;
    loop {
        let next = 2 * n;
        if next > policy.circle_points_max {
            return Ok(QuadratureResult {
                refinements_used: refinements,
                ..QuadratureResult::simple(value, f64::INFINITY, n, false)
            });
        }
        let odd = mean_over(&f, next, true)?;
        let refined = 0.5 * (value + odd);
        let err = (refined - value).norm();
        n = next;
        value = refined;
        refinements += 1;
        let tol = policy
            .quadrature_abs_tol
            .max(policy.quadrature_rel_tol * value.norm());
        if err <= tol {
            return Ok(QuadratureResult {
                refinements_used: refinements,
                ..QuadratureResult::simple(value, err, n, true)
            });
        }
    }
}

/// Adaptive Gauss–Kronrod in the angle, for integrands sharply peaked on the
/// circle where the trapezoid rule would need too many points.
pub fn integrate_unit_circle_gk<F: Fn(Complex64) -> Complex64>(
    f: F,
    policy: &TruncationPolicy,
) -> Result<QuadratureResult> {
    let g = |t: f64| f(Complex64::from_polar(1.0, t));
    let r = gk::adaptive(
        &g,
        -PI,
        PI,
        16,
        policy.quadrature_abs_tol * 2.0 * PI,
        policy.quadrature_rel_tol,
        policy.max_refinements,
    )?;
    let s = 1.0 / (2.0 * PI);
    Ok(QuadratureResult {
        refinements_used: r.refinements,
        ..QuadratureResult::simple(r.value * s, r.error * s, r.evaluations, r.converged)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_monomials() {
        let r = integrate_unit_circle(|_| Complex64::new(1.0, 0.0), 64).unwrap();
        assert!((r.value - 1.0).norm() < 1e-15);
        for k in [-5i32, -1, 1, 3, 31] {
            let r = integrate_unit_circle(|z: Complex64| z.powi(k), 64).unwrap();
            assert!(r.value.norm() < 1e-14, "k={k}: {}", r.value);
        }
    }

    #[test]
    fn geometric_kernel() {
        let a = Complex64::new(0.6, 0.3);
        let f = |z: Complex64| (Complex64::new(1.0, 0.0) - a * z).inv();
        let r = integrate_unit_circle_adaptive(f, &TruncationPolicy::default()).unwrap();
        assert!((r.value - 1.0).norm() < 1e-14);
        assert!(r.converged);
        let g = integrate_unit_circle_gk(f, &TruncationPolicy::default()).unwrap();
        assert!((g.value - 1.0).norm() < 1e-13);
    }

    #[test]
    fn doubling_gives_spectral_estimate() {
        let a = 0.8;
        let f = |z: Complex64| (Complex64::new(1.0, 0.0) - a * z).inv() * z.inv();
        // Exact value: the z^1 coefficient of 1/(1 − az) is a.
        let r = integrate_unit_circle(f, 64).unwrap();
        let true_err = (r.value - a).norm();
        assert!(true_err <= 3.0 * r.abs_error_estimate);
        assert!(true_err < 1e-6);
    }

    #[test]
    fn budget_exhaustion_flags() {
        let p = TruncationPolicy {
            circle_points_start: 8,
            circle_points_max: 16,
            ..Default::default()
        };
        let f = |z: Complex64| (Complex64::new(1.0, 0.0) - 0.99 * z).inv();
        let r = integrate_unit_circle_adaptive(f, &p).unwrap();
        assert!(!r.converged);
    }
}
