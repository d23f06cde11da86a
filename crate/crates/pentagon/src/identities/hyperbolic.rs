use std::time::Instant;

use num_complex::Complex64;

use super::{IdentityId, VerificationReport};
use crate::error::Result;
use crate::integrators::{integrate_real_line, QuadratureResult};
use crate::kernels::{log_b_hyp, HyperbolicParams};
use crate::special_functions::TruncationPolicy;

/// Π B_hyp(aᵢ + u, bᵢ − u) at u = it, with the measure factor 1/√(ω₁ω₂).
pub fn hyperbolic_integrand(p: &HyperbolicParams, t: f64, policy: &TruncationPolicy) -> Result<Complex64> {
    let u = Complex64::new(0.0, t);
    let mut l = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        l += log_b_hyp(p.a[i] + u, p.b[i] - u, &p.omega, policy)?;
    }
    Ok(l.exp() / (p.omega.omega1() * p.omega.omega2()).sqrt())
}

/// ∫_{−i∞}^{i∞} du/(i√(ω₁ω₂)) Π B_hyp(aᵢ + u, bᵢ − u), on u = it.
pub fn eval_hyperbolic_lhs(p: &HyperbolicParams, policy: &TruncationPolicy) -> Result<QuadratureResult> {
    // The integrand is analytic on the contour; an evaluation error
    // there is a genuine failure, so surface the first one.
    let failure = std::cell::RefCell::new(None);
    let f = |t: f64| match hyperbolic_integrand(p, t, policy) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            Complex64::new(f64::NAN, 0.0)
        }
    };
    let r = integrate_real_line(f, policy);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    r
}

/// B_hyp(a₁ + b₂, a₃ + b₁) · B_hyp(a₂ + b₁, a₃ + b₂).
pub fn eval_hyperbolic_rhs(p: &HyperbolicParams, policy: &TruncationPolicy) -> Result<Complex64> {
    let (a, b, w) = (&p.a, &p.b, &p.omega);
    let l = log_b_hyp(a[0] + b[1], a[2] + b[0], w, policy)? + log_b_hyp(a[1] + b[0], a[2] + b[1], w, policy)?;
    Ok(l.exp())
}

pub fn verify_pentagon_hyperbolic(p: &HyperbolicParams, policy: &TruncationPolicy) -> Result<VerificationReport> {
    let start = Instant::now();
    let lhs = eval_hyperbolic_lhs(p, policy)?;
    let rhs = eval_hyperbolic_rhs(p, policy)?;
    let c = lhs.value / rhs;
    Ok(VerificationReport::new(IdentityId::Hyperbolic, p, lhs.value, rhs)
        .with_constant(c.re)
        .with_quadrature("lhs_integral", lhs)
        .with_wall_time(start.elapsed()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_functions::ModularPair;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fixed_point() -> HyperbolicParams {
        let omega = ModularPair::new(c(1.0, 0.0), c(0.3, 1.0)).unwrap();
        let w = omega.sum();
        let a = [w * 0.12 + c(0.0, 0.03), w * 0.15 - c(0.0, 0.02), w * 0.2];
        HyperbolicParams::balanced(a, [w * 0.18, w * 0.16 + c(0.0, 0.01)], omega).unwrap()
    }

    #[test]
    fn balanced_point_holds() {
        let r = verify_pentagon_hyperbolic(&fixed_point(), &TruncationPolicy::default()).unwrap();
        assert!(r.rel_residual < 1e-8, "{r:?}");
        assert!(r.pass);
    }

    #[test]
    fn integrand_decays_along_contour() {
        let p = fixed_point();
        let pol = TruncationPolicy::default();
        for sign in [1.0, -1.0] {
            let mags: Vec<f64> = [2.0, 5.0, 8.0]
                .iter()
                .map(|t| hyperbolic_integrand(&p, sign * t, &pol).unwrap().norm())
                .collect();
            assert!(mags[0] > mags[1] && mags[1] > mags[2], "{mags:?}");
        }
    }

    #[test]
    fn rhs_invariant_under_period_swap() {
        let p = fixed_point();
        let q = HyperbolicParams { omega: p.omega.swapped(), ..p };
        let pol = TruncationPolicy::default();
        let (x, y) = (eval_hyperbolic_rhs(&p, &pol).unwrap(), eval_hyperbolic_rhs(&q, &pol).unwrap());
        assert!((x - y).norm() < 1e-13 * x.norm());
    }

    #[test]
    fn rhs_invariant_under_relabelling() {
        // Exchanging labels 1 and 2 in both a and b swaps the two factors.
        let p = fixed_point();
        let q = HyperbolicParams {
            a: [p.a[1], p.a[0], p.a[2]],
            b: [p.b[1], p.b[0], p.b[2]],
            ..p
        };
        let pol = TruncationPolicy::default();
        let (x, y) = (eval_hyperbolic_rhs(&p, &pol).unwrap(), eval_hyperbolic_rhs(&q, &pol).unwrap());
        assert!((x - y).norm() < 1e-13 * x.norm());
    }
}
