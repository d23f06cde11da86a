use std::time::Instant;

use num_complex::Complex64;

use super::{rel_residual, IdentityId, VerificationReport};
use crate::error::{Error, Result};
use crate::integrators::{integrate_real_line, QuadratureResult};
use crate::kernels::{log_b_beta, BetaParams};
use crate::special_functions::TruncationPolicy;

fn integrate<F>(log_f: F, policy: &TruncationPolicy) -> Result<QuadratureResult>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let failure = std::cell::RefCell::new(None);
    let f = |t: f64| match log_f(Complex64::new(0.0, t)) {
        Ok(l) => l.exp() * (0.5 / std::f64::consts::PI),
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

/// ∫dt/2π B(a₁+it, b₁−it) B(a₂+it, b₂−it) B(a₃+it, a₁+a₂+b₁+b₂).
pub fn eval_beta_lhs(p: &BetaParams, policy: &TruncationPolicy) -> Result<QuadratureResult> {
    let c = p.c();
    integrate(
        |u| Ok(log_b_beta(p.a[0] + u, p.b[0] - u)? + log_b_beta(p.a[1] + u, p.b[1] - u)? + log_b_beta(p.a[2] + u, c)?),
        policy,
    )
}

/// ∫dt/2π Πᵢ B(aᵢ+it, bᵢ−it) with b₃ = 1 − Σaᵢ − b₁ − b₂.
///
/// This form does not satisfy the pentagon; it is evaluated for comparison only.
pub fn eval_beta_lhs_naive(p: &BetaParams, policy: &TruncationPolicy) -> Result<QuadratureResult> {
    let b3 = p.naive_b3();
    if b3.re <= 0.0 {
        return Err(Error::Constraint(format!("Re b3 = {} must be positive (contour pinch)", b3.re)));
    }
    let b = [p.b[0], p.b[1], b3];
    integrate(
        |u| {
            let mut l = Complex64::new(0.0, 0.0);
            for i in 0..3 {
                l += log_b_beta(p.a[i] + u, b[i] - u)?;
            }
            Ok(l)
        },
        policy,
    )
}

/// B(a₁+b₂, a₃+b₁) · B(a₂+b₁, a₃+b₂).
pub fn eval_beta_rhs(p: &BetaParams) -> Result<Complex64> {
    let (a, b) = (&p.a, &p.b);
    Ok((log_b_beta(a[0] + b[1], a[2] + b[0])? + log_b_beta(a[1] + b[0], a[2] + b[1])?).exp())
}

/// Checks the beta pentagon; the naive form's residual goes into the diagnostics.
pub fn verify_pentagon_beta(p: &BetaParams, policy: &TruncationPolicy) -> Result<VerificationReport> {
    let start = Instant::now();
    let lhs = eval_beta_lhs(p, policy)?;
    let rhs = eval_beta_rhs(p)?;
    let mut r = VerificationReport::new(IdentityId::BetaIntegral, p, lhs.value, rhs)
        .with_constant((lhs.value / rhs).re)
        .with_quadrature("lhs_integral", lhs);
    match eval_beta_lhs_naive(p, policy) {
        Ok(naive) => {
            r = r
                .with_diagnostic("naive_form_rel_residual", rel_residual(naive.value, rhs))
                .with_diagnostic("naive_form_ratio", (naive.value / rhs).re);
        }
        Err(e) => r = r.with_note(format!("naive form not evaluated: {e}")),
    }
    Ok(r.with_wall_time(start.elapsed()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::seeded_rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn symmetric_point_holds() {
        let r = verify_pentagon_beta(&BetaParams::symmetric(), &TruncationPolicy::default()).unwrap();
        assert!(r.rel_residual < 1e-8, "{r:?}");
        assert!(r.pass);
    }

    #[test]
    fn complex_point_matches_reference() {
        // LHS/RHS = 1 to 15 digits at this point with mpmath quadrature.
        let p = BetaParams::new([c(0.1, 0.05), c(0.13, 0.0), c(0.2, 0.0)], [c(0.11, 0.0), c(0.2, -0.1)]).unwrap();
        let r = verify_pentagon_beta(&p, &TruncationPolicy::default()).unwrap();
        assert!(r.rel_residual < 1e-8, "{r:?}");
    }

    #[test]
    fn naive_form_fails() {
        let mut rng = seeded_rng(2);
        for _ in 0..3 {
            let p = BetaParams::sample(&mut rng);
            let r = verify_pentagon_beta(&p, &TruncationPolicy::default()).unwrap();
            assert!(r.pass);
            assert!(r.diagnostics["naive_form_rel_residual"] > 0.1, "{r:?}");
        }
    }

    #[test]
    fn pinch_rejected() {
        assert!(BetaParams::new([c(0.0, 0.0), c(0.1, 0.0), c(0.1, 0.0)], [c(0.1, 0.0), c(0.1, 0.0)]).is_err());
    }
}
