//! q-Pochhammer symbols (a; q)_∞ and (a; q)_n.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gamma::ln1p;
use super::types::{Nome, TruncationPolicy};
use crate::error::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
/// A factor 1 − x with |1 − x| below this is treated as an exact zero.
pub const VANISHING_FACTOR: f64 = 1e-13;

/// e^w − 1 without cancellation near w = 0.
pub fn expm1(w: Complex64) -> Complex64 {
    let s = (0.5 * w.im).sin();
    Complex64::new(w.re.exp_m1() * w.im.cos() - 2.0 * s * s, w.re.exp() * w.im.sin())
}

/// ln(1 − e^ℓ), defined modulo 2πi, accurate for any size of e^ℓ.
pub fn ln_one_minus_exp(l: Complex64) -> Complex64 {
    if l.re < -1.0 {
        ln1p(-l.exp())
    } else if l.re > 30.0 {
        l + Complex64::new(0.0, PI) + ln1p(-(-l).exp())
    } else {
        (-expm1(l)).ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PochhammerValue {
    pub value: Complex64,
    /// Factors multiplied explicitly.
    pub terms: usize,
    /// Bound on |ln| of the neglected factors after the first-order tail correction.
    pub tail_bound: f64,
}

/// (a; q)_∞ = Π_{k≥0} (1 − a qᵏ) with the truncation metadata.
///
/// The product stops at the first k with |a qᵏ| below the tail tolerance and is
/// multiplied by exp(−a qᵏ/(1 − q)), the first-order value of the remaining factors.
pub fn qpoch_inf_detailed(
    a: Complex64,
    q: Nome,
    policy: &TruncationPolicy,
) -> Result<PochhammerValue> {
    let qv = q.value();
    if q.is_zero() {
        return Ok(PochhammerValue {
            value: ONE - a,
            terms: 1,
            tail_bound: 0.0,
        });
    }
    let mut prod = ONE;
    let mut t = a;
    let mut k = 0usize;
    while t.norm() >= policy.product_tail_tol {
        if k >= policy.series_max_terms {
            return Err(Error::NonConvergent {
                what: "q-Pochhammer product",
                detail: format!("|a q^k| = {:e} after {k} factors", t.norm()),
            });
        }
        prod *= ONE - t;
        t *= qv;
        k += 1;
    }
    let qn = qv.norm();
    let tail = t / (ONE - qv);
    Ok(PochhammerValue {
        value: prod * (-tail).exp(),
        terms: k,
        tail_bound: t.norm_sqr() / ((1.0 - qn) * (1.0 - qn * qn)),
    })
}

/// (a; q)_∞ = Π_{k≥0} (1 − a qᵏ).
pub fn qpoch_inf(a: Complex64, q: Nome, policy: &TruncationPolicy) -> Result<Complex64> {
    Ok(qpoch_inf_detailed(a, q, policy)?.value)
}

/// The product starting at exponent one, Π_{i≥1}(1 − x qⁱ) = (xq; q)_∞.
pub fn qpoch_from_one(x: Complex64, q: Nome, policy: &TruncationPolicy) -> Result<Complex64> {
    qpoch_inf(x * q.value(), q, policy)
}

/// Finite product (a; q)_n.
pub fn qpoch_finite(a: Complex64, q: Complex64, n: usize) -> Complex64 {
    let mut prod = ONE;
    let mut t = a;
    for _ in 0..n {
        prod *= ONE - t;
        t *= q;
    }
    prod
}

/// ln (a; q)_∞ modulo 2πi, with a = e^{ln_a} and q = e^{ln_q}.
///
/// Working from logarithms keeps arguments such as |a| ~ e^{100} usable, which
/// the hyperbolic gamma function needs far along its integration contour.
/// A factor that vanishes within [`VANISHING_FACTOR`] is reported as a pole.
pub fn log_qpoch_from_ln(
    ln_a: Complex64,
    ln_q: Complex64,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    if ln_q.re >= 0.0 {
        return Err(Error::Domain {
            function: "log_qpoch_from_ln",
            value: ln_q.exp().to_string(),
            domain: "|q| < 1",
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut l = ln_a;
    let mut k = 0usize;
    while l.re >= SERIES_SWITCH {
        if k >= policy.series_max_terms {
            return Err(Error::NonConvergent {
                what: "q-Pochhammer product",
                detail: format!("|a q^k| = e^{} after {k} factors", l.re),
            });
        }
        if l.re.abs() < 1e-6 && (ONE - l.exp()).norm() < VANISHING_FACTOR {
            return Err(Error::Pole {
                function: "q-Pochhammer factor",
                at: format!("a q^{k} = {}", l.exp()),
            });
        }
        acc += ln_one_minus_exp(l);
        l += ln_q;
        k += 1;
    }
    Ok(acc + log_qpoch_small(l.exp(), ln_q, policy)?)
}

/// Products switch to the series once |a qᵏ| drops below e^{SERIES_SWITCH} = 1/2.
const SERIES_SWITCH: f64 = -std::f64::consts::LN_2;

/// ln (y; q)_∞ = −Σ_{r≥1} yʳ / (r (1 − qʳ)) for |y| ≤ 1/2.
///
/// Near q = 1 this needs a few dozen terms where the product needs thousands.
fn log_qpoch_small(y: Complex64, ln_q: Complex64, policy: &TruncationPolicy) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut yr = y;
    let bound = y.norm();
    let mut r = 1usize;
    // |term| ≤ |y|ʳ/(r(1 − |q|)); stop when that bound is below the tolerance.
    let gap = -expm1(Complex64::new(ln_q.re, 0.0)).re;
    while yr.norm() >= policy.product_tail_tol * r as f64 * gap {
        if r >= policy.series_max_terms {
            return Err(Error::NonConvergent {
                what: "q-Pochhammer series",
                detail: format!("|y| = {bound} after {r} terms"),
            });
        }
        acc -= yr / (-expm1(ln_q * r as f64) * r as f64);
        yr *= y;
        r += 1;
    }
    Ok(acc)
}

/// (q^α; q)_∞ / (q^β; q)_∞ · (1 − q)^{α−β}, evaluated in log space.
///
/// When β − α is an integer the ratio is a finite product and is computed as
/// Π (1 − q^{·})/(1 − q), so telescoping cases such as (α, β) = (1, 2) are exact.
pub fn qpoch_ratio_regularized(
    alpha: Complex64,
    beta: Complex64,
    q: Nome,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    if q.is_zero() {
        return Err(Error::Domain {
            function: "qpoch_ratio_regularized",
            value: "0".into(),
            domain: "0 < |q| < 1",
        });
    }
    let qv = q.value();
    let ln_q = qv.ln();
    // 1 − q^s: exact powers for integer s so telescoping cancels bit for bit.
    let one_minus_pow = |s: Complex64| -> Complex64 {
        if s.im == 0.0 && s.re == s.re.round() && s.re.abs() < 64.0 {
            ONE - qv.powi(s.re as i32)
        } else {
            -expm1(s * ln_q)
        }
    };
    let d = beta - alpha;
    if d.im == 0.0 && d.re == d.re.round() {
        let n = d.re.abs() as usize;
        let lower = if d.re >= 0.0 { alpha } else { beta };
        let mut prod = ONE;
        for k in 0..n {
            let f = one_minus_pow(lower + k as f64) / (ONE - qv);
            if d.re < 0.0 && f.norm() < VANISHING_FACTOR {
                return Err(Error::Pole {
                    function: "qpoch_ratio_regularized",
                    at: format!("beta = {beta}"),
                });
            }
            prod *= f;
        }
        return Ok(if d.re >= 0.0 { prod } else { prod.inv() });
    }
    let ln_tol = policy.product_tail_tol.ln();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut la = alpha * ln_q;
    let mut lb = beta * ln_q;
    let mut k = 0usize;
    while la.re >= ln_tol || lb.re >= ln_tol {
        if k >= policy.series_max_terms {
            return Err(Error::NonConvergent {
                what: "regularized q-Pochhammer ratio",
                detail: format!("{k} factors"),
            });
        }
        let den = -expm1(lb);
        if den.norm() < VANISHING_FACTOR {
            return Err(Error::Pole {
                function: "qpoch_ratio_regularized",
                at: format!("beta = {beta}"),
            });
        }
        let num = -expm1(la);
        if num.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        acc += num.ln() - den.ln();
        la += ln_q;
        lb += ln_q;
        k += 1;
    }
    acc -= (la.exp() - lb.exp()) / (ONE - qv);
    acc += (alpha - beta) * ln1p(-qv);
    Ok(acc.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn pol() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn trivial_cases() {
        let q = Nome::real(0.3).unwrap();
        assert_eq!(qpoch_inf(c(0.0), q, &pol()).unwrap(), c(1.0));
        let q0 = Nome::real(0.0).unwrap();
        let a = Complex64::new(0.3, -0.7);
        assert_eq!(qpoch_inf(a, q0, &pol()).unwrap(), ONE - a);
    }

    #[test]
    fn euler_function_at_half() {
        let q = Nome::real(0.5).unwrap();
        let v = qpoch_inf(c(0.5), q, &pol()).unwrap();
        assert_relative_eq!(v.re, 0.288_788_095_086_602_4, max_relative = 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn shifted_convention() {
        let q = Nome::real(0.4).unwrap();
        let x = Complex64::new(0.2, 0.1);
        let full = qpoch_inf(x, q, &pol()).unwrap();
        let from_one = qpoch_from_one(x, q, &pol()).unwrap();
        assert!((full - (ONE - x) * from_one).norm() < 1e-15);
    }

    #[test]
    fn log_form_matches_product() {
        let q = Nome::new(Complex64::new(0.3, 0.4)).unwrap();
        let a = Complex64::new(0.7, -0.2);
        let direct = qpoch_inf(a, q, &pol()).unwrap();
        let via_log = log_qpoch_from_ln(a.ln(), q.ln(), &pol()).unwrap().exp();
        assert!((direct - via_log).norm() < 1e-14 * direct.norm());
    }

    #[test]
    fn log_form_huge_argument() {
        // (a;q)_∞ = (1 − a)(aq;q)_∞ with |a| = e^{60}
        let ln_q = Complex64::new(-0.9, 0.3);
        let ln_a = Complex64::new(60.0, 1.0);
        let p = pol();
        let lhs = log_qpoch_from_ln(ln_a, ln_q, &p).unwrap();
        let rhs = ln_one_minus_exp(ln_a) + log_qpoch_from_ln(ln_a + ln_q, ln_q, &p).unwrap();
        let d = lhs - rhs;
        let wrapped = Complex64::new(d.re, d.im - (d.im / (2.0 * PI)).round() * 2.0 * PI);
        assert!(wrapped.norm() < 1e-12, "{d}");
    }

    #[test]
    fn log_form_detects_pole() {
        let ln_q = c(0.5f64.ln());
        // a q^2 = 1
        let ln_a = -2.0 * ln_q;
        assert!(matches!(
            log_qpoch_from_ln(ln_a, ln_q, &pol()),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn finite_product() {
        let q = c(0.5);
        assert_eq!(qpoch_finite(c(0.5), q, 0), ONE);
        assert_relative_eq!(qpoch_finite(c(0.5), q, 2).re, 0.5 * 0.75);
    }

    #[test]
    fn regularized_ratio_telescoping() {
        for qq in [0.1, 0.5, 0.9, 0.99, 0.999] {
            let q = Nome::real(qq).unwrap();
            let v = qpoch_ratio_regularized(c(1.0), c(2.0), q, &pol()).unwrap();
            assert_eq!(v, ONE);
            let v = qpoch_ratio_regularized(c(0.3), c(0.3), q, &pol()).unwrap();
            assert_eq!(v, ONE);
        }
    }

    #[test]
    fn regularized_ratio_half_integer() {
        let q = Nome::real(0.999).unwrap();
        let v = qpoch_ratio_regularized(c(0.5), c(1.5), q, &pol()).unwrap();
        assert_relative_eq!(v.re, 1.0 / (1.0 + 0.999f64.sqrt()), max_relative = 1e-14);
        assert!((v.re - 0.5).abs() < 1e-2);
    }

    #[test]
    fn regularized_ratio_generic_matches_products() {
        let q = Nome::real(0.6).unwrap();
        let (a, b) = (0.3, 0.75);
        let direct = qpoch_inf(c(0.6f64.powf(a)), q, &pol()).unwrap()
            / qpoch_inf(c(0.6f64.powf(b)), q, &pol()).unwrap()
            * 0.4f64.powf(a - b);
        let v = qpoch_ratio_regularized(c(a), c(b), q, &pol()).unwrap();
        assert!((v - direct).norm() < 1e-14);
    }

    #[test]
    fn regularized_ratio_pole() {
        let q = Nome::real(0.5).unwrap();
        assert!(qpoch_ratio_regularized(c(0.5), c(-1.0), q, &pol()).is_err());
        assert!(qpoch_ratio_regularized(c(2.0), c(0.0), q, &pol()).is_err());
    }
}
