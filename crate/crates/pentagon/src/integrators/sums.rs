use num_complex::Complex64;
use rayon::prelude::*;

use super::QuadratureResult;
use crate::error::{Error, Result};
use crate::special_functions::TruncationPolicy;

/// One summand together with the cost and error of producing it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumTerm {
    pub value: Complex64,
    pub abs_error: f64,
    pub evaluations: usize,
}

impl From<Complex64> for SumTerm {
    fn from(value: Complex64) -> Self {
        SumTerm {
            value,
            abs_error: 0.0,
            evaluations: 1,
        }
    }
}

/// Σ_{m∈ℤ} term(m) for terms decaying at least like |m|^{−p}, p > 1.
pub fn sum_over_integers<F>(term: F, policy: &TruncationPolicy) -> Result<QuadratureResult>
where
    F: Fn(i64) -> Complex64 + Sync,
{
    sum_over_integers_detailed(|m| Ok(SumTerm::from(term(m))), policy)
}

struct Estimate {
    value: Complex64,
    error: f64,
}

/// Exponent r of the tail S(M) − S ~ M^{−r} implied by one block ratio, snapped
/// to the nearest integer when within 0.25 of it.
fn ratio_exponent(ratio: f64) -> (f64, bool) {
    let r = -ratio.log2();
    if (r - r.round()).abs() < 0.25 {
        (r.round(), true)
    } else {
        (r, false)
    }
}

/// Richardson table on partial sums S(M₀2ᵏ) = S + c₀M^{−r} + c₁M^{−r−1} + …
fn richardson(partials: &[Complex64], r: f64) -> Option<Estimate> {
    let levels = partials.len();
    if levels < 3 || r <= 0.0 {
        return None;
    }
    let order = (levels - 1).min(4);
    let mut table: Vec<Vec<Complex64>> = partials.iter().map(|&s| vec![s]).collect();
    for j in 1..levels {
        for i in 1..=order.min(j) {
            let f = 2f64.powf(r + (i - 1) as f64);
            let v = table[j][i - 1] + (table[j][i - 1] - table[j - 1][i - 1]) / (f - 1.0);
            table[j].push(v);
        }
    }
    let last = &table[levels - 1];
    let value = last[order];
    let mut error = (value - last[order - 1]).norm();
    if table[levels - 2].len() > order {
        error = error.max((value - table[levels - 2][order]).norm());
    }
    Some(Estimate { value, error })
}

/// Symmetric partial sums over |m| ≤ M with M doubling from `sum_window_start`.
///
/// Each doubling compares two tail models: geometric decay of the window
/// increments, and an algebraic expansion in 1/M removed by Richardson
/// extrapolation. The algebraic model is used only once two successive
/// increment ratios point to the same integer exponent. The model with the
/// smaller self-estimated error is reported. `decay_exponent` is p from a fit
/// |t(±M)| ~ M^{−p} over the last doubling. Terms inside one window are
/// evaluated in parallel and summed in increasing m, so results do not depend
/// on thread scheduling.
pub fn sum_over_integers_detailed<F>(term: F, policy: &TruncationPolicy) -> Result<QuadratureResult>
where
    F: Fn(i64) -> Result<SumTerm> + Sync,
{
    let eval_block = |ms: Vec<i64>| -> Result<(SumTerm, f64)> {
        let edge = ms.iter().map(|m| m.abs()).max().unwrap_or(0);
        let terms: Vec<(i64, SumTerm)> = ms
            .into_par_iter()
            .map(|m| term(m).map(|t| (m, t)))
            .collect::<Result<_>>()?;
        let mut acc = SumTerm {
            value: Complex64::new(0.0, 0.0),
            abs_error: 0.0,
            evaluations: 0,
        };
        let mut edge_mag = 0.0;
        for (m, t) in terms {
            if !t.value.is_finite() {
                return Err(Error::NonFinite("sum_over_integers term"));
            }
            acc.value += t.value;
            acc.abs_error += t.abs_error;
            acc.evaluations += t.evaluations;
            if m.abs() == edge {
                edge_mag += t.value.norm();
            }
        }
        Ok((acc, edge_mag))
    };
    let m0 = policy.sum_window_start.max(1);
    let (first, first_edge) = eval_block((-m0..=m0).collect())?;
    let mut partials = vec![first.value];
    let mut edges = vec![first_edge];
    let mut term_error = first.abs_error;
    let mut evaluations = first.evaluations;
    let mut window = m0;
    let mut growing = 0;
    let mut previous_exponent: Option<f64> = None;
    let mut best: Option<Estimate> = None;

    loop {
        let next = window * 2;
        if next > policy.sum_window_max {
            break;
        }
        let ms: Vec<i64> = (-next..-window).chain(window + 1..=next).collect();
        let (block, edge) = eval_block(ms)?;
        term_error += block.abs_error;
        evaluations += block.evaluations;
        let s = *partials.last().unwrap() + block.value;
        partials.push(s);
        edges.push(edge);
        window = next;

        let k = partials.len() - 1;
        let b_last = (partials[k] - partials[k - 1]).norm();
        let tol = policy.sum_tail_tol * s.norm();
        if b_last == 0.0 || (k == 1 && b_last <= 1e-3 * tol) {
            best = Some(Estimate { value: s, error: b_last });
            break;
        }
        if k == 1 {
            continue;
        }
        let b_prev = (partials[k - 1] - partials[k - 2]).norm();
        let rho = b_last / b_prev;
        if rho >= 1.0 {
            growing += 1;
            if growing >= 2 {
                return Err(Error::Divergent);
            }
            previous_exponent = None;
            continue;
        }
        growing = 0;
        let geometric = (rho < 0.5).then(|| Estimate {
            value: s,
            error: b_last * rho / (1.0 - rho),
        });
        let (r, snapped) = ratio_exponent(rho);
        let consistent = snapped && previous_exponent == Some(r);
        previous_exponent = snapped.then_some(r);
        let algebraic = if consistent { richardson(&partials, r) } else { None };
        let pick = match (geometric, algebraic) {
            (Some(g), Some(a)) => {
                if g.error <= a.error {
                    g
                } else {
                    a
                }
            }
            (Some(g), None) => g,
            (None, Some(a)) => a,
            (None, None) => continue,
        };
        let done = pick.error <= tol;
        best = Some(pick);
        if done {
            break;
        }
    }

    let last = *partials.last().unwrap();
    let est = best.unwrap_or(Estimate {
        value: last,
        error: f64::INFINITY,
    });
    let n = edges.len();
    let p = if n >= 2 && edges[n - 1] > 0.0 && edges[n - 2] > 0.0 {
        Some((edges[n - 2] / edges[n - 1]).log2())
    } else {
        None
    };
    let tol = policy.sum_tail_tol * est.value.norm();
    Ok(QuadratureResult {
        value: est.value,
        abs_error_estimate: est.error + term_error,
        evaluations,
        refinements_used: partials.len() - 1,
        tail_estimate: (est.value - last).norm(),
        converged: est.error <= tol,
        decay_exponent: p,
        scale: Some(window as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pol() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn geometric_two_sided() {
        let r = sum_over_integers(|m| c(0.5f64.powi(m.abs() as i32)), &pol()).unwrap();
        assert!((r.value.re - 3.0).abs() < 1e-14, "{r:?}");
        assert!(r.converged);
    }

    #[test]
    fn delta() {
        let r = sum_over_integers(|m| c(if m == 0 { 1.0 } else { 0.0 }), &pol()).unwrap();
        assert_eq!(r.value, c(1.0));
        assert!(r.converged);
    }

    #[test]
    fn lorentzian_coth() {
        let exact = PI / PI.tanh();
        let r = sum_over_integers(|m| c(1.0 / (1.0 + (m * m) as f64)), &pol()).unwrap();
        assert!((r.value.re - exact).abs() < 1e-10 * exact, "{r:?}");
        assert!((r.value.re - exact).abs() <= 3.0 * r.abs_error_estimate);
        assert!((r.decay_exponent.unwrap() - 2.0).abs() < 1e-4);
        assert!(r.tail_estimate > 1e-4);
    }

    #[test]
    fn cubic_decay_with_sign() {
        // Σ (−1)^m/(1+|m|)³ over ℤ = 2·(3/4)ζ(3) − 1
        let zeta3 = 1.202_056_903_159_594_3;
        let exact = 1.0 - 2.0 * (1.0 - 0.75 * zeta3);
        let r = sum_over_integers(
            |m| c((if m % 2 == 0 { 1.0 } else { -1.0 }) / (1.0 + m.abs() as f64).powi(3)),
            &pol(),
        )
        .unwrap();
        assert!((r.value.re - exact).abs() < 1e-10, "{r:?} vs {exact}");
    }

    #[test]
    fn divergence_detected() {
        assert!(matches!(
            sum_over_integers(|m| c(1.0 + m.abs() as f64), &pol()),
            Err(Error::Divergent)
        ));
    }

    #[test]
    fn detailed_accumulates_term_errors() {
        let r = sum_over_integers_detailed(
            |m| {
                Ok(SumTerm {
                    value: c(0.25f64.powi(m.abs() as i32)),
                    abs_error: 1e-16,
                    evaluations: 10,
                })
            },
            &pol(),
        )
        .unwrap();
        assert!((r.value.re - 5.0 / 3.0).abs() < 1e-14);
        assert_eq!(r.evaluations % 10, 0);
        assert!(r.abs_error_estimate >= 1e-16 * 17.0);
    }
}
