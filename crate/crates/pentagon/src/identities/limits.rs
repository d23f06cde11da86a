use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::index::{eval_index_delta_sum, eval_index_rhs, CircleRule, IndexRhsForm};
use super::gamma::{eval_gamma_rhs, GammaRhsForm};
use crate::error::{Error, Result};
use crate::kernels::{b_beta, log_b_hyp, GammaParams, IndexParams};
use crate::special_functions::{
    log_gamma, log_hyperbolic_gamma, qpoch_ratio_regularized, ModularPair, Nome, TruncationPolicy,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LimitKind {
    #[serde(rename = "Q_TO_1")]
    QTo1,
    Omega,
}

/// One step along a limit sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    /// q for the q → 1 study, T = |ω₂| for the ω study.
    pub parameter: f64,
    pub value: Complex64,
    pub target: Complex64,
    /// |value − target| / |target|.
    pub distance: f64,
    #[serde(default)]
    pub extra: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub kind: LimitKind,
    pub label: String,
    pub rows: Vec<ConvergenceRow>,
    /// Distances strictly decreasing along the sequence.
    pub monotone: bool,
    /// Slope of ln(distance) against ln(1 − q) or ln(1/T).
    pub fitted_order: Option<f64>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl ConvergenceTable {
    fn new(kind: LimitKind, label: String, rows: Vec<ConvergenceRow>, notes: Vec<String>) -> Self {
        let monotone = rows.windows(2).all(|w| w[1].distance < w[0].distance);
        let xs: Vec<f64> = rows.iter().map(|r| small_parameter(kind, r.parameter)).collect();
        let ds: Vec<f64> = rows.iter().map(|r| r.distance).collect();
        ConvergenceTable {
            kind,
            label,
            fitted_order: fitted_order(&xs, &ds),
            monotone,
            rows,
            notes,
        }
    }

    /// Distance at the last step of the sequence.
    pub fn final_distance(&self) -> Option<f64> {
        self.rows.last().map(|r| r.distance)
    }
}

/// The quantity that tends to zero along the sequence.
fn small_parameter(kind: LimitKind, p: f64) -> f64 {
    match kind {
        LimitKind::QTo1 => 1.0 - p,
        LimitKind::Omega => 1.0 / p,
    }
}

/// Least-squares slope of ln d against ln x; None with fewer than two usable points.
pub fn fitted_order(xs: &[f64], ds: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ds)
        .filter(|(x, d)| **x > 0.0 && **d > 0.0 && d.is_finite())
        .map(|(x, d)| (x.ln(), d.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn row(parameter: f64, value: Complex64, target: Complex64) -> ConvergenceRow {
    ConvergenceRow {
        parameter,
        value,
        target,
        distance: (value - target).norm() / target.norm(),
        extra: BTreeMap::new(),
    }
}

/// (q^α; q)_∞ / (q^β; q)_∞ · (1 − q)^{α−β} against its limit Γ(β)/Γ(α).
pub fn q_to_1_probe(alpha: f64, beta: f64, qs: &[f64], policy: &TruncationPolicy) -> Result<ConvergenceTable> {
    let target = (log_gamma(Complex64::new(beta, 0.0))? - log_gamma(Complex64::new(alpha, 0.0))?).exp();
    let rows = qs
        .iter()
        .map(|&q| {
            let v = qpoch_ratio_regularized(Complex64::new(alpha, 0.0), Complex64::new(beta, 0.0), Nome::real(q)?, policy)?;
            Ok(row(q, v, target))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable::new(LimitKind::QTo1, format!("probe alpha={alpha} beta={beta}"), rows, Vec::new()))
}

/// The index point aᵢ = q^{αᵢ}, bᵢ = q^{βᵢ} with the gamma point's spins.
fn index_point(p: &GammaParams, q: f64) -> Result<IndexParams> {
    let nome = Nome::real(q)?;
    let pow = |s: f64| Complex64::new(q.powf(s), 0.0);
    IndexParams::balanced(
        [pow(p.alpha[0]), pow(p.alpha[1])],
        [pow(p.beta[0]), pow(p.beta[1])],
        [p.n[0], p.n[1]],
        [p.m[0], p.m[1]],
        nome,
    )
}

/// Both sides of the stripped index identity, regularised, against the gamma values.
///
/// With aᵢ = q^{αᵢ}, bᵢ = q^{βᵢ} every δ factor behaves like a gamma ratio times
/// a power of 1 − q. The δ-only sum times (1 − q)⁴/(−ln q) and the constant-1
/// nine-factor product times (1 − q)³ both tend to the gamma nine-factor
/// product. `value` is the regularised sum; the extras carry the regularised
/// right side and the naive nine-factor product, which tends to twice the
/// gamma value at zero spins.
pub fn limit_study_q_to_1(p: &GammaParams, qs: &[f64], policy: &TruncationPolicy) -> Result<ConvergenceTable> {
    let target = Complex64::new(eval_gamma_rhs(p, GammaRhsForm::NineFactor)?, 0.0);
    let mut notes = vec![
        "value: delta-only index sum times (1-q)^4/(-ln q); target: gamma nine-factor product with constant 1".to_string(),
    ];
    let mut rows = Vec::with_capacity(qs.len());
    for &q in qs {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Domain {
                function: "limit_study_q_to_1",
                value: q.to_string(),
                domain: "0 < q < 1",
            });
        }
        if q > 1.0 - policy.modular_epsilon {
            notes.push(format!("q = {q} exceeds the safety bound 1 - {}", policy.modular_epsilon));
        }
        let ip = index_point(p, q)?;
        let lhs = eval_index_delta_sum(&ip, CircleRule::GaussKronrod, policy)?;
        let rhs = eval_index_rhs(&ip, IndexRhsForm::NineFactorCorrected, policy)?;
        let naive = eval_index_rhs(&ip, IndexRhsForm::NineFactor, policy)?;
        let k = 1.0 - q;
        let lhs_reg = lhs.value * (k.powi(4) / -q.ln());
        let rhs_reg = rhs * k.powi(3);
        let mut r = row(q, lhs_reg, target);
        r.extra.insert("rhs_distance".into(), (rhs_reg - target).norm() / target.norm());
        r.extra.insert("naive_rhs_ratio".into(), (naive * k.powi(3) / target).re);
        r.extra.insert("sum_abs_error".into(), lhs.abs_error_estimate * k.powi(4) / -q.ln() / target.norm());
        if !lhs.converged {
            notes.push(format!("index sum at q = {q} did not reach its tolerance"));
        }
        rows.push(r);
    }
    Ok(ConvergenceTable::new(LimitKind::QTo1, "index to gamma".into(), rows, notes))
}

/// (ω₂/(2πω₁))^{1/2 − z/ω₁} Γ(z/ω₁)/√(2π), the ω₂ → ∞ form of γ⁽²⁾(z; ω₁, ω₂).
pub fn omega_limit_formula(z: Complex64, omega1: Complex64, omega2: Complex64) -> Result<Complex64> {
    let x = z / omega1;
    let base = omega2 / (2.0 * PI * omega1);
    Ok(((0.5 - x) * base.ln() + log_gamma(x)?).exp() / (2.0 * PI).sqrt())
}

fn omega_pair(t: f64) -> Result<ModularPair> {
    ModularPair::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, t))
}

fn check_fixed(z: Complex64, ts: &[f64]) -> Result<()> {
    let t_min = ts.iter().cloned().fold(f64::INFINITY, f64::min);
    if z.norm() >= 0.5 * t_min {
        return Err(Error::Constraint(format!(
            "|z| = {} must stay below half of the smallest |omega2| = {t_min}",
            z.norm()
        )));
    }
    Ok(())
}

/// γ⁽²⁾(z; 1, iT) against the limit formula along the given T.
///
/// The extra `naive_ratio` compares against the same formula with 1/(2π)
/// in place of 1/√(2π); it tends to √(2π), not 1.
pub fn limit_study_omega(z: Complex64, ts: &[f64], policy: &TruncationPolicy) -> Result<ConvergenceTable> {
    check_fixed(z, ts)?;
    let mut rows = Vec::with_capacity(ts.len());
    for &t in ts {
        let w = omega_pair(t)?;
        let v = log_hyperbolic_gamma(z, &w, policy)?.exp();
        let target = omega_limit_formula(z, w.omega1(), w.omega2())?;
        let mut r = row(t, v, target);
        r.extra.insert("naive_ratio".into(), (v / (target * (2.0 * PI).sqrt() / (2.0 * PI))).norm());
        rows.push(r);
    }
    let notes = vec!["omega1 = 1, omega2 = iT; target normalised with 1/sqrt(2 pi)".to_string()];
    Ok(ConvergenceTable::new(LimitKind::Omega, format!("gamma2 at z={z}"), rows, notes))
}

/// B_hyp(x, y; 1, iT) · 2π/√ω₂ against the Euler beta function B(x, y).
pub fn limit_study_b_hyp(x: Complex64, y: Complex64, ts: &[f64], policy: &TruncationPolicy) -> Result<ConvergenceTable> {
    check_fixed(x + y, ts)?;
    let target = b_beta(x, y)?;
    let mut rows = Vec::with_capacity(ts.len());
    for &t in ts {
        let w = omega_pair(t)?;
        let v = log_b_hyp(x, y, &w, policy)?.exp() * (2.0 * PI) / w.omega2().sqrt();
        rows.push(row(t, v, target));
    }
    let notes = vec!["B_hyp rescaled by 2 pi / sqrt(omega2)".to_string()];
    Ok(ConvergenceTable::new(LimitKind::Omega, format!("b_hyp at x={x}, y={y}"), rows, notes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::defaults::{limit_study_policy, DEFAULT_Q_SEQUENCE};
    use crate::special_functions::gamma;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn order_fit_recovers_power() {
        let xs = [0.1, 0.05, 0.01];
        let ds: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powi(2)).collect();
        assert!((fitted_order(&xs, &ds).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(fitted_order(&[0.1], &[1.0]), None);
    }

    #[test]
    fn telescoping_probe_is_exact() {
        let t = q_to_1_probe(1.0, 2.0, &[0.5, 0.9, 0.99], &TruncationPolicy::default()).unwrap();
        for r in &t.rows {
            assert_eq!(r.value, c(1.0, 0.0));
        }
    }

    #[test]
    fn half_probe_converges_first_order() {
        let t = q_to_1_probe(0.5, 1.5, &[0.9, 0.95, 0.99, 0.999], &TruncationPolicy::default()).unwrap();
        assert!((t.rows[0].target - 0.5).norm() < 1e-15);
        assert!(t.monotone, "{t:?}");
        assert!(t.fitted_order.unwrap() >= 0.9, "{t:?}");
    }

    #[test]
    fn omega_study_converges() {
        let pol = TruncationPolicy::default();
        for z in [c(0.3, 0.0), c(0.5, 0.2), c(0.8, 0.0)] {
            let t = limit_study_omega(z, &[5.0, 10.0, 20.0], &pol).unwrap();
            assert!(t.monotone, "{t:?}");
            let last = t.rows.last().unwrap();
            assert!((last.extra["naive_ratio"] - (2.0 * PI).sqrt()).abs() < 0.1, "{t:?}");
        }
    }

    #[test]
    fn omega_study_rejects_growing_argument() {
        let z = c(0.5, 2.5); // about (ω₁ + ω₂)/2 for T = 5
        assert!(limit_study_omega(z, &[5.0, 10.0], &TruncationPolicy::default()).is_err());
    }

    #[test]
    fn b_hyp_tends_to_beta() {
        let t = limit_study_b_hyp(c(0.3, 0.0), c(0.4, 0.1), &[5.0, 10.0, 20.0], &TruncationPolicy::default()).unwrap();
        assert!(t.monotone, "{t:?}");
        assert!(t.final_distance().unwrap() < 0.1, "{t:?}");
    }

    #[test]
    fn limit_formula_at_one() {
        // z = ω₁ = 1 and ω₂ = 2π: the power is 1, Γ(1) = 1.
        let v = omega_limit_formula(c(1.0, 0.0), c(1.0, 0.0), c(2.0 * PI, 0.0)).unwrap();
        assert!((v - 1.0 / (2.0 * PI).sqrt()).norm() < 1e-15);
        let g = gamma(c(0.5, 0.0)).unwrap();
        assert!((g.re - PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn index_sum_tends_to_gamma_values() {
        let pol = limit_study_policy(&TruncationPolicy::default());
        let p = GammaParams::symmetric();
        let t = limit_study_q_to_1(&p, &DEFAULT_Q_SEQUENCE, &pol).unwrap();
        assert!(t.monotone, "{t:?}");
        let order = t.fitted_order.unwrap();
        assert!((order - 1.0).abs() < 0.2, "{t:?}");
        for r in &t.rows {
            assert!(r.extra["rhs_distance"] < r.distance);
            // The naive nine-factor form heads for twice the gamma value.
            assert!(r.extra["naive_rhs_ratio"] > 1.4);
        }
    }

    #[test]
    fn index_sum_with_spins_tends_to_gamma_values() {
        let pol = limit_study_policy(&TruncationPolicy::default());
        let p = GammaParams::balanced([0.12, 0.2], [0.17, 0.09], [1, -1], [0, 1]).unwrap();
        let t = limit_study_q_to_1(&p, &[0.9, 0.95], &pol).unwrap();
        assert!(t.monotone, "{t:?}");
    }
}
