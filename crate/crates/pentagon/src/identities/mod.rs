//! Left- and right-hand sides of each pentagon identity, residual reports,
//! and the two limit studies connecting the families.

mod beta;
mod classical;
pub mod defaults;
mod gamma;
mod hyperbolic;
mod index;
mod limits;
mod operator;

use std::collections::BTreeMap;
use std::time::Duration;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::integrators::QuadratureResult;
use crate::special_functions::TruncationPolicy;

pub use beta::{eval_beta_lhs, eval_beta_lhs_naive, eval_beta_rhs, verify_pentagon_beta};
pub use classical::{classical_residual, verify_classical_pentagon};
pub use gamma::{
    equivalence_check_gamma_rhs, eval_gamma_lhs, eval_gamma_lhs_both, eval_gamma_lhs_terms, eval_gamma_rhs,
    gamma_integrand_log, verify_pentagon_gamma, GammaLhs, GammaRhsForm, POLE_PROXIMITY,
};
pub use hyperbolic::{eval_hyperbolic_lhs, eval_hyperbolic_rhs, hyperbolic_integrand, verify_pentagon_hyperbolic};
pub use index::{
    eval_index_delta_sum, eval_index_lhs, eval_index_rhs, index_kernel_constant, verify_pentagon_index, CircleRule,
    IndexRhsForm,
};
pub use limits::{
    fitted_order, limit_study_b_hyp, limit_study_omega, limit_study_q_to_1, omega_limit_formula,
    q_to_1_probe, ConvergenceRow, ConvergenceTable, LimitKind,
};
pub use operator::verify_operator_pentagon;

/// Floor on the residual normalisation.
pub const RESIDUAL_EPSILON: f64 = 1e-300;

/// Residuals at or below this are treated as equal when checking stability
/// under doubled truncation; double-precision roundoff fluctuates freely there.
pub const ROUNDOFF_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IdentityId {
    Operator,
    Classical,
    Hyperbolic,
    Index,
    GammaSumIntegral,
    BetaIntegral,
    Equivalence,
    #[serde(rename = "LIMIT_Q_TO_1")]
    LimitQTo1,
    LimitOmega,
}

impl IdentityId {
    pub const VERIFIABLE: [IdentityId; 7] = [
        IdentityId::Operator,
        IdentityId::Classical,
        IdentityId::Hyperbolic,
        IdentityId::Index,
        IdentityId::GammaSumIntegral,
        IdentityId::BetaIntegral,
        IdentityId::Equivalence,
    ];
}

/// |lhs − rhs| / max(|lhs|, |rhs|, ε).
pub fn rel_residual(lhs: Complex64, rhs: Complex64) -> f64 {
    let scale = lhs.norm().max(rhs.norm()).max(RESIDUAL_EPSILON);
    (lhs - rhs).norm() / scale
}

/// Outcome of checking one identity at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity_id: IdentityId,
    pub parameters: serde_json::Value,
    pub lhs: Complex64,
    pub rhs: Complex64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs_alternate: Option<Complex64>,
    pub abs_residual: f64,
    pub rel_residual: f64,
    /// Real part of the fitted c in lhs = c·rhs for the reference right-hand side.
    #[serde(default)]
    pub constant_fit: Option<f64>,
    pub target: f64,
    pub pass: bool,
    #[serde(default)]
    pub truncation_diagnostics: BTreeMap<String, QuadratureResult>,
    /// Scalar side results: ratios against alternative forms, fitted exponents.
    #[serde(default)]
    pub diagnostics: BTreeMap<String, f64>,
    #[serde(default)]
    pub notes: Vec<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerificationReport {
    pub fn new<P: Serialize>(id: IdentityId, params: &P, lhs: Complex64, rhs: Complex64) -> Self {
        let mut r = VerificationReport {
            identity_id: id,
            parameters: serde_json::to_value(params).unwrap_or(serde_json::Value::Null),
            lhs,
            rhs,
            rhs_alternate: None,
            abs_residual: (lhs - rhs).norm(),
            rel_residual: rel_residual(lhs, rhs),
            constant_fit: None,
            target: defaults::target(id),
            pass: false,
            truncation_diagnostics: BTreeMap::new(),
            diagnostics: BTreeMap::new(),
            notes: Vec::new(),
            wall_time: Duration::ZERO,
        };
        r.evaluate();
        r
    }

    /// Recompute `pass`: residual below target and every engine converged.
    pub fn evaluate(&mut self) {
        let converged = self.truncation_diagnostics.values().all(|q| q.converged);
        self.pass = self.rel_residual.is_finite() && self.rel_residual < self.target && converged;
    }

    pub fn with_target(mut self, target: f64) -> Self {
        self.target = target;
        self.evaluate();
        self
    }

    pub fn with_alternate(mut self, rhs: Complex64) -> Self {
        self.rhs_alternate = Some(rhs);
        self
    }

    pub fn with_constant(mut self, c: f64) -> Self {
        self.constant_fit = Some(c);
        self
    }

    pub fn with_quadrature(mut self, key: &str, q: QuadratureResult) -> Self {
        self.truncation_diagnostics.insert(key.to_string(), q);
        self.evaluate();
        self
    }

    /// Records a scalar diagnostic; non-finite values are dropped with a note,
    /// since the record format has no representation for them.
    pub fn with_diagnostic(mut self, key: &str, v: f64) -> Self {
        if v.is_finite() {
            self.diagnostics.insert(key.to_string(), v);
        } else {
            self.notes.push(format!("{key} was not finite"));
        }
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn with_wall_time(mut self, t: Duration) -> Self {
        self.wall_time = t;
        self
    }
}

/// Re-runs a verification with every truncation control doubled and records
/// whether the residual stayed within 2× (above the roundoff floor).
pub fn with_doubled_policy<F>(verify: F, policy: &TruncationPolicy) -> Result<VerificationReport>
where
    F: Fn(&TruncationPolicy) -> Result<VerificationReport>,
{
    let base = verify(policy)?;
    let doubled = verify(&policy.doubled())?;
    let stable = residual_stable(base.rel_residual, doubled.rel_residual);
    let wall = base.wall_time + doubled.wall_time;
    let mut r = base
        .with_diagnostic("rel_residual_doubled", doubled.rel_residual)
        .with_diagnostic("stable_under_doubling", if stable { 1.0 } else { 0.0 })
        .with_wall_time(wall);
    if !stable {
        r = r.with_note("residual changed by more than 2x under doubled truncation");
        r.pass = false;
    }
    Ok(r)
}

/// r_doubled ≤ 2·max(r_base, roundoff floor).
pub fn residual_stable(base: f64, doubled: f64) -> bool {
    doubled <= 2.0 * base.max(ROUNDOFF_FLOOR)
}

/// The documented generator for every random sweep: ChaCha8 seeded from a u64.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
