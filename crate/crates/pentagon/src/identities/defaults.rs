//! Default residual targets, one row per identity. Bump the version when a
//! target changes so stored reports can be matched to the table they used.

use super::IdentityId;
use crate::special_functions::TruncationPolicy;

pub const DEFAULTS_VERSION: u32 = 1;

/// Schema version written into every report record.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

pub const TARGETS: [(IdentityId, f64); 9] = [
    // Exact rational arithmetic: only a zero difference passes.
    (IdentityId::Operator, f64::MIN_POSITIVE),
    (IdentityId::Classical, 1e-12),
    (IdentityId::Hyperbolic, 1e-8),
    (IdentityId::Index, 1e-7),
    (IdentityId::GammaSumIntegral, 1e-6),
    (IdentityId::BetaIntegral, 1e-8),
    (IdentityId::Equivalence, 1e-10),
    // Limit studies pass on monotone convergence; these bound the last distance.
    (IdentityId::LimitQTo1, 1e-1),
    (IdentityId::LimitOmega, 1e-1),
];

pub fn target(id: IdentityId) -> f64 {
    TARGETS
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, v)| *v)
        .expect("every identity has a default target")
}

/// q values for the index-to-gamma limit study.
pub const DEFAULT_Q_SEQUENCE: [f64; 3] = [0.9, 0.95, 0.99];

/// |ω₂| values for the ω₂ → ∞ study.
pub const DEFAULT_T_SEQUENCE: [f64; 3] = [5.0, 10.0, 20.0];

/// Arguments z for the ω₂ → ∞ study.
pub const DEFAULT_OMEGA_ARGUMENTS: [(f64, f64); 3] = [(0.3, 0.0), (0.5, 0.2), (0.8, 0.0)];

/// Looser controls for the q → 1 study.
///
/// Distances there are of order 1 − q, so eight-digit quadrature and a
/// window of 64 are ample, and they keep q = 0.99 affordable.
pub fn limit_study_policy(base: &TruncationPolicy) -> TruncationPolicy {
    TruncationPolicy {
        quadrature_rel_tol: base.quadrature_rel_tol.max(1e-8),
        quadrature_abs_tol: base.quadrature_abs_tol.max(1e-14),
        sum_tail_tol: base.sum_tail_tol.max(1e-6),
        sum_window_max: base.sum_window_max.min(64).max(base.sum_window_start),
        ..*base
    }
}
