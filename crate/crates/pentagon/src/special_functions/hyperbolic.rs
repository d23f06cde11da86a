//! The hyperbolic gamma function γ⁽²⁾(u; ω₁, ω₂).

use std::f64::consts::PI;

use num_complex::Complex64;

use super::qpoch::log_qpoch_from_ln;
use super::types::{ModularPair, TruncationPolicy};
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// B₂,₂(u; ω) = u²/(ω₁ω₂) − u/ω₁ − u/ω₂ + ω₁/(6ω₂) + ω₂/(6ω₁) + 1/2.
pub fn bernoulli_b22(u: Complex64, omega: &ModularPair) -> Complex64 {
    bernoulli_b22_periods(u, omega.omega1(), omega.omega2())
}

/// B₂,₂ for an arbitrary nonzero period pair, including degenerate ones.
pub fn bernoulli_b22_periods(u: Complex64, w1: Complex64, w2: Complex64) -> Complex64 {
    u * u / (w1 * w2) - u / w1 - u / w2 + w1 / (6.0 * w2) + w2 / (6.0 * w1) + 0.5
}

/// ln γ⁽²⁾(u; ω) modulo 2πi.
///
/// γ⁽²⁾(u) = e^{−πi B₂,₂(u)/2} (e^{2πiu/ω₁} q̃; q̃)_∞ / (e^{2πiu/ω₂}; q)_∞ in the
/// ordering with Im(ω₁/ω₂) > 0. Far from the real axis one of the two
/// exponentials is huge; the inversion γ⁽²⁾(u)γ⁽²⁾(ω₁+ω₂−u) = 1 then gives an
/// equivalent product with small arguments, and the smaller one is used.
pub fn log_hyperbolic_gamma(
    u: Complex64,
    omega: &ModularPair,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    if omega.max_nome_modulus() > 1.0 - policy.modular_epsilon {
        return Err(Error::Domain {
            function: "hyperbolic_gamma",
            value: format!("(|q|, |q~|) = ({}, {})", omega.q().norm(), omega.q_dual().norm()),
            domain: "max(|q|, |q~|) <= 1 - modular_epsilon",
        });
    }
    let (w1, w2) = omega.canonical();
    let (ln_q, ln_qt) = (omega.ln_q(), omega.ln_q_dual());
    let b = bernoulli_b22(u, omega);
    let e1 = 2.0 * PI * I * u / w1;
    let e2 = 2.0 * PI * I * u / w2;

    let direct = (e1 + ln_qt, e2);
    let inverted = (-e1, ln_q - e2);
    let size = |p: (Complex64, Complex64)| p.0.re.max(p.1.re);
    let pole = |e: Error| match e {
        Error::Pole { .. } => Error::Pole {
            function: "hyperbolic_gamma",
            at: u.to_string(),
        },
        other => other,
    };
    if size(direct) <= size(inverted) {
        let num = log_qpoch_from_ln(direct.0, ln_qt, policy).map_err(pole)?;
        let den = log_qpoch_from_ln(direct.1, ln_q, policy).map_err(pole)?;
        Ok(-I * PI * b / 2.0 + num - den)
    } else {
        let num = log_qpoch_from_ln(inverted.0, ln_qt, policy).map_err(pole)?;
        let den = log_qpoch_from_ln(inverted.1, ln_q, policy).map_err(pole)?;
        Ok(I * PI * b / 2.0 - num + den)
    }
}

pub fn hyperbolic_gamma(
    u: Complex64,
    omega: &ModularPair,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    Ok(log_hyperbolic_gamma(u, omega, policy)?.exp())
}
