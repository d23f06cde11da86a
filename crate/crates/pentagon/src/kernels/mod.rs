//! The two-argument kernels B that enter the pentagon identities, and the
//! parameter sets on which each identity is evaluated.

mod params;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special_functions::{
    log_gamma, log_gamma_real, log_hyperbolic_gamma, log_qpoch_from_ln, ModularPair, Nome,
    TruncationPolicy,
};

pub use params::{BetaParams, GammaParams, HyperbolicParams, IndexParams, GENERICITY_GAP};

/// ln B_hyp(x, y) = ln γ⁽²⁾(x) + ln γ⁽²⁾(y) − ln γ⁽²⁾(x + y), modulo 2πi.
pub fn log_b_hyp(
    x: Complex64,
    y: Complex64,
    omega: &ModularPair,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    let named = |arg: &'static str, v: Complex64| {
        move |e: Error| match e {
            Error::Pole { .. } => Error::Pole {
                function: "b_hyp",
                at: format!("{arg} = {v}"),
            },
            other => other,
        }
    };
    let gx = log_hyperbolic_gamma(x, omega, policy).map_err(named("x", x))?;
    let gy = log_hyperbolic_gamma(y, omega, policy).map_err(named("y", y))?;
    let gxy = log_hyperbolic_gamma(x + y, omega, policy).map_err(named("x+y", x + y))?;
    Ok(gx + gy - gxy)
}

/// B_hyp(x, y) = γ⁽²⁾(x) γ⁽²⁾(y) / γ⁽²⁾(x + y).
pub fn b_hyp(
    x: Complex64,
    y: Complex64,
    omega: &ModularPair,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    Ok(log_b_hyp(x, y, omega, policy)?.exp())
}

/// ln of δ(x, N) = (q^{1+N/2}/x; q)_∞ / (q^{N/2} x; q)_∞.
///
/// This is the building block of the index kernel: b_idx(a, n; b, m) is
/// δ(a, n) δ(b, m) / δ(ab, n+m) times monomials.
pub fn log_delta_idx(x: Complex64, n: i64, q: Nome, policy: &TruncationPolicy) -> Result<Complex64> {
    if q.is_zero() {
        return Err(Error::Domain {
            function: "delta_idx",
            value: "0".into(),
            domain: "0 < |q| < 1",
        });
    }
    if x.norm() == 0.0 {
        return Err(Error::Pole {
            function: "delta_idx",
            at: "x = 0".into(),
        });
    }
    let ln_q = q.ln();
    let ln_x = x.ln();
    let half = 0.5 * n as f64;
    let num = log_qpoch_from_ln(ln_q * (1.0 + half) - ln_x, ln_q, policy);
    let den = log_qpoch_from_ln(ln_q * half + ln_x, ln_q, policy);
    let pole = |e: Error| match e {
        Error::Pole { .. } => Error::Pole {
            function: "delta_idx",
            at: format!("x = {x}, N = {n}"),
        },
        other => other,
    };
    // A vanishing numerator is a zero, not a pole; it has no finite logarithm
    // but the kernel value there is exactly 0.
    let den = den.map_err(pole)?;
    match num {
        Ok(v) => Ok(v - den),
        Err(Error::Pole { .. }) => Ok(Complex64::new(f64::NEG_INFINITY, 0.0)),
        Err(e) => Err(e),
    }
}

pub fn delta_idx(x: Complex64, n: i64, q: Nome, policy: &TruncationPolicy) -> Result<Complex64> {
    let l = log_delta_idx(x, n, q, policy)?;
    Ok(if l.re == f64::NEG_INFINITY {
        Complex64::new(0.0, 0.0)
    } else {
        l.exp()
    })
}

/// Index kernel B(a, n; b, m).
///
/// (q^{1+n/2}/a; q)(q^{1+m/2}/b; q)(q^{(n+m)/2} ab; q) over
/// (q^{n/2} a; q)(q^{m/2} b; q)(q^{1+(n+m)/2}/(ab); q), times a^{m/2} b^{n/2}
/// on principal branches. Equivalently δ(a,n) δ(b,m) / δ(ab,n+m) with the
/// same monomials.
pub fn b_idx(
    a: Complex64,
    n: i64,
    b: Complex64,
    m: i64,
    q: Nome,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    let da = log_delta_idx(a, n, q, policy)?;
    let db = log_delta_idx(b, m, q, policy)?;
    let dab = log_delta_idx(a * b, n + m, q, policy)?;
    if dab.re == f64::NEG_INFINITY {
        return Err(Error::Pole {
            function: "b_idx",
            at: format!("ab = {}, n+m = {}", a * b, n + m),
        });
    }
    let l = da + db - dab;
    if l.re == f64::NEG_INFINITY {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mono = a.ln() * (0.5 * m as f64) + b.ln() * (0.5 * n as f64);
    Ok((l + mono).exp())
}

/// ln|Γ(x)| and its sign, naming the factor in a pole error.
fn gamma_factor(x: f64, label: &'static str) -> Result<(f64, f64)> {
    log_gamma_real(x).map_err(|_| Error::Pole {
        function: "b_gamma_disc",
        at: format!("{label} = {x}"),
    })
}

/// Γ((N + x)/2) / Γ(1 + (N − x)/2), the discrete-spin gamma ratio.
///
/// b_gamma_disc(a, n; b, m) = G(2a, n) G(2b, m) / G(2a + 2b, n + m).
pub fn gamma_disc_ratio(x: f64, n: i64) -> Result<f64> {
    let nf = n as f64;
    let (ln_num, s_num) = gamma_factor(0.5 * (nf + x), "(N+x)/2")?;
    let (ln_den, s_den) = gamma_factor(1.0 + 0.5 * (nf - x), "1+(N-x)/2")?;
    Ok(s_num * s_den * (ln_num - ln_den).exp())
}

/// Discrete gamma kernel
/// Γ(a+n/2) Γ(b+m/2) Γ(1−a−b+(n+m)/2) / (Γ(1−a+n/2) Γ(1−b+m/2) Γ(a+b+(n+m)/2)).
pub fn b_gamma_disc(a: f64, n: i64, b: f64, m: i64) -> Result<f64> {
    let hn = 0.5 * n as f64;
    let hm = 0.5 * m as f64;
    let hs = hn + hm;
    // Grouped so that swapping (a, n) with (b, m) reproduces the same bits.
    let (la, sa) = gamma_factor(a + hn, "a+n/2")?;
    let (lb, sb) = gamma_factor(b + hm, "b+m/2")?;
    let ab = a + b;
    let (lc, sc) = gamma_factor(1.0 - ab + hs, "1-a-b+(n+m)/2")?;
    let (ld, sd) = gamma_factor(1.0 - a + hn, "1-a+n/2")?;
    let (le, se) = gamma_factor(1.0 - b + hm, "1-b+m/2")?;
    let (lf, sf) = gamma_factor(ab + hs, "a+b+(n+m)/2")?;
    let ln = ((la + lb) + lc) - ((ld + le) + lf);
    let sign = (sa * sb) * sc * (sd * se) * sf;
    Ok(sign * ln.exp())
}

/// Euler beta function Γ(x)Γ(y)/Γ(x+y) through complex log-gamma.
pub fn log_b_beta(x: Complex64, y: Complex64) -> Result<Complex64> {
    let named = |arg: &'static str, v: Complex64| {
        move |_| Error::Pole {
            function: "b_beta",
            at: format!("{arg} = {v}"),
        }
    };
    let lx = log_gamma(x).map_err(named("x", x))?;
    let ly = log_gamma(y).map_err(named("y", y))?;
    let lxy = log_gamma(x + y).map_err(named("x+y", x + y))?;
    Ok(lx + ly - lxy)
}

pub fn b_beta(x: Complex64, y: Complex64) -> Result<Complex64> {
    Ok(log_b_beta(x, y)?.exp())
}
