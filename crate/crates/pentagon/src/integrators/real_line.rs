use num_complex::Complex64;

use super::{gk, QuadratureResult};
use crate::error::{Error, Result};
use crate::special_functions::TruncationPolicy;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RealLineOptions {
    /// Width L of the map u = L·tan θ; estimated from samples when absent.
    pub scale: Option<f64>,
    /// The caller promises f(−u) = conj f(u), so only u ≥ 0 is sampled.
    pub conjugate_symmetric: bool,
}

/// Smallest power of two beyond which |f| stays under a tenth of its sampled peak.
pub fn estimate_scale<F: Fn(f64) -> Complex64>(f: &F) -> (f64, usize) {
    let exps: Vec<i32> = (-6..=12).collect();
    let mut mags = Vec::with_capacity(exps.len());
    let mut peak = f(0.0).norm();
    for &k in &exps {
        let s = 2f64.powi(k);
        let m = f(s).norm().max(f(-s).norm());
        let m = if m.is_finite() { m } else { 0.0 };
        peak = peak.max(m);
        mags.push(m);
    }
    let evals = 1 + 2 * exps.len();
    if !(peak > 0.0) {
        return (1.0, evals);
    }
    let mut scale = 2f64.powi(exps[0]);
    for (i, &k) in exps.iter().enumerate() {
        if mags[i] >= 0.1 * peak {
            scale = 2f64.powi(k);
        }
    }
    (scale, evals)
}

/// Local decay exponents below this distance from an integer are taken as exact.
const INTEGER_SNAP: f64 = 0.1;

/// Algebraic tail ∫_U^∞ f from a three-term fit Σⱼ cⱼ u^{−p−j} through f at U, 2U, 4U.
///
/// p is read off the outermost pair of samples (8U against 4U) and snapped to
/// an integer when close. The fit's misprediction of f(8U) sets the error; an
/// integrand whose far samples do not follow the model (oscillating phase, say)
/// gets no tail correction and an error equal to the one-term tail. Returns
/// (tail, error estimate, p).
fn algebraic_tail<F: Fn(f64) -> Complex64>(f: &F, edge: f64) -> Result<(Complex64, f64, f64)> {
    let samples: Vec<Complex64> = (0..4).map(|k| f(edge * 2f64.powi(k))).collect();
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("real-line tail samples"));
    }
    let zero = Complex64::new(0.0, 0.0);
    if samples[0].norm() == 0.0 {
        return Ok((zero, 0.0, f64::INFINITY));
    }
    if samples[1..].iter().any(|v| v.norm() == 0.0) {
        // Faster than any power: the tail is below f(U)·U/60.
        return Ok((zero, samples[0].norm() * edge / 60.0, f64::INFINITY));
    }
    let raw = (samples[2].norm() / samples[3].norm()).log2();
    if raw <= 1.0 {
        return Err(Error::NonConvergent {
            what: "real-line integral",
            detail: format!("integrand decays like |u|^-{raw:.3} at |u| = {edge:e}"),
        });
    }
    let p = if (raw - raw.round()).abs() < INTEGER_SNAP { raw.round() } else { raw };
    let one_term = samples[0] * edge / (p - 1.0);

    // Unknowns cⱼ·U^{−p−j}; row k evaluates the basis at 2ᵏU.
    let basis = |k: i32, j: i32| Complex64::new(2f64.powf(-(k as f64) * (p + j as f64)), 0.0);
    let mut m = [[zero; 4]; 3];
    for k in 0..3 {
        for j in 0..3 {
            m[k][j] = basis(k as i32, j as i32);
        }
        m[k][3] = samples[k];
    }
    let coef = solve3(m);
    let (tail, misfit) = match coef {
        Some(c) => {
            let tail: Complex64 = (0..3).map(|j| c[j] * edge / (p + j as f64 - 1.0)).sum();
            let predicted: Complex64 = (0..3).map(|j| c[j] * basis(3, j as i32)).sum();
            (tail, (predicted - samples[3]).norm() / samples[3].norm())
        }
        None => (one_term, f64::INFINITY),
    };
    if misfit < 0.5 {
        Ok((tail, misfit * tail.norm(), p))
    } else {
        Ok((zero, one_term.norm(), p))
    }
}

/// Gaussian elimination with partial pivoting on a 3×4 augmented matrix.
fn solve3(mut m: [[Complex64; 4]; 3]) -> Option<[Complex64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))?;
        if m[pivot][col].norm() == 0.0 {
            return None;
        }
        m.swap(col, pivot);
        for row in col + 1..3 {
            let factor = m[row][col] / m[col][col];
            for k in col..4 {
                let v = m[col][k];
                m[row][k] -= factor * v;
            }
        }
    }
    let mut x = [Complex64::new(0.0, 0.0); 3];
    for row in (0..3).rev() {
        let mut acc = m[row][3];
        for k in row + 1..3 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

/// ∫_{−∞}^{∞} f(u) du.
pub fn integrate_real_line<F: Fn(f64) -> Complex64>(
    f: F,
    policy: &TruncationPolicy,
) -> Result<QuadratureResult> {
    integrate_real_line_with(f, policy, &RealLineOptions::default())
}

/// ∫_{−∞}^{∞} f(u) du on the compactified variable u = L·tan θ.
///
/// The core |u| ≤ tail_factor·L is integrated adaptively in θ; beyond it a
/// power-law fit supplies the tail, which is reported separately. Integrands
/// with faster-than-algebraic decay get a negligible fitted tail.
pub fn integrate_real_line_with<F: Fn(f64) -> Complex64>(
    f: F,
    policy: &TruncationPolicy,
    opts: &RealLineOptions,
) -> Result<QuadratureResult> {
    let (scale, mut evaluations) = match opts.scale {
        Some(s) if s > 0.0 && s.is_finite() => (s, 0),
        Some(s) => {
            return Err(Error::Policy(format!("quadrature scale must be positive, got {s}")))
        }
        None => estimate_scale(&f),
    };
    let theta_max = policy.tail_factor.atan();
    let edge = scale * policy.tail_factor;
    let g = |t: f64| {
        let c = t.cos();
        f(scale * t.tan()) * (scale / (c * c))
    };
    let (lo, pieces) = if opts.conjugate_symmetric {
        (0.0, 8)
    } else {
        (-theta_max, 16)
    };
    let core = gk::adaptive(
        &g,
        lo,
        theta_max,
        pieces,
        policy.quadrature_abs_tol,
        policy.quadrature_rel_tol,
        policy.max_refinements,
    )?;
    evaluations += core.evaluations;

    let (right, right_err, p_right) = algebraic_tail(&f, edge)?;
    evaluations += 4;
    let (value, tail, tail_err, p) = if opts.conjugate_symmetric {
        let v = core.value + right;
        (
            Complex64::new(2.0 * v.re, 0.0),
            2.0 * right.norm(),
            2.0 * right_err,
            p_right,
        )
    } else {
        let (left, left_err, p_left) = algebraic_tail(&|u| f(-u), edge)?;
        evaluations += 4;
        (
            core.value + right + left,
            right.norm() + left.norm(),
            right_err + left_err,
            p_right.min(p_left),
        )
    };
    let core_err = if opts.conjugate_symmetric {
        2.0 * core.error
    } else {
        core.error
    };
    let error = core_err + tail_err;
    let tol = policy.quadrature_abs_tol.max(policy.quadrature_rel_tol * value.norm());
    Ok(QuadratureResult {
        value,
        abs_error_estimate: error,
        evaluations,
        refinements_used: core.refinements,
        tail_estimate: tail,
        converged: core.converged && tail_err <= tol.max(core_err),
        decay_exponent: p.is_finite().then_some(p),
        scale: Some(scale),
    })
}
