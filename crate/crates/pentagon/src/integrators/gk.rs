//! Globally adaptive Gauss–Kronrod (7/15) on a finite interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rule<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Result<Piece> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let d = h * XGK[j];
        let s = f(c - d) + f(c + d);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    let value = k * h;
    if !value.is_finite() {
        return Err(Error::NonFinite("Gauss-Kronrod rule"));
    }
    Ok(Piece {
        a,
        b,
        value,
        error: ((k - g) * h).norm(),
    })
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct GkOutcome {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
    pub refinements: usize,
    pub converged: bool,
}

/// Bisects the piece with the largest |K15 − G7| until the summed estimate is
/// below max(abs_tol, rel_tol·|value|) or the bisection budget runs out.
pub(crate) fn adaptive<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    initial_pieces: usize,
    abs_tol: f64,
    rel_tol: f64,
    max_refinements: usize,
) -> Result<GkOutcome> {
    let n = initial_pieces.max(1);
    let mut heap = BinaryHeap::with_capacity(n + max_refinements + 1);
    let step = (b - a) / n as f64;
    for i in 0..n {
        let lo = a + step * i as f64;
        let hi = if i + 1 == n { b } else { lo + step };
        heap.push(rule(f, lo, hi)?);
    }
    let mut evaluations = 15 * n;
    let mut refinements = 0;
    loop {
        // Re-sum every pass so the estimate never drifts from the pieces.
        let mut value = Complex64::new(0.0, 0.0);
        let mut error = 0.0;
        for p in heap.iter() {
            value += p.value;
            error += p.error;
        }
        let tol = abs_tol.max(rel_tol * value.norm());
        if error <= tol || refinements >= max_refinements {
            return Ok(GkOutcome {
                value,
                error,
                evaluations,
                refinements,
                converged: error <= tol,
            });
        }
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            return Ok(GkOutcome {
                value,
                error,
                evaluations,
                refinements,
                converged: false,
            });
        }
        heap.push(rule(f, worst.a, mid)?);
        heap.push(rule(f, mid, worst.b)?);
        evaluations += 30;
        refinements += 1;
    }
}
