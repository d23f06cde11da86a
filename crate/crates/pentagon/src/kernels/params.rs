//! Balanced parameter points. Constructors take the free components and solve
//! the balancing condition for the last one; deserialization re-checks every
//! invariant so a hand-edited record cannot slip through.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special_functions::{ModularPair, Nome};

/// Minimum distance of a gamma argument from ℤ or ℤ + ½ for a generic point.
pub const GENERICITY_GAP: f64 = 1e-6;

/// Relative slack allowed when a loaded record is checked against its balancing condition.
const LOAD_TOLERANCE: f64 = 1e-12;

fn constraint(msg: impl Into<String>) -> Error {
    Error::Constraint(msg.into())
}

fn check_spins(label: &str, s: &[i64; 3]) -> Result<()> {
    if s.iter().sum::<i64>() != 0 {
        return Err(constraint(format!("spins {label} = {s:?} must sum to zero")));
    }
    Ok(())
}

fn sample_spins<R: Rng + ?Sized>(rng: &mut R) -> [i64; 3] {
    loop {
        let a = rng.gen_range(-2..=2);
        let b = rng.gen_range(-2..=2);
        let c = -a - b;
        if (-2..=2).contains(&c) {
            return [a, b, c];
        }
    }
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHyperbolic")]
pub struct HyperbolicParams {
    pub a: [Complex64; 3],
    pub b: [Complex64; 3],
    pub omega: ModularPair,
}

#[derive(Deserialize)]
struct RawHyperbolic {
    a: [Complex64; 3],
    b: [Complex64; 3],
    omega: ModularPair,
}

impl TryFrom<RawHyperbolic> for HyperbolicParams {
    type Error = Error;
    fn try_from(r: RawHyperbolic) -> Result<Self> {
        let p = HyperbolicParams {
            a: r.a,
            b: r.b,
            omega: r.omega,
        };
        let w = p.omega.sum();
        let total: Complex64 = p.a.iter().chain(p.b.iter()).sum();
        if (total - w).norm() > LOAD_TOLERANCE * w.norm().max(1.0) {
            return Err(constraint(format!(
                "hyperbolic balancing: sum(a)+sum(b) = {total}, expected omega1+omega2 = {w}"
            )));
        }
        p.check_separation()?;
        Ok(p)
    }
}

impl HyperbolicParams {
    /// Balanced point with b₃ = ω₁ + ω₂ − Σa − b₁ − b₂.
    pub fn balanced(a: [Complex64; 3], b12: [Complex64; 2], omega: ModularPair) -> Result<Self> {
        let b3 = omega.sum() - a.iter().sum::<Complex64>() - b12[0] - b12[1];
        let p = HyperbolicParams {
            a,
            b: [b12[0], b12[1], b3],
            omega,
        };
        p.check_separation()?;
        Ok(p)
    }

    /// The straight contour u ∈ iℝ separates the pole families of γ⁽²⁾(aᵢ+u)
    /// and γ⁽²⁾(bᵢ−u) when both periods and all parameters lie in the right
    /// half-plane; the pair sums must also satisfy 0 < Re((aᵢ+bⱼ)/(ω₁+ω₂)) < 1.
    fn check_separation(&self) -> Result<()> {
        let (w1, w2) = (self.omega.omega1(), self.omega.omega2());
        if w1.re <= 0.0 || w2.re <= 0.0 {
            return Err(constraint(format!(
                "periods ({w1}, {w2}) must have positive real parts for the imaginary-axis contour"
            )));
        }
        for (label, v) in [("a", &self.a), ("b", &self.b)] {
            for (i, x) in v.iter().enumerate() {
                if x.re <= 0.0 {
                    return Err(constraint(format!(
                        "Re {label}{} = {} must be positive (contour pinch)",
                        i + 1,
                        x.re
                    )));
                }
            }
        }
        let w = self.omega.sum();
        for (i, a) in self.a.iter().enumerate() {
            for (j, b) in self.b.iter().enumerate() {
                let r = ((a + b) / w).re;
                if !(r > 0.0 && r < 1.0) {
                    return Err(constraint(format!(
                        "Re((a{}+b{})/(omega1+omega2)) = {r} outside (0, 1)",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Random balanced point: ω₁ = 1, ω₂ in a box around 0.4 + 0.9i, and every
    /// parameter a small positive multiple of ω₁ + ω₂ plus a small imaginary part.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let w2 = Complex64::new(rng.gen_range(0.2..0.6), rng.gen_range(0.7..1.2));
            let Ok(omega) = ModularPair::new(Complex64::new(1.0, 0.0), w2) else {
                continue;
            };
            if let Some(p) = Self::sample_with_omega(rng, omega) {
                return p;
            }
        }
    }

    /// One attempt at a balanced point for fixed periods; `None` if the solved
    /// component falls outside the safe box.
    pub fn sample_with_omega<R: Rng + ?Sized>(rng: &mut R, omega: ModularPair) -> Option<Self> {
        let w = omega.sum();
        let draw = |rng: &mut R| {
            w * rng.gen_range(0.12..0.2) + Complex64::new(0.0, rng.gen_range(-0.05..0.05))
        };
        for _ in 0..64 {
            let a = [draw(rng), draw(rng), draw(rng)];
            let b12 = [draw(rng), draw(rng)];
            let b3 = w - a.iter().sum::<Complex64>() - b12[0] - b12[1];
            let c3 = (b3 / w).re;
            if !(0.08..=0.3).contains(&c3) {
                continue;
            }
            if let Ok(p) = Self::balanced(a, b12, omega) {
                return Some(p);
            }
        }
        None
    }
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawIndex")]
pub struct IndexParams {
    pub a: [Complex64; 3],
    pub b: [Complex64; 3],
    pub n: [i64; 3],
    pub m: [i64; 3],
    pub q: Nome,
}

#[derive(Deserialize)]
struct RawIndex {
    a: [Complex64; 3],
    b: [Complex64; 3],
    n: [i64; 3],
    m: [i64; 3],
    q: Nome,
}

impl TryFrom<RawIndex> for IndexParams {
    type Error = Error;
    fn try_from(r: RawIndex) -> Result<Self> {
        let p = IndexParams {
            a: r.a,
            b: r.b,
            n: r.n,
            m: r.m,
            q: r.q,
        };
        let half_ln_q = 0.5 * p.q.ln();
        for (label, v) in [("a", &p.a), ("b", &p.b)] {
            let s: Complex64 = v.iter().map(|x| x.ln()).sum();
            if (s - half_ln_q).norm() > LOAD_TOLERANCE * half_ln_q.norm().max(1.0) {
                return Err(constraint(format!(
                    "index balancing: product of {label} = {}, expected q^(1/2) = {}",
                    s.exp(),
                    half_ln_q.exp()
                )));
            }
        }
        p.check()?;
        Ok(p)
    }
}

impl IndexParams {
    /// Balanced point with a₃ = q^{1/2}/(a₁a₂), b₃ likewise, n₃ = −n₁−n₂, m₃ = −m₁−m₂.
    ///
    /// The third component is formed in log space, ln a₃ = ½ ln q − ln a₁ − ln a₂,
    /// so Σ ln aᵢ = ½ ln q holds on principal branches and the kernel monomials
    /// combine without a sign ambiguity.
    pub fn balanced(
        a12: [Complex64; 2],
        b12: [Complex64; 2],
        n12: [i64; 2],
        m12: [i64; 2],
        q: Nome,
    ) -> Result<Self> {
        let half_ln_q = 0.5 * q.ln();
        let a3 = (half_ln_q - a12[0].ln() - a12[1].ln()).exp();
        let b3 = (half_ln_q - b12[0].ln() - b12[1].ln()).exp();
        let p = IndexParams {
            a: [a12[0], a12[1], a3],
            b: [b12[0], b12[1], b3],
            n: [n12[0], n12[1], -n12[0] - n12[1]],
            m: [m12[0], m12[1], -m12[0] - m12[1]],
            q,
        };
        p.check()?;
        for (label, v) in [("a", &p.a), ("b", &p.b)] {
            let s: Complex64 = v.iter().map(|x| x.ln()).sum();
            if (s - half_ln_q).norm() > 1e-14 * half_ln_q.norm().max(1.0) {
                return Err(constraint(format!(
                    "phases of {label} wrap around the branch cut"
                )));
            }
        }
        Ok(p)
    }

    /// Every spin N = nᵢ + m occurs in the m-sum, and the pole set of
    /// δ(x, N) is x ∈ q^{−|N|/2 − k}; the unit circle separates the families
    /// exactly when |aᵢ|, |bᵢ| < 1. Positive real parts keep principal square
    /// roots away from the cut.
    fn check(&self) -> Result<()> {
        if self.q.is_zero() {
            return Err(constraint("q must be nonzero"));
        }
        check_spins("n", &self.n)?;
        check_spins("m", &self.m)?;
        for (label, v) in [("a", &self.a), ("b", &self.b)] {
            for (i, x) in v.iter().enumerate() {
                if !(x.norm() < 1.0) {
                    return Err(constraint(format!(
                        "|{label}{}| = {} must be below 1 (contour separation)",
                        i + 1,
                        x.norm()
                    )));
                }
                if x.re <= 0.0 {
                    return Err(constraint(format!(
                        "Re {label}{} = {} must be positive",
                        i + 1,
                        x.re
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::sample_with_spins(rng, true)
    }

    /// q ∈ [0.2, 0.5]; a₁, a₂, b₁, b₂ scattered around q^{1/6} with small
    /// phases; points with any |aᵢ| or |bᵢ| ≥ 0.95 are redrawn.
    pub fn sample_with_spins<R: Rng + ?Sized>(rng: &mut R, spins: bool) -> Self {
        loop {
            let qv = rng.gen_range(0.2..0.5);
            let q = Nome::real(qv).expect("sampled nome inside the unit disk");
            let centre = qv.powf(1.0 / 6.0);
            let draw = |rng: &mut R| {
                Complex64::from_polar(centre * rng.gen_range(0.85..1.15), rng.gen_range(-0.2..0.2))
            };
            let a12 = [draw(rng), draw(rng)];
            let b12 = [draw(rng), draw(rng)];
            let (n, m) = if spins {
                (sample_spins(rng), sample_spins(rng))
            } else {
                ([0; 3], [0; 3])
            };
            let Ok(p) = Self::balanced(a12, b12, [n[0], n[1]], [m[0], m[1]], q) else {
                continue;
            };
            if p.a.iter().chain(p.b.iter()).all(|x| x.norm() < 0.95) {
                return p;
            }
        }
    }
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGamma")]
pub struct GammaParams {
    pub alpha: [f64; 3],
    pub beta: [f64; 3],
    pub n: [i64; 3],
    pub m: [i64; 3],
}

#[derive(Deserialize)]
struct RawGamma {
    alpha: [f64; 3],
    beta: [f64; 3],
    n: [i64; 3],
    m: [i64; 3],
}

impl TryFrom<RawGamma> for GammaParams {
    type Error = Error;
    fn try_from(r: RawGamma) -> Result<Self> {
        let p = GammaParams {
            alpha: r.alpha,
            beta: r.beta,
            n: r.n,
            m: r.m,
        };
        for (label, v) in [("alpha", &p.alpha), ("beta", &p.beta)] {
            let s: f64 = v.iter().sum();
            if (s - 0.5).abs() > LOAD_TOLERANCE {
                return Err(constraint(format!(
                    "gamma balancing: sum({label}) = {s}, expected 1/2"
                )));
            }
        }
        p.check()?;
        Ok(p)
    }
}

/// Distance from x to the nearest point of ½ℤ.
fn half_integer_gap(x: f64) -> f64 {
    let y = 2.0 * x;
    0.5 * (y - y.round()).abs()
}

impl GammaParams {
    /// Balanced point with α₃ = ½ − α₁ − α₂, β₃ = ½ − β₁ − β₂ and zero-sum spins.
    pub fn balanced(alpha12: [f64; 2], beta12: [f64; 2], n12: [i64; 2], m12: [i64; 2]) -> Result<Self> {
        let p = GammaParams {
            alpha: [alpha12[0], alpha12[1], 0.5 - alpha12[0] - alpha12[1]],
            beta: [beta12[0], beta12[1], 0.5 - beta12[0] - beta12[1]],
            n: [n12[0], n12[1], -n12[0] - n12[1]],
            m: [m12[0], m12[1], -m12[0] - m12[1]],
        };
        p.check()?;
        Ok(p)
    }

    /// The point αᵢ = βᵢ = 1/6 with zero spins.
    pub fn symmetric() -> Self {
        let s = 1.0 / 6.0;
        GammaParams {
            alpha: [s; 3],
            beta: [s; 3],
            n: [0; 3],
            m: [0; 3],
        }
    }

    fn check(&self) -> Result<()> {
        check_spins("n", &self.n)?;
        check_spins("m", &self.m)?;
        for (label, v) in [("alpha", &self.alpha), ("beta", &self.beta)] {
            for (i, &x) in v.iter().enumerate() {
                if !(x > 0.0) {
                    return Err(constraint(format!("{label}{} = {x} must be positive", i + 1)));
                }
                if half_integer_gap(x) < GENERICITY_GAP {
                    return Err(constraint(format!(
                        "{label}{} = {x} is not generic (in Z/2)",
                        i + 1
                    )));
                }
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                let s = self.alpha[i] + self.beta[j] + 0.5 * (self.n[i] + self.m[j]) as f64;
                if half_integer_gap(s) < GENERICITY_GAP {
                    return Err(constraint(format!(
                        "alpha{}+beta{}+(n{}+m{})/2 = {s} is not generic (in Z/2)",
                        i + 1,
                        j + 1,
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::sample_with_spins(rng, true)
    }

    /// αᵢ, βᵢ ∈ [0.05, 0.4] after balancing; pair sums kept 0.02 away from ½.
    pub fn sample_with_spins<R: Rng + ?Sized>(rng: &mut R, spins: bool) -> Self {
        loop {
            let alpha12 = [rng.gen_range(0.05..0.4), rng.gen_range(0.05..0.4)];
            let beta12 = [rng.gen_range(0.05..0.4), rng.gen_range(0.05..0.4)];
            let (n, m) = if spins {
                (sample_spins(rng), sample_spins(rng))
            } else {
                ([0; 3], [0; 3])
            };
            let Ok(p) = Self::balanced(alpha12, beta12, [n[0], n[1]], [m[0], m[1]]) else {
                continue;
            };
            let in_box = |x: &f64| (0.05..=0.4).contains(x);
            if !(p.alpha.iter().all(in_box) && p.beta.iter().all(in_box)) {
                continue;
            }
            let clear = p
                .alpha
                .iter()
                .all(|a| p.beta.iter().all(|b| (a + b - 0.5).abs() >= 0.02));
            if clear {
                return p;
            }
        }
    }
}

// ---------------------------------------------------------------------------

/// Parameters of the beta-function pentagon.
///
/// The identity that holds is the image of the hyperbolic one as ω₂ → ∞ with
/// its balancing intact: the third kernel becomes B(a₃ + u, c) with
/// c = a₁ + a₂ + b₁ + b₂, so the free data are a[3] and b[2].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBeta")]
pub struct BetaParams {
    pub a: [Complex64; 3],
    pub b: [Complex64; 2],
}

#[derive(Deserialize)]
struct RawBeta {
    a: [Complex64; 3],
    b: [Complex64; 2],
}

impl TryFrom<RawBeta> for BetaParams {
    type Error = Error;
    fn try_from(r: RawBeta) -> Result<Self> {
        BetaParams::new(r.a, r.b)
    }
}

impl BetaParams {
    pub fn new(a: [Complex64; 3], b: [Complex64; 2]) -> Result<Self> {
        let p = BetaParams { a, b };
        for (i, x) in a.iter().enumerate() {
            if x.re <= 0.0 {
                return Err(constraint(format!("Re a{} = {} must be positive (contour pinch)", i + 1, x.re)));
            }
        }
        for (i, x) in b.iter().enumerate() {
            if x.re <= 0.0 {
                return Err(constraint(format!("Re b{} = {} must be positive (contour pinch)", i + 1, x.re)));
            }
        }
        Ok(p)
    }

    /// Second argument of the third kernel, a₁ + a₂ + b₁ + b₂.
    pub fn c(&self) -> Complex64 {
        self.a[0] + self.a[1] + self.b[0] + self.b[1]
    }

    /// b₃ = 1 − Σa − b₁ − b₂, the third parameter under the naive balancing Σ(aᵢ + bᵢ) = 1.
    pub fn naive_b3(&self) -> Complex64 {
        Complex64::new(1.0, 0.0) - self.a.iter().sum::<Complex64>() - self.b[0] - self.b[1]
    }

    pub fn symmetric() -> Self {
        let s = Complex64::new(1.0 / 12.0, 0.0);
        BetaParams { a: [s; 3], b: [s; 2] }
    }

    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let draw = |rng: &mut R| Complex64::new(rng.gen_range(0.05..0.3), rng.gen_range(-0.1..0.1));
        let a = [draw(rng), draw(rng), draw(rng)];
        let b = [draw(rng), draw(rng)];
        BetaParams::new(a, b).expect("sampled box has positive real parts")
    }
}
