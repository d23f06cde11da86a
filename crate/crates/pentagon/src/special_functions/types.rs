use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Quasi-period pair (ω₁, ω₂).
///
/// Any pair with Im(ω₁/ω₂) ≠ 0 is accepted. The hyperbolic gamma function is
/// symmetric in its two periods, so evaluation always uses the ordering with
/// Im(ω₁/ω₂) > 0, where both nomes lie inside the unit disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPair", into = "RawPair")]
pub struct ModularPair {
    omega1: Complex64,
    omega2: Complex64,
    w1: Complex64,
    w2: Complex64,
    ln_q: Complex64,
    ln_qt: Complex64,
}

#[derive(Serialize, Deserialize)]
struct RawPair {
    omega1: Complex64,
    omega2: Complex64,
}

impl TryFrom<RawPair> for ModularPair {
    type Error = Error;
    fn try_from(r: RawPair) -> Result<Self> {
        ModularPair::new(r.omega1, r.omega2)
    }
}

impl From<ModularPair> for RawPair {
    fn from(p: ModularPair) -> Self {
        RawPair {
            omega1: p.omega1,
            omega2: p.omega2,
        }
    }
}

impl ModularPair {
    pub fn new(omega1: Complex64, omega2: Complex64) -> Result<Self> {
        if omega1 == Complex64::new(0.0, 0.0) || omega2 == Complex64::new(0.0, 0.0) {
            return Err(Error::Constraint("quasi-periods must be nonzero".into()));
        }
        if !(omega1.is_finite() && omega2.is_finite()) {
            return Err(Error::Constraint("quasi-periods must be finite".into()));
        }
        let tau = omega1 / omega2;
        if tau.im == 0.0 {
            return Err(Error::Constraint(format!(
                "omega1/omega2 = {tau} is real; the nomes sit on the unit circle"
            )));
        }
        let (w1, w2) = if tau.im > 0.0 {
            (omega1, omega2)
        } else {
            (omega2, omega1)
        };
        Ok(ModularPair {
            omega1,
            omega2,
            w1,
            w2,
            ln_q: 2.0 * PI * I * w1 / w2,
            ln_qt: -2.0 * PI * I * w2 / w1,
        })
    }

    pub fn omega1(&self) -> Complex64 {
        self.omega1
    }

    pub fn omega2(&self) -> Complex64 {
        self.omega2
    }

    /// The pair reordered so that Im(ω₁/ω₂) > 0.
    pub fn canonical(&self) -> (Complex64, Complex64) {
        (self.w1, self.w2)
    }

    pub fn is_swapped(&self) -> bool {
        self.w1 != self.omega1
    }

    pub fn swapped(&self) -> Self {
        ModularPair::new(self.omega2, self.omega1).expect("swap preserves validity")
    }

    pub fn sum(&self) -> Complex64 {
        self.omega1 + self.omega2
    }

    /// q = exp(2πi ω₁/ω₂) in the canonical ordering.
    pub fn q(&self) -> Complex64 {
        self.ln_q.exp()
    }

    /// q̃ = exp(−2πi ω₂/ω₁) in the canonical ordering.
    pub fn q_dual(&self) -> Complex64 {
        self.ln_qt.exp()
    }

    pub fn ln_q(&self) -> Complex64 {
        self.ln_q
    }

    pub fn ln_q_dual(&self) -> Complex64 {
        self.ln_qt
    }

    /// Largest of |q| and |q̃|.
    pub fn max_nome_modulus(&self) -> f64 {
        self.ln_q.re.exp().max(self.ln_qt.re.exp())
    }
}

/// A nome with |q| < 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Complex64", into = "Complex64")]
pub struct Nome(Complex64);

impl Nome {
    pub fn new(q: Complex64) -> Result<Self> {
        if !q.is_finite() || q.norm() >= 1.0 {
            return Err(Error::Domain {
                function: "Nome::new",
                value: q.to_string(),
                domain: "|q| < 1",
            });
        }
        Ok(Nome(q))
    }

    pub fn real(q: f64) -> Result<Self> {
        Self::new(Complex64::new(q, 0.0))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.norm_sqr() == 0.0
    }

    /// Principal q^s; requires q ≠ 0.
    pub fn pow(&self, s: f64) -> Complex64 {
        (self.0.ln() * s).exp()
    }

    pub fn ln(&self) -> Complex64 {
        self.0.ln()
    }
}

impl TryFrom<Complex64> for Nome {
    type Error = Error;
    fn try_from(q: Complex64) -> Result<Self> {
        Nome::new(q)
    }
}

impl From<Nome> for Complex64 {
    fn from(n: Nome) -> Self {
        n.0
    }
}

/// Cutoffs and tolerances shared by all engines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    /// Infinite products stop once |a qᵏ| drops below this.
    pub product_tail_tol: f64,
    /// Hard cap on the number of product or series terms.
    pub series_max_terms: usize,
    pub quadrature_abs_tol: f64,
    pub quadrature_rel_tol: f64,
    /// First symmetric window |m| ≤ M for sums over the integers.
    pub sum_window_start: i64,
    /// Largest window the sum engine may reach.
    pub sum_window_max: i64,
    pub sum_tail_tol: f64,
    /// Bisection budget for adaptive quadrature.
    pub max_refinements: usize,
    pub circle_points_start: usize,
    pub circle_points_max: usize,
    /// Real-line quadrature covers |u| ≤ tail_factor·L and fits the rest.
    pub tail_factor: f64,
    /// Hyperbolic gamma refuses pairs with max(|q|, |q̃|) > 1 − modular_epsilon.
    pub modular_epsilon: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            product_tail_tol: 1e-17,
            series_max_terms: 200_000,
            quadrature_abs_tol: 1e-15,
            quadrature_rel_tol: 1e-12,
            sum_window_start: 8,
            sum_window_max: 512,
            sum_tail_tol: 1e-10,
            max_refinements: 400,
            circle_points_start: 64,
            circle_points_max: 8192,
            tail_factor: 1e3,
            modular_epsilon: 1e-3,
        }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<()> {
        let tols = [
            ("product_tail_tol", self.product_tail_tol),
            ("quadrature_abs_tol", self.quadrature_abs_tol),
            ("quadrature_rel_tol", self.quadrature_rel_tol),
            ("sum_tail_tol", self.sum_tail_tol),
            ("tail_factor", self.tail_factor),
            ("modular_epsilon", self.modular_epsilon),
        ];
        for (name, v) in tols {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Policy(format!("{name} must be positive, got {v}")));
            }
        }
        let counts = [
            ("series_max_terms", self.series_max_terms as i64),
            ("sum_window_start", self.sum_window_start),
            ("sum_window_max", self.sum_window_max),
            ("max_refinements", self.max_refinements as i64),
            ("circle_points_start", self.circle_points_start as i64),
            ("circle_points_max", self.circle_points_max as i64),
        ];
        for (name, v) in counts {
            if v < 1 {
                return Err(Error::Policy(format!("{name} must be at least 1, got {v}")));
            }
        }
        if self.sum_window_max < self.sum_window_start {
            return Err(Error::Policy("sum_window_max < sum_window_start".into()));
        }
        if self.circle_points_max < self.circle_points_start {
            return Err(Error::Policy("circle_points_max < circle_points_start".into()));
        }
        Ok(())
    }

    /// Every control tightened: tolerances by 100×, windows and budgets doubled.
    pub fn doubled(&self) -> Self {
        TruncationPolicy {
            product_tail_tol: (self.product_tail_tol * 1e-3).max(1e-300),
            series_max_terms: self.series_max_terms * 2,
            quadrature_abs_tol: self.quadrature_abs_tol * 1e-2,
            quadrature_rel_tol: (self.quadrature_rel_tol * 1e-2).max(1e-15),
            sum_window_start: self.sum_window_start * 2,
            sum_window_max: self.sum_window_max * 2,
            sum_tail_tol: self.sum_tail_tol * 1e-2,
            max_refinements: self.max_refinements * 2,
            circle_points_start: self.circle_points_start * 2,
            circle_points_max: self.circle_points_max * 2,
            tail_factor: self.tail_factor * 2.0,
            modular_epsilon: self.modular_epsilon,
        }
    }
}
