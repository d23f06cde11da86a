//! Truncated formal series in two variables with xy = q·yx.
//!
//! Monomials are kept normal-ordered as xᵃyᵇ. Moving y past x uses
//! yᵇxᶜ = q^{−bc} xᶜyᵇ, which is all the product needs.

use std::collections::BTreeMap;
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Coefficient ring for [`NormalOrderedSeries`].
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn magnitude(&self) -> f64;
}

impl Coefficient for BigRational {
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

impl Coefficient for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Exact rational p/r from a string such as "2/5".
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = |m: &'static str| Error::Domain {
        function: "parse_rational",
        value: format!("{s:?}"),
        domain: m,
    };
    let (p, r) = match s.trim().split_once('/') {
        Some((p, r)) => (p.trim(), r.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad("p/r with integer numerator"))?;
    let r: BigInt = r.parse().map_err(|_| bad("p/r with integer denominator"))?;
    if r.is_zero() {
        return Err(bad("p/r with nonzero denominator"));
    }
    Ok(BigRational::new(p, r))
}

fn pow<C: Coefficient>(base: &C, e: u32) -> C {
    let mut acc = C::one();
    for _ in 0..e {
        acc = acc * base.clone();
    }
    acc
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalOrderedSeries<C: Coefficient> {
    coefficients: BTreeMap<(u32, u32), C>,
    max_degree: u32,
    q: C,
}

impl<C: Coefficient> NormalOrderedSeries<C> {
    pub fn zero(max_degree: u32, q: C) -> Self {
        NormalOrderedSeries {
            coefficients: BTreeMap::new(),
            max_degree,
            q,
        }
    }

    pub fn one(max_degree: u32, q: C) -> Self {
        Self::monomial(0, 0, C::one(), max_degree, q)
    }

    /// c·xᵃyᵇ, or the zero series when a + b exceeds the cap.
    pub fn monomial(a: u32, b: u32, c: C, max_degree: u32, q: C) -> Self {
        let mut s = Self::zero(max_degree, q);
        s.insert(a, b, c);
        s
    }

    pub fn x(max_degree: u32, q: C) -> Self {
        Self::monomial(1, 0, C::one(), max_degree, q)
    }

    pub fn y(max_degree: u32, q: C) -> Self {
        Self::monomial(0, 1, C::one(), max_degree, q)
    }

    fn insert(&mut self, a: u32, b: u32, c: C) {
        if a + b > self.max_degree || c.is_zero() {
            return;
        }
        let entry = self.coefficients.entry((a, b)).or_insert_with(C::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.coefficients.remove(&(a, b));
        }
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn q(&self) -> &C {
        &self.q
    }

    pub fn coefficient(&self, a: u32, b: u32) -> C {
        self.coefficients.get(&(a, b)).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &C)> {
        self.coefficients.iter()
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.q != other.q || self.max_degree != other.max_degree {
            return Err(Error::Incompatible);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (&(a, b), c) in &other.coefficients {
            out.insert(a, b, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-C::one()))
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = Self::zero(self.max_degree, self.q.clone());
        for (&(a, b), c) in &self.coefficients {
            out.insert(a, b, c.clone() * s.clone());
        }
        out
    }

    /// Product truncated to the common degree cap.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let n = self.max_degree;
        let q_inv = C::one() / self.q.clone();
        // q^{-bc} with b + c ≤ n, so bc ≤ n²/4.
        let mut q_inv_pow = Vec::with_capacity((n * n / 4 + 1) as usize);
        let mut p = C::one();
        for _ in 0..=(n * n / 4) {
            q_inv_pow.push(p.clone());
            p = p * q_inv.clone();
        }
        let mut out = Self::zero(n, self.q.clone());
        for (&(a, b), c1) in &self.coefficients {
            for (&(c, d), c2) in &other.coefficients {
                if a + b + c + d > n {
                    continue;
                }
                let w = q_inv_pow[(b * c) as usize].clone();
                out.insert(a + c, b + d, c1.clone() * c2.clone() * w);
            }
        }
        Ok(out)
    }

    /// Drops every monomial containing y.
    pub fn restrict_y_zero(&self) -> Self {
        let mut out = Self::zero(self.max_degree, self.q.clone());
        for (&(a, b), c) in &self.coefficients {
            if b == 0 {
                out.insert(a, b, c.clone());
            }
        }
        out
    }

    /// Largest coefficient magnitude; zero exactly when the series is zero.
    pub fn max_magnitude(&self) -> f64 {
        self.coefficients
            .values()
            .map(|c| c.magnitude())
            .fold(0.0, f64::max)
    }

    pub fn table(&self) -> Vec<CoefficientEntry> {
        self.coefficients
            .iter()
            .map(|(&(a, b), c)| CoefficientEntry {
                x: a,
                y: b,
                value: c.to_string(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientEntry {
    pub x: u32,
    pub y: u32,
    pub value: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Generator {
    X,
    Y,
    NegXy,
}

/// cₙ = (−1)ⁿ q^{n(n+1)/2} / (q; q)ₙ, the coefficients of Π_{i≥1}(1 − G qⁱ) = Σ cₙ Gⁿ.
pub fn dilog_coefficients<C: Coefficient>(q: &C, n_max: u32) -> Vec<C> {
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let mut qpoch = C::one();
    for n in 0..=n_max {
        if n > 0 {
            qpoch = qpoch * (C::one() - pow(q, n));
        }
        let mut c = pow(q, n * (n + 1) / 2) / qpoch.clone();
        if n % 2 == 1 {
            c = -c;
        }
        out.push(c);
    }
    out
}

/// Expansion of the quantum dilogarithm l(G) = Π_{i≥1}(1 − G qⁱ) to total degree `max_degree`.
pub fn quantum_dilog_series<C: Coefficient>(
    generator: Generator,
    max_degree: u32,
    q: C,
) -> NormalOrderedSeries<C> {
    let mut s = NormalOrderedSeries::zero(max_degree, q.clone());
    let coeffs = dilog_coefficients(&q, max_degree);
    for (n, c) in coeffs.into_iter().enumerate() {
        let n = n as u32;
        match generator {
            Generator::X => s.insert(n, 0, c),
            Generator::Y => s.insert(0, n, c),
            Generator::NegXy => {
                if 2 * n > max_degree {
                    break;
                }
                // (−xy)ⁿ = (−1)ⁿ q^{−n(n−1)/2} xⁿyⁿ
                let mut w = c / pow(&q, n * n.saturating_sub(1) / 2);
                if n % 2 == 1 {
                    w = -w;
                }
                s.insert(n, n, w);
            }
        }
    }
    s
}

#[derive(Debug, Clone, Serialize)]
pub struct OperatorPentagonReport {
    pub max_degree: u32,
    pub q: String,
    pub lhs: Vec<CoefficientEntry>,
    pub rhs: Vec<CoefficientEntry>,
    pub difference: Vec<CoefficientEntry>,
    pub max_abs_residual: f64,
    pub exact_zero: bool,
}

/// l(y)l(x) − l(x)l(−xy)l(y) truncated to `max_degree`.
pub fn operator_pentagon_difference<C: Coefficient>(
    max_degree: u32,
    q: C,
) -> (
    NormalOrderedSeries<C>,
    NormalOrderedSeries<C>,
    NormalOrderedSeries<C>,
) {
    let lx = quantum_dilog_series(Generator::X, max_degree, q.clone());
    let ly = quantum_dilog_series(Generator::Y, max_degree, q.clone());
    let lxy = quantum_dilog_series(Generator::NegXy, max_degree, q);
    let lhs = ly.multiply(&lx).expect("same q and cap");
    let rhs = lx
        .multiply(&lxy)
        .and_then(|p| p.multiply(&ly))
        .expect("same q and cap");
    let diff = lhs.sub(&rhs).expect("same q and cap");
    (lhs, rhs, diff)
}

/// Exact check of l(y)l(x) = l(x)l(−xy)l(y) for rational 0 < q < 1.
pub fn check_operator_pentagon(max_degree: u32, q: &BigRational) -> Result<OperatorPentagonReport> {
    if max_degree < 1 {
        return Err(Error::Domain {
            function: "check_operator_pentagon",
            value: max_degree.to_string(),
            domain: "max_degree >= 1",
        });
    }
    check_operator_pentagon_any_degree(max_degree, q)
}

/// As [`check_operator_pentagon`] but also accepts degree 0 (both sides are 1).
pub fn check_operator_pentagon_any_degree(
    max_degree: u32,
    q: &BigRational,
) -> Result<OperatorPentagonReport> {
    if !(q > &BigRational::zero() && q < &BigRational::one()) {
        return Err(Error::Domain {
            function: "check_operator_pentagon",
            value: q.to_string(),
            domain: "0 < q < 1",
        });
    }
    let (lhs, rhs, diff) = operator_pentagon_difference(max_degree, q.clone());
    Ok(OperatorPentagonReport {
        max_degree,
        q: q.to_string(),
        lhs: lhs.table(),
        rhs: rhs.table(),
        difference: diff.table(),
        max_abs_residual: diff.max_magnitude(),
        exact_zero: diff.is_empty(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    type S = NormalOrderedSeries<BigRational>;

    #[test]
    fn basic_products() {
        let q = r(1, 2);
        let x = S::x(4, q.clone());
        let y = S::y(4, q.clone());
        assert_eq!(x.multiply(&y).unwrap().coefficient(1, 1), r(1, 1));
        let yx = y.multiply(&x).unwrap();
        assert_eq!(yx.coefficient(1, 1), r(2, 1));
        assert_eq!(yx.len(), 1);
        let xy = x.multiply(&y).unwrap();
        assert_eq!(xy.multiply(&xy).unwrap().coefficient(2, 2), r(2, 1));
    }

    #[test]
    fn truncation_and_mismatch() {
        let q = r(1, 3);
        let x = S::x(1, q.clone());
        assert!(x.multiply(&x).unwrap().is_empty());
        let other = S::x(1, r(1, 2));
        assert_eq!(x.multiply(&other), Err(Error::Incompatible));
    }

    #[test]
    fn dilog_low_orders() {
        let q = r(2, 5);
        let one = r(1, 1);
        let c1 = q.clone() / (one.clone() - q.clone());
        let s0 = quantum_dilog_series(Generator::X, 0, q.clone());
        assert_eq!(s0, S::one(0, q.clone()));
        let sx = quantum_dilog_series(Generator::X, 3, q.clone());
        assert_eq!(sx.coefficient(1, 0), -c1.clone());
        let sxy = quantum_dilog_series(Generator::NegXy, 3, q.clone());
        assert_eq!(sxy.coefficient(1, 1), c1);
        assert_eq!(sxy.len(), 2);
    }

    #[test]
    fn pentagon_degree_one_and_two() {
        let q = r(1, 2);
        let one = r(1, 1);
        let c1 = q.clone() / (one.clone() - q.clone());
        let (lhs, rhs, diff) = operator_pentagon_difference(2, q.clone());
        assert!(diff.is_empty());
        assert_eq!(lhs.coefficient(1, 0), -c1.clone());
        assert_eq!(lhs.coefficient(0, 1), -c1.clone());
        let xy = q.clone() / ((one.clone() - q.clone()) * (one - q));
        assert_eq!(lhs.coefficient(1, 1), xy);
        assert_eq!(rhs.coefficient(1, 1), xy);
    }

    #[test]
    fn pentagon_exact_zero() {
        for q in [r(1, 2), r(1, 3), r(2, 5)] {
            for d in 1..=10 {
                let rep = check_operator_pentagon(d, &q).unwrap();
                assert!(rep.exact_zero, "q={q} degree {d}: {:?}", rep.difference);
                assert_eq!(rep.max_abs_residual, 0.0);
            }
        }
    }

    #[test]
    fn pentagon_numeric_coefficients() {
        let q = Complex64::new(0.3, 0.2);
        let (_, _, diff) = operator_pentagon_difference(8, q);
        assert!(diff.max_magnitude() < 1e-12);
    }

    #[test]
    fn wrong_ordering_fails() {
        // l(x)l(y) is not l(y)l(x): the q-commutation matters.
        let q = r(1, 2);
        let lx = quantum_dilog_series(Generator::X, 4, q.clone());
        let ly = quantum_dilog_series(Generator::Y, 4, q);
        let d = ly.multiply(&lx).unwrap().sub(&lx.multiply(&ly).unwrap()).unwrap();
        assert!(!d.is_empty());
    }

    #[test]
    fn y_zero_specialization() {
        let q = r(1, 3);
        let (lhs, rhs, _) = operator_pentagon_difference(9, q.clone());
        let lx = quantum_dilog_series(Generator::X, 9, q);
        assert_eq!(lhs.restrict_y_zero(), lx);
        assert_eq!(rhs.restrict_y_zero(), lx);
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("1/2").unwrap(), r(1, 2));
        assert_eq!(parse_rational(" 2 / 5 ").unwrap(), r(2, 5));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("0.5").is_err());
    }

    fn sparse_series(max_degree: u32) -> impl Strategy<Value = S> {
        prop::collection::vec((0u32..=4, 0u32..=4, -5i64..=5, 1i64..=4), 0..6).prop_map(
            move |terms| {
                let mut s = S::zero(max_degree, r(2, 3));
                for (a, b, p, d) in terms {
                    s.insert(a, b, r(p, d));
                }
                s
            },
        )
    }

    proptest! {
        #[test]
        fn associative_and_distributive(a in sparse_series(6), b in sparse_series(6), c in sparse_series(6)) {
            let ab_c = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let a_bc = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            let left = a.multiply(&b.add(&c).unwrap()).unwrap();
            let right = a.multiply(&b).unwrap().add(&a.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn monomial_rewrite(a in 0u32..4, b in 0u32..4, c in 0u32..4, d in 0u32..4) {
            let q = r(3, 7);
            let m1 = S::monomial(a, b, r(1, 1), 16, q.clone());
            let m2 = S::monomial(c, d, r(1, 1), 16, q.clone());
            let p = m1.multiply(&m2).unwrap();
            let expect = pow(&(r(1, 1) / q), b * c);
            prop_assert_eq!(p.coefficient(a + c, b + d), expect);
            prop_assert_eq!(p.len(), 1);
        }
    }
}
