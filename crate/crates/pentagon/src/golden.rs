//! Golden test vectors: one JSON record per line with a function name, its
//! input, the expected value, a relative tolerance and the value's origin.
//! Blank lines and lines starting with `#` are skipped.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::identities::{
    eval_beta_lhs, eval_gamma_lhs, eval_gamma_rhs, eval_hyperbolic_lhs, eval_hyperbolic_rhs, eval_index_lhs,
    eval_index_rhs, rel_residual, GammaRhsForm, IndexRhsForm,
};
use crate::kernels::{b_beta, b_gamma_disc, b_hyp, b_idx, delta_idx, BetaParams, GammaParams, HyperbolicParams, IndexParams};
use crate::special_functions::{
    dilog, gamma, hyperbolic_gamma, qpoch_inf, qpoch_ratio_regularized, rogers_l, ModularPair, Nome, TruncationPolicy,
};

/// The vector file shipped with the crate.
pub const SHIPPED_VECTORS: &str = include_str!("../data/golden.jsonl");

/// Expected values are written either as a real number or as [re, im].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Expected {
    Real(f64),
    Complex(Complex64),
}

impl Expected {
    pub fn value(&self) -> Complex64 {
        match *self {
            Expected::Real(x) => Complex64::new(x, 0.0),
            Expected::Complex(z) => z,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenVector {
    pub function: String,
    pub input: Value,
    pub expected: Expected,
    pub tol: f64,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorOutcome {
    pub line: usize,
    pub function: String,
    pub expected: Complex64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub got: Option<Complex64>,
    pub rel_error: f64,
    pub tol: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Parses a vector file; the first malformed record aborts with its line number.
pub fn parse_vectors(text: &str) -> Result<Vec<(usize, GoldenVector)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: GoldenVector = serde_json::from_str(line).map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        if !(v.tol > 0.0) {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("tolerance must be positive, got {}", v.tol),
            });
        }
        out.push((i + 1, v));
    }
    Ok(out)
}

fn field<T: for<'de> Deserialize<'de>>(input: &Value, key: &str) -> Result<T> {
    let v = input
        .get(key)
        .ok_or_else(|| Error::Constraint(format!("input is missing '{key}'")))?;
    serde_json::from_value(v.clone()).map_err(|e| Error::Constraint(format!("input '{key}': {e}")))
}

fn whole<T: for<'de> Deserialize<'de>>(input: &Value) -> Result<T> {
    serde_json::from_value(input.clone()).map_err(|e| Error::Constraint(e.to_string()))
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Evaluates the function a vector names at its input.
pub fn evaluate(v: &GoldenVector, policy: &TruncationPolicy) -> Result<Complex64> {
    let x = &v.input;
    let pair = || -> Result<ModularPair> { ModularPair::new(field(x, "omega1")?, field(x, "omega2")?) };
    let nome = || -> Result<Nome> { Nome::real(field(x, "q")?) };
    match v.function.as_str() {
        "gamma" => gamma(field(x, "z")?),
        "dilog" => dilog(field(x, "x")?).map(real),
        "rogers_l" => rogers_l(field(x, "x")?).map(real),
        "qpoch_inf" => qpoch_inf(field(x, "a")?, Nome::new(field(x, "q")?)?, policy),
        "qpoch_ratio_regularized" => qpoch_ratio_regularized(field(x, "alpha")?, field(x, "beta")?, nome()?, policy),
        "hyperbolic_gamma" => hyperbolic_gamma(field(x, "u")?, &pair()?, policy),
        "b_hyp" => b_hyp(field(x, "x")?, field(x, "y")?, &pair()?, policy),
        "delta_idx" => delta_idx(field(x, "x")?, field(x, "n")?, nome()?, policy),
        "b_idx" => b_idx(field(x, "a")?, field(x, "n")?, field(x, "b")?, field(x, "m")?, nome()?, policy),
        "b_gamma_disc" => b_gamma_disc(field(x, "a")?, field(x, "n")?, field(x, "b")?, field(x, "m")?).map(real),
        "b_beta" => b_beta(field(x, "x")?, field(x, "y")?),
        "gamma_rhs" => eval_gamma_rhs(&whole::<GammaParams>(x)?, GammaRhsForm::NineFactor).map(real),
        "gamma_lhs" => Ok(eval_gamma_lhs(&whole::<GammaParams>(x)?, policy)?.value),
        "hyperbolic_rhs" => eval_hyperbolic_rhs(&whole::<HyperbolicParams>(x)?, policy),
        "hyperbolic_lhs" => Ok(eval_hyperbolic_lhs(&whole::<HyperbolicParams>(x)?, policy)?.value),
        "index_rhs" => eval_index_rhs(&whole::<IndexParams>(x)?, IndexRhsForm::TwoBSigned, policy),
        "index_lhs" => Ok(eval_index_lhs(&whole::<IndexParams>(x)?, policy)?.value),
        "beta_lhs" => Ok(eval_beta_lhs(&whole::<BetaParams>(x)?, policy)?.value),
        other => Err(Error::Constraint(format!("unknown function '{other}'"))),
    }
}

/// Runs one vector; `tol_override` replaces the recorded tolerance.
pub fn run_vector(line: usize, v: &GoldenVector, policy: &TruncationPolicy, tol_override: Option<f64>) -> VectorOutcome {
    let tol = tol_override.unwrap_or(v.tol);
    let expected = v.expected.value();
    let (got, rel_error, error) = match evaluate(v, policy) {
        Ok(g) => (Some(g), rel_residual(g, expected), None),
        Err(e) => (None, f64::INFINITY, Some(e.to_string())),
    };
    VectorOutcome {
        line,
        function: v.function.clone(),
        expected,
        got,
        rel_error,
        tol,
        pass: rel_error <= tol,
        error,
    }
}

pub fn run_vectors(text: &str, policy: &TruncationPolicy, tol_override: Option<f64>) -> Result<Vec<VectorOutcome>> {
    use rayon::prelude::*;
    let vectors = parse_vectors(text)?;
    Ok(vectors
        .par_iter()
        .map(|(line, v)| run_vector(*line, v, policy, tol_override))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_file_parses() {
        let v = parse_vectors(SHIPPED_VECTORS).unwrap();
        assert!(v.len() > 30);
        let names: std::collections::BTreeSet<_> = v.iter().map(|(_, g)| g.function.as_str()).collect();
        for f in ["gamma", "hyperbolic_gamma", "b_idx", "index_lhs", "gamma_lhs", "beta_lhs"] {
            assert!(names.contains(f), "{f}");
        }
    }

    #[test]
    fn scalar_vectors_pass() {
        let pol = TruncationPolicy::default();
        for (line, v) in parse_vectors(SHIPPED_VECTORS).unwrap() {
            if v.function.ends_with("_lhs") {
                continue;
            }
            let o = run_vector(line, &v, &pol, None);
            assert!(o.pass, "{o:?}");
        }
    }

    #[test]
    fn parse_error_carries_line() {
        let text = "# header\n{\"function\":\"gamma\",\"input\":{\"z\":[0.5,0]},\"expected\":[1.77,0],\"tol\":1e-2,\"provenance\":\"x\"}\n{broken\n";
        match parse_vectors(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tight_override_fails() {
        let text = "{\"function\":\"gamma\",\"input\":{\"z\":[0.5,0]},\"expected\":[1.7724538509055159,0],\"tol\":1e-13,\"provenance\":\"closed form\"}";
        let pol = TruncationPolicy::default();
        assert!(run_vectors(text, &pol, None).unwrap()[0].pass);
        let o = &run_vectors(text, &pol, Some(1e-300)).unwrap()[0];
        assert!(!o.pass || o.rel_error == 0.0);
        let wrong = text.replace("1.7724538509055159", "1.8");
        assert!(!run_vectors(&wrong, &pol, None).unwrap()[0].pass);
    }

    #[test]
    fn unknown_function_fails_cleanly() {
        let text = "{\"function\":\"nope\",\"input\":{},\"expected\":1.0,\"tol\":1e-3,\"provenance\":\"x\"}";
        let o = &run_vectors(text, &TruncationPolicy::default(), None).unwrap()[0];
        assert!(!o.pass && o.error.is_some());
    }
}
