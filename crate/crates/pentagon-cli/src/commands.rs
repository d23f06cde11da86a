use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use pentagon::golden::{parse_vectors, run_vector, SHIPPED_VECTORS};
use pentagon::identities::defaults::{
    limit_study_policy, target, DEFAULT_OMEGA_ARGUMENTS, DEFAULT_Q_SEQUENCE, DEFAULT_T_SEQUENCE,
};
use pentagon::identities::{
    equivalence_check_gamma_rhs, limit_study_omega, limit_study_q_to_1, q_to_1_probe, seeded_rng,
    verify_classical_pentagon, verify_operator_pentagon, verify_pentagon_beta, verify_pentagon_gamma,
    verify_pentagon_hyperbolic, verify_pentagon_index, with_doubled_policy, ConvergenceTable, IdentityId,
    VerificationReport,
};
use pentagon::kernels::{BetaParams, GammaParams, HyperbolicParams, IndexParams};
use pentagon::special_functions::TruncationPolicy;
use pentagon::weyl_series::{check_operator_pentagon_any_degree, parse_rational};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::{ExpandArgs, Identity, LimitArgs, LimitKindArg, SelfcheckArgs, TruncationArgs, VerifyArgs};
use crate::report::{stats, CliError, Report};

/// Degree used for randomly drawn operator points.
const RANDOM_OPERATOR_DEGREE: u32 = 6;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct OperatorPoint {
    max_degree: u32,
    q: String,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct ClassicalPoint {
    x: f64,
    y: f64,
}

#[derive(Debug, Clone)]
enum Point {
    Operator(OperatorPoint),
    Classical(ClassicalPoint),
    Hyperbolic(HyperbolicParams),
    Index(IndexParams),
    Gamma(GammaParams),
    Beta(BetaParams),
    Equivalence(GammaParams),
}

impl Point {
    fn parse(identity: Identity, line: &str) -> Result<Point, String> {
        let e = |e: serde_json::Error| e.to_string();
        Ok(match identity {
            Identity::Operator => {
                let p: OperatorPoint = serde_json::from_str(line).map_err(e)?;
                parse_rational(&p.q).map_err(|e| e.to_string())?;
                Point::Operator(p)
            }
            Identity::Classical => {
                let p: ClassicalPoint = serde_json::from_str(line).map_err(e)?;
                if !(p.x > 0.0 && p.x < 1.0 && p.y > 0.0 && p.y < 1.0) {
                    return Err(format!("constraint violated: (x, y) = ({}, {}) must lie in (0,1)²", p.x, p.y));
                }
                Point::Classical(p)
            }
            Identity::Hyperbolic => Point::Hyperbolic(serde_json::from_str(line).map_err(e)?),
            Identity::Index => Point::Index(serde_json::from_str(line).map_err(e)?),
            Identity::Gamma => Point::Gamma(serde_json::from_str(line).map_err(e)?),
            Identity::Beta => Point::Beta(serde_json::from_str(line).map_err(e)?),
            Identity::Equivalence => Point::Equivalence(serde_json::from_str(line).map_err(e)?),
        })
    }

    fn sample(identity: Identity, count: u64, seed: u64) -> Vec<Point> {
        let mut rng = seeded_rng(seed);
        (0..count)
            .map(|_| match identity {
                Identity::Operator => {
                    let r = rng.gen_range(2..=9u32);
                    let p = rng.gen_range(1..r);
                    Point::Operator(OperatorPoint {
                        max_degree: RANDOM_OPERATOR_DEGREE,
                        q: format!("{p}/{r}"),
                    })
                }
                Identity::Classical => Point::Classical(ClassicalPoint {
                    x: open_unit(&mut rng),
                    y: open_unit(&mut rng),
                }),
                Identity::Hyperbolic => Point::Hyperbolic(HyperbolicParams::sample(&mut rng)),
                Identity::Index => Point::Index(IndexParams::sample(&mut rng)),
                Identity::Gamma => Point::Gamma(GammaParams::sample(&mut rng)),
                Identity::Beta => Point::Beta(BetaParams::sample(&mut rng)),
                Identity::Equivalence => Point::Equivalence(GammaParams::sample(&mut rng)),
            })
            .collect()
    }

    fn parameters(&self) -> Value {
        let v = match self {
            Point::Operator(p) => serde_json::to_value(p),
            Point::Classical(p) => serde_json::to_value(p),
            Point::Hyperbolic(p) => serde_json::to_value(p),
            Point::Index(p) => serde_json::to_value(p),
            Point::Gamma(p) | Point::Equivalence(p) => serde_json::to_value(p),
            Point::Beta(p) => serde_json::to_value(p),
        };
        v.unwrap_or(Value::Null)
    }

    fn verify(&self, policy: &TruncationPolicy) -> pentagon::Result<VerificationReport> {
        match self {
            Point::Operator(p) => verify_operator_pentagon(p.max_degree, &parse_rational(&p.q)?),
            Point::Classical(p) => verify_classical_pentagon(p.x, p.y),
            Point::Hyperbolic(p) => verify_pentagon_hyperbolic(p, policy),
            Point::Index(p) => verify_pentagon_index(p, policy),
            Point::Gamma(p) => verify_pentagon_gamma(p, policy),
            Point::Beta(p) => verify_pentagon_beta(p, policy),
            Point::Equivalence(p) => equivalence_check_gamma_rhs(p),
        }
    }
}

/// Uniform on (0, 1), excluding 0.
fn open_unit<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let x: f64 = rng.gen();
        if x > 0.0 {
            return x;
        }
    }
}

fn policy_from(t: &TruncationArgs) -> Result<TruncationPolicy, CliError> {
    let p = t.apply(TruncationPolicy::default());
    p.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(p)
}

fn read_lines(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(CliError::Io)
}

/// Parses one record per non-blank, non-comment line; the first bad line aborts.
fn load_points(identity: Identity, path: &Path) -> Result<Vec<Point>, CliError> {
    let text = read_lines(path)?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let p = Point::parse(identity, line).map_err(|message| CliError::Input {
            path: path.display().to_string(),
            line: i + 1,
            message,
        })?;
        out.push(p);
    }
    if out.is_empty() {
        return Err(CliError::Usage(format!("{} holds no parameter points", path.display())));
    }
    Ok(out)
}

#[derive(Serialize)]
struct PointRecord {
    index: usize,
    #[serde(flatten)]
    outcome: PointOutcome,
}

#[derive(Serialize)]
#[serde(untagged)]
enum PointOutcome {
    Report(Box<VerificationReport>),
    Error { parameters: Value, error: String, pass: bool },
}

/// Exit status true iff every point passes.
pub fn verify(args: VerifyArgs) -> Result<(bool, Report, Option<PathBuf>), CliError> {
    let identity = args
        .identity
        .or(args.identity_flag)
        .ok_or_else(|| CliError::Usage("an identity is required".into()))?;
    let policy = policy_from(&args.truncation)?;
    if let Some(t) = args.tol {
        if !(t > 0.0) {
            return Err(CliError::Usage(format!("--tol must be positive, got {t}")));
        }
    }
    let (points, source) = match (&args.params, args.random) {
        (Some(path), None) => (load_points(identity, path)?, json!({ "params": path.display().to_string() })),
        (None, Some(n)) => (Point::sample(identity, n, args.seed), json!({ "random": n, "seed": args.seed })),
        _ => return Err(CliError::Usage("give exactly one of --params and --random".into())),
    };
    let id = identity.id();
    let target = args.tol.unwrap_or_else(|| target(id));
    let mut report = Report::new(
        "verify",
        json!({
            "identity": id,
            "source": source,
            "target": target,
            "doubled": args.doubled,
            "truncation": policy,
            "report_format": "jsonl",
        }),
    );

    let outcomes: Vec<PointOutcome> = points
        .par_iter()
        .map(|p| {
            let run = if args.doubled {
                with_doubled_policy(|pol| p.verify(pol), &policy)
            } else {
                p.verify(&policy)
            };
            match run {
                Ok(r) => {
                    let doubled_failed = r.diagnostics.get("stable_under_doubling") == Some(&0.0);
                    let mut r = r.with_target(target);
                    r.pass &= !doubled_failed;
                    PointOutcome::Report(Box::new(r))
                }
                Err(e) => PointOutcome::Error {
                    parameters: p.parameters(),
                    error: e.to_string(),
                    pass: false,
                },
            }
        })
        .collect();

    let mut passed = 0usize;
    let mut errors = 0usize;
    let (mut max_rel, mut max_abs) = (0f64, 0f64);
    let mut fits = Vec::new();
    let mut diag: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (index, o) in outcomes.into_iter().enumerate() {
        let pass = match &o {
            PointOutcome::Report(r) => {
                max_rel = max_rel.max(r.rel_residual);
                max_abs = max_abs.max(r.abs_residual);
                fits.extend(r.constant_fit);
                for (k, v) in &r.diagnostics {
                    diag.entry(k.clone()).or_default().push(*v);
                }
                r.pass
            }
            PointOutcome::Error { .. } => {
                errors += 1;
                false
            }
        };
        passed += pass as usize;
        report.push("point", PointRecord { index, outcome: o });
    }
    let total = points.len();
    let all = passed == total;
    let diagnostics: BTreeMap<_, _> = diag.iter().filter_map(|(k, v)| stats(v).map(|s| (k.clone(), s))).collect();
    let mut notes = Vec::new();
    if id == IdentityId::Index {
        notes.push(
            "constant_fit is lhs over the sign-corrected two-B product; \
             nine_factor_naive_ratio and nine_factor_corrected_ratio give the constant \
             relating the summed integrals to each nine-factor product"
                .to_string(),
        );
    }
    report.push(
        "summary",
        json!({
            "identity": id,
            "points": total,
            "passed": passed,
            "failed": total - passed,
            "errors": errors,
            "target": target,
            "max_rel_residual": max_rel,
            "max_abs_residual": max_abs,
            "constant_fit": stats(&fits),
            "diagnostics": diagnostics,
            "notes": notes,
            "pass": all,
        }),
    );
    Ok((all, report, args.report))
}

fn parse_z(s: &str) -> Result<Complex64, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| CliError::Usage(format!("bad number '{t}' in --z {s}")));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(CliError::Usage(format!("--z expects \"re\" or \"re,im\", got '{s}'"))),
    }
}

/// Exit status true iff every identity table is monotone. Probe tables are
/// reported but not counted: the exact probe has distance zero throughout.
pub fn limit_study(args: LimitArgs) -> Result<(bool, Report, Option<PathBuf>), CliError> {
    let policy = policy_from(&args.truncation)?;
    let mut tables: Vec<(ConvergenceTable, bool)> = Vec::new();
    let (kind, config) = match args.kind {
        LimitKindArg::QTo1 => {
            let qs = args.sequence.clone().unwrap_or_else(|| DEFAULT_Q_SEQUENCE.to_vec());
            let points = match &args.params {
                Some(path) => load_points(Identity::Gamma, path)?
                    .into_iter()
                    .filter_map(|p| match p {
                        Point::Gamma(g) => Some(g),
                        _ => None,
                    })
                    .collect(),
                None => vec![GammaParams::symmetric()],
            };
            let pol = limit_study_policy(&policy);
            let results: Vec<_> = points.par_iter().map(|p| limit_study_q_to_1(p, &qs, &pol)).collect();
            for t in results {
                tables.push((t?, true));
            }
            if args.probes {
                let mut pq = qs.clone();
                if !pq.contains(&0.999) {
                    pq.push(0.999);
                }
                tables.push((q_to_1_probe(1.0, 2.0, &pq, &policy)?, false));
                tables.push((q_to_1_probe(0.5, 1.5, &pq, &policy)?, false));
            }
            (IdentityId::LimitQTo1, json!({ "sequence": qs, "truncation": pol }))
        }
        LimitKindArg::Omega => {
            let ts = args.sequence.clone().unwrap_or_else(|| DEFAULT_T_SEQUENCE.to_vec());
            let zs: Vec<Complex64> = if args.z.is_empty() {
                DEFAULT_OMEGA_ARGUMENTS.iter().map(|&(re, im)| Complex64::new(re, im)).collect()
            } else {
                args.z.iter().map(|s| parse_z(s)).collect::<Result<_, _>>()?
            };
            let results: Vec<_> = zs.par_iter().map(|&z| limit_study_omega(z, &ts, &policy)).collect();
            for t in results {
                tables.push((t?, true));
            }
            (IdentityId::LimitOmega, json!({ "sequence": ts, "z": zs, "truncation": policy }))
        }
    };
    let mut report = Report::new("limit-study", json!({ "kind": kind, "settings": config }));
    let mut all = true;
    for (t, counted) in &tables {
        if *counted {
            all &= t.monotone;
        }
        report.push("table", json!({ "counted": counted, "table": t }));
    }
    report.push(
        "summary",
        json!({
            "kind": kind,
            "tables": tables.len(),
            "monotone": tables.iter().filter(|(t, c)| *c && t.monotone).count(),
            "final_distances": tables.iter().map(|(t, _)| t.final_distance()).collect::<Vec<_>>(),
            "pass": all,
        }),
    );
    Ok((all, report, args.report))
}

/// Exit status true iff the coefficient difference is exactly zero.
pub fn expand_operator(args: ExpandArgs) -> Result<(bool, Report, Option<PathBuf>), CliError> {
    let q = parse_rational(&args.q).map_err(|e| CliError::Usage(format!("--q: {e}")))?;
    let check = check_operator_pentagon_any_degree(args.max_degree, &q)?;
    let mut report = Report::new("expand-operator", json!({ "max_degree": args.max_degree, "q": check.q }));
    for (side, entries) in [("lhs", &check.lhs), ("rhs", &check.rhs), ("difference", &check.difference)] {
        report.push("coefficients", json!({ "side": side, "terms": entries.len(), "entries": entries }));
    }
    report.push(
        "summary",
        json!({
            "max_degree": check.max_degree,
            "q": check.q,
            "exact_zero": check.exact_zero,
            "max_abs_residual": check.max_abs_residual,
            "pass": check.exact_zero,
        }),
    );
    Ok((check.exact_zero, report, args.report))
}

/// Exit status true iff every vector passes.
pub fn selfcheck(args: SelfcheckArgs) -> Result<(bool, Report, Option<PathBuf>), CliError> {
    let policy = policy_from(&args.truncation)?;
    let (text, source) = match &args.vectors {
        Some(p) => (read_lines(p)?, p.display().to_string()),
        None => (SHIPPED_VECTORS.to_string(), "shipped".to_string()),
    };
    let vectors = parse_vectors(&text).map_err(|e| match e {
        pentagon::Error::Parse { line, message } => CliError::Input {
            path: source.clone(),
            line,
            message,
        },
        other => CliError::Engine(other),
    })?;
    if vectors.is_empty() {
        return Err(CliError::Usage(format!("{source}: no test vectors")));
    }
    if let Some(t) = args.tol {
        if !(t > 0.0) {
            return Err(CliError::Usage(format!("--tol must be positive, got {t}")));
        }
    }
    let mut report = Report::new("selfcheck", json!({ "vectors": source, "tol_override": args.tol }));
    let outcomes: Vec<_> = vectors
        .par_iter()
        .map(|(line, v)| run_vector(*line, v, &policy, args.tol))
        .collect();
    let passed = outcomes.iter().filter(|o| o.pass).count();
    let worst = outcomes.iter().map(|o| o.rel_error).fold(0f64, f64::max);
    for o in &outcomes {
        report.push("vector", o);
    }
    let all = passed == outcomes.len();
    report.push(
        "summary",
        json!({
            "vectors": outcomes.len(),
            "passed": passed,
            "failed": outcomes.len() - passed,
            "max_rel_error": if worst.is_finite() { json!(worst) } else { json!(null) },
            "pass": all,
        }),
    );
    Ok((all, report, args.report))
}
