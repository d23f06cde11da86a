//! Acceptance run: one PASS/FAIL line per criterion. Tolerances, point
//! counts and runtime budgets are pinned below. Exits nonzero if any
//! criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use pentagon::identities::defaults::{
    limit_study_policy, DEFAULT_OMEGA_ARGUMENTS, DEFAULT_Q_SEQUENCE, DEFAULT_T_SEQUENCE,
};
use pentagon::identities::{
    equivalence_check_gamma_rhs, eval_gamma_lhs, limit_study_omega, limit_study_q_to_1, q_to_1_probe, seeded_rng,
    verify_classical_pentagon, verify_operator_pentagon, verify_pentagon_beta, verify_pentagon_gamma,
    verify_pentagon_hyperbolic, verify_pentagon_index, with_doubled_policy, VerificationReport,
};
use pentagon::kernels::{BetaParams, GammaParams, HyperbolicParams, IndexParams};
use pentagon::special_functions::{
    gamma, hyperbolic_gamma, log_gamma_real, qpoch_inf, rogers_l, ModularPair, Nome, TruncationPolicy,
};
use pentagon::weyl_series::parse_rational;

const POINTS: usize = 25;

const OPERATOR_QS: [&str; 3] = ["1/2", "1/3", "2/5"];
const OPERATOR_DEGREE: u32 = 10;
const OPERATOR_BUDGET: Duration = Duration::from_secs(10);

const CLASSICAL_POINTS: usize = 1000;
const CLASSICAL_TOL: f64 = 1e-12;
const CLASSICAL_BUDGET: Duration = Duration::from_secs(5);

const HYPERBOLIC_TOL: f64 = 1e-8;
const HYPERBOLIC_BUDGET: Duration = Duration::from_secs(300);

const INDEX_TOL: f64 = 1e-7;
const INDEX_FIT_STD: f64 = 1e-6;

const GAMMA_TOL: f64 = 1e-6;
const GAMMA_BUDGET: Duration = Duration::from_secs(600);

const EQUIVALENCE_TOL: f64 = 1e-10;
const BETA_TOL: f64 = 1e-8;

const PROBE_QS: [f64; 4] = [0.9, 0.95, 0.99, 0.999];
const PROBE_DISTANCE: f64 = 1e-2;
const PROBE_MIN_ORDER: f64 = 1.0;

const SELF_DUAL_TOL: f64 = 1e-10;
const ROGERS_TOL: f64 = 1e-12;
/// No tolerance is pinned for the remaining invariants; this is the one used.
const INVARIANT_TOL: f64 = 1e-11;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn converged(r: &VerificationReport) -> bool {
    r.truncation_diagnostics.values().all(|q| q.converged)
}

/// Max residual and failure count for a batch of reports checked against `tol`.
fn sweep(reports: &[pentagon::Result<VerificationReport>], tol: f64) -> (f64, usize, Vec<String>) {
    let mut worst = 0f64;
    let mut fails = 0;
    let mut errs = Vec::new();
    for r in reports {
        match r {
            Ok(r) => {
                worst = worst.max(r.rel_residual);
                if !(r.rel_residual < tol && converged(r)) {
                    fails += 1;
                }
            }
            Err(e) => {
                fails += 1;
                errs.push(e.to_string());
            }
        }
    }
    (worst, fails, errs)
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    (m, (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n).sqrt())
}

fn operator() -> Verdict {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for q in OPERATOR_QS {
        match verify_operator_pentagon(OPERATOR_DEGREE, &parse_rational(q).unwrap()) {
            Ok(r) => {
                ok &= r.pass && r.abs_residual == 0.0;
                parts.push(format!("q={q} difference terms {}", r.diagnostics["difference_terms"]));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("q={q} error {e}"));
            }
        }
    }
    let t = start.elapsed();
    verdict(ok && t < OPERATOR_BUDGET, format!("{}; {:.2?} (budget {:?})", parts.join(", "), t, OPERATOR_BUDGET))
}

fn classical() -> Verdict {
    let start = Instant::now();
    let mut rng = seeded_rng(2);
    let reports: Vec<_> = (0..CLASSICAL_POINTS)
        .map(|_| verify_classical_pentagon(rng.gen_range(1e-9..1.0), rng.gen_range(1e-9..1.0)))
        .collect();
    let (worst, fails, _) = sweep(&reports, CLASSICAL_TOL);
    let t = start.elapsed();
    verdict(
        fails == 0 && t < CLASSICAL_BUDGET,
        format!("{CLASSICAL_POINTS} points, max residual {worst:.2e} (< {CLASSICAL_TOL:e}); {t:.2?}"),
    )
}

fn hyperbolic(policy: &TruncationPolicy) -> Verdict {
    let start = Instant::now();
    let mut rng = seeded_rng(3);
    let points: Vec<_> = (0..POINTS).map(|_| HyperbolicParams::sample(&mut rng)).collect();
    let reports: Vec<_> = points
        .par_iter()
        .map(|p| with_doubled_policy(|pol| verify_pentagon_hyperbolic(p, pol), policy))
        .collect();
    let (worst, fails, errs) = sweep(&reports, HYPERBOLIC_TOL);
    let unstable = reports
        .iter()
        .filter(|r| r.as_ref().map_or(true, |r| r.diagnostics.get("stable_under_doubling") != Some(&1.0)))
        .count();
    let t = start.elapsed();
    verdict(
        fails == 0 && unstable == 0 && t < HYPERBOLIC_BUDGET,
        format!(
            "{POINTS} points, max rel residual {worst:.2e} (< {HYPERBOLIC_TOL:e}), {unstable} unstable under doubling; {t:.2?}{}",
            errs.first().map(|e| format!("; first error: {e}")).unwrap_or_default()
        ),
    )
}

fn index(policy: &TruncationPolicy) -> Verdict {
    let mut rng = seeded_rng(4);
    let points: Vec<_> = (0..POINTS).map(|_| IndexParams::sample(&mut rng)).collect();
    let spins = points.iter().filter(|p| p.n.iter().chain(&p.m).any(|&s| s != 0)).count();
    let in_range = points
        .iter()
        .all(|p| (0.2..=0.5).contains(&p.q.value().re) && p.n.iter().chain(&p.m).all(|s| (-2..=2).contains(s)));
    let reports: Vec<_> = points.par_iter().map(|p| verify_pentagon_index(p, policy)).collect();
    let (worst, fails, errs) = sweep(&reports, INDEX_TOL);
    let ok: Vec<&VerificationReport> = reports.iter().filter_map(|r| r.as_ref().ok()).collect();
    let fits: Vec<f64> = ok.iter().filter_map(|r| r.constant_fit).collect();
    let (fit_mean, fit_std) = mean_std(&fits);
    let naive: Vec<f64> = ok.iter().map(|r| r.diagnostics["nine_factor_naive_ratio"]).collect();
    let corrected: Vec<f64> = ok.iter().map(|r| r.diagnostics["nine_factor_corrected_ratio"]).collect();
    let (pm, ps) = mean_std(&naive);
    let (cm, cs) = mean_std(&corrected);
    verdict(
        fails == 0 && in_range && fits.len() == POINTS && fit_std < INDEX_FIT_STD,
        format!(
            "{POINTS} points ({spins} with spins), max rel residual {worst:.2e} (< {INDEX_TOL:e}); \
             constant_fit mean {fit_mean:.12} std {fit_std:.2e} (< {INDEX_FIT_STD:e}); \
             nine-factor constant: corrected form {cm:.12} (std {cs:.1e}), \
             naive form {pm:.4} (std {ps:.2}, point dependent){}",
            errs.first().map(|e| format!("; first error: {e}")).unwrap_or_default()
        ),
    )
}

fn gamma_pentagon(policy: &TruncationPolicy) -> Verdict {
    let start = Instant::now();
    let third = log_gamma_real(1.0 / 3.0).unwrap().0;
    let two_thirds = log_gamma_real(2.0 / 3.0).unwrap().0;
    let oracle = (9.0 * (third - two_thirds)).exp();
    let sym = eval_gamma_lhs(&GammaParams::symmetric(), policy);
    let (sym_ok, sym_detail) = match &sym {
        Ok(q) => {
            let rel = (q.value - oracle).norm() / oracle;
            (rel < GAMMA_TOL && q.converged, format!("symmetric LHS {:.10} vs {oracle:.10}, rel {rel:.2e}", q.value.re))
        }
        Err(e) => (false, format!("symmetric LHS error {e}")),
    };
    let mut rng = seeded_rng(5);
    let points: Vec<_> = (0..POINTS).map(|_| GammaParams::sample(&mut rng)).collect();
    let spins = points.iter().filter(|p| p.n.iter().chain(&p.m).any(|&s| s != 0)).count();
    let reports: Vec<_> = points.iter().map(|p| verify_pentagon_gamma(p, policy)).collect();
    let (worst, fails, errs) = sweep(&reports, GAMMA_TOL);
    let t = start.elapsed();
    verdict(
        sym_ok && fails == 0 && spins > 0 && t < GAMMA_BUDGET,
        format!(
            "{sym_detail}; {POINTS} points ({spins} with spins), max rel residual {worst:.2e} (< {GAMMA_TOL:e}); {t:.2?}{}",
            errs.first().map(|e| format!("; first error: {e}")).unwrap_or_default()
        ),
    )
}

fn equivalence() -> Verdict {
    let mut rng = seeded_rng(6);
    let reports: Vec<_> = (0..POINTS).map(|_| equivalence_check_gamma_rhs(&GammaParams::sample(&mut rng))).collect();
    let (worst, fails, _) = sweep(&reports, EQUIVALENCE_TOL);
    let consts: Vec<f64> = reports.iter().filter_map(|r| r.as_ref().ok()?.constant_fit).collect();
    let plus = consts.iter().filter(|&&k| (k - 1.0).abs() < 1e-9).count();
    let minus = consts.iter().filter(|&&k| (k + 1.0).abs() < 1e-9).count();
    verdict(
        fails == 0,
        format!(
            "{POINTS} points, max rel residual {worst:.2e} (< {EQUIVALENCE_TOL:e}); \
             constant two-B/nine-factor is (-1)^n3: +1 at {plus}, -1 at {minus}, other {}",
            consts.len() - plus - minus
        ),
    )
}

fn beta(policy: &TruncationPolicy) -> Verdict {
    let mut rng = seeded_rng(7);
    let reports: Vec<_> = (0..POINTS).map(|_| verify_pentagon_beta(&BetaParams::sample(&mut rng), policy)).collect();
    let (worst, fails, errs) = sweep(&reports, BETA_TOL);
    verdict(
        fails == 0,
        format!(
            "{POINTS} points, max rel residual {worst:.2e} (< {BETA_TOL:e}){}",
            errs.first().map(|e| format!("; first error: {e}")).unwrap_or_default()
        ),
    )
}

fn q_limit(policy: &TruncationPolicy) -> Verdict {
    let exact = q_to_1_probe(1.0, 2.0, &PROBE_QS, policy);
    let half = q_to_1_probe(0.5, 1.5, &PROBE_QS, policy);
    let full = limit_study_q_to_1(&GammaParams::symmetric(), &DEFAULT_Q_SEQUENCE, &limit_study_policy(policy));
    let (Ok(exact), Ok(half), Ok(full)) = (exact, half, full) else {
        return verdict(false, "a limit study returned an error");
    };
    let exact_ok = exact.rows.iter().all(|r| r.value == c(1.0, 0.0));
    let last = half.rows.last().unwrap();
    let half_dist = (last.value - 0.5).norm();
    let order = half.fitted_order.unwrap_or(f64::NAN);
    let dists: Vec<String> = full.rows.iter().map(|r| format!("{:.4}", r.distance)).collect();
    verdict(
        exact_ok && half_dist < PROBE_DISTANCE && order >= PROBE_MIN_ORDER && full.monotone,
        format!(
            "probe (1,2) exactly 1 at all q: {exact_ok}; probe (1/2,3/2) at q=0.999 off by {half_dist:.2e} \
             (< {PROBE_DISTANCE:e}), fitted order {order:.4} (>= {PROBE_MIN_ORDER}); \
             full identity distances {} along q = {:?}, monotone {}",
            dists.join(" > "),
            DEFAULT_Q_SEQUENCE,
            full.monotone
        ),
    )
}

fn omega_limit(policy: &TruncationPolicy) -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for &(re, im) in &DEFAULT_OMEGA_ARGUMENTS {
        match limit_study_omega(c(re, im), &DEFAULT_T_SEQUENCE, policy) {
            Ok(t) => {
                ok &= t.monotone;
                let d: Vec<String> = t.rows.iter().map(|r| format!("{:.2e}", r.distance)).collect();
                parts.push(format!("z={re}{im:+}i: {}", d.join(" > ")));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("z={re}{im:+}i: error {e}"));
            }
        }
    }
    verdict(ok, format!("|w2| = {:?}; {}", DEFAULT_T_SEQUENCE, parts.join("; ")))
}

fn invariants(policy: &TruncationPolicy) -> Verdict {
    let mut failures = Vec::new();
    let mut check = |name: &str, err: f64, tol: f64| {
        if !(err < tol) {
            failures.push(format!("{name}: {err:.2e} >= {tol:e}"));
        }
    };
    let rel = |a: Complex64, b: Complex64| (a - b).norm() / b.norm();

    for z in [c(0.3, 0.2), c(2.7, -1.1), c(-1.4, 0.6), c(0.5, 8.0)] {
        let g = gamma(z).unwrap();
        check("gamma recurrence", rel(gamma(z + 1.0).unwrap(), z * g), INVARIANT_TOL);
        let refl = g * gamma(1.0 - z).unwrap() * (PI * z).sin();
        check("gamma reflection", rel(refl, c(PI, 0.0)), INVARIANT_TOL);
    }

    for (a, q) in [(c(0.4, 0.1), c(0.5, 0.0)), (c(-0.7, 0.3), c(0.3, 0.6)), (c(0.95, 0.0), c(0.9, 0.0))] {
        let nome = Nome::new(q).unwrap();
        let lhs = qpoch_inf(a, nome, policy).unwrap();
        let rhs = (1.0 - a) * qpoch_inf(a * q, nome, policy).unwrap();
        check("q-Pochhammer recurrence", rel(lhs, rhs), INVARIANT_TOL);
    }

    for w2 in [c(0.4, 0.9), c(0.3, 1.0), c(-0.2, 1.7), c(0.1, 3.0)] {
        let w = ModularPair::new(c(1.0, 0.0), w2).unwrap();
        // An evaluation error shows up as a NaN, which fails every check.
        let g = |u| hyperbolic_gamma(u, &w, policy).unwrap_or(c(f64::NAN, f64::NAN));
        check("hyperbolic self-dual point", (g(w.sum() / 2.0) - 1.0).norm(), SELF_DUAL_TOL);
        for u in [c(0.37, 0.21), c(0.8, -0.4), c(-0.2, 0.5), c(0.55, 1.9)] {
            check("hyperbolic inversion", (g(u) * g(w.sum() - u) - 1.0).norm(), INVARIANT_TOL);
            let s1 = 2.0 * (PI * u / w.omega2()).sin();
            check("hyperbolic recurrence in w1", rel(g(u + w.omega1()) / g(u), s1), INVARIANT_TOL);
            let s2 = 2.0 * (PI * u / w.omega1()).sin();
            check("hyperbolic recurrence in w2", rel(g(u + w.omega2()) / g(u), s2), INVARIANT_TOL);
        }
    }

    for k in 1..100 {
        let x = k as f64 / 100.0;
        let s = rogers_l(x).unwrap() + rogers_l(1.0 - x).unwrap();
        check("Rogers reflection", (s - PI * PI / 6.0).abs(), ROGERS_TOL);
    }

    let n = failures.len();
    verdict(
        n == 0,
        if n == 0 {
            format!(
                "gamma recurrence/reflection, q-Pochhammer recurrence, hyperbolic recurrence/inversion \
                 (< {INVARIANT_TOL:e}), self-dual point (< {SELF_DUAL_TOL:e}), Rogers reflection (< {ROGERS_TOL:e})"
            )
        } else {
            format!("{n} failures; first: {}", failures[0])
        },
    )
}

fn main() {
    // Under `cargo test` the harness passes filter flags; honour `--list`.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let policy = TruncationPolicy::default();
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict + '_>)> = vec![
        ("operator pentagon, exact", Box::new(operator)),
        ("classical pentagon", Box::new(classical)),
        ("hyperbolic pentagon", Box::new(|| hyperbolic(&policy))),
        ("index pentagon", Box::new(|| index(&policy))),
        ("gamma pentagon", Box::new(|| gamma_pentagon(&policy))),
        ("right-hand side equivalence", Box::new(equivalence)),
        ("beta pentagon", Box::new(|| beta(&policy))),
        ("q -> 1 limit", Box::new(|| q_limit(&policy))),
        ("w2 -> infinity limit", Box::new(|| omega_limit(&policy))),
        ("special-function invariants", Box::new(|| invariants(&policy))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        failed += !v.pass as usize;
        println!(
            "criterion {:>2} {} {name} [{:.1?}]: {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            start.elapsed(),
            v.detail
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
