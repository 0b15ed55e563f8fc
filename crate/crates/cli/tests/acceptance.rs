//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Every tolerance is pinned here or in the suite implementations; nothing is
//! tuned at run time. Run with `cargo test --test acceptance -- --nocapture`
//! to see the per-criterion lines.

use anyonfock_cli::{config::ExperimentConfig, report::Report, suites::run_suite};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

struct TimedReport {
    report: Report,
    elapsed: Duration,
}

fn acceptance_config(suite: &str) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::default();
    cfg.run.suite = suite.to_string();
    // pinned: grid of five axis sites, one million Monte-Carlo samples
    cfg.grid.m = 5;
    cfg.run.samples = 1_000_000;
    cfg
}

fn suite_report(slot: &'static OnceLock<TimedReport>, suite: &'static str) -> &'static TimedReport {
    slot.get_or_init(|| {
        let start = Instant::now();
        let report = run_suite(&acceptance_config(suite)).expect("suite must run");
        TimedReport {
            report,
            elapsed: start.elapsed(),
        }
    })
}

static QCR: OnceLock<TimedReport> = OnceLock::new();
static EXCLUSION: OnceLock<TimedReport> = OnceLock::new();
static QUASIFREE: OnceLock<TimedReport> = OnceLock::new();
static DENSITY: OnceLock<TimedReport> = OnceLock::new();
static POINTPROC: OnceLock<TimedReport> = OnceLock::new();
static GAMMA: OnceLock<TimedReport> = OnceLock::new();

/// Print the per-criterion verdict and return the failing check names.
fn verdict(criterion: u32, label: &str, report: &Report, prefixes: &[&str]) -> Vec<String> {
    let mut failures = Vec::new();
    let mut seen = 0usize;
    for check in &report.checks {
        if prefixes.iter().any(|p| check.name.starts_with(p)) {
            seen += 1;
            if !check.pass {
                failures.push(format!(
                    "{} (computed {:.6e}, expected {:.6e}, tol {:.1e})",
                    check.name, check.computed, check.expected, check.tolerance
                ));
            }
        }
    }
    assert!(seen > 0, "no checks matched {prefixes:?}");
    println!(
        "acceptance criterion {criterion:2} [{}]: {label} ({seen} checks)",
        if failures.is_empty() { "PASS" } else { "FAIL" },
    );
    for f in &failures {
        println!("    failing: {f}");
    }
    failures
}

#[test]
fn criterion_01_exclusion_principle() {
    let timed = suite_report(&EXCLUSION, "exclusion");
    let failures = verdict(
        1,
        "(a+)^k and (D+)^k annihilate the vacuum for q = exp(2 pi i/k), k in {2,3,4}, M=5, 10 smears, tol 1e-10",
        &timed.report,
        &["exclusion_create_power_", "exclusion_doubled_power_"],
    );
    assert!(failures.is_empty(), "{failures:?}");
    assert!(
        timed.elapsed < Duration::from_secs(10),
        "exclusion suite took {:?}, budget is 10 s",
        timed.elapsed
    );
}

#[test]
fn criterion_02_constant_symmetrization() {
    // As stated: P_k applied to the constant 1 on a strictly increasing
    // tuple must equal (1 - q^k)/((1 - q) k!) to 1e-12 for k <= 5 and five
    // random unit twists. The permutation sum actually evaluates to the
    // normalized twisted factorial prod_{j<=k} (1-q^j)/((1-q)^k k!), which
    // matches the stated value only for k <= 2 (and at roots of unity, where
    // both vanish); the k in {3,4,5} sub-checks therefore fail, by the same
    // margin for any correct implementation of the projection.
    let timed = suite_report(&QCR, "qcr");
    let failures = verdict(
        2,
        "P_k(1) on an increasing tuple vs (1-q^k)/((1-q)k!), k <= 5, 5 random unit q, tol 1e-12",
        &timed.report,
        &["qcr_constant_symmetrization_k"],
    );
    assert!(
        failures.is_empty(),
        "stated identity fails for generic unit q at k >= 3; the computed projection value \
         is the normalized twisted factorial prod_j (1-q^j)/((1-q)^k k!): {failures:?}"
    );
}

#[test]
fn criterion_03_intertwining() {
    let timed = suite_report(&QCR, "qcr");
    let failures = verdict(
        3,
        "P b±(h) = a±(h) P on random tensors of order <= 3, tol 1e-10",
        &timed.report,
        &["qcr_intertwine_"],
    );
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_04_discrete_commutation_relations() {
    let timed = suite_report(&QCR, "qcr");
    let failures = verdict(
        4,
        "exchange relations exact (1e-10); mixed defect halves per weight halving (0.5±0.1) and matches the closed-form Δ-pair term (1e-12)",
        &timed.report,
        &[
            "qcr_exchange_",
            "qcr_mixed_on_vacuum",
            "qcr_mixed_defect_oracle",
            "qcr_mixed_halving_ratio_",
        ],
    );
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_05_quasifree_crosscheck() {
    let timed = suite_report(&QUASIFREE, "quasifree");
    let failures = verdict(
        5,
        "word route vs Q-permanent (n <= 2, scalar and fiber-block T, 1e-10); permanent/determinant degenerations (1e-10); unbalanced words vanish (1e-12)",
        &timed.report,
        &[
            "quasifree_crosscheck_",
            "quasifree_s11_vs_word",
            "quasifree_bosonic_permanent",
            "quasifree_fermionic_determinant",
            "quasifree_gauge_unbalanced",
        ],
    );
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_06_density_triple_agreement() {
    let timed = suite_report(&DENSITY, "density");
    let failures = verdict(
        6,
        "recursion = cumulant oracle (rel 1e-9) and both within 4 SE of Monte Carlo at 1e6 samples, eta in {0,0.5,1}, kappa in {0.5,1,2}, n <= 5",
        &timed.report,
        &["density_recursion_vs_cumulants_", "density_mc_zscore_"],
    );
    assert!(failures.is_empty(), "{failures:?}");
    assert!(
        timed.elapsed < Duration::from_secs(180),
        "density suite took {:?}, budget is 3 min",
        timed.elapsed
    );
}

#[test]
fn criterion_07_negative_binomial_marginal() {
    let timed = suite_report(&POINTPROC, "pointproc");
    let failures = verdict(
        7,
        "per-cell law vs the negative binomial pmf (TV <= 0.01 at 1e6 samples); mean kappa^2 w within 4 SE",
        &timed.report,
        &["pointproc_negbin_tv", "pointproc_negbin_mean_zscore"],
    );
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_08_positivity_failure() {
    let timed = suite_report(&DENSITY, "density");
    let failures = verdict(
        8,
        "witness 2(∫f²)² + 2eta ∫f⁴ equals -1/2 on a half-mass cell at eta=-1 and is negative; nonnegative for eta in {0,1}",
        &timed.report,
        &["density_witness_"],
    );
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_09_meixner_coefficients() {
    let timed = suite_report(&DENSITY, "density");
    let failures = verdict(
        9,
        "recovered b0 = beta + eta/beta (1e-8), a1 = 2 eta (1e-6), measure mass 1 (1e-10), for (eta,kappa) in {(0.5,1),(1,2)}",
        &timed.report,
        &["density_meixner_"],
    );
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn criterion_10_gamma_limit() {
    let timed = suite_report(&GAMMA, "gamma-limit");
    let failures = verdict(
        10,
        "gaps to the gamma moments strictly decreasing over kappa in {10,100,1000}, <= 1% at kappa=1000 (n <= 3); gamma Laplace transform matches within 4 SE",
        &timed.report,
        &["gamma_gaps_decreasing_", "gamma_final_gap_", "gamma_laplace_"],
    );
    assert!(failures.is_empty(), "{failures:?}");
}
