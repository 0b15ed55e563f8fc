//! Named verification suites with pinned tolerances.
//!
//! Each suite wires engine operations into checks whose expected values and
//! tolerances are fixed here, not configurable: the config chooses grid size,
//! twist angle, model parameters, seeds and sample counts, while every
//! verdict threshold stays pinned in this module.

use crate::config::ExperimentConfig;
use crate::report::{CheckRecord, Report, Table};
use anyhow::bail;
use anyonfock::density::{
    gamma_limit_check, meixner_coeffs, positivity_witness, rho_moment, DensityParams,
};
use anyonfock::linalg::{determinant, permanent, SymMatrix};
use anyonfock::pointproc::{
    build_levy, empirical_prefix_moments, exact_joint_moment, laplace_check,
    sample_cell_histogram, sample_negbin_direct, tv_distance, LevyKind,
};
use anyonfock::qcore::{Grid, GridFunction, QKernel, SiteSpace};
use anyonfock::qfock::{
    annihilate, b_apply, exclusion_norm, mixed_defect_level1, mixed_relation_gap, project_qsym,
    qcr_residual, qsym_insert, random_function, random_off_delta_tensor, random_qsym_tensor,
    FockVector, LadderSign,
};
use anyonfock::quasifree::{
    crosscheck_npoint, d_plus_power_norm, npoint_qpermanent, s11, tau_vacuum, DoubledGrid, KPair,
    Sign, Word,
};
use anyonfock::rng::StreamRng;
use anyonfock::tensor::Tensor;
use anyonfock::{format_float, C64};
use rayon::prelude::*;
use std::time::Instant;

/// Suite names accepted by `run <suite>`.
pub const SUITES: [&str; 7] = [
    "qcr",
    "exclusion",
    "quasifree",
    "density",
    "pointproc",
    "gamma-limit",
    "all",
];

// Pinned tolerances. Algebraic identities on the grid are exact up to
// floating-point accumulation; statistical checks use four standard errors.
const TOL_ALGEBRAIC: f64 = 1e-10;
const TOL_EXACT: f64 = 1e-12;
const TOL_DEFECT_ORACLE: f64 = 1e-12;
const TOL_GAUGE: f64 = 1e-12;
const TOL_TRIPLE_RELATIVE: f64 = 1e-9;
const TOL_MEIXNER_MASS: f64 = 1e-10;
const TOL_MEIXNER_B0: f64 = 1e-8;
const TOL_MEIXNER_A1: f64 = 1e-6;
const TOL_TV: f64 = 0.01;
const TOL_Z: f64 = 4.0;
const TOL_GAMMA_FINAL_GAP: f64 = 0.01;
const HALVING_RATIO: f64 = 0.5;
const HALVING_SLACK: f64 = 0.1;

fn timed(mut record: CheckRecord, start: Instant) -> CheckRecord {
    record.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    record
}

fn real_smear(n_sites: usize, seed: u64) -> GridFunction {
    let f = random_function(n_sites, seed);
    GridFunction::new(f.values().iter().map(|v| C64::new(v.re, 0.0)).collect())
}

/// Random smear supported on a set of axis indices (all fibers).
fn smear_on_axes(grid: &Grid, axes: &[usize], seed: u64) -> GridFunction {
    let mut rng = StreamRng::from_stream(seed, 0x5a, 0);
    let values = (0..grid.n_sites())
        .map(|s| {
            if axes.contains(&grid.site_axis(s)) {
                C64::new(rng.uniform() - 0.5, rng.uniform() - 0.5)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    GridFunction::new(values)
}

/// Run the configured suite (or all of them).
pub fn run_suite(cfg: &ExperimentConfig) -> anyhow::Result<Report> {
    run_suite_with(cfg, false)
}

/// Run with optional parallel execution of independent suites. Results are
/// identical and identically ordered either way.
pub fn run_suite_with(cfg: &ExperimentConfig, parallel: bool) -> anyhow::Result<Report> {
    cfg.validate()?;
    let name = cfg.run.suite.as_str();
    if name != "all" {
        return dispatch(name, cfg);
    }
    let order = ["qcr", "exclusion", "quasifree", "density", "pointproc", "gamma-limit"];
    let parts: Vec<anyhow::Result<Report>> = if parallel {
        order.par_iter().map(|suite| dispatch(suite, cfg)).collect()
    } else {
        order.iter().map(|suite| dispatch(suite, cfg)).collect()
    };
    let mut report = Report::new("all", cfg.echo());
    for part in parts {
        report.extend(part?);
    }
    Ok(report)
}

fn dispatch(name: &str, cfg: &ExperimentConfig) -> anyhow::Result<Report> {
    match name {
        "qcr" => suite_qcr(cfg),
        "exclusion" => suite_exclusion(cfg),
        "quasifree" => suite_quasifree(cfg),
        "density" => suite_density(cfg),
        "pointproc" => suite_pointproc(cfg),
        "gamma-limit" => suite_gamma_limit(cfg),
        other => bail!("run.suite: unknown suite {other:?}"),
    }
}

/// Twisted commutation relations: intertwining, exchange exactness, the
/// coincidence defect of the mixed relation with its refinement law, and the
/// constant-symmetrization value.
fn suite_qcr(cfg: &ExperimentConfig) -> anyhow::Result<Report> {
    let mut report = Report::new("qcr", cfg.echo());
    let grid = cfg.build_grid()?;
    let kernel = cfg.build_kernel()?;
    let space = SiteSpace::single(&grid, kernel);
    let seed = cfg.run.seed;
    // residual checks need two levels of headroom above the occupied input
    let depth = cfg.fock.max_level.max(4);

    // intertwining P b± = a± P on random full tensors of order <= 3
    let start = Instant::now();
    let mut worst_plus = 0.0f64;
    let mut worst_minus = 0.0f64;
    for order in 1..=3usize.min(depth - 1) {
        let h = random_function(space.n_sites(), seed ^ 0x11 ^ order as u64);
        let raw = random_off_delta_tensor(&space, order, seed ^ 0x21 ^ order as u64)?;
        let projected = project_qsym(&space, &raw)?;
        let plus_a = qsym_insert(&space, &h, &projected)?;
        let plus_b = project_qsym(&space, &b_apply(&space, LadderSign::Plus, &h, &raw)?)?;
        worst_plus = worst_plus.max(plus_a.sub(&plus_b).sup_norm());
        let mut holder = FockVector::zero(&space, order)?;
        *holder.level_mut(order) = projected;
        let minus_a = annihilate(&space, &h, &holder)?;
        let minus_b = project_qsym(&space, &b_apply(&space, LadderSign::Minus, &h.conj(), &raw)?)?;
        worst_minus = worst_minus.max(minus_a.level(order - 1).sub(&minus_b).sup_norm());
    }
    report.checks.push(timed(
        CheckRecord::bounded("qcr_intertwine_create", worst_plus, TOL_ALGEBRAIC),
        start,
    ));
    report.checks.push(CheckRecord::bounded(
        "qcr_intertwine_annihilate",
        worst_minus,
        TOL_ALGEBRAIC,
    ));

    // exchange relations are exact on the grid
    let start = Instant::now();
    let g = random_function(space.n_sites(), seed ^ 0x31);
    let h = random_function(space.n_sites(), seed ^ 0x32);
    let mut f = FockVector::zero(&space, depth)?;
    *f.level_mut(0) = Tensor::scalar(C64::new(0.6, -0.2));
    *f.level_mut(1) = random_qsym_tensor(&space, 1, seed ^ 0x33)?;
    *f.level_mut(2) = random_qsym_tensor(&space, 2, seed ^ 0x34)?;
    let residual = qcr_residual(&space, &g, &h, &f)?;
    report.checks.push(timed(
        CheckRecord::bounded(
            "qcr_exchange_create",
            residual.exchange_create,
            TOL_ALGEBRAIC,
        ),
        start,
    ));
    report.checks.push(CheckRecord::bounded(
        "qcr_exchange_annihilate",
        residual.exchange_annihilate,
        TOL_ALGEBRAIC,
    ));

    // mixed relation: vacuum sector exact
    let start = Instant::now();
    let omega = FockVector::vacuum(&space, 2)?;
    let vac = qcr_residual(&space, &g, &h, &omega)?;
    report.checks.push(timed(
        CheckRecord::bounded("qcr_mixed_on_vacuum", vac.mixed, TOL_EXACT),
        start,
    ));

    // mixed relation: one-particle defect equals the closed-form Δ-pair term
    let start = Instant::now();
    let f1 = random_off_delta_tensor(&space, 1, seed ^ 0x35)?;
    let mut one = FockVector::zero(&space, 3)?;
    *one.level_mut(1) = f1.clone();
    let gap = mixed_relation_gap(&space, &g, &h, &one)?;
    let defect = mixed_defect_level1(&space, &g, &h, &f1)?;
    report.checks.push(timed(
        CheckRecord::bounded(
            "qcr_mixed_defect_oracle",
            gap.level(1).sub(&defect).sup_norm(),
            TOL_DEFECT_ORACLE,
        ),
        start,
    ));

    // mixed residual halves under two successive weight halvings
    let start = Instant::now();
    let mut halving_table = Table::new("qcr_halving", &["halvings", "residual", "ratio"]);
    let mut current = grid.clone();
    let mut residuals = Vec::new();
    for step in 0..3 {
        let hspace = SiteSpace::single(&current, kernel);
        let mut hf = FockVector::zero(&hspace, 3)?;
        *hf.level_mut(1) = random_off_delta_tensor(&hspace, 1, seed ^ 0x36)?;
        let r = qcr_residual(&hspace, &g, &h, &hf)?.mixed;
        let ratio = if step == 0 {
            f64::NAN
        } else {
            r / residuals[step - 1]
        };
        halving_table.push_row(vec![
            step.to_string(),
            format_float(r),
            if step == 0 {
                "-".to_string()
            } else {
                format_float(ratio)
            },
        ]);
        residuals.push(r);
        current = current.halve_weights();
    }
    report.tables.push(halving_table);
    report.checks.push(timed(
        CheckRecord::within(
            "qcr_mixed_halving_ratio_1",
            residuals[1] / residuals[0],
            HALVING_RATIO,
            HALVING_SLACK,
        ),
        start,
    ));
    report.checks.push(CheckRecord::within(
        "qcr_mixed_halving_ratio_2",
        residuals[2] / residuals[1],
        HALVING_RATIO,
        HALVING_SLACK,
    ));

    // constant symmetrization on a strictly increasing tuple against the
    // stated value (1 - q^k) / ((1 - q) k!), for five random unit twists
    for k in 1..=5usize {
        let start = Instant::now();
        let mut worst = 0.0f64;
        for draw in 0..5u64 {
            let mut rng = StreamRng::from_stream(seed ^ 0xC2, k as u64, draw);
            let q = C64::from_polar(1.0, rng.uniform() * std::f64::consts::TAU);
            let k_grid = Grid::uniform(k.max(2), 1.0, 1)?;
            let k_kernel = QKernel::new(q)?;
            let k_space = SiteSpace::single(&k_grid, k_kernel);
            let ones = Tensor::from_data(
                k_space.n_sites(),
                k,
                vec![C64::new(1.0, 0.0); k_space.n_sites().pow(k as u32)],
            )?;
            let projected = project_qsym(&k_space, &ones)?;
            let tuple: Vec<usize> = (0..k).collect();
            let value = projected.get(&tuple);
            let one = C64::new(1.0, 0.0);
            let stated = (one - q.powu(k as u32))
                / ((one - q) * anyonfock::perm::factorial(k));
            worst = worst.max((value - stated).norm());
        }
        report.checks.push(timed(
            CheckRecord::bounded(
                format!("qcr_constant_symmetrization_k{k}"),
                worst,
                TOL_EXACT,
            ),
            start,
        ));
    }
    Ok(report)
}

/// Root-of-unity exclusion: powers of the creation operator and of the
/// doubled-space raising combination annihilate the vacuum.
fn suite_exclusion(cfg: &ExperimentConfig) -> anyhow::Result<Report> {
    let mut report = Report::new("exclusion", cfg.echo());
    let grid = cfg.build_grid()?;
    let seed = cfg.run.seed;
    // fixed admissible operator scale: T = 0.64 stays below -1/eta for every
    // root of unity (eta >= -1)
    let pair_kappa = 0.8;
    for k in [2usize, 3, 4] {
        let kernel = QKernel::root_of_unity(1, k as u64)?;
        let space = SiteSpace::single(&grid, kernel);
        let doubled = DoubledGrid::new(&grid, kernel);
        let pair = KPair::scalar(&grid, kernel.eta(), pair_kappa)?;
        let start = Instant::now();
        let mut worst_create = 0.0f64;
        let mut worst_doubled = 0.0f64;
        for draw in 0..10u64 {
            let h = random_function(space.n_sites(), seed ^ 0xE0 ^ (k as u64) << 8 ^ draw);
            let omega = FockVector::vacuum(&space, k)?;
            worst_create = worst_create.max(exclusion_norm(&space, &h, k, &omega)?);
            worst_doubled = worst_doubled.max(d_plus_power_norm(&doubled, &pair, &h, k)?);
        }
        report.checks.push(timed(
            CheckRecord::bounded(
                format!("exclusion_create_power_k{k}"),
                worst_create,
                TOL_ALGEBRAIC,
            ),
            start,
        ));
        report.checks.push(CheckRecord::bounded(
            format!("exclusion_doubled_power_k{k}"),
            worst_doubled,
            TOL_ALGEBRAIC,
        ));
    }
    Ok(report)
}

/// Quasi-free state: word route against the Q-permanent, bosonic/fermionic
/// degenerations, and gauge invariance.
fn suite_quasifree(cfg: &ExperimentConfig) -> anyhow::Result<Report> {
    let mut report = Report::new("quasifree", cfg.echo());
    let seed = cfg.run.seed;
    let kernel = cfg.build_kernel()?;
    let kappa = cfg.model.kappa;

    // scalar T, n = 1: any smears (both routes exact)
    let grid = Grid::uniform(4, 1.0, 1)?;
    let pair = KPair::scalar(&grid, kernel.eta(), kappa)?;
    let start = Instant::now();
    let gs = vec![random_function(4, seed ^ 0x51)];
    let hs = vec![random_function(4, seed ^ 0x52)];
    let chk = crosscheck_npoint(&grid, kernel, &pair, &gs, &hs)?;
    report.checks.push(timed(
        CheckRecord::bounded("quasifree_crosscheck_n1_scalar", chk.residual, TOL_ALGEBRAIC),
        start,
    ));

    // scalar T, n = 2 with coincidence-free creator supports
    let start = Instant::now();
    let gs = vec![
        smear_on_axes(&grid, &[0, 1], seed ^ 0x53),
        smear_on_axes(&grid, &[2, 3], seed ^ 0x54),
    ];
    let hs = vec![
        random_function(4, seed ^ 0x55),
        random_function(4, seed ^ 0x56),
    ];
    let chk = crosscheck_npoint(&grid, kernel, &pair, &gs, &hs)?;
    report.checks.push(timed(
        CheckRecord::bounded("quasifree_crosscheck_n2_scalar", chk.residual, TOL_ALGEBRAIC),
        start,
    ));

    // fiber-block T, n = 1 and n = 2
    let bgrid = Grid::uniform(4, 1.0, 2)?;
    let block = match &cfg.model.t_block {
        Some(rows) if rows.len() == 2 => SymMatrix::from_rows(rows)?,
        _ => SymMatrix::from_rows(&[vec![0.9, 0.25], vec![0.25, 0.5]])?,
    };
    let bpair = KPair::uniform_block(&bgrid, kernel.eta(), block)?;
    let start = Instant::now();
    let gs = vec![random_function(bgrid.n_sites(), seed ^ 0x57)];
    let hs = vec![random_function(bgrid.n_sites(), seed ^ 0x58)];
    let chk = crosscheck_npoint(&bgrid, kernel, &bpair, &gs, &hs)?;
    report.checks.push(timed(
        CheckRecord::bounded("quasifree_crosscheck_n1_block", chk.residual, TOL_ALGEBRAIC),
        start,
    ));
    let start = Instant::now();
    let gs = vec![
        smear_on_axes(&bgrid, &[0, 1], seed ^ 0x59),
        smear_on_axes(&bgrid, &[2, 3], seed ^ 0x5a),
    ];
    let hs = vec![
        random_function(bgrid.n_sites(), seed ^ 0x5b),
        random_function(bgrid.n_sites(), seed ^ 0x5c),
    ];
    let chk = crosscheck_npoint(&bgrid, kernel, &bpair, &gs, &hs)?;
    report.checks.push(timed(
        CheckRecord::bounded("quasifree_crosscheck_n2_block", chk.residual, TOL_ALGEBRAIC),
        start,
    ));

    // two-point cross-representation identity
    let start = Instant::now();
    let g = random_function(bgrid.n_sites(), seed ^ 0x5d);
    let h = random_function(bgrid.n_sites(), seed ^ 0x5e);
    let doubled = DoubledGrid::new(&bgrid, kernel);
    let word = Word::new(vec![(Sign::Plus, g.clone()), (Sign::Minus, h.clone())]);
    let tau = tau_vacuum(&doubled, &bpair, &word)?;
    let direct = s11(&bgrid, &bpair, &g, &h);
    report.checks.push(timed(
        CheckRecord::bounded("quasifree_s11_vs_word", (tau - direct).norm(), TOL_ALGEBRAIC),
        start,
    ));

    // bosonic degeneration: permanent of the two-point matrix
    let start = Instant::now();
    let bose = QKernel::new(C64::new(1.0, 0.0))?;
    let bose_pair = KPair::scalar(&grid, 1.0, kappa)?;
    let gs: Vec<GridFunction> = (0..3).map(|i| random_function(4, seed ^ (0x60 + i))).collect();
    let hs: Vec<GridFunction> = (0..3).map(|i| random_function(4, seed ^ (0x70 + i))).collect();
    let qp = npoint_qpermanent(&grid, bose, &bose_pair, &gs, &hs)?;
    let matrix: Vec<Vec<C64>> = (0..3)
        .map(|i| (0..3).map(|j| s11(&grid, &bose_pair, &gs[i], &hs[j])).collect())
        .collect();
    report.checks.push(timed(
        CheckRecord::bounded(
            "quasifree_bosonic_permanent",
            (qp - permanent(&matrix)).norm(),
            TOL_ALGEBRAIC,
        ),
        start,
    ));

    // fermionic degeneration: determinant, distinct axis supports
    let start = Instant::now();
    let fermi = QKernel::new(C64::new(-1.0, 0.0))?;
    let fermi_pair = KPair::scalar(&grid, -1.0, 0.7)?;
    let gs: Vec<GridFunction> = (0..3)
        .map(|i| smear_on_axes(&grid, &[i], seed ^ (0x80 + i as u64)))
        .collect();
    let hs: Vec<GridFunction> = (0..3)
        .map(|i| smear_on_axes(&grid, &[i], seed ^ (0x90 + i as u64)))
        .collect();
    let qp = npoint_qpermanent(&grid, fermi, &fermi_pair, &gs, &hs)?;
    let matrix: Vec<Vec<C64>> = (0..3)
        .map(|i| (0..3).map(|j| s11(&grid, &fermi_pair, &gs[i], &hs[j])).collect())
        .collect();
    report.checks.push(timed(
        CheckRecord::bounded(
            "quasifree_fermionic_determinant",
            (qp - determinant(&matrix)).norm(),
            TOL_ALGEBRAIC,
        ),
        start,
    ));

    // gauge invariance: unbalanced words vanish
    let start = Instant::now();
    let doubled = DoubledGrid::new(&grid, kernel);
    let mut worst = 0.0f64;
    let a = random_function(4, seed ^ 0xa1);
    let b = random_function(4, seed ^ 0xa2);
    let unbalanced = [
        vec![(Sign::Plus, a.clone())],
        vec![(Sign::Minus, b.clone())],
        vec![(Sign::Plus, a.clone()), (Sign::Plus, b.clone()), (Sign::Minus, a.clone())],
        vec![(Sign::Minus, a.clone()), (Sign::Plus, b.clone()), (Sign::Plus, a.clone()), (Sign::Plus, b.clone())],
    ];
    for letters in unbalanced {
        let word = Word::new(letters);
        worst = worst.max(tau_vacuum(&doubled, &pair, &word)?.norm());
    }
    report.checks.push(timed(
        CheckRecord::bounded("quasifree_gauge_unbalanced", worst, TOL_GAUGE),
        start,
    ));
    Ok(report)
}

/// Density functional: recursion vs cumulant oracle vs Monte Carlo, the
/// positivity witness, and the recurrence-coefficient recovery.
fn suite_density(cfg: &ExperimentConfig) -> anyhow::Result<Report> {
    let mut report = Report::new("density", cfg.echo());
    let grid = cfg.build_grid()?;
    let seed = cfg.run.seed;
    let samples = cfg.run.samples;
    let fs: Vec<GridFunction> = (0..5)
        .map(|i| real_smear(grid.n_sites(), seed ^ (0xD0 + i as u64)))
        .collect();

    for &eta in &[0.0, 0.5, 1.0] {
        for &kappa in &[0.5, 1.0, 2.0] {
            let params = DensityParams::new(eta, kappa)?;
            let kind = if eta == 0.0 {
                LevyKind::Poisson
            } else {
                LevyKind::NegBin
            };
            let model = build_levy(kind, eta, kappa)?;
            let tag = format!("eta{eta}_kappa{kappa}");

            let start = Instant::now();
            let mut worst_rel = 0.0f64;
            let mut exacts = Vec::with_capacity(5);
            for n in 1..=5usize {
                let lhs = rho_moment(&grid, &fs[..n], &params)?;
                let rhs = exact_joint_moment(&fs[..n], &model, &grid)?;
                exacts.push(rhs);
                worst_rel = worst_rel.max((lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE));
            }
            report.checks.push(timed(
                CheckRecord::bounded(
                    format!("density_recursion_vs_cumulants_{tag}"),
                    worst_rel,
                    TOL_TRIPLE_RELATIVE,
                ),
                start,
            ));

            let start = Instant::now();
            let mc = empirical_prefix_moments(&fs, &model, &grid, samples, seed ^ 0xDD);
            let mut worst_z = 0.0f64;
            for (n, &(mean, se)) in mc.iter().enumerate() {
                let z = (mean - exacts[n]).abs() / se.max(f64::MIN_POSITIVE);
                worst_z = worst_z.max(z);
            }
            report.checks.push(timed(
                CheckRecord::bounded(format!("density_mc_zscore_{tag}"), worst_z, TOL_Z),
                start,
            ));
        }
    }

    // positivity witness: 2 (∫f^2)^2 + 2 eta ∫f^4, closed form
    let start = Instant::now();
    let cell = Grid::new(vec![0.0], vec![0.5], 1)?;
    let one = GridFunction::constant(C64::new(1.0, 0.0), 1);
    let witness = positivity_witness(&cell, &one, -1.0);
    report.checks.push(timed(
        CheckRecord::within("density_witness_eta_neg1_halfcell", witness, -0.5, 1e-15),
        start,
    ));
    report.checks.push(CheckRecord::bounded(
        "density_witness_negative_for_eta_neg1",
        witness,
        -f64::MIN_POSITIVE,
    ));
    for &eta in &[0.0, 1.0] {
        let f = real_smear(grid.n_sites(), seed ^ 0xDE);
        let w = positivity_witness(&grid, &f, eta);
        report.checks.push(CheckRecord::bounded(
            format!("density_witness_nonnegative_eta{eta}"),
            (-w).max(0.0),
            0.0,
        ));
    }

    // recurrence-coefficient recovery
    for &(eta, kappa) in &[(0.5, 1.0), (1.0, 2.0)] {
        let start = Instant::now();
        let params = DensityParams::new(eta, kappa)?;
        let recovery = meixner_coeffs(&params, 2)?;
        let tag = format!("eta{eta}_kappa{kappa}");
        report.checks.push(timed(
            CheckRecord::within(
                format!("density_meixner_mass_{tag}"),
                recovery.zeta_prime_mass,
                1.0,
                TOL_MEIXNER_MASS,
            ),
            start,
        ));
        let (_, b0) = recovery.coefficients[0];
        let (a1, _) = recovery.coefficients[1];
        report.checks.push(CheckRecord::within(
            format!("density_meixner_b0_{tag}"),
            b0,
            params.lambda(),
            TOL_MEIXNER_B0,
        ));
        report.checks.push(CheckRecord::within(
            format!("density_meixner_a1_{tag}"),
            a1,
            2.0 * eta,
            TOL_MEIXNER_A1,
        ));
    }
    Ok(report)
}

/// Point-process marginals: negative binomial law per cell, sampler-route
/// agreement, and the Laplace functional.
fn suite_pointproc(cfg: &ExperimentConfig) -> anyhow::Result<Report> {
    let mut report = Report::new("pointproc", cfg.echo());
    let grid = cfg.build_grid()?;
    let seed = cfg.run.seed;
    let samples = cfg.run.samples;
    let eta = cfg.model.eta;
    let kappa = cfg.model.kappa;
    if !(eta > 0.0) {
        bail!("model.eta: pointproc suite needs eta > 0 for the negative binomial law");
    }
    let model = build_levy(LevyKind::NegBin, eta, kappa)?;
    let cell = 0usize;
    let w = grid.site_weight(cell);
    let kmax = 64usize;

    let start = Instant::now();
    let summary = sample_cell_histogram(&grid, &model, cell, kmax, samples, seed ^ 0xF0);
    let tv = tv_distance(&summary.histogram, samples, |k| {
        model.cell_pmf(w, k).unwrap_or(0.0)
    });
    report.checks.push(timed(
        CheckRecord::bounded("pointproc_negbin_tv", tv, TOL_TV),
        start,
    ));
    let mean_z =
        (summary.mean - kappa * kappa * w).abs() / summary.std_error.max(f64::MIN_POSITIVE);
    report.checks.push(CheckRecord::bounded(
        "pointproc_negbin_mean_zscore",
        mean_z,
        TOL_Z,
    ));

    // pmf table: k, empirical, exact
    let mut pmf_table = Table::new("negbin_pmf", &["k", "empirical", "exact"]);
    for k in 0..kmax {
        let exact = model.cell_pmf(w, k)?;
        if k > 5 && exact < 1e-9 {
            break;
        }
        pmf_table.push_row(vec![
            k.to_string(),
            format_float(summary.histogram[k] as f64 / samples as f64),
            format_float(exact),
        ]);
    }
    report.tables.push(pmf_table);

    // the compound and direct sampling routes draw the same law
    let start = Instant::now();
    let mut direct_hist = vec![0u64; kmax];
    for rep in 0..samples {
        let mut rng = StreamRng::from_stream(seed ^ 0xF1, cell as u64, rep);
        let draw = sample_negbin_direct(w / eta, model.success_parameter(), &mut rng) as usize;
        if draw < kmax {
            direct_hist[draw] += 1;
        }
    }
    let routes_tv: f64 = summary
        .histogram
        .iter()
        .zip(direct_hist.iter())
        .map(|(&a, &b)| ((a as f64 - b as f64) / samples as f64).abs())
        .sum::<f64>()
        * 0.5;
    report.checks.push(timed(
        CheckRecord::bounded("pointproc_negbin_routes_tv", routes_tv, TOL_TV),
        start,
    ));

    // Laplace functional: jump-series exponent equals the logarithm form,
    // and the sampler reproduces it
    let start = Instant::now();
    let t = 0.6f64;
    let f = GridFunction::constant(C64::new(-t, 0.0), grid.n_sites());
    let mc_samples = samples.min(200_000);
    let chk = laplace_check(&f, &model, &grid, mc_samples, seed ^ 0xF2)?;
    let p = model.success_parameter();
    let log_form: f64 = (0..grid.n_sites())
        .map(|c| grid.site_weight(c) / eta * ((1.0 - p).ln() - (1.0 - p * (-t).exp()).ln()))
        .sum();
    report.checks.push(timed(
        CheckRecord::bounded(
            "pointproc_negbin_laplace_series_vs_log",
            (chk.exact.ln() - log_form).abs(),
            TOL_EXACT,
        ),
        start,
    ));
    report.checks.push(CheckRecord::bounded(
        "pointproc_negbin_laplace_zscore",
        chk.gap / chk.std_error.max(f64::MIN_POSITIVE),
        TOL_Z,
    ));
    Ok(report)
}

/// Large-kappa limit: unscaled density moments against gamma-measure
/// moments, and the gamma Laplace transform.
fn suite_gamma_limit(cfg: &ExperimentConfig) -> anyhow::Result<Report> {
    let mut report = Report::new("gamma-limit", cfg.echo());
    let seed = cfg.run.seed;
    let samples = cfg.run.samples;
    let grid = Grid::uniform(3, 1.0, 1)?;
    let f = real_smear(grid.n_sites(), seed ^ 0xAA);
    let kappas = [10.0, 100.0, 1000.0];
    for &eta in &[0.5, 1.0] {
        for n in 1..=3usize {
            let start = Instant::now();
            let rows = gamma_limit_check(&grid, &f, eta, n, &kappas)?;
            let mut table = Table::new(
                format!("gamma_sweep_eta{eta}_n{n}"),
                &["kappa", "moment", "gamma_moment", "gap"],
            );
            for row in &rows {
                table.push_row(vec![
                    format_float(row.kappa),
                    format_float(row.moment),
                    format_float(row.gamma_moment),
                    format_float(row.gap),
                ]);
            }
            report.tables.push(table);
            let decreasing = rows[0].gap > rows[1].gap && rows[1].gap > rows[2].gap;
            let mut check = CheckRecord::bounded(
                format!("gamma_gaps_decreasing_eta{eta}_n{n}"),
                rows[2].gap / rows[1].gap.max(f64::MIN_POSITIVE),
                1.0,
            );
            check.pass = decreasing;
            report.checks.push(timed(check, start));
            report.checks.push(CheckRecord::bounded(
                format!("gamma_final_gap_eta{eta}_n{n}"),
                rows[2].gap / rows[2].gamma_moment.abs().max(f64::MIN_POSITIVE),
                TOL_GAMMA_FINAL_GAP,
            ));
        }

        // Laplace transform against (1 + sqrt(eta) t)^(-w/eta)
        let start = Instant::now();
        let t = 0.7f64;
        let cell_grid = Grid::new(vec![1.0], vec![0.9], 1)?;
        let smear = GridFunction::constant(C64::new(-t, 0.0), 1);
        let model = build_levy(LevyKind::Gamma, eta, 1.0)?;
        let chk = laplace_check(&smear, &model, &cell_grid, samples, seed ^ 0xAB)?;
        let closed = (1.0 + eta.sqrt() * t).powf(-0.9 / eta);
        report.checks.push(timed(
            CheckRecord::bounded(
                format!("gamma_laplace_closed_form_eta{eta}"),
                (chk.exact - closed).abs(),
                TOL_EXACT,
            ),
            start,
        ));
        report.checks.push(CheckRecord::bounded(
            format!("gamma_laplace_zscore_eta{eta}"),
            chk.gap / chk.std_error.max(f64::MIN_POSITIVE),
            TOL_Z,
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_config() -> ExperimentConfig {
        let mut cfg = ExperimentConfig::default();
        cfg.run.samples = 20_000;
        cfg
    }

    #[test]
    fn exclusion_suite_passes() {
        let mut cfg = quick_config();
        cfg.run.suite = "exclusion".into();
        let report = run_suite(&cfg).unwrap();
        assert!(report.passed(), "{}", report.console_summary());
    }

    #[test]
    fn quasifree_suite_passes() {
        let mut cfg = quick_config();
        cfg.run.suite = "quasifree".into();
        let report = run_suite(&cfg).unwrap();
        assert!(report.passed(), "{}", report.console_summary());
    }

    #[test]
    fn qcr_suite_has_known_constant_symmetrization_failures() {
        let mut cfg = quick_config();
        cfg.run.suite = "qcr".into();
        let report = run_suite(&cfg).unwrap();
        for check in &report.checks {
            let known_failure = check.name.contains("constant_symmetrization_k3")
                || check.name.contains("constant_symmetrization_k4")
                || check.name.contains("constant_symmetrization_k5");
            assert_eq!(
                check.pass, !known_failure,
                "{}: computed {}",
                check.name, check.computed
            );
        }
    }

    #[test]
    fn suites_are_order_independent() {
        let mut cfg = quick_config();
        cfg.run.suite = "exclusion".into();
        let a = run_suite(&cfg).unwrap().to_json();
        cfg.run.suite = "quasifree".into();
        let _ = run_suite(&cfg).unwrap();
        cfg.run.suite = "exclusion".into();
        let b = run_suite(&cfg).unwrap().to_json();
        assert_eq!(a, b);
    }
}
