//! Exact and Monte-Carlo sides of the probabilistic laws.
//!
//! Three completely random measures occur: the Poisson point process with
//! intensity `kappa^2 m`, the negative binomial point process with jump
//! measure `zeta = (1/eta) sum_k (eta/(eta+kappa^{-2}))^k / k * delta_k`, and
//! the gamma random measure with jump density `(1/(s eta)) exp(-s/sqrt(eta))`.
//! Exact joint moments come from the cumulant expansion of the Laplace
//! transform, converted through set partitions; samplers draw per-cell
//! marginals from counter-based streams so every run is reproducible.

use crate::qcore::{Grid, GridFunction};
use crate::rng::StreamRng;
use crate::setpart::set_partitions;
use crate::{Error, Result, C64};
use rand_distr::{Distribution, Gamma, Poisson};

/// Relative mass below which the jump-measure tail is dropped.
pub const TAIL_CUT: f64 = 1e-14;

/// Supported completely random measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevyKind {
    Poisson,
    NegBin,
    Gamma,
}

impl LevyKind {
    pub fn name(&self) -> &'static str {
        match self {
            LevyKind::Poisson => "poisson",
            LevyKind::NegBin => "negbin",
            LevyKind::Gamma => "gamma",
        }
    }
}

/// Jump-size measure of one of the three laws.
#[derive(Debug, Clone)]
pub struct LevyModel {
    kind: LevyKind,
    eta: f64,
    kappa: f64,
    /// `(jump size, mass)` atoms for the discrete kinds; empty for gamma.
    atoms: Vec<(f64, f64)>,
    /// Total jump-measure mass; `None` flags infinite activity (gamma).
    total_mass: Option<f64>,
    /// Estimated mass dropped by the tail cut.
    truncated_mass: f64,
    /// Success parameter `eta kappa^2 / (1 + eta kappa^2)` (negbin only).
    success: f64,
}

impl LevyModel {
    pub fn kind(&self) -> LevyKind {
        self.kind
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn total_mass(&self) -> Option<f64> {
        self.total_mass
    }

    pub fn truncated_mass(&self) -> f64 {
        self.truncated_mass
    }

    /// Success parameter of the per-cell negative binomial marginal.
    pub fn success_parameter(&self) -> f64 {
        self.success
    }

    /// `j`-th moment of the jump measure, `j >= 1`. Series kinds are summed
    /// to machine convergence, independent of the sampler's tail cut.
    pub fn zeta_moment(&self, j: usize) -> Result<f64> {
        if j == 0 {
            return Err(Error::InvalidParameter {
                name: "j",
                reason: "moments start at order 1".into(),
            });
        }
        match self.kind {
            LevyKind::Poisson => Ok(self.kappa * self.kappa),
            LevyKind::NegBin => {
                // (1/eta) sum_{k>=1} k^{j-1} p^k
                let p = self.success;
                let mut total = 0.0f64;
                let mut k = 1usize;
                loop {
                    let term = (k as f64).powi(j as i32 - 1) * p.powi(k as i32);
                    total += term;
                    if k > j && term < f64::EPSILON * total {
                        break;
                    }
                    k += 1;
                    if k > 10_000_000 {
                        return Err(Error::InvalidParameter {
                            name: "j",
                            reason: "jump-moment series failed to converge".into(),
                        });
                    }
                }
                Ok(total / self.eta)
            }
            LevyKind::Gamma => {
                // (1/eta) ∫ s^{j-1} exp(-s/sqrt(eta)) ds = (j-1)! eta^{j/2 - 1}
                let fact: f64 = (1..j).map(|i| i as f64).product();
                Ok(fact * self.eta.powf(j as f64 / 2.0 - 1.0))
            }
        }
    }

    /// Per-cell marginal pmf at occupation `n` for a cell of mass `w`
    /// (negative binomial with size `w/eta`, success `p`; Poisson for the
    /// limiting kind).
    pub fn cell_pmf(&self, w: f64, n: usize) -> Result<f64> {
        match self.kind {
            LevyKind::Poisson => {
                let rate = self.kappa * self.kappa * w;
                let mut value = (-rate).exp();
                for i in 1..=n {
                    value *= rate / i as f64;
                }
                Ok(value)
            }
            LevyKind::NegBin => {
                let r = w / self.eta;
                let p = self.success;
                let mut value = (1.0 - p).powf(r);
                for i in 0..n {
                    value *= p * (r + i as f64) / (i as f64 + 1.0);
                }
                Ok(value)
            }
            LevyKind::Gamma => Err(Error::InvalidParameter {
                name: "kind",
                reason: "gamma marginals are continuous".into(),
            }),
        }
    }
}

/// Build one of the three jump-measure models.
pub fn build_levy(kind: LevyKind, eta: f64, kappa: f64) -> Result<LevyModel> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::InvalidParameter {
            name: "kappa",
            reason: "must be positive and finite".into(),
        });
    }
    match kind {
        LevyKind::Poisson => Ok(LevyModel {
            kind,
            eta: 0.0,
            kappa,
            atoms: vec![(1.0, kappa * kappa)],
            total_mass: Some(kappa * kappa),
            truncated_mass: 0.0,
            success: 0.0,
        }),
        LevyKind::NegBin => {
            if !(eta > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "eta",
                    reason: "negative binomial law needs eta > 0".into(),
                });
            }
            let p = eta * kappa * kappa / (1.0 + eta * kappa * kappa);
            let mut atoms = Vec::new();
            let mut total = 0.0f64;
            let mut k = 1usize;
            loop {
                let mass = p.powi(k as i32) / (eta * k as f64);
                if k > 2 && mass < TAIL_CUT * total {
                    break;
                }
                atoms.push((k as f64, mass));
                total += mass;
                k += 1;
                if k > 1_000_000 {
                    break;
                }
            }
            // geometric bound on the dropped tail
            let tail = atoms.last().map_or(0.0, |&(_, m)| m * p / (1.0 - p));
            Ok(LevyModel {
                kind,
                eta,
                kappa,
                atoms,
                total_mass: Some(total),
                truncated_mass: tail,
                success: p,
            })
        }
        LevyKind::Gamma => {
            if !(eta > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "eta",
                    reason: "gamma law needs eta > 0".into(),
                });
            }
            Ok(LevyModel {
                kind,
                eta,
                kappa,
                atoms: Vec::new(),
                total_mass: None,
                truncated_mass: 0.0,
                success: 0.0,
            })
        }
    }
}

/// One sampled configuration: a nonnegative mass per grid cell (integer for
/// the point-process kinds, real for gamma).
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfiguration {
    masses: Vec<f64>,
    seed: u64,
    replicate: u64,
    kind: LevyKind,
}

impl PointConfiguration {
    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn replicate(&self) -> u64 {
        self.replicate
    }

    pub fn kind(&self) -> LevyKind {
        self.kind
    }

    /// Pairing `<f, gamma> = sum_c f(c) mass_c`.
    pub fn pair(&self, f: &GridFunction) -> C64 {
        self.masses
            .iter()
            .enumerate()
            .map(|(c, &m)| f.get(c) * m)
            .sum()
    }

    /// CSV rows `cell_index,mass` with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("cell_index,mass\n");
        for (c, &m) in self.masses.iter().enumerate() {
            out.push_str(&format!("{c},{}\n", crate::format_float(m)));
        }
        out
    }

    /// Deterministic JSON document.
    pub fn to_json(&self) -> String {
        let masses = self
            .masses
            .iter()
            .map(|&m| crate::format_float(m))
            .collect::<Vec<_>>()
            .join(", ");
        format!(
            "{{\"kind\": \"{}\", \"masses\": [{}], \"replicate\": {}, \"seed\": {}}}\n",
            self.kind.name(),
            masses,
            self.replicate,
            self.seed
        )
    }
}

fn sample_logarithmic(p: f64, rng: &mut StreamRng) -> u64 {
    // pmf(k) = p^k / (k L), L = -ln(1-p); inversion walk
    let l = -(1.0 - p).ln();
    let u = rng.uniform_open();
    let mut k = 1u64;
    let mut term = p / l;
    let mut cum = term;
    while u > cum && k < 100_000 {
        term *= p * k as f64 / (k + 1) as f64;
        k += 1;
        cum += term;
    }
    k
}

fn sample_cell(model: &LevyModel, w: f64, rng: &mut StreamRng) -> f64 {
    match model.kind {
        LevyKind::Poisson => {
            let rate = model.kappa * model.kappa * w;
            Poisson::new(rate).expect("positive rate").sample(rng)
        }
        LevyKind::NegBin => {
            // compound Poisson: rate w * zeta(R+), logarithmic jump sizes
            let rate = w * model.total_mass.expect("finite activity");
            let jumps = Poisson::new(rate).expect("positive rate").sample(rng) as u64;
            let mut total = 0u64;
            for _ in 0..jumps {
                total += sample_logarithmic(model.success, rng);
            }
            total as f64
        }
        LevyKind::Gamma => {
            let shape = w / model.eta;
            let scale = model.eta.sqrt();
            Gamma::new(shape, scale).expect("positive shape").sample(rng)
        }
    }
}

/// Draw one configuration, replicate 0.
pub fn sample(grid: &Grid, model: &LevyModel, seed: u64) -> PointConfiguration {
    sample_replicate(grid, model, seed, 0)
}

/// Draw the configuration of a given replicate index. Each `(cell,
/// replicate)` pair has its own stream, so any subset of replicates can be
/// drawn in any order with identical results.
pub fn sample_replicate(
    grid: &Grid,
    model: &LevyModel,
    seed: u64,
    replicate: u64,
) -> PointConfiguration {
    let n = grid.n_sites();
    let mut masses = Vec::with_capacity(n);
    for cell in 0..n {
        let mut rng = StreamRng::from_stream(seed, cell as u64, replicate);
        masses.push(sample_cell(model, grid.site_weight(cell), &mut rng));
    }
    PointConfiguration {
        masses,
        seed,
        replicate,
        kind: model.kind,
    }
}

/// Direct negative binomial draw (gamma-Poisson mixture), the independent
/// route used to validate the compound-Poisson sampler.
pub fn sample_negbin_direct(r: f64, p: f64, rng: &mut StreamRng) -> f64 {
    let scale = p / (1.0 - p);
    let lambda: f64 = Gamma::new(r, scale).expect("positive shape").sample(rng);
    if lambda <= 0.0 {
        return 0.0;
    }
    Poisson::new(lambda).expect("positive rate").sample(rng)
}

/// Maximum number of smears in a joint moment.
pub const MAX_JOINT_ORDER: usize = 6;

/// Exact joint moment `E[ <f_1,gamma> ... <f_n,gamma> ]` by the set-partition
/// cumulant expansion: the cumulant of a block `B` is
/// `(sum_cells prod_{i in B} f_i w) * zeta_moment(|B|)`.
pub fn exact_joint_moment(fs: &[GridFunction], model: &LevyModel, grid: &Grid) -> Result<f64> {
    let n = fs.len();
    if n > MAX_JOINT_ORDER {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: format!("{n} exceeds the joint moment cap {MAX_JOINT_ORDER}"),
        });
    }
    for f in fs {
        if f.len() != grid.n_sites() {
            return Err(Error::DimensionMismatch(format!(
                "smear length {} != cell count {}",
                f.len(),
                grid.n_sites()
            )));
        }
    }
    let mut zeta_moments = vec![0.0f64; n + 1];
    for (j, slot) in zeta_moments.iter_mut().enumerate().skip(1) {
        *slot = model.zeta_moment(j)?;
    }
    let mut total = C64::new(0.0, 0.0);
    for partition in set_partitions(n) {
        let mut prod = C64::new(1.0, 0.0);
        for block in &partition {
            let mut cell_sum = C64::new(0.0, 0.0);
            for c in 0..grid.n_sites() {
                let mut term = C64::new(grid.site_weight(c), 0.0);
                for &i in block {
                    term *= fs[i].get(c);
                }
                cell_sum += term;
            }
            prod *= cell_sum * zeta_moments[block.len()];
        }
        total += prod;
    }
    if total.im.abs() > 1e-10 * total.re.abs().max(1.0) {
        return Err(Error::InvalidParameter {
            name: "fs",
            reason: format!("moment has imaginary part {}", total.im),
        });
    }
    Ok(total.re)
}

/// Monte-Carlo estimate of the same joint moment with its standard error.
pub fn empirical_joint_moment(
    fs: &[GridFunction],
    model: &LevyModel,
    grid: &Grid,
    nsamples: u64,
    seed: u64,
) -> (f64, f64) {
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for rep in 0..nsamples {
        let config = sample_replicate(grid, model, seed, rep);
        let mut prod = 1.0f64;
        for f in fs {
            prod *= config.pair(f).re;
        }
        sum += prod;
        sum_sq += prod * prod;
    }
    let n = nsamples as f64;
    let mean = sum / n;
    let variance = (sum_sq / n - mean * mean).max(0.0);
    (mean, (variance / n).sqrt())
}

/// Monte-Carlo estimates of every prefix moment
/// `E[ <f_1,gamma> ... <f_m,gamma> ]` for `m = 1..=fs.len()`, from a single
/// pass over the replicates. Returns `(mean, standard error)` per prefix.
pub fn empirical_prefix_moments(
    fs: &[GridFunction],
    model: &LevyModel,
    grid: &Grid,
    nsamples: u64,
    seed: u64,
) -> Vec<(f64, f64)> {
    let m = fs.len();
    let mut sums = vec![0.0f64; m];
    let mut sums_sq = vec![0.0f64; m];
    for rep in 0..nsamples {
        let config = sample_replicate(grid, model, seed, rep);
        let mut prod = 1.0f64;
        for (i, f) in fs.iter().enumerate() {
            prod *= config.pair(f).re;
            sums[i] += prod;
            sums_sq[i] += prod * prod;
        }
    }
    let n = nsamples as f64;
    (0..m)
        .map(|i| {
            let mean = sums[i] / n;
            let variance = (sums_sq[i] / n - mean * mean).max(0.0);
            (mean, (variance / n).sqrt())
        })
        .collect()
}

/// Outcome of a Laplace-transform comparison.
#[derive(Debug, Clone, Copy)]
pub struct LaplaceCheck {
    /// Monte-Carlo mean of `exp(<f, gamma>)`.
    pub empirical: f64,
    /// Closed-form value from the jump measure.
    pub exact: f64,
    /// `|empirical - exact|`.
    pub gap: f64,
    /// Standard error of the Monte-Carlo mean.
    pub std_error: f64,
}

/// Compare the empirical Laplace transform `E exp(<f, gamma>)` against the
/// closed form, for a nonpositive real smear `f`.
pub fn laplace_check(
    f: &GridFunction,
    model: &LevyModel,
    grid: &Grid,
    nsamples: u64,
    seed: u64,
) -> Result<LaplaceCheck> {
    for s in 0..grid.n_sites() {
        let v = f.get(s);
        if v.im != 0.0 || v.re > 0.0 {
            return Err(Error::InvalidParameter {
                name: "f",
                reason: format!("smear must be real and nonpositive, got {v} at cell {s}"),
            });
        }
    }
    let mut exponent = 0.0f64;
    for c in 0..grid.n_sites() {
        let w = grid.site_weight(c);
        let fc = f.get(c).re;
        exponent += match model.kind {
            LevyKind::Poisson => w * model.kappa * model.kappa * (fc.exp() - 1.0),
            LevyKind::NegBin => {
                let mut cell = 0.0;
                for &(jump, mass) in &model.atoms {
                    cell += ((jump * fc).exp() - 1.0) * mass;
                }
                w * cell
            }
            LevyKind::Gamma => -w / model.eta * (1.0 - model.eta.sqrt() * fc).ln(),
        };
    }
    let exact = exponent.exp();
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for rep in 0..nsamples {
        let config = sample_replicate(grid, model, seed, rep);
        let v = config.pair(f).re.exp();
        sum += v;
        sum_sq += v * v;
    }
    let n = nsamples as f64;
    let empirical = sum / n;
    let variance = (sum_sq / n - empirical * empirical).max(0.0);
    Ok(LaplaceCheck {
        empirical,
        exact,
        gap: (empirical - exact).abs(),
        std_error: (variance / n).sqrt(),
    })
}

/// Per-cell sampling summary used by marginal-law checks.
#[derive(Debug, Clone)]
pub struct CellSample {
    /// Counts of occupation numbers `0..histogram.len()`.
    pub histogram: Vec<u64>,
    /// Draws that fell past the histogram support.
    pub overflow: u64,
    /// Sample mean.
    pub mean: f64,
    /// Standard error of the mean.
    pub std_error: f64,
}

/// Repeatedly draw one cell's mass and histogram the occupation numbers.
pub fn sample_cell_histogram(
    grid: &Grid,
    model: &LevyModel,
    cell: usize,
    kmax: usize,
    nsamples: u64,
    seed: u64,
) -> CellSample {
    let w = grid.site_weight(cell);
    let mut histogram = vec![0u64; kmax];
    let mut overflow = 0u64;
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for rep in 0..nsamples {
        let mut rng = StreamRng::from_stream(seed, cell as u64, rep);
        let mass = sample_cell(model, w, &mut rng);
        sum += mass;
        sum_sq += mass * mass;
        let k = mass as usize;
        if mass.fract() == 0.0 && k < kmax {
            histogram[k] += 1;
        } else {
            overflow += 1;
        }
    }
    let n = nsamples as f64;
    let mean = sum / n;
    let variance = (sum_sq / n - mean * mean).max(0.0);
    CellSample {
        histogram,
        overflow,
        mean,
        std_error: (variance / n).sqrt(),
    }
}

/// Total variation distance between an empirical occupation histogram and a
/// model pmf, `0.5 * sum_k |hat p_k - p_k|` (the pmf tail beyond the
/// histogram is included).
pub fn tv_distance(histogram: &[u64], nsamples: u64, pmf: impl Fn(usize) -> f64) -> f64 {
    let n = nsamples as f64;
    let mut tv = 0.0;
    let mut covered = 0.0;
    for (k, &count) in histogram.iter().enumerate() {
        let p = pmf(k);
        covered += p;
        tv += (count as f64 / n - p).abs();
    }
    // everything past the histogram support counts as missed mass
    tv += (1.0 - covered).max(0.0);
    0.5 * tv
}
