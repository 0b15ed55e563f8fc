//! Renormalized particle-density functional on the commutative algebra.
//!
//! For the constant operator `T = kappa^2` the density field, after the
//! `delta^2 = delta` renormalization, acts on finite symmetric tensor
//! vectors through the Jacobi field
//!
//! ```text
//! Rhat(phi) = a+(phi) + (beta + eta/beta) a0(phi) + a1-(phi)
//!             + eta a2-(phi) + (1/beta) ∫ phi dm ,    beta = sqrt(eta + 1/kappa^2)
//! ```
//!
//! whose vacuum level-0 amplitudes are the moments of the associated law:
//! Poisson with intensity `kappa^2 m` at `eta = 0`, a negative binomial point
//! process for `eta > 0`, and (after removing the `kappa^2 beta` scale per
//! factor) the gamma random measure in the `kappa -> infinity` limit. The
//! `eta < 0` case fails positivity, witnessed in closed form.

use crate::pointproc::{build_levy, exact_joint_moment, LevyKind};
use crate::qcore::{Grid, GridFunction};
use crate::tensor::Tensor;
use crate::{Error, Result, C64};

/// Parameter bundle for the density state.
#[derive(Debug, Clone, Copy)]
pub struct DensityParams {
    eta: f64,
    kappa: f64,
    beta: f64,
    lambda: f64,
    scale: f64,
}

impl DensityParams {
    pub fn new(eta: f64, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::InvalidParameter {
                name: "kappa",
                reason: "must be positive and finite".into(),
            });
        }
        if !eta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "eta",
                reason: "must be finite".into(),
            });
        }
        if eta < 0.0 && kappa * kappa >= 1.0 / eta.abs() {
            return Err(Error::InvalidParameter {
                name: "kappa",
                reason: format!(
                    "kappa^2 = {} must be below 1/|eta| = {}",
                    kappa * kappa,
                    1.0 / eta.abs()
                ),
            });
        }
        let beta = (eta + kappa.powi(-2)).sqrt();
        let lambda = beta + eta / beta;
        let scale = kappa * (1.0 + eta * kappa * kappa).sqrt();
        debug_assert!((scale - kappa * kappa * beta).abs() <= 1e-12 * scale.max(1.0));
        Ok(DensityParams {
            eta,
            kappa,
            beta,
            lambda,
            scale,
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `sqrt(eta + kappa^{-2})`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Neutral-term coefficient `beta + eta/beta`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Per-factor normalization `kappa sqrt(1 + eta kappa^2) = kappa^2 beta`.
    pub fn scale(&self) -> f64 {
        self.scale
    }
}

/// Finite vector of fully symmetric complex tensors (no coincidence-set
/// restriction); the domain of the Jacobi field.
#[derive(Debug, Clone)]
pub struct SymFock {
    levels: Vec<Tensor>,
}

impl SymFock {
    pub fn zero(grid: &Grid, max_level: usize) -> Result<Self> {
        let dim = grid.n_sites();
        let mut levels = Vec::with_capacity(max_level + 1);
        levels.push(Tensor::scalar(C64::new(0.0, 0.0)));
        for n in 1..=max_level {
            levels.push(Tensor::zeros(dim, n)?);
        }
        Ok(SymFock { levels })
    }

    pub fn vacuum(grid: &Grid, max_level: usize) -> Result<Self> {
        let mut v = SymFock::zero(grid, max_level)?;
        v.levels[0] = Tensor::scalar(C64::new(1.0, 0.0));
        Ok(v)
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &Tensor {
        &self.levels[n]
    }

    pub fn level_mut(&mut self, n: usize) -> &mut Tensor {
        &mut self.levels[n]
    }

    pub fn scalar_part(&self) -> C64 {
        self.levels[0].as_scalar()
    }

    pub fn top_level(&self) -> Option<usize> {
        (0..self.levels.len()).rev().find(|&n| self.levels[n].sup_norm() > 0.0)
    }

    pub fn add_assign(&mut self, other: &SymFock) {
        debug_assert_eq!(self.levels.len(), other.levels.len());
        for (a, b) in self.levels.iter_mut().zip(other.levels.iter()) {
            a.add_assign(b);
        }
    }

    pub fn scale(&mut self, factor: C64) {
        for t in &mut self.levels {
            t.scale(factor);
        }
    }

    /// Sup-norm distance of the symmetrization defect of each level.
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for t in &self.levels {
            let n = t.order();
            if n < 2 {
                continue;
            }
            let mut idx = vec![0usize; n];
            let mut swapped = vec![0usize; n];
            for off in 0..t.len() {
                t.decode(off, &mut idx);
                for i in 0..n - 1 {
                    swapped.copy_from_slice(&idx);
                    swapped.swap(i, i + 1);
                    worst = worst.max((t.get(&idx) - t.get(&swapped)).norm());
                }
            }
        }
        worst
    }
}

/// Plain symmetric insertion `phi ⊙ f` for `f` symmetric of order `n`:
/// `(1/(n+1)) sum_i phi(x_i) f(x_1..ˆx_i..x_{n+1})`.
fn sym_insert(phi: &GridFunction, tensor: &Tensor, dim: usize) -> Result<Tensor> {
    let n = tensor.order();
    let mut out = Tensor::zeros(dim, n + 1)?;
    let mut idx = vec![0usize; n + 1];
    let mut sub = vec![0usize; n];
    let norm = 1.0 / (n + 1) as f64;
    for off in 0..out.len() {
        out.decode(off, &mut idx);
        let mut sum = C64::new(0.0, 0.0);
        for i in 0..=n {
            let pv = phi.get(idx[i]);
            if pv == C64::new(0.0, 0.0) {
                continue;
            }
            let mut k = 0;
            for (j, &x) in idx.iter().enumerate() {
                if j != i {
                    sub[k] = x;
                    k += 1;
                }
            }
            sum += pv * tensor.get(&sub);
        }
        out.data_mut()[off] = sum * norm;
    }
    Ok(out)
}

/// The four parts of the Jacobi field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobiKind {
    /// Symmetric creation `phi ⊙ f`.
    Create,
    /// Neutral term: multiply slot `i` by `phi`, summed over slots.
    Neutral,
    /// Contraction of one slot against `phi` with the measure weights.
    Annihilate1,
    /// Merge of two distinct slots onto one point carrying `phi`.
    Annihilate2,
}

/// Apply one Jacobi-field part.
pub fn jacobi_apply(
    kind: JacobiKind,
    grid: &Grid,
    phi: &GridFunction,
    f: &SymFock,
) -> Result<SymFock> {
    let dim = grid.n_sites();
    if phi.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "smear length {} != site count {dim}",
            phi.len()
        )));
    }
    let max_level = f.max_level();
    let mut out = SymFock::zero(grid, max_level)?;
    match kind {
        JacobiKind::Create => {
            if let Some(top) = f.top_level() {
                if top + 1 > max_level {
                    return Err(Error::Headroom {
                        top,
                        needed: 1,
                        max_level,
                    });
                }
            }
            for n in 0..max_level {
                if f.level(n).sup_norm() > 0.0 {
                    out.levels[n + 1] = sym_insert(phi, f.level(n), dim)?;
                }
            }
        }
        JacobiKind::Neutral => {
            for n in 1..=max_level {
                let t = f.level(n);
                if t.sup_norm() == 0.0 {
                    continue;
                }
                let mut idx = vec![0usize; n];
                let target = out.level_mut(n);
                for off in 0..t.len() {
                    t.decode(off, &mut idx);
                    let factor: C64 = idx.iter().map(|&s| phi.get(s)).sum();
                    target.data_mut()[off] = factor * t.data()[off];
                }
            }
        }
        JacobiKind::Annihilate1 => {
            for n in 1..=max_level {
                let t = f.level(n);
                if t.sup_norm() == 0.0 {
                    continue;
                }
                let stride = t.len() / dim;
                let target = out.level_mut(n - 1);
                for y in 0..dim {
                    let factor = phi.get(y) * grid.site_weight(y) * n as f64;
                    if factor == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let block = &t.data()[y * stride..(y + 1) * stride];
                    for (o, &v) in block.iter().enumerate() {
                        target.data_mut()[o] += factor * v;
                    }
                }
            }
        }
        JacobiKind::Annihilate2 => {
            for n in 2..=max_level {
                let t = f.level(n);
                if t.sup_norm() == 0.0 {
                    continue;
                }
                let m = n - 1;
                let target = out.level_mut(m);
                let mut idx = vec![0usize; m];
                let mut full = vec![0usize; n];
                for off in 0..target.len() {
                    target.decode(off, &mut idx);
                    let mut sum = C64::new(0.0, 0.0);
                    for s in 0..m {
                        // merged point occupies two slots of the source level
                        full[0] = idx[s];
                        full[1] = idx[s];
                        let mut k = 2;
                        for (j, &x) in idx.iter().enumerate() {
                            if j != s {
                                full[k] = x;
                                k += 1;
                            }
                        }
                        sum += phi.get(idx[s]) * t.get(&full);
                    }
                    target.data_mut()[off] = sum * n as f64;
                }
            }
        }
    }
    Ok(out)
}

/// Full Jacobi field
/// `create + (beta + eta/beta) neutral + annih1 + eta annih2 + (1/beta) ∫phi`.
pub fn rhat_apply(
    grid: &Grid,
    phi: &GridFunction,
    f: &SymFock,
    p: &DensityParams,
) -> Result<SymFock> {
    let mut out = jacobi_apply(JacobiKind::Create, grid, phi, f)?;

    let mut neutral = jacobi_apply(JacobiKind::Neutral, grid, phi, f)?;
    neutral.scale(C64::new(p.lambda(), 0.0));
    out.add_assign(&neutral);

    let annih1 = jacobi_apply(JacobiKind::Annihilate1, grid, phi, f)?;
    out.add_assign(&annih1);

    if p.eta() != 0.0 {
        let mut annih2 = jacobi_apply(JacobiKind::Annihilate2, grid, phi, f)?;
        annih2.scale(C64::new(p.eta(), 0.0));
        out.add_assign(&annih2);
    }

    let mass = phi.integrate(grid);
    let mut constant = f.clone();
    constant.scale(mass / p.beta());
    out.add_assign(&constant);
    Ok(out)
}

/// Maximum number of density factors.
pub const MAX_DENSITY_ORDER: usize = 6;

/// Unscaled moment `tau(R(f_1)...R(f_n))`: level-0 amplitude of the Jacobi
/// word applied to the vacuum.
pub fn tau_r_moment(grid: &Grid, fs: &[GridFunction], p: &DensityParams) -> Result<C64> {
    let n = fs.len();
    if n > MAX_DENSITY_ORDER {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: format!("{n} exceeds the density moment cap {MAX_DENSITY_ORDER}"),
        });
    }
    let mut state = SymFock::vacuum(grid, n.max(1))?;
    for phi in fs.iter().rev() {
        state = rhat_apply(grid, phi, &state, p)?;
    }
    Ok(state.scalar_part())
}

/// Moment of the renormalized density:
/// `scale^n * tau(R(f_1)...R(f_n))`, real within `1e-12`.
pub fn rho_moment(grid: &Grid, fs: &[GridFunction], p: &DensityParams) -> Result<f64> {
    let raw = tau_r_moment(grid, fs, p)?;
    let value = raw * p.scale().powi(fs.len() as i32);
    if value.im.abs() > 1e-12 * value.re.abs().max(1.0) {
        return Err(Error::InvalidParameter {
            name: "fs",
            reason: format!("moment has imaginary part {}", value.im),
        });
    }
    Ok(value.re)
}

/// Closed-form value of `tau(W(f⊗f)^2)`:
/// `2 (sum f^2 w)^2 + 2 eta sum f^4 w`. Negative values witness the failure
/// of positivity for `eta < 0`.
pub fn positivity_witness(grid: &Grid, f: &GridFunction, eta: f64) -> f64 {
    let mut m2 = 0.0;
    let mut m4 = 0.0;
    for s in 0..grid.n_sites() {
        let v = f.get(s).re;
        let w = grid.site_weight(s);
        m2 += v * v * w;
        m4 += v * v * v * v * w;
    }
    2.0 * m2 * m2 + 2.0 * eta * m4
}

/// Outcome of the orthogonal-polynomial recurrence recovery.
#[derive(Debug, Clone)]
pub struct MeixnerRecovery {
    /// `(a_k, b_k)` for `k = 0..=kmax`; `a_0` is identically 0.
    pub coefficients: Vec<(f64, f64)>,
    /// Total mass of the normalized jump-size-squared measure (should be 1).
    pub zeta_prime_mass: f64,
    /// Number of atoms kept after the tail cut.
    pub atoms_kept: usize,
    /// Rough condition estimate of the moment system.
    pub condition: f64,
}

/// Recover the three-term recurrence coefficients of the polynomials
/// orthogonal under the measure `s^2 zeta(ds)` (atoms `s_k = k/(kappa^2
/// beta)`), via moments and the moment-to-recurrence (Chebyshev) algorithm.
///
/// The expected values are `a_k = eta k (k+1)` and
/// `b_k = (beta + eta/beta)(k+1)`.
pub fn meixner_coeffs(p: &DensityParams, kmax: usize) -> Result<MeixnerRecovery> {
    if p.eta() <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "eta",
            reason: "recurrence recovery needs eta > 0".into(),
        });
    }
    if kmax > 5 {
        return Err(Error::InvalidParameter {
            name: "kmax",
            reason: "moment conditioning degrades past kmax = 5".into(),
        });
    }
    let eta = p.eta();
    let beta = p.beta();
    let ratio = eta / (beta * beta);
    let step = 1.0 / (p.kappa() * p.kappa() * beta);
    // atoms of s^2 zeta(ds): mass_k = s_k^2 (1/eta) ratio^k / k
    let mut atoms: Vec<(f64, f64)> = Vec::new();
    let mut total = 0.0;
    let mut k = 1usize;
    loop {
        let s = step * k as f64;
        let mass = s * s * ratio.powi(k as i32) / (eta * k as f64);
        if k > 2 && mass < 1e-14 * total {
            break;
        }
        atoms.push((s, mass));
        total += mass;
        k += 1;
        if k > 1_000_000 {
            break;
        }
    }
    let n_moments = 2 * kmax + 2; // orders 0..=2*kmax+1
    let mut moments = vec![0.0f64; n_moments];
    for &(s, mass) in &atoms {
        let mut power = mass;
        for m in moments.iter_mut() {
            *m += power;
            power *= s;
        }
    }
    let (alphas, betas, condition) = chebyshev_recurrence(&moments, kmax + 1)?;
    let coefficients = (0..=kmax)
        .map(|j| {
            let a = if j == 0 { 0.0 } else { betas[j] };
            (a, alphas[j])
        })
        .collect();
    Ok(MeixnerRecovery {
        coefficients,
        zeta_prime_mass: total,
        atoms_kept: atoms.len(),
        condition,
    })
}

/// Moment-to-recurrence conversion for monic orthogonal polynomials.
/// Takes moments `mu_0..mu_{2n-1}`, returns `(alpha, beta, condition)` with
/// `alpha[k]` the diagonal and `beta[k]` the off-diagonal coefficients
/// (`beta[0] = mu_0`).
fn chebyshev_recurrence(moments: &[f64], n: usize) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    assert!(moments.len() >= 2 * n);
    let width = 2 * n;
    if moments[0] <= 0.0 {
        return Err(Error::SingularMoments {
            step: 0,
            condition: f64::INFINITY,
        });
    }
    let mu_max = moments.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let mut alpha = vec![0.0f64; n];
    let mut beta = vec![0.0f64; n];
    alpha[0] = moments[1] / moments[0];
    beta[0] = moments[0];
    let mut sigma_prev = vec![0.0f64; width]; // row k-2
    let mut sigma_cur = moments.to_vec(); // row k-1
    let mut condition: f64 = 1.0;
    for k in 1..n {
        let mut sigma_next = vec![0.0f64; width];
        for l in k..(width - k) {
            let upper = sigma_cur[l + 1];
            sigma_next[l] =
                upper - alpha[k - 1] * sigma_cur[l] - beta[k - 1] * sigma_prev[l];
        }
        let pivot = sigma_next[k];
        let prev_pivot = sigma_cur[k - 1];
        condition = condition.max(mu_max / pivot.abs().max(f64::MIN_POSITIVE));
        if pivot.abs() <= 1e-13 * mu_max.max(1.0) {
            return Err(Error::SingularMoments { step: k, condition });
        }
        alpha[k] = sigma_next[k + 1] / pivot - sigma_cur[k] / prev_pivot;
        beta[k] = pivot / prev_pivot;
        sigma_prev = sigma_cur;
        sigma_cur = sigma_next;
    }
    Ok((alpha, beta, condition))
}

/// One row of the large-`kappa` comparison table.
#[derive(Debug, Clone, Copy)]
pub struct GammaGapRow {
    pub kappa: f64,
    /// Unscaled density moment `tau_kappa(R(f)^n)`.
    pub moment: f64,
    /// Exact gamma-measure moment of the same order.
    pub gamma_moment: f64,
    /// Absolute gap.
    pub gap: f64,
}

/// Compare `tau_kappa(R(f)^n)` against the exact gamma-measure moment over a
/// sweep of `kappa` values. The gaps must shrink as `kappa` grows; the caller
/// asserts monotonicity.
pub fn gamma_limit_check(
    grid: &Grid,
    f: &GridFunction,
    eta: f64,
    n: usize,
    kappas: &[f64],
) -> Result<Vec<GammaGapRow>> {
    if eta <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "eta",
            reason: "gamma limit needs eta > 0".into(),
        });
    }
    if n > 4 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: format!("{n} exceeds the gamma-limit cap 4"),
        });
    }
    let gamma_model = build_levy(LevyKind::Gamma, eta, 1.0)?;
    let fs = vec![f.clone(); n];
    let gamma_moment = exact_joint_moment(&fs, &gamma_model, grid)?;
    let mut rows = Vec::with_capacity(kappas.len());
    for &kappa in kappas {
        let p = DensityParams::new(eta, kappa)?;
        let moment = tau_r_moment(grid, &fs, &p)?;
        if moment.im.abs() > 1e-10 {
            return Err(Error::InvalidParameter {
                name: "f",
                reason: format!("moment has imaginary part {}", moment.im),
            });
        }
        rows.push(GammaGapRow {
            kappa,
            moment: moment.re,
            gamma_moment,
            gap: (moment.re - gamma_moment).abs(),
        });
    }
    Ok(rows)
}
