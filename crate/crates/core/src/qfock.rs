//! Truncated twisted-symmetric Fock space over a site space.
//!
//! Level `n` of a [`FockVector`] is a dense order-`n` tensor, supported off
//! the coincidence set Δ (no tuple may repeat an axis index) and fixed by the
//! symmetrization projection [`project_qsym`]. The inner product carries the
//! `n!` level weights, so `<F, G> = sum_n n! <f_n, g_n>_w` with the measure
//! weights of the site space.
//!
//! Creation prepends a one-particle function and re-symmetrizes; annihilation
//! contracts the first slot against the conjugated smear. The non-symmetric
//! (full tensor) counterparts `b±` and the intertwining `a± P = P b±` are
//! provided for cross-checks, together with the residuals of the three
//! twisted commutation relations and the root-of-unity exclusion norm.

use crate::qcore::{GridFunction, SiteSpace};
use crate::perm::{factorial, invert, permutations};
use crate::rng::StreamRng;
use crate::tensor::Tensor;
use crate::{Error, Result, C64};

/// Largest tensor order the explicit permutation sum will take on.
pub const FACTORIAL_CAP: usize = 8;

const ROOT_TOL: f64 = 1e-12;

/// Finite twisted Fock vector: levels `0..=max_level`, each a dense tensor.
#[derive(Debug, Clone)]
pub struct FockVector {
    levels: Vec<Tensor>,
    truncated: bool,
}

impl FockVector {
    /// Zero vector with the given truncation level.
    pub fn zero(space: &SiteSpace, max_level: usize) -> Result<Self> {
        let dim = space.n_sites();
        let mut levels = Vec::with_capacity(max_level + 1);
        levels.push(Tensor::scalar(C64::new(0.0, 0.0)));
        for n in 1..=max_level {
            levels.push(Tensor::zeros(dim, n)?);
        }
        Ok(FockVector {
            levels,
            truncated: false,
        })
    }

    /// The vacuum `(1, 0, 0, ...)`.
    pub fn vacuum(space: &SiteSpace, max_level: usize) -> Result<Self> {
        let mut v = FockVector::zero(space, max_level)?;
        v.levels[0] = Tensor::scalar(C64::new(1.0, 0.0));
        Ok(v)
    }

    /// Build from raw level tensors, symmetrizing each level.
    pub fn from_raw_levels(space: &SiteSpace, raw: Vec<Tensor>) -> Result<Self> {
        let mut levels = Vec::with_capacity(raw.len());
        for (n, t) in raw.into_iter().enumerate() {
            if t.order() != n {
                return Err(Error::DimensionMismatch(format!(
                    "level {n} tensor has order {}",
                    t.order()
                )));
            }
            levels.push(project_qsym(space, &t)?);
        }
        Ok(FockVector {
            levels,
            truncated: false,
        })
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    /// Highest level holding a nonzero tensor, or `None` for the zero vector.
    pub fn top_level(&self) -> Option<usize> {
        (0..self.levels.len()).rev().find(|&n| self.levels[n].sup_norm() > 0.0)
    }

    /// True if some operation pushed amplitude past the truncation level.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn level(&self, n: usize) -> &Tensor {
        &self.levels[n]
    }

    pub fn level_mut(&mut self, n: usize) -> &mut Tensor {
        &mut self.levels[n]
    }

    /// Level-0 scalar component.
    pub fn scalar_part(&self) -> C64 {
        self.levels[0].as_scalar()
    }

    pub fn add_assign(&mut self, other: &FockVector) {
        debug_assert_eq!(self.levels.len(), other.levels.len());
        for (a, b) in self.levels.iter_mut().zip(other.levels.iter()) {
            a.add_assign(b);
        }
        self.truncated |= other.truncated;
    }

    pub fn scale(&mut self, factor: C64) {
        for t in &mut self.levels {
            t.scale(factor);
        }
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        debug_assert_eq!(self.levels.len(), other.levels.len());
        FockVector {
            levels: self
                .levels
                .iter()
                .zip(other.levels.iter())
                .map(|(a, b)| a.sub(b))
                .collect(),
            truncated: self.truncated || other.truncated,
        }
    }

    /// Largest absolute entry over all levels.
    pub fn sup_norm(&self) -> f64 {
        self.levels.iter().map(Tensor::sup_norm).fold(0.0, f64::max)
    }
}

/// `n!`-weighted inner product, linear in the first argument.
pub fn inner(space: &SiteSpace, f: &FockVector, g: &FockVector) -> C64 {
    let mut total = C64::new(0.0, 0.0);
    let levels = f.levels.len().min(g.levels.len());
    for n in 0..levels {
        let tf = f.level(n);
        let tg = g.level(n);
        if n == 0 {
            total += tf.as_scalar() * tg.as_scalar().conj();
            continue;
        }
        let mut idx = vec![0usize; n];
        let mut level_sum = C64::new(0.0, 0.0);
        for off in 0..tf.len() {
            let a = tf.data()[off];
            let b = tg.data()[off];
            if a == C64::new(0.0, 0.0) && b == C64::new(0.0, 0.0) {
                continue;
            }
            tf.decode(off, &mut idx);
            level_sum += a * b.conj() * space.tuple_weight(&idx);
        }
        total += level_sum * factorial(n);
    }
    total
}

/// Fock norm `sqrt(<F, F>)`.
pub fn norm(space: &SiteSpace, f: &FockVector) -> f64 {
    inner(space, f, f).re.max(0.0).sqrt()
}

/// Twisted symmetrization projection (explicit permutation sum).
///
/// Output entry at `(x_1..x_n)` is
/// `(1/n!) sum_pi Q_pi(x_1..x_n) f(x_{pi^{-1}(1)}, ..., x_{pi^{-1}(n)})`,
/// then zeroed on any tuple touching Δ.
pub fn project_qsym(space: &SiteSpace, tensor: &Tensor) -> Result<Tensor> {
    let n = tensor.order();
    if n <= 1 {
        return Ok(tensor.clone());
    }
    if n > FACTORIAL_CAP {
        return Err(Error::FactorialCap {
            order: n,
            cap: FACTORIAL_CAP,
        });
    }
    let perms = permutations(n);
    let inverses: Vec<Vec<usize>> = perms.iter().map(|p| invert(p)).collect();
    let mut out = Tensor::zeros(tensor.dim(), n)?;
    let mut idx = vec![0usize; n];
    let mut permuted = vec![0usize; n];
    let norm = 1.0 / factorial(n);
    for off in 0..out.len() {
        out.decode(off, &mut idx);
        if space.touches_delta(&idx) {
            continue;
        }
        let mut sum = C64::new(0.0, 0.0);
        for (pi, inv) in perms.iter().zip(inverses.iter()) {
            for (slot, &src) in inv.iter().enumerate() {
                permuted[slot] = idx[src];
            }
            sum += space.q_pi_sites(&idx, pi) * tensor.get(&permuted);
        }
        out.data_mut()[off] = sum * norm;
    }
    Ok(out)
}

/// Symmetrized insertion `P_{n+1}(h ⊗ f)` for `f` already symmetric.
///
/// Uses the coset form
/// `(1/(n+1)) sum_i [prod_{j<i} Q(x_j, x_i)] h(x_i) f(x_1..ˆx_i..x_{n+1})`,
/// which agrees with the full projection on symmetric inputs at a fraction
/// of the cost.
pub fn qsym_insert(space: &SiteSpace, h: &GridFunction, tensor: &Tensor) -> Result<Tensor> {
    let n = tensor.order();
    let dim = space.n_sites();
    if h.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "smear length {} != site count {dim}",
            h.len()
        )));
    }
    let mut out = Tensor::zeros(dim, n + 1)?;
    let mut idx = vec![0usize; n + 1];
    let mut sub = vec![0usize; n];
    let norm = 1.0 / (n + 1) as f64;
    for off in 0..out.len() {
        out.decode(off, &mut idx);
        if space.touches_delta(&idx) {
            continue;
        }
        let mut sum = C64::new(0.0, 0.0);
        for i in 0..=n {
            let hv = h.get(idx[i]);
            if hv == C64::new(0.0, 0.0) {
                continue;
            }
            let mut coeff = C64::new(1.0, 0.0);
            for &xj in idx.iter().take(i) {
                coeff *= space.kernel_between(xj, idx[i]);
            }
            let mut k = 0;
            for (j, &x) in idx.iter().enumerate() {
                if j != i {
                    sub[k] = x;
                    k += 1;
                }
            }
            sum += coeff * hv * tensor.get(&sub);
        }
        out.data_mut()[off] = sum * norm;
    }
    Ok(out)
}

/// Creation operator: level `n+1` of the result is the symmetrized insertion
/// of `h` into level `n`. Amplitude at the truncation level is dropped and
/// flagged, never an error.
pub fn create(space: &SiteSpace, h: &GridFunction, f: &FockVector) -> Result<FockVector> {
    let max_level = f.max_level();
    let mut out = FockVector::zero(space, max_level)?;
    for n in 0..max_level {
        if f.level(n).sup_norm() > 0.0 {
            out.levels[n + 1] = qsym_insert(space, h, f.level(n))?;
        }
    }
    if f.level(max_level).sup_norm() > 0.0 {
        out.truncated = true;
    }
    out.truncated |= f.truncated;
    Ok(out)
}

/// Annihilation operator: level `n-1` of the result is
/// `n * sum_y conj(h(y)) f(y, x_1..x_{n-1}) w(y)`.
pub fn annihilate(space: &SiteSpace, h: &GridFunction, f: &FockVector) -> Result<FockVector> {
    let dim = space.n_sites();
    if h.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "smear length {} != site count {dim}",
            h.len()
        )));
    }
    let max_level = f.max_level();
    let mut out = FockVector::zero(space, max_level)?;
    out.truncated = f.truncated;
    for n in 1..=max_level {
        let t = f.level(n);
        if t.sup_norm() == 0.0 {
            continue;
        }
        let stride = t.len() / dim;
        let target = out.level_mut(n - 1);
        for y in 0..dim {
            let factor = h.get(y).conj() * space.site_weight(y) * n as f64;
            if factor == C64::new(0.0, 0.0) {
                continue;
            }
            let block = &t.data()[y * stride..(y + 1) * stride];
            for (o, &v) in block.iter().enumerate() {
                target.data_mut()[o] += factor * v;
            }
        }
    }
    Ok(out)
}

/// Sign of a ladder operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderSign {
    Plus,
    Minus,
}

/// Non-symmetric (full tensor) ladder operators.
///
/// `b+(h) f = h ⊗ f`; `b-(h)` inserts the integration variable at every slot
/// with the running kernel product
/// `sum_i ∫ h(y) Q(y,x_1)...Q(y,x_{i-1}) f(x_1.., y at slot i, ..) dm(y)`.
/// Note `b-` is smeared with `h` itself, not its conjugate.
pub fn b_apply(
    space: &SiteSpace,
    sign: LadderSign,
    h: &GridFunction,
    tensor: &Tensor,
) -> Result<Tensor> {
    let dim = space.n_sites();
    if h.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "smear length {} != site count {dim}",
            h.len()
        )));
    }
    match sign {
        LadderSign::Plus => {
            let ht = Tensor::from_data(dim, 1, h.values().to_vec())?;
            ht.outer(tensor)
        }
        LadderSign::Minus => {
            let n = tensor.order();
            if n == 0 {
                return Ok(Tensor::scalar(C64::new(0.0, 0.0)));
            }
            let mut out = Tensor::zeros(dim, n - 1)?;
            let mut idx = vec![0usize; n - 1];
            let mut full = vec![0usize; n];
            for off in 0..out.len() {
                out.decode(off, &mut idx);
                let mut sum = C64::new(0.0, 0.0);
                for i in 0..n {
                    for y in 0..dim {
                        let hv = h.get(y);
                        if hv == C64::new(0.0, 0.0) {
                            continue;
                        }
                        let mut coeff = hv * space.site_weight(y);
                        for &xj in idx.iter().take(i) {
                            coeff *= space.kernel_between(y, xj);
                        }
                        full[..i].copy_from_slice(&idx[..i]);
                        full[i] = y;
                        full[i + 1..].copy_from_slice(&idx[i..]);
                        sum += coeff * tensor.get(&full);
                    }
                }
                out.data_mut()[off] = sum;
            }
            Ok(out)
        }
    }
}

/// Residual sup-norms of the three twisted commutation relations applied to
/// a vector with two levels of headroom.
#[derive(Debug, Clone, Copy)]
pub struct QcrResidual {
    /// `a+(g)a+(h) - [twisted a+a+]`, exact on the grid.
    pub exchange_create: f64,
    /// `a-(g)a-(h) - [twisted a-a-]`, exact on the grid.
    pub exchange_annihilate: f64,
    /// `a-(g)a+(h) - <conj(g) h> - [twisted a+a-]`; carries the Δ-pair
    /// defect, first order in the cell masses.
    pub mixed: f64,
}

fn require_headroom(f: &FockVector, needed: usize) -> Result<()> {
    if let Some(top) = f.top_level() {
        if top + needed > f.max_level() {
            return Err(Error::Headroom {
                top,
                needed,
                max_level: f.max_level(),
            });
        }
    }
    Ok(())
}

/// Twisted double creation `∫∫ g(x) h(y) Q(y,x) d+_y d+_x` applied to `f`:
/// equals `P((h ⊗ g) · Q ⊗ f)` level by level.
fn twisted_create_create(
    space: &SiteSpace,
    g: &GridFunction,
    h: &GridFunction,
    f: &FockVector,
) -> Result<FockVector> {
    let dim = space.n_sites();
    let mut pair = Tensor::zeros(dim, 2)?;
    for u in 0..dim {
        for v in 0..dim {
            let val = h.get(u) * g.get(v) * space.kernel_between(u, v);
            pair.set(&[u, v], val);
        }
    }
    let max_level = f.max_level();
    let mut out = FockVector::zero(space, max_level)?;
    for n in 0..=max_level.saturating_sub(2) {
        if f.level(n).sup_norm() == 0.0 {
            continue;
        }
        let raw = pair.outer(f.level(n))?;
        out.levels[n + 2] = project_qsym(space, &raw)?;
    }
    Ok(out)
}

/// Twisted double annihilation
/// `∫∫ conj(g(x)) conj(h(y)) Q(y,x) d-_y d-_x` applied to `f`.
fn twisted_annihilate_annihilate(
    space: &SiteSpace,
    g: &GridFunction,
    h: &GridFunction,
    f: &FockVector,
) -> Result<FockVector> {
    let dim = space.n_sites();
    let max_level = f.max_level();
    let mut out = FockVector::zero(space, max_level)?;
    for n in 2..=max_level {
        let t = f.level(n);
        if t.sup_norm() == 0.0 {
            continue;
        }
        let scale = (n * (n - 1)) as f64;
        let stride = t.len() / (dim * dim);
        let target = out.level_mut(n - 2);
        for x in 0..dim {
            let gx = g.get(x).conj() * space.site_weight(x);
            if gx == C64::new(0.0, 0.0) {
                continue;
            }
            for y in 0..dim {
                let hy = h.get(y).conj() * space.site_weight(y);
                if hy == C64::new(0.0, 0.0) {
                    continue;
                }
                let factor = gx * hy * space.kernel_between(y, x) * scale;
                let base = (x * dim + y) * stride;
                let block = &t.data()[base..base + stride];
                for (o, &v) in block.iter().enumerate() {
                    target.data_mut()[o] += factor * v;
                }
            }
        }
    }
    Ok(out)
}

/// Twisted mixed term `∫∫ conj(g(x)) h(y) Q(x,y) d+_y d-_x` applied to `f`.
fn twisted_create_annihilate(
    space: &SiteSpace,
    g: &GridFunction,
    h: &GridFunction,
    f: &FockVector,
) -> Result<FockVector> {
    let dim = space.n_sites();
    let max_level = f.max_level();
    let mut out = FockVector::zero(space, max_level)?;
    for n in 1..=max_level {
        let t = f.level(n);
        if t.sup_norm() == 0.0 {
            continue;
        }
        let stride = t.len() / dim;
        let mut acc = Tensor::zeros(dim, n)?;
        for x in 0..dim {
            let gx = g.get(x).conj() * space.site_weight(x) * n as f64;
            if gx == C64::new(0.0, 0.0) {
                continue;
            }
            // slice f(x, ·) of order n-1 stays symmetric in the remaining slots
            let slice =
                Tensor::from_data(dim, n - 1, t.data()[x * stride..(x + 1) * stride].to_vec())?;
            let hx = GridFunction::new(
                (0..dim)
                    .map(|u| h.get(u) * space.kernel_between(x, u))
                    .collect(),
            );
            let mut created = qsym_insert(space, &hx, &slice)?;
            created.scale(gx);
            acc.add_assign(&created);
        }
        out.levels[n] = acc;
    }
    Ok(out)
}

/// Difference `a-(g)a+(h)F - <conj(g) h> F - [twisted a+a- term] F`.
///
/// On the continuum this vanishes; on the grid it equals the Δ-pair defect,
/// linear in the cell masses.
pub fn mixed_relation_gap(
    space: &SiteSpace,
    g: &GridFunction,
    h: &GridFunction,
    f: &FockVector,
) -> Result<FockVector> {
    let lhs = annihilate(space, g, &create(space, h, f)?)?;
    let pairing: C64 = (0..space.n_sites())
        .map(|s| g.get(s).conj() * h.get(s) * space.site_weight(s))
        .sum();
    let mut rhs = f.clone();
    rhs.scale(pairing);
    rhs.add_assign(&twisted_create_annihilate(space, g, h, f)?);
    Ok(lhs.sub(&rhs))
}

/// Hand-derived Δ-pair defect of the mixed relation on a level-1 input:
/// at site `x`,
/// `-sum_{y Δ~ x} [ conj(g(y)) h(y) f(x) + eta * conj(g(y)) f(y) h(x) ] w(y)`.
/// With fiber dimension 1 this collapses to
/// `-(1 + eta) conj(g(x)) h(x) f(x) w(x)`.
pub fn mixed_defect_level1(
    space: &SiteSpace,
    g: &GridFunction,
    h: &GridFunction,
    f_level1: &Tensor,
) -> Result<Tensor> {
    let dim = space.n_sites();
    if f_level1.order() != 1 {
        return Err(Error::DimensionMismatch(
            "defect oracle needs a level-1 tensor".into(),
        ));
    }
    let eta = space.kernel().eta();
    let mut out = Tensor::zeros(dim, 1)?;
    for x in 0..dim {
        let mut val = C64::new(0.0, 0.0);
        for y in 0..dim {
            if !space.delta_related(x, y) {
                continue;
            }
            let w = space.site_weight(y);
            val -= g.get(y).conj() * h.get(y) * f_level1.get(&[x]) * w;
            val -= g.get(y).conj() * f_level1.get(&[y]) * h.get(x) * eta * w;
        }
        out.set(&[x], val);
    }
    Ok(out)
}

/// Residuals of the three twisted commutation relations on `f`.
pub fn qcr_residual(
    space: &SiteSpace,
    g: &GridFunction,
    h: &GridFunction,
    f: &FockVector,
) -> Result<QcrResidual> {
    require_headroom(f, 2)?;

    let create_lhs = create(space, g, &create(space, h, f)?)?;
    let create_rhs = twisted_create_create(space, g, h, f)?;
    let exchange_create = create_lhs.sub(&create_rhs).sup_norm();

    let annih_lhs = annihilate(space, g, &annihilate(space, h, f)?)?;
    let annih_rhs = twisted_annihilate_annihilate(space, g, h, f)?;
    let exchange_annihilate = annih_lhs.sub(&annih_rhs).sup_norm();

    let mixed = mixed_relation_gap(space, g, h, f)?.sup_norm();

    Ok(QcrResidual {
        exchange_create,
        exchange_annihilate,
        mixed,
    })
}

/// Fock norm of `create(h)^k` applied to `f`, defined when the twist is a
/// k-th root of unity different from 1.
pub fn exclusion_norm(
    space: &SiteSpace,
    h: &GridFunction,
    k: usize,
    f: &FockVector,
) -> Result<f64> {
    let kernel = space.kernel();
    let deviation = kernel.root_deviation(k);
    if deviation > ROOT_TOL || (kernel.q() - C64::new(1.0, 0.0)).norm() <= ROOT_TOL {
        return Err(Error::NotRootOfUnity { k, deviation });
    }
    require_headroom(f, k)?;
    let mut v = f.clone();
    for _ in 0..k {
        v = create(space, h, &v)?;
    }
    Ok(norm(space, &v))
}

/// Deterministic random smear with entries in the complex unit square.
pub fn random_function(n_sites: usize, seed: u64) -> GridFunction {
    let mut rng = StreamRng::from_stream(seed, 0x66, 0);
    GridFunction::new(
        (0..n_sites)
            .map(|_| C64::new(rng.uniform() - 0.5, rng.uniform() - 0.5))
            .collect(),
    )
}

/// Deterministic random tensor supported off Δ (the grid model of an
/// almost-everywhere defined function).
pub fn random_off_delta_tensor(space: &SiteSpace, order: usize, seed: u64) -> Result<Tensor> {
    let mut rng = StreamRng::from_stream(seed, 0x7e, order as u64);
    let mut t = Tensor::zeros(space.n_sites(), order)?;
    let mut idx = vec![0usize; order];
    for off in 0..t.len() {
        t.decode(off, &mut idx);
        if space.touches_delta(&idx) {
            continue;
        }
        t.data_mut()[off] = C64::new(rng.uniform() - 0.5, rng.uniform() - 0.5);
    }
    Ok(t)
}

/// Deterministic random twisted-symmetric tensor (projection of a random
/// off-Δ tensor).
pub fn random_qsym_tensor(space: &SiteSpace, order: usize, seed: u64) -> Result<Tensor> {
    let raw = random_off_delta_tensor(space, order, seed)?;
    project_qsym(space, &raw)
}
