//! Discretized base space, measure and twist kernel.
//!
//! The continuum picture is an ordered first coordinate times a transverse
//! direction. Here it collapses to a [`Grid`]: `M` strictly increasing axis
//! coordinates, each carrying a positive cell mass, and a fiber of dimension
//! `F` over every axis site (the transverse degrees of freedom; the fiber
//! carries counting weight 1, absorbed into functions). Two sites are
//! Δ-related when they share the axis index; Δ models the coincidence set
//! `{x^1 = y^1}`, the null set on which the twist kernel has no continuous
//! extension.
//!
//! The twist kernel [`QKernel`] depends only on the ordered axis coordinate:
//! `Q(s,t) = q` for `s < t`, `conj(q)` for `s > t`, and the real diagonal
//! value `eta` for `s = t`. The default diagonal is `Re(q)`, the symmetric
//! limiting value, but any real `eta` may be supplied.

use crate::perm::{factorial, invert, permutations};
use crate::tensor::Tensor;
use crate::{Error, Result, C64};

const UNIT_MODULUS_TOL: f64 = 1e-12;

/// Unit-modulus twist kernel with a real diagonal value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QKernel {
    q: C64,
    eta: f64,
}

impl QKernel {
    /// Kernel with the default diagonal `eta = Re(q)`.
    pub fn new(q: C64) -> Result<Self> {
        Self::with_eta(q, q.re)
    }

    /// Kernel with an explicit diagonal value.
    pub fn with_eta(q: C64, eta: f64) -> Result<Self> {
        if (q.norm() - 1.0).abs() > UNIT_MODULUS_TOL {
            return Err(Error::InvalidParameter {
                name: "q",
                reason: format!("|q| = {} is not 1 within {UNIT_MODULUS_TOL:e}", q.norm()),
            });
        }
        if !eta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "eta",
                reason: "must be finite".into(),
            });
        }
        Ok(QKernel { q, eta })
    }

    /// Exact root-of-unity twist `q = exp(2*pi*i*p/k)`.
    pub fn root_of_unity(p: i64, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter {
                name: "k",
                reason: "root order must be positive".into(),
            });
        }
        let angle = 2.0 * std::f64::consts::PI * (p as f64) / (k as f64);
        Self::new(C64::from_polar(1.0, angle))
    }

    pub fn q(&self) -> C64 {
        self.q
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Three-way evaluation by axis coordinate: `q`, `conj(q)` or `eta`.
    pub fn eval(&self, s: f64, t: f64) -> C64 {
        if s < t {
            self.q
        } else if s > t {
            self.q.conj()
        } else {
            C64::new(self.eta, 0.0)
        }
    }

    /// `|q^k - 1|`, the deviation from being a k-th root of unity.
    pub fn root_deviation(&self, k: usize) -> f64 {
        (self.q.powu(k as u32) - C64::new(1.0, 0.0)).norm()
    }
}

/// Stand-alone kernel evaluation on a pair of axis coordinates.
pub fn kernel_eval(kernel: &QKernel, s: f64, t: f64) -> C64 {
    kernel.eval(s, t)
}

/// Permutation weight: product of `Q(coords[i], coords[j])` over inversion
/// pairs `i < j` with `pi[i] > pi[j]`. The empty product is 1.
pub fn q_pi(kernel: &QKernel, coords: &[f64], pi: &[usize]) -> Result<C64> {
    if coords.len() != pi.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} coordinates for a permutation of size {}",
            coords.len(),
            pi.len()
        )));
    }
    let mut prod = C64::new(1.0, 0.0);
    for i in 0..pi.len() {
        for j in i + 1..pi.len() {
            if pi[i] > pi[j] {
                prod *= kernel.eval(coords[i], coords[j]);
            }
        }
    }
    Ok(prod)
}

/// Finite ordered axis with cell masses and a fiber dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    axis_coords: Vec<f64>,
    weights: Vec<f64>,
    fiber_dim: usize,
}

impl Grid {
    pub fn new(axis_coords: Vec<f64>, weights: Vec<f64>, fiber_dim: usize) -> Result<Self> {
        if axis_coords.is_empty() {
            return Err(Error::InvalidParameter {
                name: "axis_coords",
                reason: "grid needs at least one axis site".into(),
            });
        }
        if axis_coords.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter {
                name: "axis_coords",
                reason: "must be strictly increasing".into(),
            });
        }
        if weights.len() != axis_coords.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} axis sites",
                weights.len(),
                axis_coords.len()
            )));
        }
        if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "weights",
                reason: "must be positive and finite".into(),
            });
        }
        if fiber_dim == 0 {
            return Err(Error::InvalidParameter {
                name: "fiber_dim",
                reason: "must be at least 1".into(),
            });
        }
        Ok(Grid {
            axis_coords,
            weights,
            fiber_dim,
        })
    }

    /// Uniform grid: coordinates `1..=m`, each cell of mass `total_mass / m`.
    pub fn uniform(m: usize, total_mass: f64, fiber_dim: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter {
                name: "m",
                reason: "must be positive".into(),
            });
        }
        if !(total_mass > 0.0) {
            return Err(Error::InvalidParameter {
                name: "total_mass",
                reason: "must be positive".into(),
            });
        }
        let coords = (1..=m).map(|i| i as f64).collect();
        let weights = vec![total_mass / m as f64; m];
        Grid::new(coords, weights, fiber_dim)
    }

    /// Same sites with every cell mass halved (one refinement step).
    pub fn halve_weights(&self) -> Grid {
        Grid {
            axis_coords: self.axis_coords.clone(),
            weights: self.weights.iter().map(|w| w / 2.0).collect(),
            fiber_dim: self.fiber_dim,
        }
    }

    /// One refinement step at constant total mass: every axis cell splits
    /// into two children of half its mass, straddling the parent coordinate.
    pub fn refine(&self) -> Grid {
        let min_gap = self
            .axis_coords
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        let eps = if min_gap.is_finite() {
            min_gap / 4.0
        } else {
            0.5
        };
        let mut axis_coords = Vec::with_capacity(2 * self.axis_coords.len());
        let mut weights = Vec::with_capacity(2 * self.weights.len());
        for (&c, &w) in self.axis_coords.iter().zip(self.weights.iter()) {
            axis_coords.push(c - eps);
            axis_coords.push(c + eps);
            weights.push(w / 2.0);
            weights.push(w / 2.0);
        }
        Grid {
            axis_coords,
            weights,
            fiber_dim: self.fiber_dim,
        }
    }

    /// Extend a site function to the refined grid: each child cell inherits
    /// the parent value (piecewise-constant refinement).
    pub fn refine_function(&self, f: &GridFunction) -> GridFunction {
        debug_assert_eq!(f.len(), self.n_sites());
        let fiber = self.fiber_dim;
        let mut values = Vec::with_capacity(2 * f.len());
        for axis in 0..self.axis_len() {
            for _child in 0..2 {
                for phi in 0..fiber {
                    values.push(f.get(axis * fiber + phi));
                }
            }
        }
        GridFunction::new(values)
    }

    pub fn axis_len(&self) -> usize {
        self.axis_coords.len()
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    pub fn axis_coords(&self) -> &[f64] {
        &self.axis_coords
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Total site count `M * F`.
    pub fn n_sites(&self) -> usize {
        self.axis_coords.len() * self.fiber_dim
    }

    /// Axis index of a site (sites are axis-major: `site = axis * F + fiber`).
    pub fn site_axis(&self, site: usize) -> usize {
        site / self.fiber_dim
    }

    pub fn site_fiber(&self, site: usize) -> usize {
        site % self.fiber_dim
    }

    /// Measure weight of a site (its axis cell mass).
    pub fn site_weight(&self, site: usize) -> f64 {
        self.weights[self.site_axis(site)]
    }

    pub fn site_coord(&self, site: usize) -> f64 {
        self.axis_coords[self.site_axis(site)]
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Complex-valued function on the sites of a grid or site space.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    values: Vec<C64>,
}

impl GridFunction {
    pub fn new(values: Vec<C64>) -> Self {
        GridFunction { values }
    }

    pub fn constant(value: C64, n_sites: usize) -> Self {
        GridFunction {
            values: vec![value; n_sites],
        }
    }

    /// Real-valued function from per-site reals.
    pub fn from_real(values: &[f64]) -> Self {
        GridFunction {
            values: values.iter().map(|&v| C64::new(v, 0.0)).collect(),
        }
    }

    /// Indicator of a single site.
    pub fn indicator(site: usize, n_sites: usize) -> Self {
        let mut values = vec![C64::new(0.0, 0.0); n_sites];
        values[site] = C64::new(1.0, 0.0);
        GridFunction { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn get(&self, site: usize) -> C64 {
        self.values[site]
    }

    pub fn conj(&self) -> GridFunction {
        GridFunction {
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    pub fn scaled(&self, factor: C64) -> GridFunction {
        GridFunction {
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &GridFunction) -> GridFunction {
        debug_assert_eq!(self.len(), other.len());
        GridFunction {
            values: self
                .values
                .iter()
                .zip(other.values.iter())
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    /// Weighted sum over the grid: `sum_s f(s) w(s)`.
    pub fn integrate(&self, grid: &Grid) -> C64 {
        debug_assert_eq!(self.len(), grid.n_sites());
        self.values
            .iter()
            .enumerate()
            .map(|(s, v)| v * grid.site_weight(s))
            .sum()
    }
}

/// Flattened site table a Fock space is built over.
///
/// A single-copy space is the grid itself. A two-copy space (used by the
/// doubled representation) repeats every site with copy tags 1 and 2, and the
/// kernel between sites of different copies swaps its arguments. The diagonal
/// value applies to every Δ-related pair regardless of copy.
#[derive(Debug, Clone)]
pub struct SiteSpace {
    kernel: QKernel,
    axis_coord: Vec<f64>,
    axis_id: Vec<usize>,
    weight: Vec<f64>,
    copy: Vec<u8>,
}

impl SiteSpace {
    /// Single-copy space over a grid.
    pub fn single(grid: &Grid, kernel: QKernel) -> Self {
        let n = grid.n_sites();
        let mut axis_coord = Vec::with_capacity(n);
        let mut axis_id = Vec::with_capacity(n);
        let mut weight = Vec::with_capacity(n);
        for s in 0..n {
            axis_coord.push(grid.site_coord(s));
            axis_id.push(grid.site_axis(s));
            weight.push(grid.site_weight(s));
        }
        SiteSpace {
            kernel,
            axis_coord,
            axis_id,
            weight,
            copy: vec![1; n],
        }
    }

    /// Two tagged copies of every grid site; copy 1 first, then copy 2.
    pub fn doubled(grid: &Grid, kernel: QKernel) -> Self {
        let single = SiteSpace::single(grid, kernel);
        let n = single.n_sites();
        let mut axis_coord = single.axis_coord.clone();
        let mut axis_id = single.axis_id.clone();
        let mut weight = single.weight.clone();
        let mut copy = vec![1u8; n];
        axis_coord.extend_from_slice(&single.axis_coord);
        axis_id.extend_from_slice(&single.axis_id);
        weight.extend_from_slice(&single.weight);
        copy.resize(2 * n, 2u8);
        SiteSpace {
            kernel,
            axis_coord,
            axis_id,
            weight,
            copy,
        }
    }

    pub fn kernel(&self) -> &QKernel {
        &self.kernel
    }

    pub fn n_sites(&self) -> usize {
        self.axis_coord.len()
    }

    pub fn site_weight(&self, site: usize) -> f64 {
        self.weight[site]
    }

    pub fn site_coord(&self, site: usize) -> f64 {
        self.axis_coord[site]
    }

    pub fn site_copy(&self, site: usize) -> u8 {
        self.copy[site]
    }

    /// Δ-relation: shared axis index, regardless of copy or fiber.
    pub fn delta_related(&self, s: usize, t: usize) -> bool {
        self.axis_id[s] == self.axis_id[t]
    }

    /// Kernel value between two sites. Same copy: evaluate on the ordered
    /// coordinates; different copies: arguments swapped. Δ-related pairs get
    /// the diagonal value either way.
    pub fn kernel_between(&self, s: usize, t: usize) -> C64 {
        if self.axis_id[s] == self.axis_id[t] {
            C64::new(self.kernel.eta(), 0.0)
        } else if self.copy[s] == self.copy[t] {
            self.kernel.eval(self.axis_coord[s], self.axis_coord[t])
        } else {
            self.kernel.eval(self.axis_coord[t], self.axis_coord[s])
        }
    }

    /// Permutation weight over the axis coordinates of a site tuple.
    pub fn q_pi_sites(&self, sites: &[usize], pi: &[usize]) -> C64 {
        let mut prod = C64::new(1.0, 0.0);
        for i in 0..pi.len() {
            for j in i + 1..pi.len() {
                if pi[i] > pi[j] {
                    prod *= self.kernel_between(sites[i], sites[j]);
                }
            }
        }
        prod
    }

    /// True if some pair of tuple entries is Δ-related.
    pub fn touches_delta(&self, sites: &[usize]) -> bool {
        for i in 0..sites.len() {
            for j in i + 1..sites.len() {
                if self.delta_related(sites[i], sites[j]) {
                    return true;
                }
            }
        }
        false
    }

    /// Product of site weights along a tuple.
    pub fn tuple_weight(&self, sites: &[usize]) -> f64 {
        sites.iter().map(|&s| self.weight[s]).product()
    }
}

/// Weighted sum of an order-`k` tensor against the product measure:
/// `sum f(s_1..s_k) w(s_1)...w(s_k)`.
pub fn integrate(grid: &Grid, tensor: &Tensor) -> Result<C64> {
    if tensor.dim() != grid.n_sites() && tensor.order() > 0 {
        return Err(Error::DimensionMismatch(format!(
            "tensor dimension {} != site count {}",
            tensor.dim(),
            grid.n_sites()
        )));
    }
    let mut idx = vec![0usize; tensor.order()];
    let mut total = C64::new(0.0, 0.0);
    for off in 0..tensor.len() {
        tensor.decode(off, &mut idx);
        let w: f64 = idx.iter().map(|&s| grid.site_weight(s)).product();
        total += tensor.data()[off] * w;
    }
    Ok(total)
}

/// Reference value of the constant symmetrization on an increasing tuple:
/// the normalized twisted factorial `prod_{j=1..k} (1-q^j)/(1-q) / k!`.
///
/// This is what the permutation sum `(1/k!) sum_pi q^{inv(pi)}` evaluates to,
/// and it vanishes exactly when `q^j = 1` for some `j <= k`, `q != 1`.
pub fn twisted_factorial_normalized(q: C64, k: usize) -> C64 {
    let one = C64::new(1.0, 0.0);
    let mut prod = one;
    let denom = one - q;
    for j in 1..=k {
        prod *= (one - q.powu(j as u32)) / denom;
    }
    prod / factorial(k)
}

/// Brute-force constant symmetrization on a strictly increasing tuple:
/// `(1/k!) sum_pi Q_pi(coords)` with all coordinates distinct and ascending.
pub fn constant_symmetrization(kernel: &QKernel, k: usize) -> Result<C64> {
    let coords: Vec<f64> = (1..=k).map(|i| i as f64).collect();
    let mut sum = C64::new(0.0, 0.0);
    for pi in permutations(k) {
        sum += q_pi(kernel, &coords, &pi)?;
    }
    Ok(sum / factorial(k))
}

/// Cocycle check helper: `Q_{pi∘sigma}(x) = Q_pi(sigma^{-1} x) * Q_sigma(x)`
/// evaluated by brute force. Returns the two sides for comparison.
pub fn q_pi_cocycle_sides(
    kernel: &QKernel,
    coords: &[f64],
    pi: &[usize],
    sigma: &[usize],
) -> Result<(C64, C64)> {
    let composed = crate::perm::compose(pi, sigma);
    let lhs = q_pi(kernel, coords, &composed)?;
    let sigma_inv = invert(sigma);
    // coords permuted by sigma: position i holds coords[sigma^{-1}(i)]
    let permuted: Vec<f64> = (0..coords.len()).map(|i| coords[sigma_inv[i]]).collect();
    let rhs = q_pi(kernel, &permuted, pi)? * q_pi(kernel, coords, sigma)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn kernel_three_way() {
        let k = QKernel::new(c(0.0, 1.0)).unwrap();
        assert_eq!(kernel_eval(&k, 1.0, 2.0), c(0.0, 1.0));
        assert_eq!(kernel_eval(&k, 2.0, 1.0), c(0.0, -1.0));
        // default diagonal is Re(q)
        assert_eq!(kernel_eval(&k, 2.0, 2.0), c(0.0, 0.0));
        let boson = QKernel::new(c(1.0, 0.0)).unwrap();
        assert_eq!(kernel_eval(&boson, 5.0, -3.0), c(1.0, 0.0));
    }

    #[test]
    fn kernel_default_eta_general_angle() {
        let q = C64::from_polar(1.0, 0.7);
        let k = QKernel::new(q).unwrap();
        assert!((k.eval(3.0, 3.0).re - q.re).abs() < 1e-15);
        let k2 = QKernel::with_eta(q, -0.25).unwrap();
        assert_eq!(k2.eval(3.0, 3.0), c(-0.25, 0.0));
    }

    #[test]
    fn kernel_rejects_non_unit_modulus() {
        assert!(QKernel::new(c(1.0, 1.0)).is_err());
    }

    #[test]
    fn q_pi_identity_is_one() {
        let k = QKernel::new(C64::from_polar(1.0, 1.234)).unwrap();
        let v = q_pi(&k, &[0.3, 1.7, 2.9], &[0, 1, 2]).unwrap();
        assert_eq!(v, c(1.0, 0.0));
    }

    #[test]
    fn q_pi_transposition_increasing_coords() {
        let k = QKernel::new(c(0.0, 1.0)).unwrap();
        let v = q_pi(&k, &[1.0, 2.0], &[1, 0]).unwrap();
        assert_eq!(v, c(0.0, 1.0));
    }

    #[test]
    fn q_pi_fermion_is_sign() {
        let k = QKernel::new(c(-1.0, 0.0)).unwrap();
        for pi in permutations(4) {
            let v = q_pi(&k, &[0.5, 1.5, 2.5, 9.0], &pi).unwrap();
            let sign = if crate::perm::inversions(&pi) % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            assert!((v - c(sign, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn q_pi_size_mismatch() {
        let k = QKernel::new(c(1.0, 0.0)).unwrap();
        assert!(q_pi(&k, &[1.0, 2.0], &[0, 1, 2]).is_err());
    }

    #[test]
    fn integrate_constant_gives_total_mass() {
        let grid = Grid::uniform(5, 2.5, 1).unwrap();
        let t = Tensor::from_data(5, 1, vec![c(1.0, 0.0); 5]).unwrap();
        let v = integrate(&grid, &t).unwrap();
        assert!((v - c(2.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn integrate_outer_product_factorizes() {
        let grid = Grid::new(vec![0.0, 1.0, 4.0], vec![0.5, 1.0, 2.0], 1).unwrap();
        let g = GridFunction::new(vec![c(1.0, 0.5), c(-2.0, 0.0), c(0.0, 3.0)]);
        let h = GridFunction::new(vec![c(0.5, 0.0), c(1.0, -1.0), c(2.0, 2.0)]);
        let tg = Tensor::from_data(3, 1, g.values().to_vec()).unwrap();
        let th = Tensor::from_data(3, 1, h.values().to_vec()).unwrap();
        let outer = tg.outer(&th).unwrap();
        let lhs = integrate(&grid, &outer).unwrap();
        let rhs = g.integrate(&grid) * h.integrate(&grid);
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn integrate_triple_matches_naive_loop() {
        let grid = Grid::new(vec![-1.0, 0.5, 2.0], vec![0.25, 1.5, 0.75], 1).unwrap();
        let mut t = Tensor::zeros(3, 3).unwrap();
        // deterministic pseudo-random fill
        let mut x = 0.37f64;
        for v in t.data_mut() {
            x = (x * 97.31 + 0.17).fract();
            let re = x - 0.5;
            x = (x * 57.17 + 0.29).fract();
            *v = c(re, x - 0.5);
        }
        let fast = integrate(&grid, &t).unwrap();
        let mut naive = c(0.0, 0.0);
        for a in 0..3 {
            for b in 0..3 {
                for d in 0..3 {
                    naive += t.get(&[a, b, d])
                        * grid.site_weight(a)
                        * grid.site_weight(b)
                        * grid.site_weight(d);
                }
            }
        }
        assert!((fast - naive).norm() < 1e-12);
    }

    #[test]
    fn integrate_dimension_mismatch() {
        let grid = Grid::uniform(4, 1.0, 1).unwrap();
        let t = Tensor::zeros(3, 2).unwrap();
        assert!(integrate(&grid, &t).is_err());
    }

    #[test]
    fn doubled_space_kernel_swaps_across_copies() {
        let grid = Grid::uniform(3, 1.0, 1).unwrap();
        let k = QKernel::new(C64::from_polar(1.0, 0.9)).unwrap();
        let space = SiteSpace::doubled(&grid, k);
        let n = grid.n_sites();
        // same copy: ordered evaluation
        assert_eq!(space.kernel_between(0, 1), k.q());
        // different copies: swapped arguments
        assert_eq!(space.kernel_between(0, n + 1), k.q().conj());
        assert_eq!(space.kernel_between(n + 1, 0), k.q());
        // Δ-related across copies: diagonal value
        assert_eq!(space.kernel_between(0, n), c(k.eta(), 0.0));
    }

    #[test]
    fn hermitian_twist_off_delta() {
        let k = QKernel::new(C64::from_polar(1.0, 2.13)).unwrap();
        let grid = Grid::uniform(7, 1.0, 2).unwrap();
        let space = SiteSpace::single(&grid, k);
        let mut x = 0.6f64;
        for _ in 0..100 {
            x = (x * 83.7 + 0.11).fract();
            let s = (x * space.n_sites() as f64) as usize;
            x = (x * 83.7 + 0.11).fract();
            let t = (x * space.n_sites() as f64) as usize;
            if space.delta_related(s, t) {
                continue;
            }
            let a = space.kernel_between(s, t);
            let b = space.kernel_between(t, s);
            assert!((a - b.conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn constant_symmetrization_matches_twisted_factorial() {
        for (p, k_order) in [(1i64, 5u64), (2, 7), (3, 11)] {
            let kernel = QKernel::root_of_unity(p, k_order).unwrap();
            for k in 1..=5usize {
                let direct = constant_symmetrization(&kernel, k).unwrap();
                let closed = twisted_factorial_normalized(kernel.q(), k);
                assert!(
                    (direct - closed).norm() < 1e-12,
                    "k={k}, q=exp(2pi i {p}/{k_order})"
                );
            }
        }
    }

    #[test]
    fn constant_symmetrization_vanishes_at_roots_of_unity() {
        for k in 2..=5usize {
            for p in 1..k {
                let kernel = QKernel::root_of_unity(p as i64, k as u64).unwrap();
                let v = constant_symmetrization(&kernel, k).unwrap();
                assert!(v.norm() < 1e-13, "k={k}, p={p}: |P_k 1| = {}", v.norm());
            }
        }
    }
}
