//! Numerical engine for twisted (anyonic) second quantization at desk scale.
//!
//! The library discretizes the one-particle space to a finite grid of ordered
//! axis sites (optionally with a transverse fiber dimension), builds the
//! twisted-symmetric Fock space over it, and evaluates in closed form the
//! quantities that the twisted commutation relations determine:
//!
//! * [`qcore`] — grid, measure weights, the unit-modulus twist kernel
//!   `Q(s,t) = q / conj(q) / eta` by coordinate order, and the permutation
//!   weight `Q_pi` (product of kernel values over inversions).
//! * [`qfock`] — truncated twisted Fock vectors, the symmetrization
//!   projection, creation/annihilation operators, commutation-relation
//!   residuals and the root-of-unity exclusion check.
//! * [`quasifree`] — the two-copy (doubled) representation driven by a pair
//!   of block multiplication operators `(K1, K2)` with
//!   `K2^T K2 = 1 + eta K1^T K1`, vacuum expectations of operator words, and
//!   the Q-permanent form of the n-point functions.
//! * [`density`] — the renormalized particle-density functional: a Jacobi
//!   field recursion on symmetric tensors, closed-form positivity witness,
//!   orthogonal-polynomial recurrence recovery, and the large-`kappa` gamma
//!   limit.
//! * [`pointproc`] — exact and Monte-Carlo sides of the associated laws:
//!   Poisson, negative binomial and gamma random measures, jump-measure
//!   models, set-partition cumulant-to-moment conversion, and Laplace
//!   transform checks.
//!
//! Everything is deterministic: samplers draw from counter-based streams
//! keyed by `(seed, cell, replicate)`, and all reductions run in a fixed
//! order.
//!
//! # Quick start
//!
//! Triple creation annihilates the vacuum at a cube root of unity:
//!
//! ```
//! use anyonfock::{FockVector, Grid, QKernel, SiteSpace};
//! use anyonfock::qfock::{exclusion_norm, random_function};
//!
//! let grid = Grid::uniform(5, 1.0, 1)?;
//! let kernel = QKernel::root_of_unity(1, 3)?; // q = exp(2 pi i / 3)
//! let space = SiteSpace::single(&grid, kernel);
//! let smear = random_function(space.n_sites(), 7);
//! let vacuum = FockVector::vacuum(&space, 3)?;
//! assert!(exclusion_norm(&space, &smear, 3, &vacuum)? < 1e-10);
//! # Ok::<(), anyonfock::Error>(())
//! ```

pub mod density;
pub mod error;
pub mod linalg;
pub mod perm;
pub mod pointproc;
pub mod qcore;
pub mod qfock;
pub mod quasifree;
pub mod rng;
pub mod setpart;
pub mod tensor;

pub use error::Error;
pub use qcore::{Grid, GridFunction, QKernel, SiteSpace};
pub use qfock::FockVector;
pub use quasifree::{KPair, Sign, Word};
pub use tensor::Tensor;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex<f64>;

/// Crate result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Fixed float formatting (17 significant digits) used by every emitted
/// artifact, so identical runs produce byte-identical files.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}
