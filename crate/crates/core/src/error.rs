//! Error type shared by all modules.

use thiserror::Error;

/// Errors surfaced by grid construction, Fock-space operations and the
/// probabilistic models.
#[derive(Debug, Error)]
pub enum Error {
    /// A tensor or function was given with dimensions that do not match the
    /// site space it is paired with.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A requested allocation would exceed the global tensor entry cap.
    #[error("resource cap exceeded: requested {requested} complex entries, cap is {cap}")]
    ResourceCap {
        /// Number of entries the allocation would need.
        requested: usize,
        /// Configured cap.
        cap: usize,
    },

    /// Symmetrization was requested for a tensor order above the factorial cap.
    #[error("tensor order {order} exceeds the factorial cap {cap}")]
    FactorialCap {
        /// Requested order.
        order: usize,
        /// Largest supported order.
        cap: usize,
    },

    /// A Fock-space operation needed more free levels than the vector has.
    #[error("insufficient headroom: need {needed} free levels above level {top}, max level is {max_level}")]
    Headroom {
        /// Highest occupied level.
        top: usize,
        /// Levels required above it.
        needed: usize,
        /// Truncation level of the vector.
        max_level: usize,
    },

    /// Parameter outside its admissible range.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter {
        /// Offending parameter.
        name: &'static str,
        /// Why it was rejected.
        reason: String,
    },

    /// The twist is not a k-th root of unity but the operation requires one.
    #[error("q^{k} = 1 required (|q^k - 1| = {deviation:.3e})")]
    NotRootOfUnity {
        /// Required order.
        k: usize,
        /// Measured |q^k - 1|.
        deviation: f64,
    },

    /// Moment-to-recurrence conversion hit a numerically singular system.
    #[error("singular moment system at step {step} (condition estimate {condition:.3e})")]
    SingularMoments {
        /// Recurrence step at which the pivot collapsed.
        step: usize,
        /// Rough condition estimate of the underlying Hankel system.
        condition: f64,
    },
}
