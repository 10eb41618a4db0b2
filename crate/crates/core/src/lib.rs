//! Chess endgames treated as a discrete autonomous dynamical system.
//!
//! A position is a point in a 64-dimensional integer configuration space:
//! one coordinate per square, signed piece codes as values. Exact strategy
//! tables built by retrograde analysis turn optimal play into a pure
//! successor function `f` on that space, and its increment `g(x) = f(x) - x`
//! is the control function whose behaviour the measurement layer probes:
//! trajectory generation, minimal perturbations, divergence series and
//! effective expansion exponents, affine-fit nonlinearity residuals, and
//! audits of static evaluators against the exact tables.
//!
//! Modules:
//! - [`kernel`]: rules engine (states, legal moves, status, FEN subset)
//! - [`embedding`]: configuration vectors, deltas, metrics
//! - [`solver`]: retrograde tables, probing, the pure strategy `f` and
//!   control `g`
//! - [`dynamics`]: trajectories, perturbations, divergence, nonlinearity
//! - [`evaluator`]: static evaluators, depth-limited search, audits,
//!   horizon experiments
//!
//! All operations are deterministic; anything randomized takes an explicit
//! seed. Types are immutable after construction and `Send + Sync`, so
//! callers may share tables and fan out work however they like.

pub mod dynamics;
pub mod embedding;
pub mod evaluator;
pub mod kernel;
mod linalg;
pub mod scalar;
pub mod solver;

pub use scalar::Real;

/// Concrete scalar used by the shipped binaries and default type aliases.
pub type Scalar = f64;
