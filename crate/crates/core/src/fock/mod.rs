//! Truncated Fock-space representation of arbitrary (non-Gaussian) states.
//!
//! Density matrices are dense `Dⁿ × Dⁿ` complex matrices. Every state carries its
//! [`FockSpace`], which owns the ladder and quadrature operators and a truncation budget: the
//! largest population of the top level `|D−1⟩` of any mode that a verification run accepts.

mod entropy;
mod ops;
mod phase;
mod space;
mod state;

pub use entropy::{clamped_log, relative_entropy, von_neumann_entropy, LOG_CLAMP, SUPPORT_TOL};
pub use ops::{
    beamsplitter_combine, beamsplitter_unitary, displacement_op, partial_trace, translate,
    translation_generator,
};
pub use phase::{characteristic_fn, gaussify, moments, q_function, MOMENT_UNCERTAINTY_TOL};
pub use space::{FockSpace, SparseOp, DEFAULT_BUDGET};
pub use state::{
    DensityMatrix, RANDOM_SUPPORT_LEVELS, REGULARIZATION_PHOTONS, REGULARIZATION_WEIGHT,
    STATE_TOL,
};
