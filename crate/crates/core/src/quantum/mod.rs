//! Finite-dimensional quantum mechanics needed to model a noisy transmission:
//! dense complex matrices, density operators, channels in Kraus or dilation
//! form, POVMs and the induced error rate.

mod channel;
mod matrix;
mod povm;
mod state;

pub use channel::{
    apply_channel, error_rate, make_standard_channel, make_standard_dilation, QuantumChannel,
    StandardChannel, DEFAULT_ENV_DIM,
};
pub use matrix::{pauli_x, pauli_y, pauli_z, ComplexMatrix};
pub use povm::{measure_probability, Povm};
pub use state::DensityOperator;

/// Tolerance for exact algebraic identities (hermiticity, trace, completeness).
pub const EXACT_TOL: f64 = 1e-10;
/// Floor for eigenvalues that should be non-negative.
pub const EIGEN_TOL: f64 = 1e-10;
