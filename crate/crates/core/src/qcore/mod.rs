//! Dense complex linear algebra over labeled tensor products.
//!
//! Amplitudes and matrix indices follow one convention everywhere: the first
//! label of a [`Register`] is the most significant digit of the flat index.
//! For a register `[A, B]` the basis state `|a b⟩` sits at index `2a + b`.

mod entropy;
pub mod gates;
pub(crate) mod linalg;
pub(crate) mod ops;
mod random;
mod register;
mod state;

pub use entropy::{
    classical_mutual_information, cond_mutual_information, entropy_of_spectrum, holevo,
    mutual_information, shannon_entropy, vn_entropy,
};
pub use linalg::{
    fix_global_phase, hermitian_eigen, hermitian_eigenvalues, kron, trace_distance,
    unitarity_residual,
};
pub use ops::{
    apply, embed, max_entangled_factor, partial_trace, partial_trace_matrix, purify, reorder,
    Evolve, Tensor,
};
pub use random::{
    haar_unitary, haar_unitary_with, random_density, random_density_with, random_pure_state_with,
    seeded_rng, SeededRng,
};
pub use register::Register;
pub use state::{DensityMatrix, Ensemble, StateVector, UnitaryOp};

/// Tolerance for algebraic identities (norms, traces, unitarity).
pub const TOL_ALGEBRA: f64 = 1e-10;
/// Tolerance for derived inequalities between entropic quantities.
pub const TOL_INEQUALITY: f64 = 1e-9;
/// Tolerance for optimizer outputs.
pub const TOL_OPTIMIZER: f64 = 1e-6;
/// Eigenvalues at or below this value contribute nothing to an entropy.
pub const EIGEN_CUTOFF: f64 = 1e-12;
