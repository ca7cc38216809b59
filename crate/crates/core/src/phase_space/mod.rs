//! Phase-space representation of Gaussian states.
//!
//! Quadratures are ordered `(Q1, P1, Q2, P2, ...)` with `[Q, P] = 2i`, so the
//! vacuum has covariance `I` and a state is physical iff all of its symplectic
//! eigenvalues are at least one.

mod fidelity;
mod state;
mod symplectic;

pub(crate) use fidelity::fidelity_unchecked;
pub use fidelity::gaussian_fidelity;
pub(crate) use state::block_determinants;
pub use state::{
    block_decompose, is_physical, purity, symplectic_eigenvalues, BlockDecomposition, GaussianState,
};
pub use symplectic::{
    phase_rotation, single_mode_squeezer, two_mode_rotation, two_mode_squeezer, SymplecticForm,
    SymplecticMatrix,
};

/// Max absolute asymmetry accepted for a covariance matrix (scaled by its largest entry).
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Max deviation of `S Ω Sᵀ` from `Ω` for a symplectic matrix.
pub const SYMPLECTIC_TOL: f64 = 1e-10;
/// Slack on the bound `ν ≥ 1` when testing physicality.
pub const PHYSICALITY_TOL: f64 = 1e-9;
