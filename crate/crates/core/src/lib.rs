//! Gaussian continuous-variable states in noisy thermal channels.
//!
//! The crate is organised bottom-up:
//!
//! * [`phase_space`]: covariance matrices, symplectic transformations and
//!   Gaussian fidelity, in the convention where the vacuum covariance is the
//!   identity (quadratures `Q = a + a†`, `P = i(a† - a)`).
//! * [`channels`]: the Markovian thermal (optionally squeezed) bath acting
//!   independently on every mode, in closed form and by RK4 integration.
//! * [`quantifiers`]: Gaussian interferometric power, entanglement of
//!   formation for symmetric states, logarithmic negativity and the
//!   fidelity-based quantum Fisher information.
//! * [`protocol`]: the probe / black box / channel pipeline and parameter
//!   sweeps.
//! * [`cli`]: the command-line front end writing CSV tables.

pub mod channels;
pub mod cli;
pub mod error;
pub mod phase_space;
pub mod protocol;
pub mod quantifiers;

pub use error::{Error, Result};
pub use phase_space::{GaussianState, SymplecticMatrix};
