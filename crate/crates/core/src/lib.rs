//! Few-parameter density-matrix models for four-qubit Dicke-state experiments,
//! ranked against the full-parameter model with the Akaike information criterion.
//!
//! The crate is `no_std` and only needs an allocator. Everything here is a pure
//! function of its inputs; randomness enters only through explicit seeds.
//!
//! - [`linalg`]: dense complex matrices (dimension ≤ 16), Kronecker products,
//!   Hermitian eigensolver, partial transpose.
//! - [`states`]: Dicke and target states, white-noise mixtures, model families,
//!   the witness pseudostate.
//! - [`measurement`]: product SIC-POVM and collective σx/σy designs, Born rule,
//!   seeded sampling and splitting of datasets.
//! - [`inference`]: multinomial likelihoods, grid + golden-section fits, AIC/AICc,
//!   the full-parameter likelihood bound, the RρR iteration and cross modeling.
//! - [`entanglement`]: bipartite and generalized negativities, the `W_Jxy` witness.
//! - [`bayes`]: grid posteriors and their pushforward to negativities.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bayes;
pub mod entanglement;
mod error;
pub mod inference;
pub mod linalg;
pub mod measurement;
pub mod states;
mod sum;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Version of this crate, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Hilbert-space dimension of the four-qubit register.
pub const DIM: usize = 16;
/// Number of qubits in the register.
pub const N_QUBITS: usize = 4;
