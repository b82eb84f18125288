//! Simulation of a cyclic (Δ-type) three-level atomic ensemble coupled to two
//! quantised optical modes `a`, `b` and one classical drive.
//!
//! In the low-excitation limit the ensemble carries two bosonic collective
//! modes `A`, `C` and the model is quadratic:
//!
//! ```text
//! H = g_N (a A† + b C†) + Ω e^{iφ} A†C + h.c.
//! ```
//!
//! Everything follows from the 4×4 single-particle matrix of that form:
//! [`polariton`] diagonalises it, [`fock`] represents truncated four-mode
//! states, [`dynamics`] propagates Fock, coherent and cat inputs in closed
//! form, [`adiabatic`] implements photon storage by sweeping `Ω(t)`, and
//! [`oracle`] provides brute-force backends (sector matrix exponentials, an
//! exact finite-`N` Dicke simulator) to check all of the above.

pub mod adiabatic;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod format;
pub mod linalg;
pub mod oracle;
pub mod polariton;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use fock::{CreationPolynomial, TruncatedFockState};
pub use polariton::{
    evolution_matrix, polariton_basis, single_particle_hamiltonian, CouplingConfig,
    EvolutionMatrix, ModeEvolution, ModeLabel, PolaritonBasis,
};
