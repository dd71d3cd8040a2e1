//! Resonance energies and widths from complex-scaled Hamiltonians.
//!
//! The pipeline builds a complex-rotated qubit Hamiltonian (either from the
//! one-dimensional Gaussian-basis model in [`gauss1d`] or from a tabulated
//! Pauli file read by [`hamio`]), writes it as a linear combination of unitaries,
//! simulates the prepare/select/unprepare circuit on an exact statevector
//! ([`sim`]) and turns the ancilla-zero probabilities back into a complex
//! eigenvalue ([`resonance`]). [`linalg`] provides the dense non-Hermitian
//! eigensolver used both to prepare circuit inputs and as the reference.

pub mod error;
pub mod gauss1d;
pub mod hamio;
pub mod linalg;
pub mod pauli;
pub mod resonance;
pub mod sim;

#[cfg(test)]
mod testing;

pub use error::{Error, Result};
