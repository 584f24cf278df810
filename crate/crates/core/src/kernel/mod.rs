//! Pauli-string algebra and dense statevector operations.

mod evolve;
mod hamiltonian;
mod pauli;
mod state;

use thiserror::Error;

pub use evolve::{exact_evolve, exact_evolve_with, KrylovConfig};
pub use hamiltonian::WeightedPauliSum;
pub(crate) use hamiltonian::variance_from;
pub use pauli::{Pauli, PauliString, MAX_PAULI_QUBITS};
pub(crate) use state::dot;
pub use state::{StateVector, MAX_STATE_QUBITS};

use crate::scalar::{Cplx, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("qubit-count mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported qubit count {0}")]
    TooManyQubits(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("exact evolution did not converge: {0}")]
    NonConvergence(String),
}

/// `P|ψ⟩`.
pub fn apply_pauli<T: Real>(
    p: &PauliString,
    psi: &StateVector<T>,
) -> Result<StateVector<T>, KernelError> {
    p.apply(psi)
}

/// `e^{-iθP}|ψ⟩ = cos θ|ψ⟩ − i sin θ P|ψ⟩`.
pub fn apply_rotation<T: Real>(
    p: &PauliString,
    theta: T,
    psi: &StateVector<T>,
) -> Result<StateVector<T>, KernelError> {
    p.rotate(theta, psi)
}

/// `H|ψ⟩` (unnormalized).
pub fn apply_hamiltonian<T: Real>(
    h: &WeightedPauliSum<T>,
    psi: &StateVector<T>,
) -> Result<StateVector<T>, KernelError> {
    h.apply(psi)
}

pub fn inner<T: Real>(psi: &StateVector<T>, phi: &StateVector<T>) -> Result<Cplx<T>, KernelError> {
    psi.inner(phi)
}

pub fn expectation<T: Real>(h: &WeightedPauliSum<T>, psi: &StateVector<T>) -> Result<T, KernelError> {
    h.expectation(psi)
}

pub fn variance<T: Real>(h: &WeightedPauliSum<T>, psi: &StateVector<T>) -> Result<T, KernelError> {
    h.variance(psi)
}

/// `|⟨ψ|φ⟩|²`.
pub fn fidelity<T: Real>(psi: &StateVector<T>, phi: &StateVector<T>) -> Result<T, KernelError> {
    psi.fidelity(phi)
}
