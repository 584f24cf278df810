//! Ansatz representation, circuit layout, and assembly of the McLachlan
//! equations of motion.

mod ansatz;
mod layout;
mod system;

pub use ansatz::Ansatz;
pub use layout::{cnot_cost, layout, CircuitLayout};
pub use system::{assemble_system, augment_candidate, mclachlan_distance, Augmentation, McLachlanSystem, TangentSpace};

use crate::kernel::StateVector;
use crate::scalar::Real;

/// `Ψ(θ)` for an ansatz.
pub fn prepare_state<T: Real>(a: &Ansatz<T>) -> StateVector<T> {
    a.prepare_state()
}

/// `∂Ψ/∂θ_μ` for every parameter.
pub fn tangent_states<T: Real>(a: &Ansatz<T>) -> Vec<StateVector<T>> {
    a.tangent_states()
}
