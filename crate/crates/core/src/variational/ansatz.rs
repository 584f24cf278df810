use num_complex::Complex;

use super::{layout, CircuitLayout};
use crate::kernel::{KernelError, PauliString, StateVector};
use crate::scalar::Real;

/// Ordered product of Pauli rotations on a reference state,
/// `|Ψ(θ)⟩ = e^{-iθ_N A_N} ⋯ e^{-iθ_1 A_1}|Ψ₀⟩`.
///
/// Values are immutable; growth and parameter updates return new ansätze.
#[derive(Clone, Debug, PartialEq)]
pub struct Ansatz<T: Real> {
    reference: StateVector<T>,
    generators: Vec<PauliString>,
    angles: Vec<T>,
}

impl<T: Real> Ansatz<T> {
    pub fn new(reference: StateVector<T>) -> Self {
        Self {
            reference,
            generators: Vec::new(),
            angles: Vec::new(),
        }
    }

    pub fn from_parts(
        reference: StateVector<T>,
        generators: Vec<PauliString>,
        angles: Vec<T>,
    ) -> Result<Self, KernelError> {
        if generators.len() != angles.len() {
            return Err(KernelError::InvalidArgument(format!(
                "{} generators but {} angles",
                generators.len(),
                angles.len()
            )));
        }
        if let Some(g) = generators
            .iter()
            .find(|g| g.n_qubits() != reference.n_qubits())
        {
            return Err(KernelError::DimensionMismatch {
                expected: reference.n_qubits(),
                found: g.n_qubits(),
            });
        }
        Ok(Self {
            reference,
            generators,
            angles,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.reference.n_qubits()
    }

    pub fn n_params(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn reference(&self) -> &StateVector<T> {
        &self.reference
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn angles(&self) -> &[T] {
        &self.angles
    }

    /// Appends generators with angle zero, leaving the prepared state unchanged.
    pub fn extended(&self, new: &[PauliString]) -> Result<Self, KernelError> {
        let mut generators = self.generators.clone();
        generators.extend_from_slice(new);
        let mut angles = self.angles.clone();
        angles.resize(generators.len(), T::zero());
        Self::from_parts(self.reference.clone(), generators, angles)
    }

    pub fn with_angles(&self, angles: Vec<T>) -> Result<Self, KernelError> {
        Self::from_parts(self.reference.clone(), self.generators.clone(), angles)
    }

    /// Euler update `θ ← θ + θ̇·dt`.
    pub fn advanced(&self, rates: &[T], dt: T) -> Result<Self, KernelError> {
        if rates.len() != self.angles.len() {
            return Err(KernelError::InvalidArgument(format!(
                "{} rates for {} parameters",
                rates.len(),
                self.angles.len()
            )));
        }
        let angles = self
            .angles
            .iter()
            .zip(rates)
            .map(|(&a, &r)| a + r * dt)
            .collect();
        self.with_angles(angles)
    }

    /// Applies the rotations in index order to the reference state.
    pub fn prepare_state(&self) -> StateVector<T> {
        let mut psi = self.reference.clone();
        for (g, &a) in self.generators.iter().zip(&self.angles) {
            g.rotate_in_place(a, &mut psi)
                .expect("generator widths validated on construction");
        }
        psi
    }

    /// `|ξ_μ⟩ = ∂|Ψ⟩/∂θ_μ` for every parameter.
    ///
    /// One forward pass produces the partial states `U_μ⋯U_1|Ψ₀⟩`; each
    /// tangent is `−iA_μ` applied to its partial state followed by the
    /// remaining suffix of rotations.
    pub fn tangent_states(&self) -> Vec<StateVector<T>> {
        let n = self.n_params();
        let mut out = Vec::with_capacity(n);
        let mut partial = self.reference.clone();
        let minus_i = Complex::new(T::zero(), -T::one());
        for mu in 0..n {
            let g = &self.generators[mu];
            g.rotate_in_place(self.angles[mu], &mut partial)
                .expect("generator widths validated on construction");
            let mut xi = g.apply(&partial).expect("validated width");
            xi.scale(minus_i);
            for (h, &a) in self.generators[mu + 1..].iter().zip(&self.angles[mu + 1..]) {
                h.rotate_in_place(a, &mut xi).expect("validated width");
            }
            out.push(xi);
        }
        out
    }

    pub fn layout(&self) -> CircuitLayout {
        layout(self.n_qubits(), &self.generators)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Pauli;

    #[test]
    fn empty_ansatz_prepares_reference() {
        let r = StateVector::<f64>::basis(2, 3).unwrap();
        let a = Ansatz::new(r.clone());
        assert_eq!(a.prepare_state(), r);
        assert!(a.tangent_states().is_empty());
    }

    #[test]
    fn x_quarter_turn() {
        let a = Ansatz::from_parts(
            StateVector::<f64>::zero_state(1).unwrap(),
            vec![PauliString::single(1, 0, Pauli::X)],
            vec![std::f64::consts::FRAC_PI_2],
        )
        .unwrap();
        let psi = a.prepare_state();
        assert!(psi.amplitudes()[0].norm() < 1e-15);
        assert!((psi.amplitudes()[1] - Complex::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn tangent_of_single_x_rotation() {
        for &theta in &[0.0, 0.3, -1.2] {
            let a = Ansatz::from_parts(
                StateVector::<f64>::zero_state(1).unwrap(),
                vec![PauliString::single(1, 0, Pauli::X)],
                vec![theta],
            )
            .unwrap();
            let xi = &a.tangent_states()[0];
            assert!((xi.amplitudes()[0] - Complex::new(-theta.sin(), 0.0)).norm() < 1e-15);
            assert!((xi.amplitudes()[1] - Complex::new(0.0, -theta.cos())).norm() < 1e-15);
        }
    }

    #[test]
    fn construction_checks() {
        let r = StateVector::<f64>::zero_state(2).unwrap();
        assert!(Ansatz::from_parts(r.clone(), vec![PauliString::single(2, 0, Pauli::X)], vec![])
            .is_err());
        assert!(
            Ansatz::from_parts(r.clone(), vec![PauliString::single(3, 0, Pauli::X)], vec![0.0])
                .is_err()
        );
        let a = Ansatz::new(r);
        assert!(a.advanced(&[1.0], 0.1).is_err());
        let b = a.extended(&[PauliString::single(2, 1, Pauli::Y)]).unwrap();
        assert_eq!(b.angles(), &[0.0]);
        assert_eq!(b.prepare_state(), a.prepare_state());
    }
}
