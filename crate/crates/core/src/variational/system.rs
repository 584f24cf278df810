use num_complex::Complex;

use super::Ansatz;
use crate::kernel::{dot, variance_from, KernelError, PauliString, StateVector, WeightedPauliSum};
use crate::scalar::{Cplx, Real};
use crate::solvers::Matrix;

/// The linear system `M θ̇ = V` and the energy variance of the current state.
#[derive(Clone, Debug, PartialEq)]
pub struct McLachlanSystem<T: Real> {
    /// Real part of the quantum geometric tensor.
    pub m: Matrix<T>,
    pub v: Vec<T>,
    pub var_h: T,
}

impl<T: Real> McLachlanSystem<T> {
    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// `L² = 2 θ̇ᵀMθ̇ − 4 Vᵀθ̇ + 2 var[H]`, clamped at zero.
    ///
    /// On an exact solution of `Mθ̇ = V` this is `2(var[H] − Vᵀθ̇)`.
    pub fn mclachlan_distance(&self, theta_dot: &[T]) -> Result<T, KernelError> {
        if theta_dot.len() != self.dim() {
            return Err(KernelError::InvalidArgument(format!(
                "{} rates for a {}-parameter system",
                theta_dot.len(),
                self.dim()
            )));
        }
        let mx = self.m.mul_vec(theta_dot);
        let quad: T = mx.iter().zip(theta_dot).map(|(&a, &b)| a * b).sum();
        let lin: T = self.v.iter().zip(theta_dot).map(|(&a, &b)| a * b).sum();
        let two = T::lit(2.0);
        let l2 = two * quad - two * two * lin + two * self.var_h;
        Ok(l2.max(T::zero()))
    }

    /// System for the ansatz extended by one generator described by `aug`.
    pub fn extended(&self, aug: &Augmentation<T>) -> Self {
        let n = self.dim();
        Self {
            m: self.m.bordered(&aug.column[..n], aug.column[n]),
            v: {
                let mut v = self.v.clone();
                v.push(aug.v_new);
                v
            },
            var_h: self.var_h,
        }
    }
}

/// `L²` for a system and a candidate rate vector.
pub fn mclachlan_distance<T: Real>(s: &McLachlanSystem<T>, theta_dot: &[T]) -> Result<T, KernelError> {
    s.mclachlan_distance(theta_dot)
}

/// Entries that border `M` and `V` when a generator is appended with
/// angle zero. `column[N]` is the new diagonal element.
#[derive(Clone, Debug, PartialEq)]
pub struct Augmentation<T: Real> {
    pub column: Vec<T>,
    pub v_new: T,
}

/// Everything needed to assemble and augment `M`, `V` for one ansatz and
/// Hamiltonian: the state, `H|Ψ⟩`, `⟨H⟩`, and all tangent states.
#[derive(Clone, Debug)]
pub struct TangentSpace<T: Real> {
    state: StateVector<T>,
    h_state: StateVector<T>,
    energy: T,
    tangents: Vec<StateVector<T>>,
    /// `⟨ξ_μ|Ψ⟩`.
    overlaps: Vec<Cplx<T>>,
}

impl<T: Real> TangentSpace<T> {
    pub fn new(a: &Ansatz<T>, h: &WeightedPauliSum<T>) -> Result<Self, KernelError> {
        if h.n_qubits() != a.n_qubits() {
            return Err(KernelError::DimensionMismatch {
                expected: a.n_qubits(),
                found: h.n_qubits(),
            });
        }
        let state = a.prepare_state();
        let h_state = h.apply(&state)?;
        let energy = dot(state.amplitudes(), h_state.amplitudes()).re;
        let tangents = a.tangent_states();
        let overlaps = tangents
            .iter()
            .map(|xi| dot(xi.amplitudes(), state.amplitudes()))
            .collect();
        Ok(Self {
            state,
            h_state,
            energy,
            tangents,
            overlaps,
        })
    }

    pub fn state(&self) -> &StateVector<T> {
        &self.state
    }

    pub fn energy(&self) -> T {
        self.energy
    }

    pub fn tangents(&self) -> &[StateVector<T>] {
        &self.tangents
    }

    pub fn variance(&self) -> T {
        variance_from(&self.state, &self.h_state)
    }

    /// `V_μ = Im[⟨ξ_μ|H|Ψ⟩ − ⟨ξ_μ|Ψ⟩⟨H⟩]` for an arbitrary tangent.
    fn v_entry(&self, xi: &StateVector<T>, overlap: Cplx<T>) -> T {
        (dot(xi.amplitudes(), self.h_state.amplitudes()) - overlap.scale(self.energy)).im
    }

    /// `M_{μν} = Re[⟨ξ_μ|ξ_ν⟩ − ⟨ξ_μ|Ψ⟩⟨Ψ|ξ_ν⟩]`.
    fn m_entry(a: &StateVector<T>, oa: Cplx<T>, b: &StateVector<T>, ob: Cplx<T>) -> T {
        (dot(a.amplitudes(), b.amplitudes()) - oa * ob.conj()).re
    }

    /// Assembles `M`, `V` and `var[H]`. `M` is exactly symmetric.
    pub fn system(&self) -> McLachlanSystem<T> {
        let n = self.tangents.len();
        let mut m = Matrix::zeros(n, n);
        for mu in 0..n {
            for nu in mu..n {
                let e = Self::m_entry(
                    &self.tangents[mu],
                    self.overlaps[mu],
                    &self.tangents[nu],
                    self.overlaps[nu],
                );
                m[(mu, nu)] = e;
                m[(nu, mu)] = e;
            }
        }
        let v = self
            .tangents
            .iter()
            .zip(&self.overlaps)
            .map(|(xi, &o)| self.v_entry(xi, o))
            .collect();
        McLachlanSystem {
            m,
            v,
            var_h: self.variance(),
        }
    }

    /// New column of `M` and element of `V` for appending `generator` with
    /// angle zero. Its tangent is `−i·generator|Ψ⟩` because no rotation
    /// follows it.
    pub fn augment(&self, generator: &PauliString) -> Result<Augmentation<T>, KernelError> {
        let mut xi = generator.apply(&self.state)?;
        xi.scale(Complex::new(T::zero(), -T::one()));
        let o_new = dot(xi.amplitudes(), self.state.amplitudes());
        let mut column: Vec<T> = self
            .tangents
            .iter()
            .zip(&self.overlaps)
            .map(|(t, &o)| Self::m_entry(t, o, &xi, o_new))
            .collect();
        column.push(Self::m_entry(&xi, o_new, &xi, o_new));
        Ok(Augmentation {
            column,
            v_new: self.v_entry(&xi, o_new),
        })
    }
}

/// `M`, `V` and `var[H]` for an ansatz and Hamiltonian.
pub fn assemble_system<T: Real>(
    a: &Ansatz<T>,
    h: &WeightedPauliSum<T>,
) -> Result<McLachlanSystem<T>, KernelError> {
    Ok(TangentSpace::new(a, h)?.system())
}

/// Border entries for appending `generator` to `a` (angle zero).
pub fn augment_candidate<T: Real>(
    a: &Ansatz<T>,
    h: &WeightedPauliSum<T>,
    generator: &PauliString,
) -> Result<Augmentation<T>, KernelError> {
    TangentSpace::new(a, h)?.augment(generator)
}
