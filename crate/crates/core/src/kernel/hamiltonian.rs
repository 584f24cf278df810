use num_complex::Complex;

use super::{KernelError, PauliString, StateVector};
use crate::scalar::Real;

/// Real-weighted sum of Pauli strings, `H = Σ_μ j_μ ĥ_μ`.
///
/// Terms keep first-insertion order; repeated strings are merged into the
/// first occurrence.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPauliSum<T: Real> {
    n_qubits: usize,
    terms: Vec<(T, PauliString)>,
}

impl<T: Real> WeightedPauliSum<T> {
    pub fn new<I>(n_qubits: usize, terms: I) -> Result<Self, KernelError>
    where
        I: IntoIterator<Item = (T, PauliString)>,
    {
        let mut out = Self {
            n_qubits,
            terms: Vec::new(),
        };
        for (c, p) in terms {
            out.push(c, p)?;
        }
        Ok(out)
    }

    pub fn empty(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: Vec::new(),
        }
    }

    /// Adds a term, merging into an existing identical string.
    pub fn push(&mut self, coeff: T, p: PauliString) -> Result<(), KernelError> {
        if p.n_qubits() != self.n_qubits {
            return Err(KernelError::DimensionMismatch {
                expected: self.n_qubits,
                found: p.n_qubits(),
            });
        }
        if !coeff.is_finite() {
            return Err(KernelError::InvalidArgument(format!(
                "non-finite coefficient on {p}"
            )));
        }
        match self.terms.iter_mut().find(|(_, q)| *q == p) {
            Some((c, _)) => *c += coeff,
            None => self.terms.push((coeff, p)),
        }
        Ok(())
    }

    /// `self + other`, terms of `other` appended or merged.
    pub fn plus(&self, other: &Self) -> Result<Self, KernelError> {
        let mut out = self.clone();
        for &(c, p) in &other.terms {
            out.push(c, p)?;
        }
        Ok(out)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(T, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, psi: &StateVector<T>) -> Result<(), KernelError> {
        if psi.n_qubits() != self.n_qubits {
            return Err(KernelError::DimensionMismatch {
                expected: self.n_qubits,
                found: psi.n_qubits(),
            });
        }
        Ok(())
    }

    /// `H|ψ⟩`, generally unnormalized.
    pub fn apply(&self, psi: &StateVector<T>) -> Result<StateVector<T>, KernelError> {
        self.check(psi)?;
        let mut out = psi.zeros_like();
        for &(c, p) in &self.terms {
            p.accumulate(c, psi.amplitudes(), out.amplitudes_mut());
        }
        Ok(out)
    }

    pub fn expectation(&self, psi: &StateVector<T>) -> Result<T, KernelError> {
        let h_psi = self.apply(psi)?;
        Ok(psi.inner(&h_psi)?.re)
    }

    /// `⟨H²⟩ − ⟨H⟩²` through `φ = H|ψ⟩`: `⟨φ|φ⟩ − ⟨ψ|φ⟩²`.
    pub fn variance(&self, psi: &StateVector<T>) -> Result<T, KernelError> {
        let phi = self.apply(psi)?;
        Ok(variance_from(psi, &phi))
    }

    /// Largest `Σ|j_μ|`, an upper bound on the spectral radius.
    pub fn one_norm(&self) -> T {
        self.terms.iter().map(|(c, _)| c.abs()).sum()
    }
}

/// Variance given `ψ` and `Hψ` already in hand.
pub(crate) fn variance_from<T: Real>(psi: &StateVector<T>, h_psi: &StateVector<T>) -> T {
    let e: Complex<T> = super::state::dot(psi.amplitudes(), h_psi.amplitudes());
    h_psi.norm_sqr() - e.re * e.re
}
