use num_complex::Complex;

use super::KernelError;
use crate::scalar::{Cplx, Real};

/// Most qubits a dense state vector may hold.
pub const MAX_STATE_QUBITS: usize = 30;

/// Dense `2^n` amplitude vector. Qubit 0 is the least-significant bit of the
/// basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T: Real> {
    n_qubits: usize,
    amps: Vec<Cplx<T>>,
}

impl<T: Real> StateVector<T> {
    /// `|0…0⟩`.
    pub fn zero_state(n_qubits: usize) -> Result<Self, KernelError> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self, KernelError> {
        if n_qubits == 0 || n_qubits > MAX_STATE_QUBITS {
            return Err(KernelError::TooManyQubits(n_qubits));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(KernelError::InvalidArgument(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[index] = Complex::new(T::one(), T::zero());
        Ok(Self { n_qubits, amps })
    }

    /// Takes ownership of amplitudes; the length must be a power of two.
    /// No normalization is applied.
    pub fn from_amplitudes(amps: Vec<Cplx<T>>) -> Result<Self, KernelError> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(KernelError::InvalidArgument(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_STATE_QUBITS {
            return Err(KernelError::TooManyQubits(n_qubits));
        }
        Ok(Self { n_qubits, amps })
    }

    pub(crate) fn from_raw(n_qubits: usize, amps: Vec<Cplx<T>>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n_qubits);
        Self { n_qubits, amps }
    }

    pub(crate) fn zeros_like(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            amps: vec![Complex::new(T::zero(), T::zero()); self.amps.len()],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Cplx<T>] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Cplx<T>] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Cplx<T>> {
        self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Scales to unit norm. Fails on the zero vector.
    pub fn normalize(&mut self) -> Result<(), KernelError> {
        let n = self.norm();
        if n == T::zero() || !n.is_finite() {
            return Err(KernelError::InvalidArgument("cannot normalize a zero or non-finite state".into()));
        }
        let inv = T::one() / n;
        for a in &mut self.amps {
            *a = a.scale(inv);
        }
        Ok(())
    }

    pub fn scale(&mut self, s: Cplx<T>) {
        for a in &mut self.amps {
            *a *= s;
        }
    }

    /// `self += s·other`.
    pub(crate) fn axpy(&mut self, s: Cplx<T>, other: &Self) {
        for (a, &b) in self.amps.iter_mut().zip(&other.amps) {
            *a += s * b;
        }
    }

    fn check(&self, other: &Self) -> Result<(), KernelError> {
        if self.n_qubits != other.n_qubits {
            return Err(KernelError::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Cplx<T>, KernelError> {
        self.check(other)?;
        Ok(dot(&self.amps, &other.amps))
    }

    /// `|⟨self|other⟩|²`, clamped into `[0, 1]`.
    pub fn fidelity(&self, other: &Self) -> Result<T, KernelError> {
        let f = self.inner(other)?.norm_sqr();
        Ok(f.max(T::zero()).min(T::one()))
    }
}

/// Conjugate-linear in the first argument.
#[inline]
pub(crate) fn dot<T: Real>(a: &[Cplx<T>], b: &[Cplx<T>]) -> Cplx<T> {
    let mut re = T::zero();
    let mut im = T::zero();
    for (x, y) in a.iter().zip(b) {
        re += x.re * y.re + x.im * y.im;
        im += x.re * y.im - x.im * y.re;
    }
    Complex::new(re, im)
}
