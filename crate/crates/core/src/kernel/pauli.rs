use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use super::{KernelError, StateVector};
use crate::scalar::{Cplx, Real};

/// Most qubits a [`PauliString`] mask can hold.
pub const MAX_PAULI_QUBITS: usize = 64;

/// Single-site Pauli operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A tensor product of single-qubit Paulis, stored as X and Z bit masks.
///
/// Site `i` carries Y when bit `i` is set in both masks. No overall phase is
/// stored: the operator is always the Hermitian product `⊗ σ_i`, so `P² = I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n_qubits: usize,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        assert!(
            (1..=MAX_PAULI_QUBITS).contains(&n_qubits),
            "PauliString supports 1..={MAX_PAULI_QUBITS} qubits, got {n_qubits}"
        );
        Self { n_qubits, x: 0, z: 0 }
    }

    /// Builds a string from `(site, pauli)` pairs; repeated sites are rejected.
    pub fn from_sites(n_qubits: usize, sites: &[(usize, Pauli)]) -> Result<Self, KernelError> {
        if !(1..=MAX_PAULI_QUBITS).contains(&n_qubits) {
            return Err(KernelError::TooManyQubits(n_qubits));
        }
        let mut p = Self::identity(n_qubits);
        let mut seen = 0u64;
        for &(q, s) in sites {
            if q >= n_qubits {
                return Err(KernelError::InvalidArgument(format!(
                    "site {q} out of range for {n_qubits} qubits"
                )));
            }
            if seen >> q & 1 == 1 {
                return Err(KernelError::InvalidArgument(format!("site {q} repeated")));
            }
            seen |= 1 << q;
            p = p.with_site(q, s);
        }
        Ok(p)
    }

    pub fn single(n_qubits: usize, site: usize, pauli: Pauli) -> Self {
        assert!(site < n_qubits, "site {site} out of range");
        Self::identity(n_qubits).with_site(site, pauli)
    }

    pub fn two(n_qubits: usize, a: (usize, Pauli), b: (usize, Pauli)) -> Self {
        assert!(a.0 != b.0 && a.0 < n_qubits && b.0 < n_qubits);
        Self::identity(n_qubits).with_site(a.0, a.1).with_site(b.0, b.1)
    }

    /// Raw masks; bits at or above `n_qubits` must be clear.
    pub fn from_masks(n_qubits: usize, x: u64, z: u64) -> Result<Self, KernelError> {
        if !(1..=MAX_PAULI_QUBITS).contains(&n_qubits) {
            return Err(KernelError::TooManyQubits(n_qubits));
        }
        let valid = if n_qubits == 64 { u64::MAX } else { (1u64 << n_qubits) - 1 };
        if (x | z) & !valid != 0 {
            return Err(KernelError::InvalidArgument(
                "mask has bits beyond n_qubits".into(),
            ));
        }
        Ok(Self { n_qubits, x, z })
    }

    #[must_use]
    pub fn with_site(mut self, site: usize, pauli: Pauli) -> Self {
        let (bx, bz) = pauli.bits();
        let m = 1u64 << site;
        self.x = (self.x & !m) | if bx { m } else { 0 };
        self.z = (self.z & !m) | if bz { m } else { 0 };
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Bit mask of the qubits acted on non-trivially.
    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.support() == 0
    }

    pub fn site(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x >> q & 1 == 1, self.z >> q & 1 == 1)
    }

    pub fn overlaps(&self, other: &PauliString) -> bool {
        self.support() & other.support() != 0
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    fn n_y(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// `i^{n_Y}`, the phase that turns `X^x Z^z` into the Hermitian string.
    fn y_phase<T: Real>(&self) -> Cplx<T> {
        i_pow(self.n_y())
    }

    /// `P|b⟩ = phase(b)·|b ⊕ x⟩`.
    #[inline]
    fn phase_of<T: Real>(&self, base: Cplx<T>, b: usize) -> Cplx<T> {
        if (b as u64 & self.z).count_ones() & 1 == 1 {
            -base
        } else {
            base
        }
    }

    fn check(&self, n: usize) -> Result<(), KernelError> {
        if self.n_qubits != n {
            return Err(KernelError::DimensionMismatch {
                expected: self.n_qubits,
                found: n,
            });
        }
        Ok(())
    }

    /// Returns `P|ψ⟩`.
    pub fn apply<T: Real>(&self, psi: &StateVector<T>) -> Result<StateVector<T>, KernelError> {
        self.check(psi.n_qubits())?;
        let mut out = vec![Complex::new(T::zero(), T::zero()); psi.dim()];
        let base = self.y_phase::<T>();
        let x = self.x as usize;
        for (b, &a) in psi.amplitudes().iter().enumerate() {
            out[b ^ x] = self.phase_of(base, b) * a;
        }
        Ok(StateVector::from_raw(psi.n_qubits(), out))
    }

    /// Accumulates `coeff·P|ψ⟩` into `out`.
    pub(crate) fn accumulate<T: Real>(&self, coeff: T, psi: &[Cplx<T>], out: &mut [Cplx<T>]) {
        let base = self.y_phase::<T>() * coeff;
        let x = self.x as usize;
        for (b, &a) in psi.iter().enumerate() {
            out[b ^ x] += self.phase_of(base, b) * a;
        }
    }

    /// `⟨ψ|P|ψ⟩`, real because `P` is Hermitian.
    pub fn expectation<T: Real>(&self, psi: &StateVector<T>) -> Result<T, KernelError> {
        self.check(psi.n_qubits())?;
        let base = self.y_phase::<T>();
        let x = self.x as usize;
        let amps = psi.amplitudes();
        let mut acc = Complex::new(T::zero(), T::zero());
        for (b, &a) in amps.iter().enumerate() {
            acc += amps[b ^ x].conj() * self.phase_of(base, b) * a;
        }
        Ok(acc.re)
    }

    /// Applies `e^{-iθP}` in place.
    pub fn rotate_in_place<T: Real>(
        &self,
        theta: T,
        psi: &mut StateVector<T>,
    ) -> Result<(), KernelError> {
        self.check(psi.n_qubits())?;
        let (s, c) = theta.sin_cos();
        let amps = psi.amplitudes_mut();
        if self.x == 0 {
            // diagonal: e^{-iθ s_b} with s_b = ±1
            let plus = Complex::new(c, -s);
            let minus = Complex::new(c, s);
            for (b, a) in amps.iter_mut().enumerate() {
                *a *= if (b as u64 & self.z).count_ones() & 1 == 1 { minus } else { plus };
            }
            return Ok(());
        }
        // -i·sinθ·i^{n_Y}
        let base = Complex::new(T::zero(), -s) * self.y_phase::<T>();
        let x = self.x as usize;
        let pivot = 1usize << (63 - self.x.leading_zeros());
        for b in 0..amps.len() {
            if b & pivot != 0 {
                continue;
            }
            let bx = b ^ x;
            let a0 = amps[b];
            let a1 = amps[bx];
            amps[b] = a0.scale(c) + self.phase_of(base, bx) * a1;
            amps[bx] = a1.scale(c) + self.phase_of(base, b) * a0;
        }
        Ok(())
    }

    /// Returns `e^{-iθP}|ψ⟩`.
    pub fn rotate<T: Real>(
        &self,
        theta: T,
        psi: &StateVector<T>,
    ) -> Result<StateVector<T>, KernelError> {
        let mut out = psi.clone();
        self.rotate_in_place(theta, &mut out)?;
        Ok(out)
    }
}

pub(crate) fn i_pow<T: Real>(k: u32) -> Cplx<T> {
    let (o, z) = (T::one(), T::zero());
    match k % 4 {
        0 => Complex::new(o, z),
        1 => Complex::new(z, o),
        2 => Complex::new(-o, z),
        _ => Complex::new(z, -o),
    }
}

/// Dense label, qubit 0 first: `"XIZ"` is `X₀ Z₂` on three qubits.
impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n_qubits {
            write!(f, "{}", self.site(q).symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let n = s.chars().count();
        if n == 0 || n > MAX_PAULI_QUBITS {
            return Err(KernelError::InvalidArgument(format!("bad Pauli label '{s}'")));
        }
        let mut p = PauliString::identity(n);
        for (q, ch) in s.chars().enumerate() {
            let op = match ch.to_ascii_uppercase() {
                'I' | '_' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => {
                    return Err(KernelError::InvalidArgument(format!(
                        "bad Pauli symbol '{ch}' in '{s}'"
                    )))
                }
            };
            p = p.with_site(q, op);
        }
        Ok(p)
    }
}
