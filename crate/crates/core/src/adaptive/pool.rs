use crate::error::{Error, Result};
use crate::kernel::{Pauli, PauliString};

/// Generators eligible to extend the ansatz.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorPool {
    n_qubits: usize,
    operators: Vec<PauliString>,
}

const PAULIS: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

impl OperatorPool {
    /// Rejects duplicates, identity strings and width mismatches.
    pub fn new(n_qubits: usize, operators: Vec<PauliString>) -> Result<Self> {
        for (i, op) in operators.iter().enumerate() {
            if op.n_qubits() != n_qubits {
                return Err(Error::Invalid(format!(
                    "pool operator {op} has {} qubits, expected {n_qubits}",
                    op.n_qubits()
                )));
            }
            if op.is_identity() {
                return Err(Error::Invalid("pool operators must have weight >= 1".into()));
            }
            if operators[..i].contains(op) {
                return Err(Error::Invalid(format!("duplicate pool operator {op}")));
            }
        }
        Ok(Self {
            n_qubits,
            operators,
        })
    }

    /// Every `X_i, Y_i, Z_i` followed by every nearest-neighbour pair
    /// `σ_i σ'_{i+1}` on a ring.
    pub fn single_and_nearest_neighbor(n_qubits: usize) -> Result<Self> {
        let mut ops = Vec::new();
        for q in 0..n_qubits {
            for p in PAULIS {
                ops.push(PauliString::single(n_qubits, q, p));
            }
        }
        ops.extend(Self::pairs(n_qubits)?);
        Self::new(n_qubits, ops)
    }

    /// Nearest-neighbour pairs `σ_i σ'_{i+1}` on a ring only.
    pub fn nearest_neighbor_pairs(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, Self::pairs(n_qubits)?)
    }

    fn pairs(n_qubits: usize) -> Result<Vec<PauliString>> {
        if n_qubits < 3 {
            return Err(Error::Invalid(format!(
                "ring pools need at least 3 qubits, got {n_qubits}"
            )));
        }
        let mut ops = Vec::with_capacity(9 * n_qubits);
        for i in 0..n_qubits {
            let j = (i + 1) % n_qubits;
            for a in PAULIS {
                for b in PAULIS {
                    ops.push(PauliString::two(n_qubits, (i, a), (j, b)));
                }
            }
        }
        Ok(ops)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn operators(&self) -> &[PauliString] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }
}
