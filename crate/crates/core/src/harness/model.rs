use std::fmt;
use std::str::FromStr;

use crate::adaptive::OperatorPool;
use crate::baselines::HvaSpec;
use crate::error::{Error, Result};
use crate::kernel::{Pauli, PauliString, StateVector, WeightedPauliSum, MAX_STATE_QUBITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Transverse-field Ising.
    Tfim,
    /// Mixed-field Ising.
    Mfim,
    /// Heisenberg.
    Hm,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Tfim, ModelKind::Mfim, ModelKind::Hm];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Tfim => "tfim",
            ModelKind::Mfim => "mfim",
            ModelKind::Hm => "hm",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown model '{s}' (tfim, mfim, hm)")))
    }
}

/// Periodic spin chain. `h_z` is only used by the mixed-field model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub n_qubits: usize,
    pub j: f64,
    pub h_x: f64,
    pub h_z: f64,
}

impl ModelSpec {
    /// Standard couplings: `J = 1`, `h_x = −2`, `h_z = 0.5` for the mixed field.
    pub fn standard(kind: ModelKind, n_qubits: usize) -> Self {
        Self {
            kind,
            n_qubits,
            j: 1.0,
            h_x: -2.0,
            h_z: if kind == ModelKind::Mfim { 0.5 } else { 0.0 },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits < 3 || self.n_qubits > MAX_STATE_QUBITS {
            return Err(Error::Invalid(format!(
                "periodic chains need 3..={MAX_STATE_QUBITS} qubits, got {}",
                self.n_qubits
            )));
        }
        if ![self.j, self.h_x, self.h_z].iter().all(|x| x.is_finite()) {
            return Err(Error::Invalid("couplings must be finite".into()));
        }
        Ok(())
    }
}

/// Quench problem: `ψ₀` is an eigenstate of `h0` and evolves under `h`.
///
/// Terms of `h` are stored sublayer by sublayer, so Trotter circuits and
/// HVA blocks share one ordering.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub spec: ModelSpec,
    pub h0: WeightedPauliSum<f64>,
    pub h: WeightedPauliSum<f64>,
    pub psi0: StateVector<f64>,
    pub sublayers: Vec<Vec<usize>>,
}

/// Bonds `(0,1), (2,3), …` then `(1,2), (3,4), …, (n−1, 0)`.
fn brick_bonds(n: usize) -> [Vec<(usize, usize)>; 2] {
    let odd = (0..n).step_by(2).filter(|&i| i + 1 < n).map(|i| (i, i + 1)).collect();
    let mut even: Vec<_> = (1..n).step_by(2).map(|i| (i, (i + 1) % n)).collect();
    if n % 2 == 1 {
        even.push((n - 1, 0));
    }
    [odd, even]
}

pub fn build_model(spec: &ModelSpec) -> Result<Model> {
    spec.validate()?;
    let n = spec.n_qubits;
    let pair = |(a, b): (usize, usize), p: Pauli| PauliString::two(n, (a, p), (b, p));
    let bonds = brick_bonds(n);
    let mut groups: Vec<Vec<(f64, PauliString)>> = Vec::new();

    let (h0_sign, psi0) = match spec.kind {
        ModelKind::Tfim | ModelKind::Mfim => {
            for half in &bonds {
                groups.push(half.iter().map(|&b| (-spec.j, pair(b, Pauli::Z))).collect());
            }
            groups.push((0..n).map(|i| (spec.h_x, PauliString::single(n, i, Pauli::X))).collect());
            if spec.kind == ModelKind::Mfim {
                groups.push((0..n).map(|i| (spec.h_z, PauliString::single(n, i, Pauli::Z))).collect());
            }
            (-1.0, StateVector::zero_state(n)?)
        }
        ModelKind::Hm => {
            for half in &bonds {
                for p in [Pauli::X, Pauli::Y, Pauli::Z] {
                    groups.push(half.iter().map(|&b| (spec.j, pair(b, p))).collect());
                }
            }
            let neel: usize = (1..n).step_by(2).map(|i| 1usize << i).sum();
            (1.0, StateVector::basis(n, neel)?)
        }
    };

    let h0 = WeightedPauliSum::new(
        n,
        bonds.iter().flatten().map(|&b| (h0_sign * spec.j, pair(b, Pauli::Z))),
    )?;
    let mut sublayers = Vec::new();
    let mut terms = Vec::new();
    for g in groups {
        sublayers.push((terms.len()..terms.len() + g.len()).collect());
        terms.extend(g);
    }
    let h = WeightedPauliSum::new(n, terms)?;
    if h.len() != sublayers.iter().map(Vec::len).sum::<usize>() {
        return Err(Error::Invalid("duplicate terms in model hamiltonian".into()));
    }
    let var = h0.variance(&psi0)?;
    if var > 1e-10 {
        return Err(Error::Invalid(format!("initial state is not an eigenstate of h0 (variance {var:e})")));
    }
    Ok(Model {
        spec: *spec,
        h0,
        h,
        psi0,
        sublayers,
    })
}

impl Model {
    /// Brick-wall HVA structure; odd chains are rejected because the
    /// periodic bond `(n−1, 0)` would collide with `(0, 1)`.
    pub fn hva_spec(&self, layers: usize) -> Result<HvaSpec> {
        if self.spec.n_qubits % 2 == 1 {
            return Err(Error::Invalid(format!(
                "brick-wall grouping needs an even chain, got {} qubits",
                self.spec.n_qubits
            )));
        }
        Ok(HvaSpec {
            layers,
            sublayers: self.sublayers.clone(),
        })
    }

    /// Singles plus nearest-neighbour pairs for the Ising models, pairs only
    /// for the Heisenberg chain.
    pub fn default_pool(&self) -> Result<OperatorPool> {
        match self.spec.kind {
            ModelKind::Tfim | ModelKind::Mfim => OperatorPool::single_and_nearest_neighbor(self.spec.n_qubits),
            ModelKind::Hm => OperatorPool::nearest_neighbor_pairs(self.spec.n_qubits),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_counts() {
        let t = build_model(&ModelSpec::standard(ModelKind::Tfim, 4)).unwrap();
        assert_eq!(t.h.len(), 8);
        assert_eq!(t.sublayers, vec![vec![0, 1], vec![2, 3], vec![4, 5, 6, 7]]);
        assert_eq!(build_model(&ModelSpec::standard(ModelKind::Mfim, 4)).unwrap().h.len(), 12);
        let hm = build_model(&ModelSpec::standard(ModelKind::Hm, 4)).unwrap();
        assert_eq!(hm.h.len(), 12);
        assert_eq!(hm.sublayers.len(), 6);
        assert!((hm.h0.expectation(&hm.psi0).unwrap() + 4.0).abs() < 1e-12);
    }

    #[test]
    fn spin_up_energy_and_rejections() {
        let t = build_model(&ModelSpec::standard(ModelKind::Tfim, 6)).unwrap();
        assert!((t.h0.expectation(&t.psi0).unwrap() + 6.0).abs() < 1e-12);
        assert!(build_model(&ModelSpec::standard(ModelKind::Tfim, 2)).is_err());
        let odd = build_model(&ModelSpec::standard(ModelKind::Tfim, 5)).unwrap();
        assert_eq!(odd.h.len(), 10);
        assert!(odd.hva_spec(1).is_err());
        assert!("ising".parse::<ModelKind>().is_err());
    }

    #[test]
    fn hva_spec_is_valid_grouping() {
        for kind in ModelKind::ALL {
            let m = build_model(&ModelSpec::standard(kind, 6)).unwrap();
            m.hva_spec(2).unwrap().validate(&m.h).unwrap();
        }
    }
}
