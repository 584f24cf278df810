use crate::adaptive::{RunOptions, RunOutput, RunState};
use crate::error::{Error, Result};
use crate::kernel::{StateVector, WeightedPauliSum};
use crate::scalar::Real;
use crate::variational::Ansatz;

/// `L` repetitions of Hamiltonian-term rotations grouped into sublayers.
///
/// `sublayers` hold indices into the Hamiltonian's term list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HvaSpec {
    pub layers: usize,
    pub sublayers: Vec<Vec<usize>>,
}

impl HvaSpec {
    /// Every term must appear exactly once, with disjoint supports inside
    /// each sublayer.
    pub fn validate<T: Real>(&self, h: &WeightedPauliSum<T>) -> Result<()> {
        let terms = h.terms();
        let mut seen = vec![false; terms.len()];
        for (k, group) in self.sublayers.iter().enumerate() {
            let mut used = 0u64;
            for &i in group {
                let Some(slot) = seen.get_mut(i) else {
                    return Err(Error::Invalid(format!(
                        "sublayer {k} references term {i}, hamiltonian has {}",
                        terms.len()
                    )));
                };
                if *slot {
                    return Err(Error::Invalid(format!("term {i} appears in more than one sublayer")));
                }
                *slot = true;
                let support = terms[i].1.support();
                if support & used != 0 {
                    return Err(Error::Invalid(format!("sublayer {k} has overlapping supports")));
                }
                used |= support;
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::Invalid(format!("term {i} is not in any sublayer")));
        }
        Ok(())
    }
}

/// HVA with all angles zero on top of `reference`.
pub fn build_hva<T: Real>(
    h: &WeightedPauliSum<T>,
    spec: &HvaSpec,
    reference: StateVector<T>,
) -> Result<Ansatz<T>> {
    spec.validate(h)?;
    let block: Vec<_> = spec
        .sublayers
        .iter()
        .flatten()
        .map(|&i| h.terms()[i].1)
        .collect();
    let generators: Vec<_> = (0..spec.layers).flat_map(|_| block.iter().copied()).collect();
    Ok(Ansatz::new(reference).extended(&generators)?)
}

/// Variational dynamics with the ansatz structure held fixed.
pub fn vqds_fixed_run<T: Real>(
    ansatz: &Ansatz<T>,
    h: &WeightedPauliSum<T>,
    opts: &RunOptions<T>,
) -> Result<RunOutput<T>> {
    RunState::new(ansatz.clone(), h, None, opts)?.run()
}
