use crate::adaptive::TrajectoryRecord;
use crate::error::{Error, Result};
use crate::kernel::{exact_evolve, StateVector, WeightedPauliSum};
use crate::scalar::Real;
use crate::variational::CircuitLayout;

/// State and cumulative circuit cost after one Trotter step.
#[derive(Clone, Debug, PartialEq)]
pub struct TrotterStep<T: Real> {
    pub t: T,
    pub dt: T,
    pub state: StateVector<T>,
    pub n_rotations: usize,
    pub depth: usize,
    pub cnot_count: usize,
}

/// First-order Trotter evolution `Π_μ e^{-iδt j_μ h_μ}` in term order.
///
/// Steps have length `dt`; the last one is shortened to land on `t_final`.
/// Depth and CNOT counts come from the ASAP layout of all rotations so far.
pub fn trotter_run<T: Real>(
    h: &WeightedPauliSum<T>,
    psi0: &StateVector<T>,
    dt: T,
    t_final: T,
) -> Result<Vec<TrotterStep<T>>> {
    if h.n_qubits() != psi0.n_qubits() {
        return Err(Error::Invalid(format!(
            "hamiltonian acts on {} qubits, state on {}",
            h.n_qubits(),
            psi0.n_qubits()
        )));
    }
    if !(dt > T::zero()) || !dt.is_finite() || !(t_final > T::zero()) || !t_final.is_finite() {
        return Err(Error::Invalid(format!(
            "trotter needs dt > 0 and t_final > 0, got dt={dt} t_final={t_final}"
        )));
    }
    let slack = T::lit(1e-9) * t_final.max(T::one());
    let mut state = psi0.clone();
    let mut layout = CircuitLayout::empty(h.n_qubits());
    let mut t = T::zero();
    let mut out = Vec::new();
    while t + slack < t_final {
        let step = if t + dt > t_final - slack { t_final - t } else { dt };
        for (c, p) in h.terms() {
            p.rotate_in_place(*c * step, &mut state)?;
            layout.push(p);
        }
        t = if t + dt > t_final - slack { t_final } else { t + dt };
        out.push(TrotterStep {
            t,
            dt: step,
            state: state.clone(),
            n_rotations: layout.n_unitaries(),
            depth: layout.depth(),
            cnot_count: layout.cnot_count(),
        });
    }
    Ok(out)
}

/// Trotter steps as trajectory rows. `l2` is NaN (no variational defect);
/// infidelities are filled when `oracle` is set.
pub fn trotter_records<T: Real>(
    h: &WeightedPauliSum<T>,
    psi0: &StateVector<T>,
    dt: T,
    t_final: T,
    oracle: bool,
    seed: u64,
) -> Result<Vec<TrajectoryRecord<T>>> {
    let steps = trotter_run(h, psi0, dt, t_final)?;
    let mut exact = psi0.clone();
    steps
        .into_iter()
        .map(|s| {
            let infidelity = if oracle {
                exact = exact_evolve(h, s.dt, &exact)?;
                Some((T::one() - exact.fidelity(&s.state)?).max(T::zero()))
            } else {
                None
            };
            Ok(TrajectoryRecord {
                t: s.t,
                n_params: s.n_rotations,
                l2: T::nan(),
                depth: s.depth,
                cnot_count: s.cnot_count,
                dt: s.dt,
                energy: h.expectation(&s.state)?,
                infidelity,
                seed,
            })
        })
        .collect()
}
