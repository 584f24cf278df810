use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{grow_once, Growth, GrowthConfig, OperatorPool};
use crate::error::{Error, Result};
use crate::kernel::{exact_evolve, StateVector, WeightedPauliSum};
use crate::noise::{noisy_system, NoiseConfig};
use crate::scalar::Real;
use crate::solvers::{
    solve_with_eig, symmetric_eig, symmetric_eig_warm, EigenDecomposition, Solution, SolverConfig,
};
use crate::variational::{Ansatz, McLachlanSystem, TangentSpace};

#[derive(Clone, Debug, PartialEq)]
pub struct StepConfig<T: Real> {
    /// Largest angle change per step, `Δθ_m`.
    pub dtheta_max: T,
    /// Fixed step overriding the adaptive rule.
    pub dt_fixed: Option<T>,
    pub t_final: T,
    /// End the run once the oracle infidelity exceeds this value.
    pub stop_infidelity: Option<T>,
    pub max_steps: Option<usize>,
}

impl<T: Real> Default for StepConfig<T> {
    fn default() -> Self {
        Self {
            dtheta_max: T::lit(0.005),
            dt_fixed: None,
            t_final: T::one(),
            stop_infidelity: None,
            max_steps: None,
        }
    }
}

impl<T: Real> StepConfig<T> {
    pub fn until(t_final: T) -> Self {
        Self {
            t_final,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |x: T| x > T::zero() && x.is_finite();
        if !pos(self.dtheta_max) {
            return Err(Error::Invalid(format!("dtheta_max must be > 0, got {}", self.dtheta_max)));
        }
        if let Some(dt) = self.dt_fixed {
            if !pos(dt) {
                return Err(Error::Invalid(format!("dt_fixed must be > 0, got {dt}")));
            }
        }
        if !pos(self.t_final) {
            return Err(Error::Invalid(format!("t_final must be > 0, got {}", self.t_final)));
        }
        if self.max_steps == Some(0) {
            return Err(Error::Invalid("max_steps must be positive when set".into()));
        }
        Ok(())
    }
}

/// One row of a trajectory, taken after each step.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRecord<T: Real> {
    pub t: T,
    pub n_params: usize,
    /// `L²` of the solve that produced this step.
    pub l2: T,
    pub depth: usize,
    pub cnot_count: usize,
    pub dt: T,
    /// `⟨H⟩` of the state at `t`.
    pub energy: T,
    pub infidelity: Option<T>,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RunEventKind {
    /// No candidate beat the score cut; the step used the best-effort `θ̇`.
    GrowthStalled,
    /// Growth suppressed by the depth cap.
    DepthCapped,
    /// `max_grow_iters` reached with `L² ≥ l2_cut`.
    GrowIterLimit,
    /// `max_steps` reached before `t_final`.
    StepLimit,
    /// Infidelity exceeded `stop_infidelity`.
    InfidelityStop,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunEvent<T: Real> {
    pub step: usize,
    pub t: T,
    pub kind: RunEventKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions<T: Real> {
    pub step: StepConfig<T>,
    pub solver: SolverConfig<T>,
    pub noise: NoiseConfig,
    /// Track `e^{-iHt}|ψ₀⟩` and record infidelities.
    pub oracle: bool,
    pub seed: u64,
}

impl<T: Real> RunOptions<T> {
    pub fn new(step: StepConfig<T>, solver: SolverConfig<T>) -> Self {
        Self {
            step,
            solver,
            noise: NoiseConfig::noiseless(),
            oracle: true,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.step.validate()?;
        self.solver.validate()?;
        self.noise.validate()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput<T: Real> {
    pub records: Vec<TrajectoryRecord<T>>,
    pub events: Vec<RunEvent<T>>,
    pub ansatz: Ansatz<T>,
}

impl<T: Real> RunOutput<T> {
    pub fn count(&self, kind: RunEventKind) -> usize {
        self.events.iter().filter(|e| e.kind == kind).count()
    }

    pub fn max_infidelity(&self) -> Option<T> {
        self.records
            .iter()
            .filter_map(|r| r.infidelity)
            .fold(None, |m, x| Some(m.map_or(x, |m: T| m.max(x))))
    }
}

/// Mutable state of one trajectory.
pub struct RunState<'a, T: Real> {
    h: &'a WeightedPauliSum<T>,
    growth: Option<(&'a OperatorPool, &'a GrowthConfig<T>)>,
    opts: &'a RunOptions<T>,
    ansatz: Ansatz<T>,
    t: T,
    steps: usize,
    exact: Option<StateVector<T>>,
    rng: ChaCha8Rng,
    events: Vec<RunEvent<T>>,
    stopped: bool,
    /// Last decomposition of `M` and how many warm starts it has been
    /// through since the last cold one.
    eig: Option<(EigenDecomposition<T>, usize)>,
}

/// Warm-started decompositions between cold restarts.
const MAX_WARM_STARTS: usize = 64;

impl<'a, T: Real> RunState<'a, T> {
    /// `growth = None` keeps the ansatz fixed.
    pub fn new(
        ansatz: Ansatz<T>,
        h: &'a WeightedPauliSum<T>,
        growth: Option<(&'a OperatorPool, &'a GrowthConfig<T>)>,
        opts: &'a RunOptions<T>,
    ) -> Result<Self> {
        opts.validate()?;
        if h.n_qubits() != ansatz.n_qubits() {
            return Err(Error::Invalid(format!(
                "hamiltonian acts on {} qubits, ansatz on {}",
                h.n_qubits(),
                ansatz.n_qubits()
            )));
        }
        if let Some((pool, cfg)) = growth {
            cfg.validate()?;
            if pool.n_qubits() != ansatz.n_qubits() {
                return Err(Error::Invalid(format!(
                    "pool acts on {} qubits, ansatz on {}",
                    pool.n_qubits(),
                    ansatz.n_qubits()
                )));
            }
        }
        let exact = opts.oracle.then(|| ansatz.prepare_state());
        Ok(Self {
            h,
            growth,
            opts,
            ansatz,
            t: T::zero(),
            steps: 0,
            exact,
            rng: ChaCha8Rng::seed_from_u64(opts.seed),
            events: Vec::new(),
            stopped: false,
            eig: None,
        })
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn ansatz(&self) -> &Ansatz<T> {
        &self.ansatz
    }

    pub fn events(&self) -> &[RunEvent<T>] {
        &self.events
    }

    /// True once `t_final`, the step limit or the infidelity stop is reached.
    pub fn finished(&self) -> bool {
        let slack = T::lit(1e-9) * self.opts.step.t_final.max(T::one());
        self.stopped || self.t + slack >= self.opts.step.t_final
    }

    fn event(&mut self, kind: RunEventKind) {
        self.events.push(RunEvent {
            step: self.steps,
            t: self.t,
            kind,
        });
    }

    fn assemble(&mut self) -> Result<(TangentSpace<T>, McLachlanSystem<T>, Solution<T>, T)> {
        let space = TangentSpace::new(&self.ansatz, self.h)?;
        let mut system = space.system();
        if !self.opts.noise.is_noiseless() {
            system = noisy_system(&system, &self.ansatz.layout(), &self.opts.noise, &mut self.rng)?;
        }
        let eig = match self.eig.take() {
            Some((prev, warm)) if prev.dim() == system.dim() && warm < MAX_WARM_STARTS => {
                (symmetric_eig_warm(&system.m, &prev)?, warm + 1)
            }
            _ => (symmetric_eig(&system.m)?, 0),
        };
        let sol = solve_with_eig(&system, &self.opts.solver, &eig.0)?;
        self.eig = Some(eig);
        let l2 = system.mclachlan_distance(&sol.theta_dot)?;
        Ok((space, system, sol, l2))
    }

    fn step_size(&self, theta_dot: &[T]) -> T {
        let step = &self.opts.step;
        if let Some(dt) = step.dt_fixed {
            return dt;
        }
        let peak = theta_dot.iter().fold(T::zero(), |m, x| m.max(x.abs()));
        if peak < T::lit(1e-12) {
            T::lit(10.0) * step.dtheta_max
        } else {
            step.dtheta_max / peak
        }
    }

    /// Solve, grow while `L² ≥ l2_cut`, then take one Euler step.
    pub fn adaptive_step(&mut self) -> Result<TrajectoryRecord<T>> {
        let (mut space, mut system, mut sol, mut l2) = self.assemble()?;
        if let Some((pool, cfg)) = self.growth {
            let mut iters = 0;
            while l2 >= cfg.l2_cut {
                if iters == cfg.max_grow_iters {
                    self.event(RunEventKind::GrowIterLimit);
                    break;
                }
                iters += 1;
                let base_eig = self.eig.as_ref().map(|(e, _)| e);
                match grow_once(&self.ansatz, &space, &system, l2, pool, cfg, &self.opts.solver, base_eig)? {
                    Growth::Grown { ansatz, .. } => {
                        self.ansatz = ansatz;
                        (space, system, sol, l2) = self.assemble()?;
                    }
                    Growth::Stalled => {
                        self.event(RunEventKind::GrowthStalled);
                        break;
                    }
                    Growth::DepthCapped => {
                        self.event(RunEventKind::DepthCapped);
                        break;
                    }
                }
            }
        }

        let dt = self.step_size(&sol.theta_dot);
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(Error::Invalid(format!("non-finite step size {dt} at t={}", self.t)));
        }
        let layout = self.ansatz.layout();
        self.ansatz = self.ansatz.advanced(&sol.theta_dot, dt)?;
        self.t += dt;
        self.steps += 1;

        let state = self.ansatz.prepare_state();
        let energy = self.h.expectation(&state)?;
        let infidelity = match &self.exact {
            Some(prev) => {
                let next = exact_evolve(self.h, dt, prev)?;
                let inf = (T::one() - next.fidelity(&state)?).max(T::zero());
                self.exact = Some(next);
                Some(inf)
            }
            None => None,
        };
        if let (Some(cut), Some(inf)) = (self.opts.step.stop_infidelity, infidelity) {
            if inf > cut {
                self.event(RunEventKind::InfidelityStop);
                self.stopped = true;
            }
        }
        if self.opts.step.max_steps.is_some_and(|m| self.steps >= m) && !self.finished() {
            self.event(RunEventKind::StepLimit);
            self.stopped = true;
        }
        Ok(TrajectoryRecord {
            t: self.t,
            n_params: layout.n_unitaries(),
            l2,
            depth: layout.depth(),
            cnot_count: layout.cnot_count(),
            dt,
            energy,
            infidelity,
            seed: self.opts.seed,
        })
    }

    /// Steps until [`finished`](Self::finished).
    pub fn run(mut self) -> Result<RunOutput<T>> {
        let mut records = Vec::new();
        while !self.finished() {
            records.push(self.adaptive_step()?);
        }
        Ok(RunOutput {
            records,
            events: self.events,
            ansatz: self.ansatz,
        })
    }
}

/// Adaptive run from `ψ₀` under `H`, starting with an empty ansatz.
pub fn run_avqds<T: Real>(
    psi0: &StateVector<T>,
    h: &WeightedPauliSum<T>,
    pool: &OperatorPool,
    growth: &GrowthConfig<T>,
    opts: &RunOptions<T>,
) -> Result<RunOutput<T>> {
    RunState::new(Ansatz::new(psi0.clone()), h, Some((pool, growth)), opts)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Pauli, PauliString};

    fn x1() -> WeightedPauliSum<f64> {
        WeightedPauliSum::new(1, [(1.0, PauliString::single(1, 0, Pauli::X))]).unwrap()
    }

    #[test]
    fn exact_single_qubit_step() {
        let h = x1();
        let a = Ansatz::new(StateVector::zero_state(1).unwrap())
            .extended(&[PauliString::single(1, 0, Pauli::X)])
            .unwrap();
        let opts = RunOptions::new(StepConfig::until(0.02), SolverConfig::truncation(1e-6));
        let mut st = RunState::new(a, &h, None, &opts).unwrap();
        let r = st.adaptive_step().unwrap();
        assert!((r.dt - 0.005).abs() < 1e-12);
        assert!(r.l2 < 1e-12);
        assert!((st.ansatz().angles()[0] - 0.005).abs() < 1e-12);
        assert!(r.infidelity.unwrap() < 1e-12);
    }

    #[test]
    fn growth_before_first_step_and_fixed_dt() {
        let h = x1();
        let pool = OperatorPool::new(
            1,
            vec![PauliString::single(1, 0, Pauli::Z), PauliString::single(1, 0, Pauli::X)],
        )
        .unwrap();
        let growth = GrowthConfig::default();
        let mut step = StepConfig::until(0.01);
        step.dt_fixed = Some(0.002);
        let opts = RunOptions::new(step, SolverConfig::truncation(1e-6));
        let out = run_avqds(&StateVector::zero_state(1).unwrap(), &h, &pool, &growth, &opts).unwrap();
        assert_eq!(out.records.len(), 5);
        assert!(out.records.iter().all(|r| r.dt == 0.002 && r.n_params == 1));
        assert_eq!(out.ansatz.generators(), &[PauliString::single(1, 0, Pauli::X)]);
        assert!(out.max_infidelity().unwrap() < 1e-12);
    }

    #[test]
    fn stationary_state_never_grows() {
        let zz = WeightedPauliSum::<f64>::new(
            3,
            (0..3).map(|i| (-1.0, PauliString::two(3, (i, Pauli::Z), ((i + 1) % 3, Pauli::Z)))),
        )
        .unwrap();
        let pool = OperatorPool::single_and_nearest_neighbor(3).unwrap();
        let opts = RunOptions::new(StepConfig::until(0.5), SolverConfig::truncation(1e-6));
        let out = run_avqds(&StateVector::zero_state(3).unwrap(), &zz, &pool, &GrowthConfig::default(), &opts)
            .unwrap();
        assert!(out.records.iter().all(|r| r.n_params == 0 && r.infidelity.unwrap() < 1e-10));
        assert!((out.records[0].dt - 0.05).abs() < 1e-15);
    }

    #[test]
    fn step_limit_and_validation() {
        let h = x1();
        let mut step = StepConfig::until(1.0);
        step.max_steps = Some(3);
        let opts = RunOptions::new(step, SolverConfig::truncation(1e-6));
        let a = Ansatz::new(StateVector::zero_state(1).unwrap());
        let out = RunState::new(a.clone(), &h, None, &opts).unwrap().run().unwrap();
        assert_eq!(out.records.len(), 3);
        assert_eq!(out.count(RunEventKind::StepLimit), 1);

        let bad = RunOptions::new(StepConfig::until(-1.0), SolverConfig::truncation(1e-6));
        assert!(RunState::new(a, &h, None, &bad).is_err());
    }
}
