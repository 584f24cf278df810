use std::fmt;

use rayon::prelude::*;
use std::str::FromStr;

use super::OperatorPool;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::solvers::{EigenDecomposition, ExtensionScorer, SolverConfig};
use crate::variational::{Ansatz, CircuitLayout, McLachlanSystem, TangentSpace};

/// How unitaries are chosen once growth is triggered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GrowthMethod {
    /// Method 1: the single best-scoring operator.
    Single,
    /// Method 2: the best operator on the idle qubits of the last layer,
    /// falling back to the global best.
    IdleQubits,
    /// Method 3: a full layer of best-scoring operators on disjoint qubits.
    Layer,
}

impl GrowthMethod {
    pub fn number(self) -> u8 {
        match self {
            GrowthMethod::Single => 1,
            GrowthMethod::IdleQubits => 2,
            GrowthMethod::Layer => 3,
        }
    }
}

impl fmt::Display for GrowthMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl FromStr for GrowthMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" => Ok(GrowthMethod::Single),
            "2" => Ok(GrowthMethod::IdleQubits),
            "3" => Ok(GrowthMethod::Layer),
            other => Err(Error::Invalid(format!("growth method must be 1, 2 or 3, got '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthConfig<T: Real> {
    /// Growth is triggered while `L² ≥ l2_cut`.
    pub l2_cut: T,
    pub method: GrowthMethod,
    /// Minimum `ΔL²` for a candidate to be accepted.
    pub score_cut: T,
    pub max_depth: Option<usize>,
    /// Growth iterations allowed per time step.
    pub max_grow_iters: usize,
}

impl<T: Real> Default for GrowthConfig<T> {
    fn default() -> Self {
        Self {
            l2_cut: T::lit(1e-3),
            method: GrowthMethod::Layer,
            score_cut: T::lit(1e-6),
            max_depth: None,
            max_grow_iters: 50,
        }
    }
}

impl<T: Real> GrowthConfig<T> {
    pub fn with_method(method: GrowthMethod) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.score_cut >= T::zero()) || !(self.l2_cut > self.score_cut) {
            return Err(Error::Invalid(format!(
                "need l2_cut > score_cut >= 0, got l2_cut={} score_cut={}",
                self.l2_cut, self.score_cut
            )));
        }
        if self.max_grow_iters == 0 {
            return Err(Error::Invalid("max_grow_iters must be positive".into()));
        }
        if self.max_depth == Some(0) {
            return Err(Error::Invalid("max_depth must be positive when set".into()));
        }
        Ok(())
    }
}

/// `ΔL²` for appending one pool operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CandidateScore<T: Real> {
    pub index: usize,
    pub delta_l2: T,
}

/// Scores every pool operator against `base` (the system actually used for
/// the step, possibly noisy). The border entries come from `space`; the
/// extended system is re-solved with `solver` (see [`ExtensionScorer`]).
/// Results follow pool order.
pub fn score_candidates<T: Real>(
    space: &TangentSpace<T>,
    base: &McLachlanSystem<T>,
    l2_before: T,
    pool: &OperatorPool,
    solver: &SolverConfig<T>,
    base_eig: Option<&EigenDecomposition<T>>,
) -> Result<Vec<CandidateScore<T>>> {
    let scorer = ExtensionScorer::with_eig(base, solver, base_eig)?;
    pool.operators()
        .par_iter()
        .enumerate()
        .map(|(index, op)| {
            let aug = space.augment(op)?;
            let after = scorer.distance(&aug)?;
            Ok(CandidateScore {
                index,
                delta_l2: l2_before - after,
            })
        })
        .collect()
}

/// Result of one growth iteration.
#[derive(Clone, Debug, PartialEq)]
pub enum Growth<T: Real> {
    Grown {
        ansatz: Ansatz<T>,
        /// Pool indices appended, in order.
        added: Vec<usize>,
    },
    /// No candidate beats `score_cut`.
    Stalled,
    /// Candidates beat `score_cut` but all would exceed the depth cap.
    DepthCapped,
}

/// Candidates by descending score; ties keep the lower pool index first.
fn ranked<T: Real>(scores: &[CandidateScore<T>]) -> Vec<CandidateScore<T>> {
    let mut r = scores.to_vec();
    r.sort_by(|a, b| {
        b.delta_l2
            .partial_cmp(&a.delta_l2)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.index.cmp(&b.index))
    });
    r
}

/// Chooses which pool operators to append given their scores.
pub fn select<T: Real>(
    ansatz: &Ansatz<T>,
    layout: &CircuitLayout,
    scores: &[CandidateScore<T>],
    pool: &OperatorPool,
    cfg: &GrowthConfig<T>,
) -> Growth<T> {
    let ops = pool.operators();
    let ranked: Vec<_> = ranked(scores)
        .into_iter()
        .filter(|c| c.delta_l2 > cfg.score_cut)
        .collect();
    if ranked.is_empty() {
        return Growth::Stalled;
    }
    let fits = |l: &CircuitLayout, idx: usize| {
        cfg.max_depth
            .is_none_or(|cap| l.depth_if_appended(&ops[idx]) <= cap)
    };

    let added: Vec<usize> = match cfg.method {
        GrowthMethod::Single => ranked
            .iter()
            .find(|c| fits(layout, c.index))
            .map(|c| vec![c.index])
            .unwrap_or_default(),
        GrowthMethod::IdleQubits => {
            let idle = layout.idle_in_last_layer(ansatz.generators());
            let on_idle = ranked
                .iter()
                .find(|c| ops[c.index].support() & !idle == 0 && fits(layout, c.index));
            on_idle
                .or_else(|| ranked.iter().find(|c| fits(layout, c.index)))
                .map(|c| vec![c.index])
                .unwrap_or_default()
        }
        GrowthMethod::Layer => {
            let mut l = layout.clone();
            let mut used = 0u64;
            let mut picks = Vec::new();
            for c in &ranked {
                let op = &ops[c.index];
                if op.support() & used != 0 || !fits(&l, c.index) {
                    continue;
                }
                used |= op.support();
                l.push(op);
                picks.push(c.index);
            }
            picks
        }
    };
    if added.is_empty() {
        return Growth::DepthCapped;
    }
    let new_ops: Vec<_> = added.iter().map(|&i| ops[i]).collect();
    let ansatz = ansatz
        .extended(&new_ops)
        .expect("pool width checked against ansatz");
    Growth::Grown { ansatz, added }
}

/// One growth iteration: score the pool, then select per `cfg.method`.
#[allow(clippy::too_many_arguments)]
pub fn grow_once<T: Real>(
    ansatz: &Ansatz<T>,
    space: &TangentSpace<T>,
    base: &McLachlanSystem<T>,
    l2_before: T,
    pool: &OperatorPool,
    cfg: &GrowthConfig<T>,
    solver: &SolverConfig<T>,
    base_eig: Option<&EigenDecomposition<T>>,
) -> Result<Growth<T>> {
    if pool.n_qubits() != ansatz.n_qubits() {
        return Err(Error::Invalid(format!(
            "pool acts on {} qubits, ansatz on {}",
            pool.n_qubits(),
            ansatz.n_qubits()
        )));
    }
    let scores = score_candidates(space, base, l2_before, pool, solver, base_eig)?;
    Ok(select(ansatz, &ansatz.layout(), &scores, pool, cfg))
}
