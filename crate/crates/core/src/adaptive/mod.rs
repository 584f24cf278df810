//! Adaptive ansatz growth and the time-stepping loop.

mod engine;
mod growth;
mod pool;

pub use engine::{
    run_avqds, RunEvent, RunEventKind, RunOptions, RunOutput, RunState, StepConfig, TrajectoryRecord,
};
pub use growth::{grow_once, score_candidates, select, CandidateScore, Growth, GrowthConfig, GrowthMethod};
pub use pool::OperatorPool;

/// One solve/grow/step cycle of a run.
pub fn adaptive_step<T: crate::scalar::Real>(state: &mut RunState<'_, T>) -> crate::Result<TrajectoryRecord<T>> {
    state.adaptive_step()
}
