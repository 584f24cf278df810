//! Model construction, experiment configuration, presets and CSV output.

mod config;
pub mod csv;
mod experiment;
mod model;
mod presets;

pub use config::{Algorithm, ConfigError, ExperimentConfig, PoolKind};
pub use experiment::{run_all, run_experiment, run_single, ExperimentOutput, RunResult};
pub use model::{build_model, Model, ModelKind, ModelSpec};
pub use presets::{preset, Overrides, PRESETS};
