//! Statevector simulation of adaptive variational quantum dynamics.
//!
//! The numerical core is generic over the real scalar ([`Real`], implemented
//! for `f32` and `f64`). The `*64` / `*32` aliases below name the common
//! concrete instantiations; the experiment harness works in `f64`.
//!
//! - [`kernel`]: Pauli strings, statevectors, Hamiltonians, exact evolution.
//! - [`variational`]: ansatz, circuit layout, McLachlan linear system.
//! - [`solvers`]: eigendecomposition and the four equation-of-motion solvers.
//! - [`adaptive`]: operator pools, ansatz growth and the stepping loop.
//! - [`baselines`]: Trotter circuits and fixed-ansatz dynamics.
//! - [`noise`]: shot noise with an exact inner block of `M`.
//! - [`harness`]: models, configs, presets and CSV output.

pub mod adaptive;
pub mod baselines;
mod error;
pub mod harness;
pub mod kernel;
pub mod noise;
mod scalar;
pub mod solvers;
pub mod variational;

pub use error::{Error, Result};
pub use scalar::{Cplx, Real};

pub type StateVector64 = kernel::StateVector<f64>;
pub type StateVector32 = kernel::StateVector<f32>;
pub type PauliSum64 = kernel::WeightedPauliSum<f64>;
pub type PauliSum32 = kernel::WeightedPauliSum<f32>;
pub type Ansatz64 = variational::Ansatz<f64>;
pub type Ansatz32 = variational::Ansatz<f32>;
pub type McLachlanSystem64 = variational::McLachlanSystem<f64>;
pub type McLachlanSystem32 = variational::McLachlanSystem<f32>;
pub type Matrix64 = solvers::Matrix<f64>;
pub type SolverConfig64 = solvers::SolverConfig<f64>;
pub type SolverConfig32 = solvers::SolverConfig<f32>;
pub type GrowthConfig64 = adaptive::GrowthConfig<f64>;
pub type StepConfig64 = adaptive::StepConfig<f64>;
pub type TrajectoryRecord64 = adaptive::TrajectoryRecord<f64>;
