//! Stochastic oracles for the terminal ray length.
//!
//! * [`sample_ray_length`] draws one exact length through the stopping-set
//!   recursion: each hop grows a trapezium until its exponentially
//!   distributed area is used up, and either stops the ray (V seed) or
//!   restarts the recursion from the H seed's height.
//! * [`simulate_plane`] grows all east and south rays of a Poisson window
//!   and resolves their blockings event by event. It shares no code with the
//!   recursion and so checks the dead-zone reasoning behind it.
//!
//! Random streams come from ChaCha8 keyed by (seed, stream index); the
//! recursion engine assigns one stream per fixed-size chunk of sample
//! indices, the plane engine one per replicate window. Results are merged in
//! index order, so output does not depend on the worker count.

mod plane;
mod runner;
mod sampler;
mod stats;

pub use plane::{
    simulate_plane, simulate_plane_with_samples, simulate_scene, PlaneConfig, SceneOutcome,
};
pub use runner::{run_monte_carlo, run_monte_carlo_with_samples, SimConfig, CHUNK_SIZE};
pub use sampler::{sample_ray, sample_ray_length, RayDraw, RecursionDraws, RecursionState};
pub use stats::{empirical_mgf, empirical_mgf_with_error, SimStats, CENSOR_WARNING_FRACTION};

use thiserror::Error;

use crate::analytic::AnalyticError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MonteCarloError {
    #[error("invalid simulation configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Params(#[from] AnalyticError),
    #[error("failed to start worker pool: {0}")]
    Pool(String),
}

pub type Result<T> = std::result::Result<T, MonteCarloError>;
