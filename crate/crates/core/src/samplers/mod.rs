//! Exact and discretized samplers.

mod bessel;
mod conditional;
mod meander;
mod tau;
mod theorem1;
mod vpath;
mod walk;

pub(crate) use bessel::bridge_values;
pub use bessel::{sample_bessel_bridge, BesselBridgeSpec};
pub use conditional::{
    conditional_candidate, sample_v_conditional_on_max, Candidate, ConditionalSample,
    MIN_ACCEPTANCE_RATE, MIN_CANDIDATES_FOR_BUDGET,
};
pub use meander::{sample_meander, MeanderConstruction, MeanderSpec, DEFAULT_LAST_ZERO_STEPS};
pub use tau::{sample_tau, tau_from_normal};
pub use theorem1::{driving_streams, sample_theorem1_rhs, sample_theorem1_rhs_with, Coupling};
pub use vpath::{sample_v_path, VPathSampler, DEFAULT_BUFFER_CAP};
pub use walk::{
    simulate_w_until_hit, walk, walk_observed, walk_observed_dual, WalkOutcome, WalkParams,
};
