//! Named verification experiments, their reports, and output files.
//!
//! Experiments run on the current rayon pool; [`with_workers`] picks its
//! size. Every sample is driven by its own substream, indexed by its
//! position, so results do not depend on the number of workers.

mod batch;
mod checks;
mod conditionals;
mod convergence;
mod densities;
mod dump;
mod result;
mod tabulate;
mod theorem1;

pub use batch::{analysis_grid, rhs_batch, tau_batch, v_batch, PathBatch, ANALYSIS_INTERVALS};
pub use checks::{
    max_law_reports, tau_reports, truncation_report, v_marginal_reports, v_tail_report,
    MAX_LAW_LEVELS, SMALL_EXPERIMENT, TRUNCATION_ABORT,
};
pub use conditionals::{
    conditional_density_reports, run_verify_conditionals, windowed_rhs, DENSITY_H, DENSITY_Z,
    MIN_CONDITIONAL, WINDOW_H, WINDOW_T,
};
pub use convergence::{run_convergence_study, ConvergenceRow, DEFAULT_STEPS};
pub use densities::run_verify_densities;
pub use dump::{run_sample, SamplerKind};
pub use result::{ControlReport, ExperimentResult, Table};
pub use tabulate::run_tabulate;
pub use theorem1::{
    identity_reports, meander_reports, projection_directions, run_verify_theorem1, scaling_reports,
    MEANDER_WINDOW,
};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Substream ids under the experiment root `RngStream::new(seed, 0)`.
pub mod streams {
    pub const TAU: u64 = 1;
    pub const V_PRIMARY: u64 = 2;
    pub const V_PARTNER: u64 = 3;
    pub const RHS: u64 = 4;
    pub const RHS_SHARED: u64 = 5;
    pub const RHS_FINE: u64 = 6;
    pub const MEANDER_RAYLEIGH: u64 = 7;
    pub const MEANDER_LAST_ZERO: u64 = 8;
    pub const BESSEL: u64 = 9;
    pub const WINDOW_RHS: u64 = 10;
    pub const CONVERGENCE: u64 = 11;
    pub const DUMP: u64 = 12;
}

/// Root of substream `purpose` for `seed`.
pub fn experiment_stream(seed: u64, purpose: u64) -> RngStream {
    RngStream::new(seed, 0).split(purpose)
}

/// Runs `f` on a fresh pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(f))
}

/// Claim-id form of a number: `0.25`, `2`, `1.5`.
pub(crate) fn tag(v: f64) -> String {
    format!("{v}")
}
