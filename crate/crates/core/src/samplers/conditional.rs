//! `y^{-1} V_{x,u}` conditioned on the path maximum exceeding `y`, by
//! rejection from unconditioned V-paths.

use super::vpath::VPathSampler;
use super::walk::WalkParams;
use crate::error::{require_open_unit, Error, Result};
use crate::grid::{make_fraction_grid, TimeGrid};
use crate::rng::RngStream;

/// Rejection stops with an error once this many candidates have been tried
/// and the acceptance rate is still below [`MIN_ACCEPTANCE_RATE`].
pub const MIN_CANDIDATES_FOR_BUDGET: usize = 10_000;
pub const MIN_ACCEPTANCE_RATE: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalSample {
    /// Accepted values of `V_{x,u} / y`, in candidate order.
    pub values: Vec<f64>,
    /// Candidates tried, truncated ones included.
    pub candidates: usize,
    pub truncated: usize,
}

impl ConditionalSample {
    pub fn acceptance_rate(&self) -> f64 {
        let valid = self.candidates - self.truncated;
        self.values.len() as f64 / valid.max(1) as f64
    }
}

/// Outcome of one candidate path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Candidate {
    Accepted(f64),
    Rejected,
    Truncated,
}

/// Draws one candidate from `rng` and tests its bridge-sampled maximum.
pub fn conditional_candidate(
    sampler: &mut VPathSampler,
    grid: &TimeGrid,
    u_index: usize,
    y: f64,
    rng: &RngStream,
) -> Result<Candidate> {
    let (values, out) = sampler.sample_values(grid, rng)?;
    Ok(if out.truncated {
        Candidate::Truncated
    } else if out.running_max > y {
        Candidate::Accepted(values[u_index] / y)
    } else {
        Candidate::Rejected
    })
}

/// Candidate `k` is driven by `rng.split(k)`.
#[allow(clippy::too_many_arguments)]
pub fn sample_v_conditional_on_max(
    x: f64,
    u: f64,
    y: f64,
    n: usize,
    step0: f64,
    t_cap: f64,
    rng: &RngStream,
) -> Result<ConditionalSample> {
    require_open_unit("u", u)?;
    if !(y > x) {
        return Err(Error::domain("y", "y > x", y));
    }
    if n == 0 {
        return Err(Error::InvalidConfig(
            "need at least one accepted sample".into(),
        ));
    }
    let params = WalkParams::new(x, step0, t_cap).with_track_max(true);
    let mut sampler = VPathSampler::new(params)?;
    let grid = make_fraction_grid(&[u])?;
    let u_index = grid.index_of(u).expect("u is on its own grid");
    let mut out = ConditionalSample {
        values: Vec::with_capacity(n),
        candidates: 0,
        truncated: 0,
    };
    while out.values.len() < n {
        let c = conditional_candidate(
            &mut sampler,
            &grid,
            u_index,
            y,
            &rng.split(out.candidates as u64),
        )?;
        out.candidates += 1;
        match c {
            Candidate::Accepted(v) => out.values.push(v),
            Candidate::Truncated => out.truncated += 1,
            Candidate::Rejected => {}
        }
        if out.candidates >= MIN_CANDIDATES_FOR_BUDGET {
            let rate = out.values.len() as f64 / out.candidates as f64;
            if rate < MIN_ACCEPTANCE_RATE {
                return Err(Error::BudgetExceeded {
                    rate,
                    candidates: out.candidates,
                });
            }
        }
    }
    Ok(out)
}
