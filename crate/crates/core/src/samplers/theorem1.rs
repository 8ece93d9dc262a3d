//! The composite path `τ^{1/2} R_{τ^{-1/2}, u}`, `u ∈ [0, 1]`, with `τ`
//! distributed as the hitting time from 1 and `R` a unit-length Bessel bridge
//! drawn independently of `τ`. Its law is that of the V-path from 1.

use super::bessel::bridge_values;
use super::tau::sample_tau;
use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::path::PathSample;
use crate::rng::RngStream;

pub const TAU_STREAM: u64 = 0;
pub const BRIDGE_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Coupling {
    /// `τ` and the bridge come from sibling substreams.
    #[default]
    Independent,
    /// Both start from the same stream position, so the bridge reuses the
    /// normal that produced `τ`. Only useful as a negative control.
    SharedStream,
}

/// The streams that drive `τ` and the bridge under `coupling`.
pub fn driving_streams(rng: &RngStream, coupling: Coupling) -> (RngStream, RngStream) {
    match coupling {
        Coupling::Independent => (rng.split(TAU_STREAM), rng.split(BRIDGE_STREAM)),
        Coupling::SharedStream => (rng.clone(), rng.clone()),
    }
}

pub fn sample_theorem1_rhs_with(
    u_grid: &TimeGrid,
    rng: &RngStream,
    coupling: Coupling,
) -> Result<PathSample> {
    if !u_grid.is_fractions() {
        return Err(Error::InvalidGrid(
            "the right-hand side needs a fractions grid".into(),
        ));
    }
    let (mut tau_rng, mut bridge_rng) = driving_streams(rng, coupling);
    let tau = sample_tau(1.0, &mut tau_rng)?;
    let s = tau.sqrt();
    let mut values = bridge_values(1.0 / s, 1.0, u_grid.points(), &mut bridge_rng);
    for v in values.iter_mut() {
        *v *= s;
    }
    // the bridge starts at 1/s, and s * (1/s) can miss 1 by an ulp
    values[0] = 1.0;
    let mut path = PathSample::new(u_grid.clone(), values);
    path.tau = Some(tau);
    Ok(path)
}

pub fn sample_theorem1_rhs(u_grid: &TimeGrid, rng: &RngStream) -> Result<PathSample> {
    sample_theorem1_rhs_with(u_grid, rng, Coupling::Independent)
}
