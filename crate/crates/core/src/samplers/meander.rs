//! Brownian meander on `[0, 1]`: `W⊕_s = (1-ζ)^{-1/2} |W_{ζ + (1-ζ)s}|` with
//! `ζ` the last zero of `W` before time 1.
//!
//! Two constructions. `LastZero` follows that definition on a fine Euler
//! grid. `RayleighBridge` draws the endpoint `m` with density `m e^{-m²/2}`
//! and reads a Bessel bridge from `m` to `0` backwards, which is exact at
//! the grid points.

use super::bessel::bridge_values;
use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::path::{PathMeta, PathSample};
use crate::rng::RngStream;

pub const DEFAULT_LAST_ZERO_STEPS: usize = 1 << 14;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum MeanderConstruction {
    LastZero {
        steps: usize,
    },
    #[default]
    RayleighBridge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanderSpec {
    pub grid: TimeGrid,
    pub construction: MeanderConstruction,
}

impl MeanderSpec {
    pub fn new(grid: TimeGrid, construction: MeanderConstruction) -> Result<Self> {
        if !grid.is_fractions() {
            return Err(Error::InvalidGrid("meander needs a fractions grid".into()));
        }
        if let MeanderConstruction::LastZero { steps } = construction {
            if steps < 2 {
                return Err(Error::InvalidConfig(
                    "last-zero meander needs at least 2 steps".into(),
                ));
            }
        }
        Ok(MeanderSpec { grid, construction })
    }
}

fn rayleigh_bridge(grid: &TimeGrid, rng: &RngStream) -> PathSample {
    let m = (-2.0 * rng.split(0).uniform().ln()).sqrt();
    // bridge times 1 - s, ascending
    let rev: Vec<f64> = grid.points().iter().rev().map(|&s| 1.0 - s).collect();
    let r = bridge_values(m, 1.0, &rev, &mut rng.split(1));
    let values: Vec<f64> = r.into_iter().rev().collect();
    let mut path = PathSample::new(grid.clone(), values);
    path.meta = PathMeta::default();
    path
}

fn last_zero(grid: &TimeGrid, steps: usize, rng: &RngStream) -> PathSample {
    let dt = 1.0 / steps as f64;
    let sd = dt.sqrt();
    let mut incr = rng.split(0);
    let mut w = Vec::with_capacity(steps + 1);
    w.push(0.0);
    let mut acc = 0.0;
    for _ in 0..steps {
        acc += sd * incr.normal();
        w.push(acc);
    }
    // Scan back from t = 1 for the last interval containing a zero: a sign
    // change, or a same-sign interval whose Brownian bridge touches zero.
    let mut cross = rng.split(1);
    let mut zeta = 0.0;
    for k in (1..=steps).rev() {
        let (a, b) = (w[k - 1], w[k]);
        let t0 = (k - 1) as f64 * dt;
        if a == 0.0 {
            zeta = t0;
            break;
        }
        if a * b < 0.0 {
            zeta = t0 + dt * a / (a - b);
            break;
        }
        let e = 2.0 * a * b / dt;
        if e < 40.0 && cross.uniform() < (-e).exp() {
            zeta = t0 + 0.5 * dt;
            break;
        }
    }
    let scale = (1.0 - zeta).sqrt();
    let values: Vec<f64> = grid
        .points()
        .iter()
        .map(|&s| {
            if s == 0.0 {
                return 0.0;
            }
            let t = zeta + (1.0 - zeta) * s;
            let k = ((t / dt) as usize).min(steps - 1);
            let t_right = (k + 1) as f64 * dt;
            // the path is zero at ζ; inside ζ's interval interpolate from there
            let (t_left, w_left) = if zeta > k as f64 * dt {
                (zeta, 0.0)
            } else {
                (k as f64 * dt, w[k])
            };
            let v = w_left + (w[k + 1] - w_left) * (t - t_left) / (t_right - t_left);
            v.abs() / scale
        })
        .collect();
    let mut path = PathSample::new(grid.clone(), values);
    path.tau = Some(zeta);
    path.meta = PathMeta {
        step_size: Some(dt),
        crossing_corrected: true,
        ..PathMeta::default()
    };
    path
}

/// One meander path on `spec.grid`. For `LastZero`, `tau` holds the
/// estimated last zero.
pub fn sample_meander(spec: &MeanderSpec, rng: &RngStream) -> Result<PathSample> {
    Ok(match spec.construction {
        MeanderConstruction::RayleighBridge => rayleigh_bridge(&spec.grid, rng),
        MeanderConstruction::LastZero { steps } => last_zero(&spec.grid, steps, rng),
    })
}
