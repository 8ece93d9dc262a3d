//! Three-dimensional Bessel bridge from `x` to `0` over `[0, T]`:
//! `R_t = ‖(x(1 - t/T), 0, 0) + B_t - (t/T) B_T‖` with `B` a standard
//! Brownian motion in three dimensions.

use crate::error::{require_positive, Error, Result};
use crate::grid::TimeGrid;
use crate::path::{PathMeta, PathSample};
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq)]
pub struct BesselBridgeSpec {
    pub x: f64,
    pub length: f64,
    /// Either fractions of `length` or absolute times in `[0, length]`.
    pub grid: TimeGrid,
}

impl BesselBridgeSpec {
    pub fn new(x: f64, length: f64, grid: TimeGrid) -> Result<Self> {
        let spec = BesselBridgeSpec { x, length, grid };
        spec.validate()?;
        Ok(spec)
    }

    /// Unit-length bridge on a fractions grid.
    pub fn unit(x: f64, grid: TimeGrid) -> Result<Self> {
        Self::new(x, 1.0, grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x >= 0.0 && self.x.is_finite()) {
            return Err(Error::domain("x", "0 <= x < inf", self.x));
        }
        require_positive("length", self.length)?;
        if !self.grid.is_fractions() && self.grid.last() > self.length {
            return Err(Error::InvalidGrid(format!(
                "grid ends at {} past the bridge length {}",
                self.grid.last(),
                self.length
            )));
        }
        Ok(())
    }

    /// Grid times in absolute units.
    pub fn times(&self) -> Vec<f64> {
        if self.grid.is_fractions() {
            self.grid
                .points()
                .iter()
                .map(|&u| u * self.length)
                .collect()
        } else {
            self.grid.points().to_vec()
        }
    }
}

/// Bridge values at `times` (absolute, increasing, within `[0, length]`).
///
/// Normals are drawn three per grid interval of positive length, time-major.
pub(crate) fn bridge_values(x: f64, length: f64, times: &[f64], rng: &mut RngStream) -> Vec<f64> {
    let mut walk: Vec<[f64; 3]> = Vec::with_capacity(times.len());
    let mut b = [0.0f64; 3];
    let mut prev = 0.0;
    for &t in times {
        let dt = t - prev;
        if dt > 0.0 {
            let sd = dt.sqrt();
            for c in b.iter_mut() {
                *c += sd * rng.normal();
            }
        }
        walk.push(b);
        prev = t;
    }
    // B at the bridge length, which may lie past the last grid time
    let mut b_end = b;
    let rest = length - prev;
    if rest > 0.0 {
        let sd = rest.sqrt();
        for c in b_end.iter_mut() {
            *c += sd * rng.normal();
        }
    }
    times
        .iter()
        .zip(&walk)
        .map(|(&t, bt)| {
            if t >= length {
                return 0.0;
            }
            let f = t / length;
            let c0 = x * (1.0 - f) + bt[0] - f * b_end[0];
            let c1 = bt[1] - f * b_end[1];
            let c2 = bt[2] - f * b_end[2];
            (c0 * c0 + c1 * c1 + c2 * c2).sqrt()
        })
        .collect()
}

/// Exact draw of the bridge at the points of `spec.grid`.
pub fn sample_bessel_bridge(spec: &BesselBridgeSpec, rng: &mut RngStream) -> Result<PathSample> {
    spec.validate()?;
    let times = spec.times();
    let values = bridge_values(spec.x, spec.length, &times, rng);
    let mut path = PathSample::new(spec.grid.clone(), values);
    path.meta = PathMeta::default();
    Ok(path)
}
