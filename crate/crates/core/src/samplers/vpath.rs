//! The path from `x` to its first zero, rescaled to unit time:
//! `V_{x,u} = W_{x, u τ(x)}`.
//!
//! The readout times `u_i τ̂` are only known once the walk has finished. The
//! walk is therefore run once to find `τ̂` and run again from the same stream
//! state to read the values off by linear interpolation. Short walks are
//! buffered during the first run instead, which gives the same numbers
//! without the second run.

use super::walk::{walk_observed, walk_observed_dual, WalkOutcome, WalkParams};
use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::path::{PathMeta, PathSample};
use crate::rng::RngStream;

pub const DEFAULT_BUFFER_CAP: usize = 1 << 20;

/// Linear interpolation of a walk at `u_i · tau`, fed one point at a time.
struct Readout<'a> {
    u: &'a [f64],
    tau: f64,
    next: usize,
    prev_t: f64,
    prev_w: f64,
    values: Vec<f64>,
}

impl<'a> Readout<'a> {
    fn new(u: &'a [f64], tau: f64, x: f64) -> Self {
        let mut r = Readout {
            u,
            tau,
            next: 0,
            prev_t: 0.0,
            prev_w: x,
            values: Vec::with_capacity(u.len()),
        };
        while r.next < u.len() && u[r.next] <= 0.0 {
            r.values.push(x);
            r.next += 1;
        }
        r
    }

    #[inline]
    fn feed(&mut self, t: f64, w: f64) {
        while self.next < self.u.len() {
            let s = self.u[self.next] * self.tau;
            if s > t {
                break;
            }
            let v = if s >= t {
                w
            } else {
                self.prev_w + (w - self.prev_w) * (s - self.prev_t) / (t - self.prev_t)
            };
            self.values.push(v);
            self.next += 1;
        }
        self.prev_t = t;
        self.prev_w = w;
    }

    fn finish(mut self, hit: bool) -> Vec<f64> {
        if hit {
            self.feed(self.tau, 0.0);
        }
        while self.values.len() < self.u.len() {
            self.values.push(if hit { 0.0 } else { self.prev_w });
        }
        self.values
    }
}

/// Reusable V-path sampler; keeps its buffer between calls.
#[derive(Debug, Clone)]
pub struct VPathSampler {
    params: WalkParams,
    cap: usize,
    buf: Vec<(f64, f64)>,
}

impl VPathSampler {
    pub fn new(params: WalkParams) -> Result<Self> {
        params.validate()?;
        Ok(VPathSampler {
            params,
            cap: DEFAULT_BUFFER_CAP,
            buf: Vec::new(),
        })
    }

    /// Largest walk, in steps, that is buffered rather than replayed.
    pub fn with_buffer_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn params(&self) -> &WalkParams {
        &self.params
    }

    /// Values at `u_grid` (fractions) plus the walk outcome.
    pub fn sample_values(
        &mut self,
        u_grid: &TimeGrid,
        rng: &RngStream,
    ) -> Result<(Vec<f64>, WalkOutcome)> {
        let (values, out, _) = self.run(u_grid, rng, false)?;
        Ok((values, out))
    }

    /// As [`sample_values`](Self::sample_values) with the correction forced
    /// on, plus the outcome of the uncorrected walk on the same increments.
    pub fn sample_values_dual(
        &mut self,
        u_grid: &TimeGrid,
        rng: &RngStream,
    ) -> Result<(Vec<f64>, WalkOutcome, WalkOutcome)> {
        self.run(u_grid, rng, true)
    }

    fn run(
        &mut self,
        u_grid: &TimeGrid,
        rng: &RngStream,
        dual: bool,
    ) -> Result<(Vec<f64>, WalkOutcome, WalkOutcome)> {
        if !u_grid.is_fractions() {
            return Err(Error::InvalidGrid("V-paths need a fractions grid".into()));
        }
        let params = if dual {
            self.params.with_bridge_correction(true)
        } else {
            self.params
        };
        self.buf.clear();
        let cap = self.cap;
        let buf = &mut self.buf;
        let mut overflow = false;
        let push = |t, w| {
            if buf.len() < cap {
                buf.push((t, w));
            } else {
                overflow = true;
            }
        };
        let (out, other) = if dual {
            walk_observed_dual(&params, rng, push)?
        } else {
            let o = walk_observed(&params, rng, push)?;
            (o, o)
        };
        let u = u_grid.points();
        let hit = !out.truncated;
        let mut readout = Readout::new(u, out.tau_hat, params.x);
        if overflow {
            walk_observed(&params, rng, |t, w| readout.feed(t, w))?;
        } else {
            for &(t, w) in &self.buf {
                readout.feed(t, w);
            }
        }
        Ok((readout.finish(hit), out, other))
    }

    pub fn sample(&mut self, u_grid: &TimeGrid, rng: &RngStream) -> Result<PathSample> {
        let (values, out) = self.sample_values(u_grid, rng)?;
        let mut path = PathSample::new(u_grid.clone(), values);
        path.tau = Some(out.tau_hat);
        path.meta = PathMeta {
            step_size: Some(self.params.step0),
            crossing_corrected: self.params.bridge_correction,
            truncated: out.truncated,
            running_max: self.params.track_max.then_some(out.running_max),
        };
        Ok(path)
    }
}

/// One V-path on `u_grid`; bridge correction on, maximum tracked.
pub fn sample_v_path(
    x: f64,
    u_grid: &TimeGrid,
    step0: f64,
    t_cap: f64,
    rng: &RngStream,
) -> Result<PathSample> {
    let params = WalkParams::new(x, step0, t_cap).with_track_max(true);
    VPathSampler::new(params)?.sample(u_grid, rng)
}
