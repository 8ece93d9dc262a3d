//! Euler walk of Brownian motion from `x` until it first reaches zero.
//!
//! The step at state `w` is `Δt = step0 · max(1, (w/x)²)` (evaluated one step
//! late, see below), optionally capped
//! at `max_step_factor · step0`. After a step from `a > 0` to `b > 0` the
//! Brownian bridge between them touches zero with probability
//! `exp(-2ab/Δt)`; with the correction on, that event is drawn and counts as
//! a hit. A hit inside a step is placed at the step midpoint.
//!
//! Gaussian increments, crossing uniforms and running-maximum uniforms come
//! from three separate substreams of the caller's stream. Switching the
//! correction or the maximum tracking off therefore leaves the increments
//! untouched, which couples the variants path by path.

use crate::error::{require_positive, Error, Result};
use crate::rng::RngStream;

// exp(-40) ≈ 4e-18; below that the event is never drawn.
const NEGLIGIBLE_EXPONENT: f64 = 40.0;

pub const INCREMENT_STREAM: u64 = 0;
pub const CROSSING_STREAM: u64 = 1;
pub const MAX_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParams {
    pub x: f64,
    pub step0: f64,
    pub t_cap: f64,
    /// Upper bound on `Δt / step0`; infinite means no cap.
    pub max_step_factor: f64,
    pub bridge_correction: bool,
    /// Also sample the exact maximum of each step's Brownian bridge.
    pub track_max: bool,
}

impl WalkParams {
    pub fn new(x: f64, step0: f64, t_cap: f64) -> Self {
        WalkParams {
            x,
            step0,
            t_cap,
            max_step_factor: f64::INFINITY,
            bridge_correction: true,
            track_max: false,
        }
    }

    pub fn with_bridge_correction(mut self, on: bool) -> Self {
        self.bridge_correction = on;
        self
    }

    pub fn with_track_max(mut self, on: bool) -> Self {
        self.track_max = on;
        self
    }

    pub fn with_max_step_factor(mut self, factor: f64) -> Self {
        self.max_step_factor = factor;
        self
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("x", self.x)?;
        if !(self.step0 > 0.0 && self.step0 < 1.0) {
            return Err(Error::domain("step0", "0 < step0 < 1", self.step0));
        }
        if !(self.t_cap > self.x * self.x) {
            return Err(Error::domain("t_cap", "t_cap > x²", self.t_cap));
        }
        if !(self.max_step_factor >= 1.0) {
            return Err(Error::domain(
                "max_step_factor",
                ">= 1",
                self.max_step_factor,
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkOutcome {
    /// Estimated hitting time, or the time reached when truncated.
    pub tau_hat: f64,
    pub truncated: bool,
    pub steps: u64,
    /// Running maximum; bridge-sampled when `track_max` is on, otherwise the
    /// maximum over step endpoints.
    pub running_max: f64,
}

/// Per-walk state, advanced one step at a time. Shared by the scalar walk
/// and the interleaved batch sampler so both produce identical numbers.
#[derive(Debug, Clone)]
pub(crate) struct WalkState {
    incr: RngStream,
    cross: RngStream,
    maxs: RngStream,
    sd_min: f64,
    sd_per_w: f64,
    sd_max: f64,
    pub t: f64,
    pub w: f64,
    m: f64,
    steps: u64,
    sd_next: f64,
    last_b: f64,
    last_dt: f64,
}

pub(crate) enum Step {
    Continue,
    Done(WalkOutcome),
}

impl WalkState {
    /// `p` must already be validated.
    pub fn new(p: &WalkParams, rng: &RngStream) -> Self {
        let sd_min = p.step0.sqrt();
        let mut st = WalkState {
            incr: rng.split(INCREMENT_STREAM),
            cross: rng.split(CROSSING_STREAM),
            maxs: rng.split(MAX_STREAM),
            sd_min,
            sd_per_w: sd_min / p.x,
            sd_max: sd_min * p.max_step_factor.sqrt(),
            t: 0.0,
            w: p.x,
            m: p.x,
            steps: 0,
            sd_next: 0.0,
            last_b: p.x,
            last_dt: 0.0,
        };
        st.sd_next = st.step_sd(p.x);
        st
    }

    #[inline(always)]
    fn step_sd(&self, w: f64) -> f64 {
        // min with an infinite cap is a no-op
        (w * self.sd_per_w).max(self.sd_min).min(self.sd_max)
    }

    fn outcome(&self, tau_hat: f64, truncated: bool) -> Step {
        Step::Done(WalkOutcome {
            tau_hat,
            truncated,
            steps: self.steps,
            running_max: self.m,
        })
    }

    #[inline(always)]
    pub fn advance(&mut self, p: &WalkParams) -> Step {
        if self.t >= p.t_cap {
            return self.outcome(p.t_cap, true);
        }
        // The step size is chosen from the state one step back. That keeps
        // the loop-carried chain through w at one multiply-add, and a step
        // chosen from the past is as valid as one chosen from the present.
        let sd = self.sd_next;
        self.sd_next = self.step_sd(self.w);
        let dt = sd * sd;
        let a = self.w;
        let b = a + sd * self.incr.normal();
        self.steps += 1;
        self.last_b = b;
        self.last_dt = dt;

        let mut hit = b <= 0.0;
        if !hit && p.bridge_correction {
            let e2 = 2.0 * a * b;
            if e2 < NEGLIGIBLE_EXPONENT * dt && self.cross.uniform() < (-e2 / dt).exp() {
                hit = true;
            }
        }
        if hit {
            let tau = self.t + 0.5 * dt;
            return if tau <= p.t_cap {
                self.outcome(tau, false)
            } else {
                self.outcome(p.t_cap, true)
            };
        }

        let m = self.m;
        if p.track_max {
            // P(bridge max > m) = exp(-2(m-a)(m-b)/dt) once m >= max(a, b)
            if b > m || 2.0 * (m - a) * (m - b) < NEGLIGIBLE_EXPONENT * dt {
                let d = b - a;
                let top = 0.5 * (a + b + (d * d - 2.0 * dt * self.maxs.uniform().ln()).sqrt());
                self.m = m.max(top);
            }
        } else if b > m {
            self.m = b;
        }
        self.t += dt;
        self.w = b;
        Step::Continue
    }
}

/// Runs the walk, calling `observe(t, w)` after every step that does not hit
/// zero. The start `(0, x)` and the hitting point are not reported.
pub fn walk_observed<F: FnMut(f64, f64)>(
    p: &WalkParams,
    rng: &RngStream,
    mut observe: F,
) -> Result<WalkOutcome> {
    p.validate()?;
    let mut st = WalkState::new(p, rng);
    loop {
        match st.advance(p) {
            Step::Continue => observe(st.t, st.w),
            Step::Done(o) => return Ok(o),
        }
    }
}

/// Like [`walk_observed`] with the correction on, and also returns the
/// outcome the uncorrected walk on the same increments would have had. After
/// a bridge-detected hit the walk carries on, unobserved, until it changes
/// sign; the extra cost is a few steps per bridge event.
pub fn walk_observed_dual<F: FnMut(f64, f64)>(
    p: &WalkParams,
    rng: &RngStream,
    mut observe: F,
) -> Result<(WalkOutcome, WalkOutcome)> {
    let corrected = p.with_bridge_correction(true);
    corrected.validate()?;
    let mut st = WalkState::new(&corrected, rng);
    let first = loop {
        match st.advance(&corrected) {
            Step::Continue => observe(st.t, st.w),
            Step::Done(o) => break o,
        }
    };
    // the step ended on a sign change or hit the cap: both walks agree
    if first.truncated || st.last_b <= 0.0 {
        return Ok((first, first));
    }
    let uncorrected = p.with_bridge_correction(false);
    st.t += st.last_dt;
    st.w = st.last_b;
    loop {
        if let Step::Done(o) = st.advance(&uncorrected) {
            return Ok((first, o));
        }
    }
}

pub fn walk(p: &WalkParams, rng: &RngStream) -> Result<WalkOutcome> {
    walk_observed(p, rng, |_, _| {})
}

/// Estimated hitting time of zero from `x` and whether the walk was cut off
/// at `t_cap`, with the bridge crossing correction on.
pub fn simulate_w_until_hit(
    x: f64,
    step0: f64,
    t_cap: f64,
    rng: &RngStream,
) -> Result<(f64, bool)> {
    let o = walk(&WalkParams::new(x, step0, t_cap), rng)?;
    Ok((o.tau_hat, o.truncated))
}
