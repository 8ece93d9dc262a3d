//! Distribution functions of half-line densities, tabulated by quadrature.
//!
//! Nodes are equally spaced in `θ` with `y = scale · tanθ`. Between nodes
//! the CDF is a cubic Hermite interpolant whose slopes are the density
//! itself, so the interpolation error is far below Monte Carlo resolution.

use std::f64::consts::FRAC_PI_2;

use super::laws::{v_density, v_density_unchecked};
use super::quad;
use crate::error::Result;

pub const DEFAULT_NODES: usize = 4096;

#[derive(Debug, Clone)]
pub struct TabulatedCdf {
    scale: f64,
    h: f64,
    /// CDF at `θ_k = k h`.
    cum: Vec<f64>,
    /// `dF/dθ` at `θ_k`.
    slope: Vec<f64>,
}

impl TabulatedCdf {
    /// Tabulates `F(y) = ∫_0^y density` for a density on `(0, ∞)` with at
    /// most a `y^{-2}` tail. `scale` should sit near the bulk of the law.
    pub fn from_density<F: Fn(f64) -> f64>(density: F, scale: f64, nodes: usize) -> Result<Self> {
        crate::error::require_positive("scale", scale)?;
        let nodes = nodes.max(2);
        let g = |theta: f64| {
            let c = theta.cos();
            let y = scale * theta.tan();
            if y <= 0.0 {
                return 0.0;
            }
            density(y) * scale / (c * c)
        };
        let h = FRAC_PI_2 / nodes as f64;
        let mut cum = Vec::with_capacity(nodes + 1);
        let mut slope = Vec::with_capacity(nodes + 1);
        cum.push(0.0);
        slope.push(g(0.0));
        let mut acc = 0.0;
        for k in 1..=nodes {
            let a = (k - 1) as f64 * h;
            let b = if k == nodes { FRAC_PI_2 } else { k as f64 * h };
            acc += quad::integrate(g, a, b, 1e-13)?;
            cum.push(acc);
            slope.push(g(b));
        }
        Ok(TabulatedCdf {
            scale,
            h,
            cum,
            slope,
        })
    }

    /// Total mass; `1` up to quadrature error for a proper density.
    pub fn total(&self) -> f64 {
        self.cum[self.cum.len() - 1]
    }

    fn at_theta(&self, theta: f64) -> f64 {
        let n = self.cum.len() - 1;
        let pos = theta / self.h;
        let k = (pos.floor() as usize).min(n - 1);
        let s = pos - k as f64;
        let (f0, f1) = (self.cum[k], self.cum[k + 1]);
        let (d0, d1) = (self.slope[k] * self.h, self.slope[k + 1] * self.h);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * f0
            + (s3 - 2.0 * s2 + s) * d0
            + (-2.0 * s3 + 3.0 * s2) * f1
            + (s3 - s2) * d1
    }

    pub fn cdf(&self, y: f64) -> f64 {
        if y.is_nan() {
            return f64::NAN;
        }
        if y <= 0.0 {
            return 0.0;
        }
        let theta = (y / self.scale).atan();
        self.at_theta(theta).clamp(0.0, 1.0)
    }

    /// Smallest `y` with `cdf(y) ≥ p`, by bisection in `θ`.
    pub fn quantile(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return 0.0;
        }
        if p >= 1.0 {
            return f64::INFINITY;
        }
        let k = self.cum.partition_point(|&c| c < p);
        let (mut lo, mut hi) = ((k.saturating_sub(1)) as f64 * self.h, k as f64 * self.h);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.at_theta(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.scale * hi.min(FRAC_PI_2).tan()
    }
}

/// CDF of `V_{x,u}` by quadrature of its density.
pub fn v_cdf(x: f64, u: f64) -> Result<TabulatedCdf> {
    v_density(x, u, x)?;
    TabulatedCdf::from_density(|y| v_density_unchecked(x, u, y), x, DEFAULT_NODES)
}
