//! Adaptive Simpson quadrature and the half-line substitutions used for the
//! polynomially decaying densities.
//!
//! Tails like `t^{-3/2}` and `y^{-2}` defeat truncation, so the half line is
//! mapped onto `(0, π/2)`:
//!
//! * `t = tan²θ`, `dt = 2 tanθ sec²θ dθ` for `t^{-3/2}` tails;
//! * `y = tanθ`,  `dy = sec²θ dθ` for `y^{-2}` tails.
//!
//! Both leave a bounded integrand on the closed interval. At `θ = π/2` the
//! double-precision `tan` is about `1.6e16`, which keeps the endpoint limit
//! finite without special casing.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

pub const DEFAULT_ABS_TOL: f64 = 1e-9;
const MAX_DEPTH: u32 = 48;
const INITIAL_PANELS: usize = 16;

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn adapt<F: Fn(f64) -> f64>(f: &F, p: Panel, tol: f64, depth: u32) -> Result<f64> {
    let m = 0.5 * (p.a + p.b);
    let lm = 0.5 * (p.a + m);
    let rm = 0.5 * (m + p.b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(p.a, m, p.fa, flm, p.fm);
    let right = simpson(m, p.b, p.fm, frm, p.fb);
    let delta = left + right - p.whole;
    if !delta.is_finite() {
        return Err(Error::Quadrature { a: p.a, b: p.b });
    }
    if depth >= MAX_DEPTH || delta.abs() <= 15.0 * tol {
        if depth >= MAX_DEPTH && delta.abs() > 15.0 * tol.max(1e-14) {
            return Err(Error::Quadrature { a: p.a, b: p.b });
        }
        return Ok(left + right + delta / 15.0);
    }
    let l = Panel {
        a: p.a,
        b: m,
        fa: p.fa,
        fm: flm,
        fb: p.fm,
        whole: left,
    };
    let r = Panel {
        a: m,
        b: p.b,
        fa: p.fm,
        fm: frm,
        fb: p.fb,
        whole: right,
    };
    Ok(adapt(f, l, 0.5 * tol, depth + 1)? + adapt(f, r, 0.5 * tol, depth + 1)?)
}

/// `∫_a^b f` by adaptive Simpson to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Quadrature { a, b });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let h = (hi - lo) / INITIAL_PANELS as f64;
    let panel_tol = tol / INITIAL_PANELS as f64;
    let mut total = 0.0;
    let mut x0 = lo;
    let mut f0 = f(x0);
    for k in 1..=INITIAL_PANELS {
        let x1 = if k == INITIAL_PANELS {
            hi
        } else {
            lo + k as f64 * h
        };
        let f1 = f(x1);
        let m = 0.5 * (x0 + x1);
        let fm = f(m);
        let p = Panel {
            a: x0,
            b: x1,
            fa: f0,
            fm,
            fb: f1,
            whole: simpson(x0, x1, f0, fm, f1),
        };
        total += adapt(&f, p, panel_tol, 0)?;
        x0 = x1;
        f0 = f1;
    }
    Ok(sign * total)
}

/// Integrand of `∫_0^∞ f(t) dt` after `t = tan²θ`.
pub fn tan2_integrand<F: Fn(f64) -> f64>(f: F) -> impl Fn(f64) -> f64 {
    move |theta: f64| {
        if theta <= 0.0 {
            return 0.0;
        }
        let s = theta.tan();
        let c = theta.cos();
        2.0 * s / (c * c) * f(s * s)
    }
}

/// Integrand of `∫_0^∞ f(y) dy` after `y = tanθ`.
pub fn tan_integrand<F: Fn(f64) -> f64>(f: F) -> impl Fn(f64) -> f64 {
    move |theta: f64| {
        let c = theta.cos();
        f(theta.tan()) / (c * c)
    }
}

/// `∫_0^∞ f(t) dt` for integrands with a `t^{-3/2}` tail.
pub fn integrate_half_line_tan2<F: Fn(f64) -> f64>(f: F, tol: f64) -> Result<f64> {
    integrate(tan2_integrand(f), 0.0, FRAC_PI_2, tol)
}

/// `∫_0^∞ f(y) dy` for integrands with a `y^{-2}` tail.
pub fn integrate_half_line_tan<F: Fn(f64) -> f64>(f: F, tol: f64) -> Result<f64> {
    integrate(tan_integrand(f), 0.0, FRAC_PI_2, tol)
}

/// `∫_a^∞ f(y) dy`, `a ≥ 0`, through `y = tanθ`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, tol: f64) -> Result<f64> {
    integrate(tan_integrand(f), a.atan(), FRAC_PI_2, tol)
}
