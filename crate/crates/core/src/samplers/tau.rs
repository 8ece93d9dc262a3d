use crate::error::{require_positive, Result};
use crate::rng::RngStream;

/// `(x / |n|)²`: maps a standard normal to a draw of `τ(x)`, since
/// `P((x/|N|)² ≤ t) = P(|N| ≥ x/√t) = 2Φ̄(x/√t)`.
#[inline]
pub fn tau_from_normal(x: f64, n: f64) -> f64 {
    let r = x / n.abs();
    r * r
}

/// Exact draw of the first hitting time of zero from `x`.
pub fn sample_tau(x: f64, rng: &mut RngStream) -> Result<f64> {
    require_positive("x", x)?;
    loop {
        let n = rng.normal();
        if n != 0.0 {
            return Ok(tau_from_normal(x, n));
        }
    }
}
