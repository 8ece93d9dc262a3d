//! Closed-form laws and the numerical tools used to turn them into oracles.

mod laws;
pub mod normal;
pub mod quad;
mod tabulated;

pub use laws::{
    max_tail, mills_integral_check, q_asymptote, sqrt_tau_density, tau_cdf, tau_density, v_density,
    v_tail_constant, DensitySpec, Law,
};
pub use normal::{std_normal_cdf, std_normal_pdf, std_normal_sf};
pub use tabulated::{v_cdf, TabulatedCdf, DEFAULT_NODES};

/// Median of `τ(x)`: `x² / Φ^{-1}(3/4)²`.
pub fn tau_median(x: f64) -> f64 {
    const Q75: f64 = 0.674_489_750_196_081_7;
    x * x / (Q75 * Q75)
}
