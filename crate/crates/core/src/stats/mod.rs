//! Empirical distributions and the tests run against the analytic laws.

mod chi2;
mod empirical;
mod ks;
mod report;
mod summary;
mod tail;

pub use chi2::{chi2_binned, chi2_from_masses, equal_mass_edges, Chi2Options, SparsePolicy};
pub use empirical::{ecdf_eval, EmpiricalDist};
pub use ks::{
    kolmogorov_sf, ks_distance, ks_one_sample, ks_two_sample, ks_two_sample_distance, SMALL_SAMPLE,
};
pub use report::{TestKind, TestReport};
pub use summary::{
    binomial_cdf, correlation, mc_standard_error, mean, proportion_se, window_density,
    window_density_se,
};
pub use tail::{tail_exponent_fit, tail_exponent_fit_censored, TailFit, MIN_TAIL_POINTS};
