//! Brownian motion on its way to hitting zero: closed-form laws, exact and
//! discretized samplers, and Monte Carlo checks of the identities linking
//! them.

// `!(a > b)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod config;
pub mod error;
pub mod grid;
pub mod harness;
pub mod path;
pub mod rng;
pub mod samplers;
pub mod stats;

pub use config::ExperimentConfig;
pub use error::{Error, Result};
pub use grid::{make_fraction_grid, GridKind, TimeGrid};
pub use path::{PathMeta, PathSample};
pub use rng::{split_stream, RngStream, StreamState};
