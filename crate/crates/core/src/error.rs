use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain where the law or operation is defined.
    #[error("{what} must satisfy {constraint}, got {value}")]
    Domain {
        what: &'static str,
        constraint: &'static str,
        value: f64,
    },

    /// `V_{x,u}` at `u = 0` or `u = 1` is a point mass, not a density.
    #[error("law of V at u = {u} is degenerate (point mass at {atom})")]
    DegenerateLaw { u: f64, atom: f64 },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("insufficient data for {what}: need {needed}, got {got}")]
    InsufficientData {
        what: String,
        needed: usize,
        got: usize,
    },

    #[error("sampling budget exceeded: acceptance rate {rate:.3e} after {candidates} candidates; try a smaller threshold")]
    BudgetExceeded { rate: f64, candidates: usize },

    #[error("bin {bin} has expected count {expected:.3} below the minimum {min}")]
    SparseBin { bin: usize, expected: f64, min: f64 },

    #[error("truncation fraction {fraction:.4} exceeds {limit}; raise t_cap (currently {t_cap})")]
    TruncationTooHigh {
        fraction: f64,
        limit: f64,
        t_cap: f64,
    },

    #[error("quadrature did not converge on [{a}, {b}]")]
    Quadrature { a: f64, b: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn domain(what: &'static str, constraint: &'static str, value: f64) -> Self {
        Error::Domain {
            what,
            constraint,
            value,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Checks `value > 0` (and finite), returning a domain error otherwise.
pub(crate) fn require_positive(what: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::domain(what, "0 < value < inf", value))
    }
}

pub(crate) fn require_open_unit(what: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(Error::domain(what, "0 < value < 1", value))
    }
}
