use serde::{Deserialize, Serialize};

use crate::grid::TimeGrid;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PathMeta {
    /// Base Euler step for discretized samplers; `None` for exact ones.
    pub step_size: Option<f64>,
    pub crossing_corrected: bool,
    pub truncated: bool,
    /// Bridge-corrected running maximum over the whole path, when tracked.
    pub running_max: Option<f64>,
}

/// A realized trajectory on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub grid: TimeGrid,
    pub values: Vec<f64>,
    /// Exact or estimated hitting time, when the path has one.
    pub tau: Option<f64>,
    pub meta: PathMeta,
}

impl PathSample {
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        PathSample {
            grid,
            values,
            tau: None,
            meta: PathMeta::default(),
        }
    }

    /// Value at grid point `t`, if `t` is on the grid.
    pub fn value_at(&self, t: f64) -> Option<f64> {
        self.grid.index_of(t).map(|i| self.values[i])
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Maximum over the grid points (not the continuous supremum).
    pub fn grid_max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn trapezoid(&self) -> f64 {
        self.grid.trapezoid(&self.values)
    }

    pub fn is_truncated(&self) -> bool {
        self.meta.truncated
    }
}
