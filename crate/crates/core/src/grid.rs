use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    /// `n + 1` equally spaced points `0, t_max/n, ..., t_max`.
    Uniform { n: usize, t_max: f64 },
    /// Fractions of a path's length; always contains 0 and 1.
    Fractions,
    /// Any strictly increasing list of nonnegative times.
    Adaptive,
}

/// Explicit, strictly increasing list of times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    points: Vec<f64>,
    kind: GridKind,
}

fn check_increasing(points: &[f64]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::InvalidGrid("grid has no points".into()));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidGrid("grid points must be finite".into()));
    }
    if points[0] < 0.0 {
        return Err(Error::InvalidGrid(format!(
            "first point {} is negative",
            points[0]
        )));
    }
    if let Some(w) = points.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(format!(
            "points not strictly increasing at {} -> {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Sorted, deduplicated fraction grid with 0 and 1 always present.
pub fn make_fraction_grid(u_list: &[f64]) -> Result<TimeGrid> {
    if let Some(&bad) = u_list.iter().find(|u| !(0.0..=1.0).contains(*u)) {
        return Err(Error::domain("grid fraction", "0 <= u <= 1", bad));
    }
    let mut points: Vec<f64> = Vec::with_capacity(u_list.len() + 2);
    points.push(0.0);
    points.extend_from_slice(u_list);
    points.push(1.0);
    points.sort_by(f64::total_cmp);
    points.dedup();
    Ok(TimeGrid {
        points,
        kind: GridKind::Fractions,
    })
}

impl TimeGrid {
    pub fn uniform(n: usize, t_max: f64) -> Result<TimeGrid> {
        if n == 0 {
            return Err(Error::InvalidGrid("uniform grid needs n >= 1".into()));
        }
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::domain("t_max", "0 < t_max < inf", t_max));
        }
        let step = t_max / n as f64;
        let mut points: Vec<f64> = (0..n).map(|k| k as f64 * step).collect();
        points.push(t_max);
        Ok(TimeGrid {
            points,
            kind: GridKind::Uniform { n, t_max },
        })
    }

    pub fn fractions(u_list: &[f64]) -> Result<TimeGrid> {
        make_fraction_grid(u_list)
    }

    pub fn adaptive(points: Vec<f64>) -> Result<TimeGrid> {
        check_increasing(&points)?;
        Ok(TimeGrid {
            points,
            kind: GridKind::Adaptive,
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.points[0]
    }

    pub fn last(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    pub fn is_fractions(&self) -> bool {
        matches!(self.kind, GridKind::Fractions)
    }

    /// Index of a point equal to `t` (exact match).
    pub fn index_of(&self, t: f64) -> Option<usize> {
        self.points.iter().position(|&p| p == t)
    }

    /// Points strictly inside (0, 1) of a fractions grid.
    pub fn interior(&self) -> Vec<f64> {
        self.points
            .iter()
            .copied()
            .filter(|&u| u > 0.0 && u < 1.0)
            .collect()
    }

    /// Fractions grid containing this grid and `k / intervals` for all k.
    pub fn refined(&self, intervals: usize) -> Result<TimeGrid> {
        if !self.is_fractions() {
            return Err(Error::InvalidGrid(
                "only fraction grids can be refined".into(),
            ));
        }
        let mut u: Vec<f64> = self.points.clone();
        let m = intervals.max(1);
        u.extend((1..m).map(|k| k as f64 / m as f64));
        make_fraction_grid(&u)
    }

    /// The grid scaled to absolute times on `[0, length]`.
    pub fn scaled(&self, length: f64) -> Result<TimeGrid> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::domain("length", "0 < length < inf", length));
        }
        let points = self.points.iter().map(|&p| p * length).collect();
        TimeGrid::adaptive(points)
    }

    /// Trapezoidal integral of `values` sampled on this grid.
    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.points.len());
        self.points
            .windows(2)
            .zip(values.windows(2))
            .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
            .sum()
    }
}
