use rayon::prelude::*;

use crate::error::Result;
use crate::grid::{make_fraction_grid, TimeGrid};
use crate::rng::RngStream;
use crate::samplers::{sample_tau, sample_theorem1_rhs_with, Coupling, VPathSampler, WalkParams};

/// Path functionals are computed on the report grid refined to this many
/// equal intervals.
pub const ANALYSIS_INTERVALS: usize = 64;

/// `u_grid` plus `1/2`, refined to [`ANALYSIS_INTERVALS`] intervals.
pub fn analysis_grid(u_grid: &TimeGrid) -> Result<TimeGrid> {
    let mut u = u_grid.interior();
    u.push(0.5);
    make_fraction_grid(&u)?.refined(ANALYSIS_INTERVALS)
}

/// Per-path summaries of a batch of V-paths or right-hand-side paths, in
/// stream order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PathBatch {
    pub x: f64,
    /// Report points: the interior of the configured grid plus `1/2`.
    pub u: Vec<f64>,
    /// `at_u[i][k]`: path `k` at `u[i]`.
    pub at_u: Vec<Vec<f64>>,
    /// Maximum over the analysis grid.
    pub sup: Vec<f64>,
    /// Trapezoidal integral over the analysis grid.
    pub integral: Vec<f64>,
    /// Bridge-sampled running maximum of the walk; empty for exact samplers.
    pub running_max: Vec<f64>,
    pub tau: Vec<f64>,
    pub truncated: Vec<bool>,
}

struct Record {
    at_u: Vec<f64>,
    sup: f64,
    integral: f64,
    running_max: f64,
    tau: f64,
    truncated: bool,
}

impl PathBatch {
    fn collect(x: f64, u: Vec<f64>, records: Vec<Record>, has_max: bool) -> Self {
        let mut b = PathBatch {
            x,
            at_u: vec![Vec::with_capacity(records.len()); u.len()],
            u,
            ..Default::default()
        };
        for r in records {
            for (col, v) in b.at_u.iter_mut().zip(r.at_u) {
                col.push(v);
            }
            b.sup.push(r.sup);
            b.integral.push(r.integral);
            if has_max {
                b.running_max.push(r.running_max);
            }
            b.tau.push(r.tau);
            b.truncated.push(r.truncated);
        }
        b
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn n_truncated(&self) -> usize {
        self.truncated.iter().filter(|&&t| t).count()
    }

    pub fn truncated_fraction(&self) -> f64 {
        self.n_truncated() as f64 / self.len().max(1) as f64
    }

    pub fn u_index(&self, u: f64) -> Option<usize> {
        self.u.iter().position(|&v| v == u)
    }

    /// Entries of `column` from paths that reached zero.
    pub fn kept(&self, column: &[f64]) -> Vec<f64> {
        column
            .iter()
            .zip(&self.truncated)
            .filter(|(_, &t)| !t)
            .map(|(&v, _)| v)
            .collect()
    }

    /// Values at `u` from paths that reached zero.
    pub fn at(&self, u: f64) -> Option<Vec<f64>> {
        self.u_index(u).map(|i| self.kept(&self.at_u[i]))
    }

    /// The first `n` paths.
    pub fn head(&self, n: usize) -> PathBatch {
        let n = n.min(self.len());
        PathBatch {
            x: self.x,
            u: self.u.clone(),
            at_u: self.at_u.iter().map(|c| c[..n].to_vec()).collect(),
            sup: self.sup[..n].to_vec(),
            integral: self.integral[..n].to_vec(),
            running_max: self.running_max[..n.min(self.running_max.len())].to_vec(),
            tau: self.tau[..n].to_vec(),
            truncated: self.truncated[..n].to_vec(),
        }
    }
}

fn report_points(u_grid: &TimeGrid, grid: &TimeGrid) -> (Vec<f64>, Vec<usize>) {
    let mut u = u_grid.interior();
    u.push(0.5);
    u.sort_by(f64::total_cmp);
    u.dedup();
    let idx = u
        .iter()
        .map(|&v| grid.index_of(v).expect("report point on grid"))
        .collect();
    (u, idx)
}

fn summarize(values: &[f64], idx: &[usize], grid: &TimeGrid) -> (Vec<f64>, f64, f64) {
    let at = idx.iter().map(|&i| values[i]).collect();
    let sup = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (at, sup, grid.trapezoid(values))
}

/// `n` V-paths from `x`, path `k` driven by `root.split(k)`, bridge
/// correction on and running maximum tracked.
pub fn v_batch(
    x: f64,
    u_grid: &TimeGrid,
    step0: f64,
    t_cap: f64,
    root: &RngStream,
    n: usize,
) -> Result<PathBatch> {
    let grid = analysis_grid(u_grid)?;
    let (u, idx) = report_points(u_grid, &grid);
    let sampler = VPathSampler::new(WalkParams::new(x, step0, t_cap).with_track_max(true))?;
    let records: Vec<Record> = (0..n)
        .into_par_iter()
        .map_init(
            || sampler.clone(),
            |s, k| -> Result<Record> {
                let (values, out) = s.sample_values(&grid, &root.split(k as u64))?;
                let (at_u, sup, integral) = summarize(&values, &idx, &grid);
                Ok(Record {
                    at_u,
                    sup,
                    integral,
                    running_max: out.running_max,
                    tau: out.tau_hat,
                    truncated: out.truncated,
                })
            },
        )
        .collect::<Result<_>>()?;
    Ok(PathBatch::collect(x, u, records, true))
}

/// `n` draws of `τ^{1/2} R_{τ^{-1/2}, ·}`, path `k` driven by `root.split(k)`.
pub fn rhs_batch(
    u_grid: &TimeGrid,
    root: &RngStream,
    n: usize,
    coupling: Coupling,
) -> Result<PathBatch> {
    let grid = analysis_grid(u_grid)?;
    let (u, idx) = report_points(u_grid, &grid);
    let records: Vec<Record> = (0..n)
        .into_par_iter()
        .map(|k| -> Result<Record> {
            let p = sample_theorem1_rhs_with(&grid, &root.split(k as u64), coupling)?;
            let (at_u, sup, integral) = summarize(&p.values, &idx, &grid);
            Ok(Record {
                at_u,
                sup,
                integral,
                running_max: f64::NAN,
                tau: p.tau.unwrap_or(f64::NAN),
                truncated: false,
            })
        })
        .collect::<Result<_>>()?;
    Ok(PathBatch::collect(1.0, u, records, false))
}

/// `n` exact draws of `τ(x)`, draw `k` from `root.split(k)`.
pub fn tau_batch(x: f64, root: &RngStream, n: usize) -> Result<Vec<f64>> {
    (0..n)
        .into_par_iter()
        .map(|k| sample_tau(x, &mut root.split(k as u64)))
        .collect()
}
