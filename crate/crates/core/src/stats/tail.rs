use super::empirical::EmpiricalDist;
use crate::error::{Error, Result};

pub const MIN_TAIL_POINTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    /// Slope of `log S(y)` against `log y`; `-1` for a `c y^{-2}` density.
    pub slope: f64,
    pub intercept: f64,
    /// Ordinary least-squares standard error of the slope. The points are
    /// order statistics and strongly correlated, so this understates the
    /// real uncertainty.
    pub stderr: f64,
    pub n_tail: usize,
    /// `c` in `S(y) ≈ c / y`, from the fitted line with the slope held at
    /// `-1` through the centroid of the tail points.
    pub constant: f64,
}

/// Least-squares fit of the log survival function above `y_min`.
///
/// The `i`-th largest point gets survival `(i - 1/2) / n`.
pub fn tail_exponent_fit(d: &EmpiricalDist, y_min: f64) -> Result<TailFit> {
    tail_exponent_fit_censored(d, y_min, 0)
}

/// [`tail_exponent_fit`] for a sample with `censored` further observations
/// known only to lie above every value in `d`. The `i`-th largest point gets
/// survival `(i + censored - 1/2) / (n + censored)`.
pub fn tail_exponent_fit_censored(
    d: &EmpiricalDist,
    y_min: f64,
    censored: usize,
) -> Result<TailFit> {
    let v = d.sorted_values();
    let n = v.len();
    let start = v.partition_point(|&y| y <= y_min);
    let k = n - start;
    if k < MIN_TAIL_POINTS {
        return Err(Error::InsufficientData {
            what: format!("tail fit above {y_min}"),
            needed: MIN_TAIL_POINTS,
            got: k,
        });
    }
    let nf = (n + censored) as f64;
    let cf = censored as f64;
    let (mut sx, mut sy) = (0.0, 0.0);
    let pts: Vec<(f64, f64)> = v[start..]
        .iter()
        .enumerate()
        .map(|(j, &y)| {
            let rank_from_top = (k - j) as f64 + cf;
            let lx = y.ln();
            let ly = ((rank_from_top - 0.5) / nf).ln();
            sx += lx;
            sy += ly;
            (lx, ly)
        })
        .collect();
    let kf = k as f64;
    let (mx, my) = (sx / kf, sy / kf);
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for &(lx, ly) in &pts {
        sxx += (lx - mx) * (lx - mx);
        sxy += (lx - mx) * (ly - my);
    }
    if sxx <= 0.0 {
        return Err(Error::InsufficientData {
            what: "tail fit with distinct points".into(),
            needed: 2,
            got: 1,
        });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts
        .iter()
        .map(|&(lx, ly)| {
            let r = ly - intercept - slope * lx;
            r * r
        })
        .sum();
    let stderr = (rss / (kf - 2.0) / sxx).sqrt();
    Ok(TailFit {
        slope,
        intercept,
        stderr,
        n_tail: k,
        constant: (my + mx).exp(),
    })
}
