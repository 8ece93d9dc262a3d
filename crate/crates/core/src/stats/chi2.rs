use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::empirical::EmpiricalDist;
use super::report::{TestKind, TestReport};
use crate::analytic::quad;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SparsePolicy {
    /// Merge a sparse bin with its right neighbour (the last one leftwards).
    #[default]
    Merge,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chi2Options {
    pub min_expected: f64,
    pub policy: SparsePolicy,
}

impl Default for Chi2Options {
    fn default() -> Self {
        Chi2Options {
            min_expected: 5.0,
            policy: SparsePolicy::Merge,
        }
    }
}

/// Edges `q(0), q(1/k), ..., q(1)` for `k` bins of equal mass.
pub fn equal_mass_edges<Q: Fn(f64) -> f64>(bins: usize, quantile: Q) -> Vec<f64> {
    (0..=bins)
        .map(|i| quantile(i as f64 / bins as f64))
        .collect()
}

fn check_edges(edges: &[f64]) -> Result<()> {
    if edges.len() < 3 {
        return Err(Error::InvalidConfig(
            "chi-square needs at least two bins".into(),
        ));
    }
    if edges.windows(2).any(|w| !(w[1] > w[0])) || edges.iter().any(|e| e.is_nan()) {
        return Err(Error::InvalidConfig(
            "bin edges must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Pearson test of bin counts on `(e_k, e_{k+1}]` against given bin masses.
pub fn chi2_from_masses(
    d: &EmpiricalDist,
    edges: &[f64],
    masses: &[f64],
    opts: Chi2Options,
    alpha: f64,
) -> Result<TestReport> {
    check_edges(edges)?;
    assert_eq!(masses.len() + 1, edges.len(), "one mass per bin");
    let n = d.n();
    let mut counts: Vec<f64> = edges
        .windows(2)
        .map(|w| (d.count_le(w[1]) - d.count_le(w[0])) as f64)
        .collect();
    let outside = n - (d.count_le(edges[edges.len() - 1]) - d.count_le(edges[0]));
    let mut expected: Vec<f64> = masses.iter().map(|m| m * n as f64).collect();

    let mut merged = 0usize;
    if let Some(bin) = expected.iter().position(|&e| !(e >= opts.min_expected)) {
        if opts.policy == SparsePolicy::Error {
            return Err(Error::SparseBin {
                bin,
                expected: expected[bin],
                min: opts.min_expected,
            });
        }
        let (mut c2, mut e2) = (Vec::new(), Vec::new());
        let (mut ca, mut ea) = (0.0, 0.0);
        for (c, e) in counts.iter().zip(&expected) {
            ca += c;
            ea += e;
            if ea >= opts.min_expected {
                c2.push(ca);
                e2.push(ea);
                ca = 0.0;
                ea = 0.0;
            } else {
                merged += 1;
            }
        }
        if ea > 0.0 || ca > 0.0 {
            match (c2.last_mut(), e2.last_mut()) {
                (Some(c), Some(e)) => {
                    *c += ca;
                    *e += ea;
                }
                _ => {
                    c2.push(ca);
                    e2.push(ea);
                }
            }
        }
        counts = c2;
        expected = e2;
    }
    if counts.len() < 2 {
        return Err(Error::SparseBin {
            bin: 0,
            expected: expected.first().copied().unwrap_or(0.0),
            min: opts.min_expected,
        });
    }
    let stat: f64 = counts
        .iter()
        .zip(&expected)
        .map(|(c, e)| (c - e) * (c - e) / e)
        .sum();
    let dof = (counts.len() - 1) as f64;
    let p = ChiSquared::new(dof).expect("positive dof").sf(stat);
    let mut r = TestReport::new(TestKind::Chi2, stat, p, vec![n], alpha).with_note(format!(
        "{} bins, {} degrees of freedom",
        counts.len(),
        dof
    ));
    if merged > 0 {
        r = r.with_note(format!("{merged} sparse bins merged"));
    }
    if outside > 0 {
        r = r.with_note(format!("{outside} points outside the bin range"));
    }
    Ok(r)
}

/// Pearson test against bin masses obtained by quadrature of `density`. The
/// last edge may be `+∞`.
pub fn chi2_binned<F: Fn(f64) -> f64>(
    d: &EmpiricalDist,
    density: F,
    edges: &[f64],
    opts: Chi2Options,
    alpha: f64,
) -> Result<TestReport> {
    check_edges(edges)?;
    let masses = edges
        .windows(2)
        .map(|w| {
            if w[1].is_infinite() {
                quad::integrate_to_infinity(&density, w[0], 1e-12)
            } else {
                quad::integrate(&density, w[0], w[1], 1e-12)
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    chi2_from_masses(d, edges, &masses, opts, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    fn exp_density(x: f64) -> f64 {
        if x >= 0.0 {
            (-x).exp()
        } else {
            0.0
        }
    }

    #[test]
    fn exponential_sample_passes() {
        let mut rng = RngStream::new(1, 0);
        let d = EmpiricalDist::new((0..20_000).map(|_| -rng.uniform().ln()).collect()).unwrap();
        let edges = equal_mass_edges(20, |p| {
            if p >= 1.0 {
                f64::INFINITY
            } else {
                -(1.0 - p).ln()
            }
        });
        let r = chi2_binned(&d, exp_density, &edges, Chi2Options::default(), 0.01).unwrap();
        assert!(r.p_value > 1e-4, "{r:?}");
        assert_eq!(r.n, vec![20_000]);
    }

    #[test]
    fn wrong_law_fails() {
        let mut rng = RngStream::new(2, 0);
        let d =
            EmpiricalDist::new((0..20_000).map(|_| -1.2 * rng.uniform().ln()).collect()).unwrap();
        let edges = equal_mass_edges(20, |p| {
            if p >= 1.0 {
                f64::INFINITY
            } else {
                -(1.0 - p).ln()
            }
        });
        let r = chi2_binned(&d, exp_density, &edges, Chi2Options::default(), 0.01).unwrap();
        assert!(r.p_value < 1e-10 && !r.pass);
    }

    #[test]
    fn near_delta_density() {
        // all mass in one of three bins
        let d = EmpiricalDist::new(vec![0.5; 100]).unwrap();
        let spike = |x: f64| if (x - 0.5).abs() < 1e-3 { 500.0 } else { 0.0 };
        let edges = [0.0, 0.4, 0.6, 1.0];
        let strict = Chi2Options {
            policy: SparsePolicy::Error,
            ..Chi2Options::default()
        };
        assert!(matches!(
            chi2_binned(&d, spike, &edges, strict, 0.01),
            Err(Error::SparseBin { .. })
        ));
        assert!(chi2_binned(&d, spike, &edges, Chi2Options::default(), 0.01).is_err());
    }

    #[test]
    fn merging_sparse_bins() {
        let d = EmpiricalDist::new((0..100).map(|i| (i as f64 + 0.5) / 100.0).collect()).unwrap();
        let edges: Vec<f64> = (0..=50).map(|i| i as f64 / 50.0).collect();
        let r = chi2_binned(&d, |_| 1.0, &edges, Chi2Options::default(), 0.01).unwrap();
        assert!(r.notes.iter().any(|n| n.contains("merged")));
        assert!(r.pass);
    }

    #[test]
    fn bad_edges() {
        let d = EmpiricalDist::new(vec![1.0]).unwrap();
        assert!(chi2_binned(&d, |_| 1.0, &[0.0, 1.0], Chi2Options::default(), 0.01).is_err());
        assert!(chi2_binned(&d, |_| 1.0, &[0.0, 1.0, 1.0], Chi2Options::default(), 0.01).is_err());
    }
}
