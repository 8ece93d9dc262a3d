use std::f64::consts::PI;

use super::empirical::EmpiricalDist;
use super::report::{TestKind, TestReport};

const MAX_TERMS: usize = 100;
const SERIES_TOL: f64 = 1e-10;
/// Below this sample size the asymptotic p-value is flagged as unreliable.
pub const SMALL_SAMPLE: usize = 50;

/// `P(K > lambda)` for the Kolmogorov distribution.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda.is_nan() {
        return f64::NAN;
    }
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // Jacobi theta form of the CDF, fast for small lambda
        let c = -PI * PI / (8.0 * lambda * lambda);
        let mut sum = 0.0;
        for k in 1..=MAX_TERMS {
            let j = (2 * k - 1) as f64;
            let term = (c * j * j).exp();
            sum += term;
            if term < SERIES_TOL {
                break;
            }
        }
        (1.0 - (2.0 * PI).sqrt() / lambda * sum).clamp(0.0, 1.0)
    } else {
        let c = -2.0 * lambda * lambda;
        let mut sum = 0.0;
        let mut sign = 1.0;
        for k in 1..=MAX_TERMS {
            let kf = k as f64;
            let term = (c * kf * kf).exp();
            sum += sign * term;
            if term < SERIES_TOL {
                break;
            }
            sign = -sign;
        }
        (2.0 * sum).clamp(0.0, 1.0)
    }
}

/// `sup |ECDF - cdf|`, checking both sides of every jump.
pub fn ks_distance<F: Fn(f64) -> f64>(d: &EmpiricalDist, cdf: F) -> f64 {
    let n = d.n() as f64;
    d.sorted_values()
        .iter()
        .enumerate()
        .fold(0.0f64, |acc, (i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            acc.max(above).max(below)
        })
}

pub fn ks_one_sample<F: Fn(f64) -> f64>(d: &EmpiricalDist, cdf: F, alpha: f64) -> TestReport {
    let dist = ks_distance(d, cdf);
    let n = d.n();
    let p = kolmogorov_sf((n as f64).sqrt() * dist);
    let r = TestReport::new(TestKind::Ks1, dist, p, vec![n], alpha);
    if n < SMALL_SAMPLE {
        r.with_note(format!(
            "n = {n} < {SMALL_SAMPLE}: asymptotic p-value unreliable"
        ))
    } else {
        r
    }
}

/// `sup |ECDF_a - ECDF_b|`, with tied values stepped over together.
pub fn ks_two_sample_distance(a: &EmpiricalDist, b: &EmpiricalDist) -> f64 {
    let (xa, xb) = (a.sorted_values(), b.sorted_values());
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < xa.len() && j < xb.len() {
        let v = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= v {
            i += 1;
        }
        while j < xb.len() && xb[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

pub fn ks_two_sample(a: &EmpiricalDist, b: &EmpiricalDist, alpha: f64) -> TestReport {
    let dist = ks_two_sample_distance(a, b);
    let (na, nb) = (a.n(), b.n());
    let n_eff = (na as f64 * nb as f64) / (na + nb) as f64;
    let p = kolmogorov_sf(n_eff.sqrt() * dist);
    let r = TestReport::new(TestKind::Ks2, dist, p, vec![na, nb], alpha);
    if na.min(nb) < SMALL_SAMPLE {
        r.with_note(format!(
            "min sample size {} < {SMALL_SAMPLE}: asymptotic p-value unreliable",
            na.min(nb)
        ))
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kolmogorov_reference_values() {
        // 1 - K(x) from the standard tables
        assert!((kolmogorov_sf(1.0) - 0.269_999_671_677_355_4).abs() < 1e-9);
        assert!((kolmogorov_sf(1.358_098_6) - 0.05).abs() < 1e-6);
        assert!((kolmogorov_sf(1.627_624_1) - 0.01).abs() < 1e-6);
        assert!((kolmogorov_sf(0.5) - 0.963_945_243_664_875_3).abs() < 1e-9);
        assert_eq!(kolmogorov_sf(0.0), 1.0);
        assert!(kolmogorov_sf(10.0) < 1e-80);
    }

    #[test]
    fn series_agree_at_switch() {
        let a = {
            let l: f64 = 1.18;
            let c = -PI * PI / (8.0 * l * l);
            1.0 - (2.0 * PI).sqrt() / l
                * (1..50)
                    .map(|k| (c * ((2 * k - 1) as f64).powi(2)).exp())
                    .sum::<f64>()
        };
        let b = 2.0
            * (1..50)
                .map(|k| (-1f64).powi(k + 1) * (-2.0 * 1.18f64 * 1.18 * (k * k) as f64).exp())
                .sum::<f64>();
        assert!((a - b).abs() < 1e-12);
        assert!((kolmogorov_sf(1.18 - 1e-12) - kolmogorov_sf(1.18)).abs() < 1e-10);
    }

    #[test]
    fn exact_quantiles_give_half_step() {
        let n = 1000;
        let d = EmpiricalDist::new((0..n).map(|i| (i as f64 + 0.5) / n as f64).collect()).unwrap();
        let r = ks_one_sample(&d, |x| x.clamp(0.0, 1.0), 0.01);
        assert!((r.statistic - 0.5 / n as f64).abs() < 1e-12);
        assert!(r.pass);
    }

    #[test]
    fn small_sample_note() {
        let d = EmpiricalDist::new(vec![0.2, 0.4, 0.6]).unwrap();
        let r = ks_one_sample(&d, |x| x, 0.01);
        assert!(!r.notes.is_empty());
    }

    #[test]
    fn two_sample_trivial() {
        let a = EmpiricalDist::new(vec![1.0, 2.0]).unwrap();
        let b = EmpiricalDist::new(vec![3.0, 4.0]).unwrap();
        assert_eq!(ks_two_sample_distance(&a, &b), 1.0);
        let r = ks_two_sample(&a, &a, 0.01);
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn two_sample_ties() {
        let a = EmpiricalDist::new(vec![1.0, 1.0, 2.0]).unwrap();
        let b = EmpiricalDist::new(vec![1.0, 2.0, 2.0]).unwrap();
        assert!((ks_two_sample_distance(&a, &b) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(
            ks_two_sample_distance(&a, &b),
            ks_two_sample_distance(&b, &a)
        );
    }
}
