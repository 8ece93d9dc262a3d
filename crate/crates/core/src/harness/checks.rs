//! Report builders shared by the experiments and the acceptance suite.

use statrs::distribution::{ContinuousCDF, Normal};

use super::batch::PathBatch;
use super::tag;
use crate::analytic::{tau_cdf, tau_density, v_cdf, v_density, v_tail_constant};
use crate::error::{Error, Result};
use crate::stats::{
    chi2_binned, equal_mass_edges, ks_one_sample, proportion_se, tail_exponent_fit_censored,
    Chi2Options, EmpiricalDist, TestKind, TestReport,
};

/// Experiments with fewer samples than this carry a note on every report.
pub const SMALL_EXPERIMENT: usize = 10_000;
/// Experiments stop when more than this fraction of walks is truncated.
pub const TRUNCATION_ABORT: f64 = 0.05;
/// Levels `y / x` at which the tail of the maximum is compared with `x / y`.
pub const MAX_LAW_LEVELS: [f64; 3] = [1.5, 2.0, 4.0];

pub const CHI2_BINS: usize = 100;

pub(crate) fn annotate_small(reports: &mut [TestReport], n: usize) {
    if n < SMALL_EXPERIMENT {
        for r in reports {
            r.notes.push(format!(
                "small sample: n = {n} < {SMALL_EXPERIMENT}; asymptotic p-values and tolerances are approximate"
            ));
        }
    }
}

pub(crate) fn insufficient(claim: String, kind: TestKind, e: Error) -> TestReport {
    TestReport::verdict(kind, f64::NAN, false, vec![0])
        .with_claim(claim)
        .with_note(e.to_string())
}

/// Quantile of the hitting-time law: `x² / z²` with `P(|N| > z) = p`.
fn tau_quantile(x: f64, p: f64) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let z = Normal::standard().inverse_cdf(1.0 - 0.5 * p);
    x * x / (z * z)
}

/// KS and equal-mass chi-square of exact hitting-time draws.
pub fn tau_reports(x: f64, taus: &[f64], alpha: f64) -> Result<Vec<TestReport>> {
    let d = EmpiricalDist::from_slice(taus)?;
    let ks = ks_one_sample(&d, |t| tau_cdf(x, t).unwrap_or(0.0), alpha).with_claim("tau-ks");
    let edges = equal_mass_edges(CHI2_BINS, |p| tau_quantile(x, p));
    let chi2 = chi2_binned(
        &d,
        |t| tau_density(x, t).unwrap_or(0.0),
        &edges,
        Chi2Options::default(),
        alpha,
    )?
    .with_claim("tau-chi2");
    Ok(vec![ks, chi2])
}

/// Truncation count against `1 - tau_cdf(x, t_cap)`, within three binomial
/// standard errors.
pub fn truncation_report(batch: &PathBatch, t_cap: f64) -> Result<TestReport> {
    let n = batch.len();
    let expected = 1.0 - tau_cdf(batch.x, t_cap)?;
    let observed = batch.truncated_fraction();
    let se = proportion_se(expected, n);
    let ok = (observed - expected).abs() <= 3.0 * se;
    Ok(TestReport::verdict(TestKind::Tolerance, observed, ok, vec![n])
        .with_claim("truncation-rate")
        .with_note(format!(
            "{} of {n} walks truncated at t_cap = {t_cap}; analytic probability {expected:.4e}, standard error {se:.2e}",
            batch.n_truncated()
        )))
}

pub(crate) fn check_truncation(batch: &PathBatch, t_cap: f64) -> Result<()> {
    let fraction = batch.truncated_fraction();
    if fraction > TRUNCATION_ABORT {
        return Err(Error::TruncationTooHigh {
            fraction,
            limit: TRUNCATION_ABORT,
            t_cap,
        });
    }
    Ok(())
}

fn exclusion_note(batch: &PathBatch) -> String {
    format!(
        "{} truncated walks excluded out of {}",
        batch.n_truncated(),
        batch.len()
    )
}

/// KS, equal-mass chi-square and tail fit of `V_{x,u}` at each `u` in `us`.
pub fn v_marginal_reports(batch: &PathBatch, us: &[f64], alpha: f64) -> Result<Vec<TestReport>> {
    let x = batch.x;
    let mut out = Vec::new();
    for &u in us {
        let values = batch
            .at(u)
            .ok_or_else(|| Error::InvalidConfig(format!("u = {u} is not a report point")))?;
        let d = EmpiricalDist::new(values)?;
        let law = v_cdf(x, u)?;
        out.push(
            ks_one_sample(&d, |y| law.cdf(y), alpha)
                .with_claim(format!("v-density-ks-u{}", tag(u)))
                .with_note(exclusion_note(batch)),
        );
        let edges = equal_mass_edges(CHI2_BINS, |p| law.quantile(p));
        out.push(
            chi2_binned(
                &d,
                |y| v_density(x, u, y).unwrap_or(0.0),
                &edges,
                Chi2Options::default(),
                alpha,
            )?
            .with_claim(format!("v-density-chi2-u{}", tag(u)))
            .with_note(exclusion_note(batch)),
        );
        out.push(v_tail_report(&d, batch.n_truncated(), x, u));
    }
    Ok(out)
}

/// Tail of `V_{x,u}` above `10 x`: slope `-1 ± 0.05`, constant within 10%
/// of `v_tail_constant(x, u)`. The `truncated` walks count as lying above
/// every value in `d`.
pub fn v_tail_report(d: &EmpiricalDist, truncated: usize, x: f64, u: f64) -> TestReport {
    let claim = format!("v-tail-fit-u{}", tag(u));
    let c = v_tail_constant(x, u).expect("u is interior");
    match tail_exponent_fit_censored(d, 10.0 * x, truncated) {
        Ok(fit) => {
            let rel = fit.constant / c - 1.0;
            let ok = (fit.slope + 1.0).abs() <= 0.05 && rel.abs() <= 0.10;
            TestReport::verdict(TestKind::TailFit, fit.slope, ok, vec![d.n(), fit.n_tail])
                .with_claim(claim)
                .with_note(format!(
                    "slope {:.4} (stderr {:.4}), constant {:.5} vs {c:.5} ({:+.2}%)",
                    fit.slope,
                    fit.stderr,
                    fit.constant,
                    100.0 * rel
                ))
        }
        Err(e) => insufficient(claim, TestKind::TailFit, e),
    }
}

/// The running maximum against `P(max > y) = x / y`: KS on `[x, ∞)`, the
/// tail at [`MAX_LAW_LEVELS`] within 2% relative, and a tail fit above `2x`
/// with slope `-1 ± 0.03` and constant within 5% of `x`, truncated walks
/// counted above every observed maximum.
pub fn max_law_reports(batch: &PathBatch, alpha: f64) -> Result<Vec<TestReport>> {
    let x = batch.x;
    let maxima = batch.kept(&batch.running_max);
    let n = maxima.len();
    let d = EmpiricalDist::new(maxima)?;
    let mut out = vec![
        ks_one_sample(&d, |y| if y <= x { 0.0 } else { 1.0 - x / y }, alpha)
            .with_claim("max-law-ks")
            .with_note(exclusion_note(batch)),
    ];
    for m in MAX_LAW_LEVELS {
        let y = m * x;
        let p = d.count_gt(y) as f64 / n as f64;
        let expected = x / y;
        let rel = p / expected - 1.0;
        out.push(
            TestReport::verdict(TestKind::Tolerance, rel, rel.abs() <= 0.02, vec![n])
                .with_claim(format!("max-law-y{}", tag(m)))
                .with_note(format!(
                    "P(max > {y}) = {p:.5} vs {expected:.5}; standard error {:.2e}",
                    proportion_se(expected, n)
                )),
        );
    }
    let claim = "max-tail-fit".to_string();
    out.push(
        match tail_exponent_fit_censored(&d, 2.0 * x, batch.n_truncated()) {
            Ok(fit) => {
                let rel = fit.constant / x - 1.0;
                let ok = (fit.slope + 1.0).abs() <= 0.03 && rel.abs() <= 0.05;
                TestReport::verdict(TestKind::TailFit, fit.slope, ok, vec![n, fit.n_tail])
                    .with_claim(claim)
                    .with_note(format!(
                        "slope {:.4} (stderr {:.4}), constant {:.5} vs {x} ({:+.2}%)",
                        fit.slope,
                        fit.stderr,
                        fit.constant,
                        100.0 * rel
                    ))
            }
            Err(e) => insufficient(claim, TestKind::TailFit, e),
        },
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_quantile_inverts_cdf() {
        for p in [0.01, 0.3, 0.5, 0.9, 0.999] {
            let t = tau_quantile(1.7, p);
            assert!((tau_cdf(1.7, t).unwrap() - p).abs() < 1e-9, "{p}");
        }
        assert_eq!(tau_quantile(1.0, 0.0), 0.0);
        assert!(tau_quantile(1.0, 1.0).is_infinite());
    }

    #[test]
    fn small_sample_note() {
        let mut r = vec![TestReport::verdict(TestKind::Ks1, 0.1, true, vec![100])];
        annotate_small(&mut r, 100);
        assert!(r[0].notes[0].contains("small sample"));
        let mut r = vec![TestReport::verdict(TestKind::Ks1, 0.1, true, vec![100])];
        annotate_small(&mut r, SMALL_EXPERIMENT);
        assert!(r[0].notes.is_empty());
    }
}
