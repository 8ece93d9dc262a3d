use std::time::Instant;

use rayon::prelude::*;

use super::batch::{rhs_batch, v_batch, PathBatch};
use super::checks::{annotate_small, check_truncation, insufficient};
use super::result::{ControlReport, ExperimentResult};
use super::{experiment_stream, streams, tag};
use crate::analytic::tau_cdf;
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::grid::{make_fraction_grid, TimeGrid};
use crate::rng::RngStream;
use crate::samplers::{
    bridge_values, driving_streams, sample_bessel_bridge, sample_meander, sample_tau,
    sample_theorem1_rhs, BesselBridgeSpec, Coupling, MeanderConstruction, MeanderSpec,
    DEFAULT_LAST_ZERO_STEPS,
};
use crate::stats::{
    correlation, ks_two_sample, tail_exponent_fit, EmpiricalDist, TestKind, TestReport,
};

pub const PROJECTIONS: usize = 3;
/// Grid for the right-hand-side maximum in the tail check.
pub const FINE_INTERVALS: usize = 2048;
/// Half-width of the endpoint window in the meander reversal check.
pub const MEANDER_WINDOW: f64 = 0.05;
pub const MIN_WINDOWED: usize = 500;

const PROJECTION_SEED: u64 = 0x5eed;

/// Three fixed unit directions in `dim` dimensions, the same for every run.
pub fn projection_directions(dim: usize) -> Vec<Vec<f64>> {
    (0..PROJECTIONS as u64)
        .map(|j| {
            let mut rng = RngStream::new(PROJECTION_SEED, j);
            let a: Vec<f64> = (0..dim).map(|_| rng.normal()).collect();
            let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
            a.into_iter().map(|v| v / norm).collect()
        })
        .collect()
}

fn ks2(a: Vec<f64>, b: Vec<f64>, alpha: f64, claim: String) -> Result<TestReport> {
    let (a, b) = (EmpiricalDist::new(a)?, EmpiricalDist::new(b)?);
    Ok(ks_two_sample(&a, &b, alpha).with_claim(claim))
}

/// `V_{x,u} / x` against `V_{1,u}` at each `u`.
pub fn scaling_reports(
    vx: &PathBatch,
    v1: &PathBatch,
    us: &[f64],
    alpha: f64,
) -> Result<Vec<TestReport>> {
    us.iter()
        .map(|&u| {
            let a: Vec<f64> = vx
                .at(u)
                .expect("report point")
                .iter()
                .map(|v| v / vx.x)
                .collect();
            let b = v1.at(u).expect("report point");
            ks2(
                a,
                b,
                alpha,
                format!("scaling-ks-x{}-u{}", tag(vx.x), tag(u)),
            )
        })
        .collect()
}

fn projections(b: &PathBatch, us: &[f64], dir: &[f64]) -> Vec<f64> {
    let cols: Vec<&Vec<f64>> = us.iter().map(|&u| &b.at_u[b.u_index(u).unwrap()]).collect();
    (0..b.len())
        .filter(|&k| !b.truncated[k])
        .map(|k| cols.iter().zip(dir).map(|(c, a)| a * c[k]).sum())
        .collect()
}

/// `V_{1,·}` against the composite path: marginals at each `u`, the maximum
/// and the integral over the analysis grid, and projections of the values at
/// `us` on [`projection_directions`].
pub fn identity_reports(
    v1: &PathBatch,
    rhs: &PathBatch,
    us: &[f64],
    alpha: f64,
) -> Result<Vec<TestReport>> {
    let mut out = Vec::new();
    for &u in us {
        out.push(ks2(
            v1.at(u).expect("report point"),
            rhs.at(u).expect("report point"),
            alpha,
            format!("identity-ks-u{}", tag(u)),
        )?);
    }
    out.push(ks2(
        v1.kept(&v1.sup),
        rhs.kept(&rhs.sup),
        alpha,
        "identity-sup-ks".into(),
    )?);
    out.push(ks2(
        v1.kept(&v1.integral),
        rhs.kept(&rhs.integral),
        alpha,
        "identity-integral-ks".into(),
    )?);
    if !us.is_empty() {
        for (j, dir) in projection_directions(us.len()).iter().enumerate() {
            let coords: Vec<String> = dir.iter().map(|a| format!("{a:.4}")).collect();
            out.push(
                ks2(
                    projections(v1, us, dir),
                    projections(rhs, us, dir),
                    alpha,
                    format!("identity-projection-ks-{}", j + 1),
                )?
                .with_note(format!("direction ({})", coords.join(", "))),
            );
        }
    }
    Ok(out)
}

/// Maximum of the composite path on a fine grid: `P(max > y) ≈ 1 / y`,
/// constant within 5% of 1 from the fit above `y = 10`.
fn rhs_sup_tail_report(root: &RngStream, n: usize) -> Result<TestReport> {
    let grid = TimeGrid::uniform(FINE_INTERVALS, 1.0)?;
    let grid = make_fraction_grid(&grid.interior())?;
    let sups: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|k| sample_theorem1_rhs(&grid, &root.split(k as u64)).map(|p| p.grid_max()))
        .collect::<Result<_>>()?;
    let d = EmpiricalDist::new(sups)?;
    let claim = "rhs-sup-tail-fit".to_string();
    Ok(match tail_exponent_fit(&d, 10.0) {
        Ok(fit) => {
            let rel = fit.constant - 1.0;
            TestReport::verdict(
                TestKind::TailFit,
                fit.constant,
                rel.abs() <= 0.05,
                vec![n, fit.n_tail],
            )
            .with_claim(claim)
            .with_note(format!(
                "constant {:.5} ({:+.2}%), slope {:.4}, grid of {FINE_INTERVALS} intervals",
                fit.constant,
                100.0 * rel,
                fit.slope
            ))
        }
        Err(e) => insufficient(claim, TestKind::TailFit, e),
    })
}

/// Correlation between `tau_cdf(1, τ)` and the unit bridge from 0 at `1/2`,
/// both read from the streams the composite sampler would use; within
/// `3 / √n` of zero.
fn independence_report(root: &RngStream, n: usize, coupling: Coupling) -> Result<TestReport> {
    let pairs: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|k| -> Result<(f64, f64)> {
            let (mut t_rng, mut b_rng) = driving_streams(&root.split(k as u64), coupling);
            let tau = sample_tau(1.0, &mut t_rng)?;
            let r = bridge_values(0.0, 1.0, &[0.0, 0.5, 1.0], &mut b_rng)[1];
            Ok((tau_cdf(1.0, tau)?, r))
        })
        .collect::<Result<_>>()?;
    let (a, b): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let rho = correlation(&a, &b);
    let bound = 3.0 / (n as f64).sqrt();
    Ok(
        TestReport::verdict(TestKind::Tolerance, rho, rho.abs() <= bound, vec![n])
            .with_claim("rhs-independence")
            .with_note(format!("correlation {rho:.5}, bound {bound:.5}")),
    )
}

/// Endpoint law of the two meander constructions, and the meander read
/// backwards from an endpoint near 1 against the Bessel bridge from 1.
pub fn meander_reports(seed: u64, n: usize, alpha: f64) -> Result<Vec<TestReport>> {
    let grid = make_fraction_grid(&[0.5])?;
    let draw = |construction, purpose| -> Result<Vec<(f64, f64)>> {
        let spec = MeanderSpec::new(grid.clone(), construction)?;
        let root = experiment_stream(seed, purpose);
        (0..n)
            .into_par_iter()
            .map(|k| sample_meander(&spec, &root.split(k as u64)).map(|p| (p.values[1], p.last())))
            .collect()
    };
    let exact = draw(
        MeanderConstruction::RayleighBridge,
        streams::MEANDER_RAYLEIGH,
    )?;
    let lz = draw(
        MeanderConstruction::LastZero {
            steps: DEFAULT_LAST_ZERO_STEPS,
        },
        streams::MEANDER_LAST_ZERO,
    )?;
    let mut out = vec![ks2(
        exact.iter().map(|p| p.1).collect(),
        lz.iter().map(|p| p.1).collect(),
        alpha,
        "meander-endpoint-ks".into(),
    )?
    .with_note(format!(
        "last-zero construction on {DEFAULT_LAST_ZERO_STEPS} steps"
    ))];

    let windowed: Vec<f64> = lz
        .iter()
        .filter(|p| (p.1 - 1.0).abs() < MEANDER_WINDOW)
        .map(|p| p.0)
        .collect();
    let claim = "meander-reversal-ks-s0.5".to_string();
    if windowed.len() < MIN_WINDOWED {
        let e = Error::InsufficientData {
            what: "meander paths in the endpoint window".into(),
            needed: MIN_WINDOWED,
            got: windowed.len(),
        };
        out.push(insufficient(claim, TestKind::Ks2, e));
        return Ok(out);
    }
    let spec = BesselBridgeSpec::unit(1.0, grid)?;
    let root = experiment_stream(seed, streams::BESSEL);
    let bridge: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|k| sample_bessel_bridge(&spec, &mut root.split(k as u64)).map(|p| p.values[1]))
        .collect::<Result<_>>()?;
    out.push(ks2(windowed, bridge, alpha, claim)?.with_note(format!(
        "last-zero meander with |endpoint - 1| < {MEANDER_WINDOW}"
    )));
    Ok(out)
}

/// The composite-path identity for V-paths, its scaling, functionals and
/// projections, plus the meander checks.
///
/// The negative control replaces the composite sampler by one whose `τ` and
/// bridge share a stream.
pub fn run_verify_theorem1(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let start = Instant::now();
    let mut res = ExperimentResult::new("verify-theorem1", cfg);
    let n = cfg.n_samples;
    let us = cfg.u_grid.interior();
    let batch = |x, purpose| {
        v_batch(
            x,
            &cfg.u_grid,
            cfg.step_size,
            cfg.t_cap,
            &experiment_stream(cfg.seed, purpose),
            n,
        )
    };
    let primary = batch(cfg.x, streams::V_PRIMARY)?;
    check_truncation(&primary, cfg.t_cap)?;
    let partner = batch(if cfg.x == 1.0 { 2.0 } else { 1.0 }, streams::V_PARTNER)?;
    check_truncation(&partner, cfg.t_cap)?;
    let (v1, vx) = if cfg.x == 1.0 {
        (&primary, &partner)
    } else {
        (&partner, &primary)
    };

    res.reports.extend(scaling_reports(vx, v1, &us, cfg.alpha)?);
    let rhs_root = experiment_stream(cfg.seed, streams::RHS);
    let rhs = rhs_batch(&cfg.u_grid, &rhs_root, n, Coupling::Independent)?;
    res.reports
        .extend(identity_reports(v1, &rhs, &us, cfg.alpha)?);
    res.reports.push(rhs_sup_tail_report(
        &experiment_stream(cfg.seed, streams::RHS_FINE),
        n,
    )?);
    res.reports
        .push(independence_report(&rhs_root, n, Coupling::Independent)?);
    res.reports.extend(meander_reports(cfg.seed, n, cfg.alpha)?);

    let shared_root = experiment_stream(cfg.seed, streams::RHS_SHARED);
    let broken = rhs_batch(&cfg.u_grid, &shared_root, n, Coupling::SharedStream)?;
    let mut control = identity_reports(v1, &broken, &us, cfg.alpha)?;
    control.push(independence_report(
        &shared_root,
        n,
        Coupling::SharedStream,
    )?);
    res.controls
        .push(ControlReport::new("shared-stream-rhs", control));

    annotate_small(&mut res.reports, n);
    res.wall_time = start.elapsed().as_secs_f64();
    Ok(res)
}
