//! Acceptance criteria AC1 to AC11, one pass/fail line each.
//!
//! Runs every criterion by default. Arguments of the form `ac3` select a
//! subset; any other non-flag argument selects nothing, so test-name filters
//! passed to `cargo test` skip this suite.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use hitzero::analytic::quad::{integrate_half_line_tan, integrate_half_line_tan2};
use hitzero::analytic::{
    mills_integral_check, sqrt_tau_density, tau_density, v_density, DensitySpec, Law,
};
use hitzero::harness::{
    conditional_density_reports, experiment_stream, identity_reports, max_law_reports,
    meander_reports, rhs_batch, run_convergence_study, run_sample, run_tabulate,
    run_verify_conditionals, run_verify_densities, run_verify_theorem1, scaling_reports, streams,
    tau_batch, tau_reports, v_batch, v_marginal_reports, v_tail_report, with_workers, PathBatch,
    DEFAULT_STEPS,
};
use hitzero::samplers::Coupling;
use hitzero::stats::{EmpiricalDist, TestReport};
use hitzero::{ExperimentConfig, Result, TimeGrid};

const SEEDS: std::ops::RangeInclusive<u64> = 1..=20;
const ALPHA: f64 = 0.01;
const N: usize = 100_000;
const US: [f64; 3] = [0.25, 0.5, 0.75];

struct Line {
    id: usize,
    pass: bool,
    /// Passes on every statistical check but misses its runtime budget.
    runtime_only: bool,
    detail: String,
}

impl Line {
    fn new(id: usize, pass: bool, detail: impl Into<String>) -> Self {
        Line {
            id,
            pass,
            runtime_only: false,
            detail: detail.into(),
        }
    }

    fn timed(id: usize, stats_pass: bool, secs: f64, budget: f64, detail: String) -> Self {
        let in_time = secs < budget;
        Line {
            id,
            pass: stats_pass && in_time,
            runtime_only: stats_pass && !in_time,
            detail: format!("{detail}; runtime {secs:.1} s (budget {budget} s)"),
        }
    }

    fn print(&self) {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        println!("AC{:<3} {verdict}  {}", self.id, self.detail);
    }
}

fn failed(r: &[TestReport]) -> Vec<&str> {
    r.iter()
        .filter(|r| !r.pass)
        .map(|r| r.claim.as_str())
        .collect()
}

fn summary(r: &[TestReport]) -> String {
    r.iter()
        .map(|r| {
            format!(
                "{} {} (stat {:.4}, p {:.3})",
                r.claim,
                if r.pass { "ok" } else { "FAIL" },
                r.statistic,
                r.p_value
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn merge(parts: &[PathBatch]) -> PathBatch {
    let mut out = PathBatch {
        x: parts[0].x,
        u: parts[0].u.clone(),
        at_u: vec![Vec::new(); parts[0].u.len()],
        ..Default::default()
    };
    for p in parts {
        for (a, b) in out.at_u.iter_mut().zip(&p.at_u) {
            a.extend_from_slice(b);
        }
        out.sup.extend_from_slice(&p.sup);
        out.integral.extend_from_slice(&p.integral);
        out.running_max.extend_from_slice(&p.running_max);
        out.tau.extend_from_slice(&p.tau);
        out.truncated.extend_from_slice(&p.truncated);
    }
    out
}

/// The `1/2` column, running maximum, hitting time and truncation flag.
fn reduce(b: &PathBatch) -> PathBatch {
    let i = b.u_index(0.5).expect("1/2 is a report point");
    PathBatch {
        x: b.x,
        u: vec![0.5],
        at_u: vec![b.at_u[i].clone()],
        running_max: b.running_max.clone(),
        tau: b.tau.clone(),
        truncated: b.truncated.clone(),
        ..Default::default()
    }
}

fn ac1() -> Result<Line> {
    let start = Instant::now();
    let mut passed = 0;
    for seed in SEEDS {
        let taus = tau_batch(1.0, &experiment_stream(seed, streams::TAU), N)?;
        let reports = tau_reports(1.0, &taus, ALPHA)?;
        if reports
            .iter()
            .find(|r| r.claim == "tau-ks")
            .is_some_and(|r| r.pass)
        {
            passed += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(Line::timed(
        1,
        passed >= 18,
        secs,
        5.0,
        format!("hitting-time KS at n = {N}: {passed}/20 seeds pass at alpha {ALPHA} (need 18)"),
    ))
}

fn ac9() -> Result<Line> {
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    let mut check = |what: String, value: f64, target: f64, tol: f64| {
        let err = (value - target).abs();
        if err > tol {
            bad.push(format!("{what} = {value:.12}"));
        }
        worst = worst.max(err / tol);
    };
    let tau = integrate_half_line_tan2(|t| tau_density(1.0, t).unwrap_or(0.0), 1e-10)?;
    check("tau density mass".into(), tau, 1.0, 1e-6);
    for u in US {
        let m = integrate_half_line_tan(|y| v_density(1.0, u, y).unwrap_or(0.0), 1e-10)?;
        check(format!("v density mass at u = {u}"), m, 1.0, 1e-6);
    }
    let s = integrate_half_line_tan(|y| sqrt_tau_density(y).unwrap_or(0.0), 1e-10)?;
    check("sqrt-tau density mass".into(), s, 1.0, 1e-6);
    check("Mills integral".into(), mills_integral_check(), 0.25, 1e-8);
    let mut scaling = 0.0f64;
    for i in 0..1000 {
        let y = 0.01 + 20.0 * i as f64 / 999.0;
        let x = 0.25 + 4.0 * ((i * 7) % 1000) as f64 / 1000.0;
        let u = US[i % 3];
        let lhs = v_density(x, u, y)?;
        let rhs = v_density(1.0, u, y / x)? / x;
        scaling = scaling.max((lhs - rhs).abs() / rhs.abs().max(1e-300));
    }
    check(
        "scaling identity relative error".into(),
        scaling,
        0.0,
        1e-12,
    );
    Ok(Line::new(
        9,
        bad.is_empty(),
        if bad.is_empty() {
            format!("normalizations, Mills integral and scaling identity; worst error {worst:.2} of tolerance")
        } else {
            format!("out of tolerance: {}", bad.join(", "))
        },
    ))
}

fn small_config() -> ExperimentConfig {
    ExperimentConfig {
        n_samples: 30_000,
        step_size: 1e-2,
        seed: 7,
        ..Default::default()
    }
}

/// Every experiment, a table and a dump written under `dir`.
fn write_all(dir: &Path) -> Result<()> {
    let cfg = small_config();
    run_verify_densities(&cfg)?.write(dir)?;
    run_verify_theorem1(&cfg)?.write(dir)?;
    run_verify_conditionals(&cfg, 10.0)?.write(dir)?;
    run_convergence_study(&cfg, &[1e-1, 1e-2])?.write(dir)?;
    let spec = DensitySpec::new(Law::VDensity, 1.0, Some(0.5), None)?;
    let ys = TimeGrid::adaptive((1..=50).map(|i| i as f64 / 10.0).collect())?;
    run_tabulate(&spec, &ys, &dir.join("tabulate-v_density.csv"))?;
    for kind in hitzero::harness::SamplerKind::ALL {
        run_sample(&cfg, kind, 300, &dir.join(format!("sample-{kind}.csv")))?;
    }
    Ok(())
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .expect("output directory")
        .map(|e| {
            let e = e.expect("directory entry");
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).expect("output file"),
            )
        })
        .collect()
}

fn differences(a: &BTreeMap<String, Vec<u8>>, b: &BTreeMap<String, Vec<u8>>) -> Vec<String> {
    let mut names: Vec<&String> = a.keys().chain(b.keys()).collect();
    names.sort();
    names.dedup();
    names
        .into_iter()
        .filter(|k| a.get(*k) != b.get(*k))
        .cloned()
        .collect()
}

fn ac11() -> Result<Line> {
    let tmp = tempfile::tempdir().expect("temporary directory");
    let runs = [("first", 1), ("rerun", 1), ("eight-workers", 8)];
    let mut snaps = Vec::new();
    for (name, workers) in runs {
        let dir = tmp.path().join(name);
        with_workers(workers, || write_all(&dir))??;
        snaps.push(snapshot(&dir));
    }
    let rerun = differences(&snaps[0], &snaps[1]);
    let workers = differences(&snaps[0], &snaps[2]);
    let pass = rerun.is_empty() && workers.is_empty() && !snaps[0].is_empty();
    Ok(Line::new(
        11,
        pass,
        format!(
            "{} output files; differing on rerun: {:?}; differing with 8 workers: {:?}",
            snaps[0].len(),
            rerun,
            workers
        ),
    ))
}

fn ac7() -> Result<Line> {
    let r = meander_reports(1, N, ALPHA)?;
    Ok(Line::new(7, failed(&r).is_empty(), summary(&r)))
}

/// The 20-seed pool of `V_{1,·}` at step `1e-4`.
struct Pool {
    reduced: Vec<PathBatch>,
    seed1: PathBatch,
    ks_fail: usize,
    chi2_fail: usize,
    secs: f64,
}

fn pool() -> Result<Pool> {
    let cfg = ExperimentConfig::default();
    let start = Instant::now();
    let (mut ks_fail, mut chi2_fail) = (0, 0);
    let mut reduced = Vec::new();
    let mut seed1 = None;
    for seed in SEEDS {
        let b = v_batch(
            1.0,
            &cfg.u_grid,
            cfg.step_size,
            cfg.t_cap,
            &experiment_stream(seed, streams::V_PRIMARY),
            N,
        )?;
        let r = v_marginal_reports(&b, &US, ALPHA)?;
        let fails = failed(&r);
        ks_fail += fails
            .iter()
            .filter(|c| c.starts_with("v-density-ks"))
            .count();
        chi2_fail += fails
            .iter()
            .filter(|c| c.starts_with("v-density-chi2"))
            .count();
        eprintln!(
            "  pool seed {seed:>2}: {:.0} s elapsed, {} truncated, failing {:?}",
            start.elapsed().as_secs_f64(),
            b.n_truncated(),
            fails
        );
        reduced.push(reduce(&b));
        if seed == 1 {
            seed1 = Some(b);
        }
    }
    Ok(Pool {
        reduced,
        seed1: seed1.expect("seed 1 is in the sweep"),
        ks_fail,
        chi2_fail,
        secs: start.elapsed().as_secs_f64(),
    })
}

fn ac2(p: &Pool) -> Line {
    Line::timed(
        2,
        p.ks_fail <= 2 && p.chi2_fail <= 2,
        p.secs,
        600.0,
        format!(
            "V marginals at u = 1/4, 1/2, 3/4 over 20 seeds x n = {N}: {} KS and {} chi-square failures of 60 each (at most 2 allowed)",
            p.ks_fail, p.chi2_fail
        ),
    )
}

fn ac3(p: &Pool) -> Result<Line> {
    let ten = merge(&p.reduced[..10]);
    let d = EmpiricalDist::new(ten.at(0.5).expect("1/2 column"))?;
    let r = v_tail_report(&d, ten.n_truncated(), 1.0, 0.5);
    Ok(Line::new(
        3,
        r.pass,
        format!("n = {}: {}", d.n(), r.notes.join("; ")),
    ))
}

fn ac4(p: &Pool) -> Result<Line> {
    let ten = merge(&p.reduced[..10]);
    let r: Vec<TestReport> = max_law_reports(&ten, ALPHA)?
        .into_iter()
        .filter(|r| r.claim.starts_with("max-law-y"))
        .collect();
    let notes: Vec<String> = r
        .iter()
        .map(|r| format!("{}: {}", r.claim, r.notes.join(" ")))
        .collect();
    Ok(Line::new(
        4,
        failed(&r).is_empty(),
        format!("n = {}: {}", ten.len(), notes.join("; ")),
    ))
}

fn ac5(p: &Pool) -> Result<Line> {
    let cfg = ExperimentConfig::default();
    let partner = v_batch(
        2.0,
        &cfg.u_grid,
        cfg.step_size,
        cfg.t_cap,
        &experiment_stream(1, streams::V_PARTNER),
        N,
    )?;
    let r = scaling_reports(&partner, &p.seed1, &US, ALPHA)?;
    Ok(Line::new(5, failed(&r).is_empty(), summary(&r)))
}

fn ac6(p: &Pool) -> Result<Line> {
    let grid = ExperimentConfig::default().u_grid;
    let rhs = rhs_batch(
        &grid,
        &experiment_stream(1, streams::RHS),
        N,
        Coupling::Independent,
    )?;
    let r = identity_reports(&p.seed1, &rhs, &US, ALPHA)?;
    let broken = rhs_batch(
        &grid,
        &experiment_stream(1, streams::RHS_SHARED),
        N,
        Coupling::SharedStream,
    )?;
    let control = identity_reports(&p.seed1, &broken, &US, ALPHA)?;
    let caught = failed(&control);
    Ok(Line::new(
        6,
        failed(&r).is_empty() && !caught.is_empty(),
        format!("{}; shared-stream control fails {:?}", summary(&r), caught),
    ))
}

fn ac8(p: &Pool) -> Result<Line> {
    let all = merge(&p.reduced);
    let r = conditional_density_reports(&all, 10.0)?;
    let density: Vec<&TestReport> = r.iter().filter(|r| r.claim.contains("density")).collect();
    let pointwise: Vec<String> = density
        .iter()
        .zip([1.0, 2.0, 3.0])
        .map(|(r, z)| {
            format!(
                "z = {z}: {:+.1}% ({})",
                100.0 * r.statistic,
                r.notes.join(" ")
            )
        })
        .collect();
    let density_ok = density.iter().all(|r| r.pass) && density.len() == 3;

    let ten = merge(&p.reduced[..10]);
    let valid = ten.len() - ten.n_truncated();
    let accepted = (0..ten.len())
        .filter(|&k| !ten.truncated[k] && ten.running_max[k] > 2.0)
        .count();
    let rate = accepted as f64 / valid as f64;
    let rate_ok = (rate - 0.5).abs() <= 0.005;
    Ok(Line::new(
        8,
        density_ok && rate_ok,
        format!(
            "density of V/10 given max > 10 from {} paths: {}; acceptance at y = 2 over {valid} paths: {rate:.5}",
            all.len(),
            pointwise.join(", ")
        ),
    ))
}

fn ac10() -> Result<Line> {
    let cfg = ExperimentConfig {
        n_samples: 1_000_000,
        ..Default::default()
    };
    let res = run_convergence_study(&cfg, &DEFAULT_STEPS)?;
    let get = |c: &str| res.report(c).map(|r| (r.pass, r.notes.join(" ")));
    let (mono, mono_note) = get("convergence-ks-tau-monotone").expect("monotone claim");
    let ablation: Vec<&TestReport> = res
        .reports
        .iter()
        .filter(|r| r.claim.starts_with("convergence-ablation"))
        .collect();
    let ablation_ok = ablation.len() == DEFAULT_STEPS.len() && ablation.iter().all(|r| r.pass);
    let abl: Vec<String> = ablation
        .iter()
        .map(|r| format!("{}: {}", r.claim, r.notes.join(" ")))
        .collect();
    Ok(Line::new(
        10,
        mono && ablation_ok,
        format!("n = {}: tau {mono_note}; {}", cfg.n_samples, abl.join("; ")),
    ))
}

fn selected(filters: &[String], id: usize) -> bool {
    filters.is_empty()
        || filters
            .iter()
            .any(|f| f.eq_ignore_ascii_case(&format!("ac{id}")))
}

fn main() -> ExitCode {
    let filters: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut lines: Vec<Line> = Vec::new();
    let mut run = |id: usize, f: &mut dyn FnMut() -> Result<Line>| {
        if !selected(&filters, id) {
            return;
        }
        let start = Instant::now();
        let line = f().unwrap_or_else(|e| Line::new(id, false, format!("error: {e}")));
        line.print();
        eprintln!("  AC{id} took {:.1} s", start.elapsed().as_secs_f64());
        lines.push(line);
    };
    run(1, &mut ac1);
    run(9, &mut ac9);
    run(11, &mut ac11);
    run(7, &mut ac7);
    if [2, 3, 4, 5, 6, 8].iter().any(|&id| selected(&filters, id)) {
        match pool() {
            Ok(p) => {
                run(2, &mut || Ok(ac2(&p)));
                run(3, &mut || ac3(&p));
                run(4, &mut || ac4(&p));
                run(5, &mut || ac5(&p));
                run(6, &mut || ac6(&p));
                run(8, &mut || ac8(&p));
            }
            Err(e) => {
                for id in [2, 3, 4, 5, 6, 8] {
                    run(id, &mut || {
                        Ok(Line::new(id, false, format!("pool error: {e}")))
                    });
                }
            }
        }
    }
    run(10, &mut ac10);

    if lines.is_empty() {
        println!("acceptance: no criteria selected");
        return ExitCode::SUCCESS;
    }
    lines.sort_by_key(|l| l.id);
    println!("acceptance summary:");
    for l in &lines {
        l.print();
    }
    let passed = lines.iter().filter(|l| l.pass).count();
    let runtime_only: Vec<String> = lines
        .iter()
        .filter(|l| l.runtime_only)
        .map(|l| format!("AC{}", l.id))
        .collect();
    let hard = lines.iter().filter(|l| !l.pass && !l.runtime_only).count();
    println!(
        "acceptance: {passed}/{} pass; runtime budget missed only: {:?}; statistical or exactness failures: {hard}",
        lines.len(),
        runtime_only
    );
    if hard == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
