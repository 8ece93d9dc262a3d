use std::time::Instant;

use super::batch::{tau_batch, v_batch};
use super::checks::{
    annotate_small, check_truncation, max_law_reports, tau_reports, truncation_report,
    v_marginal_reports,
};
use super::result::ExperimentResult;
use super::{experiment_stream, streams};
use crate::config::ExperimentConfig;
use crate::error::Result;

/// Exact hitting times and simulated V-paths against their closed-form laws.
///
/// Claims: `tau-ks`, `tau-chi2`, `truncation-rate`, and for each configured
/// `u` `v-density-ks-u*`, `v-density-chi2-u*`, `v-tail-fit-u*`; then
/// `max-law-ks`, `max-law-y*` and `max-tail-fit` for the running maximum.
pub fn run_verify_densities(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let start = Instant::now();
    let mut res = ExperimentResult::new("verify-densities", cfg);
    let n = cfg.n_samples;

    let taus = tau_batch(cfg.x, &experiment_stream(cfg.seed, streams::TAU), n)?;
    res.reports.extend(tau_reports(cfg.x, &taus, cfg.alpha)?);

    let batch = v_batch(
        cfg.x,
        &cfg.u_grid,
        cfg.step_size,
        cfg.t_cap,
        &experiment_stream(cfg.seed, streams::V_PRIMARY),
        n,
    )?;
    check_truncation(&batch, cfg.t_cap)?;
    res.reports.push(truncation_report(&batch, cfg.t_cap)?);
    res.reports.extend(v_marginal_reports(
        &batch,
        &cfg.u_grid.interior(),
        cfg.alpha,
    )?);
    res.reports.extend(max_law_reports(&batch, cfg.alpha)?);

    annotate_small(&mut res.reports, n);
    res.wall_time = start.elapsed().as_secs_f64();
    Ok(res)
}
