use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hitzero::analytic::{DensitySpec, Law};
use hitzero::harness::{
    run_convergence_study, run_sample, run_tabulate, run_verify_conditionals, run_verify_densities,
    run_verify_theorem1, with_workers, ExperimentResult, SamplerKind, DEFAULT_STEPS,
};
use hitzero::{ExperimentConfig, Result, TimeGrid};

#[derive(Parser, Debug)]
#[command(
    name = "hitzero",
    version,
    about = "Brownian motion on its way to hitting zero: samplers, laws and Monte Carlo checks"
)]
struct Cli {
    /// TOML configuration file; missing keys take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Overrides the configured significance level.
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Overrides the configured sample size.
    #[arg(long, global = true)]
    n_samples: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hitting times, V-path marginals and the path maximum against their laws.
    VerifyDensities,
    /// V-paths against the composite Bessel-bridge construction.
    VerifyTheorem1,
    /// V-paths conditioned on a large maximum or on a hitting-time window.
    VerifyConditionals {
        /// Threshold for the maximum.
        #[arg(long, default_value_t = 10.0)]
        y: f64,
    },
    /// KS distance of the discretized walk as the base step shrinks.
    Convergence {
        /// Base steps, descending.
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_STEPS)]
        steps: Vec<f64>,
    },
    /// Writes an analytic law on a uniform grid of arguments.
    Tabulate {
        /// tau_density, v_density, v_tail_asymptote, max_tail,
        /// sqrt_tau_density or q_asymptote.
        #[arg(long)]
        law: Law,
        #[arg(long, default_value_t = 1.0)]
        x: f64,
        #[arg(long)]
        u: Option<f64>,
        /// Conditioning threshold for q_asymptote.
        #[arg(long)]
        y: Option<f64>,
        #[arg(long)]
        start: f64,
        #[arg(long)]
        stop: f64,
        #[arg(long)]
        points: usize,
    },
    /// Dumps raw draws of one sampler.
    Sample {
        /// tau, v_path, bessel_bridge, meander or theorem1_rhs.
        #[arg(long)]
        sampler: SamplerKind,
        #[arg(long, default_value_t = 1000)]
        n: usize,
    },
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(alpha) = cli.alpha {
        cfg.alpha = alpha;
    }
    if let Some(n) = cli.n_samples {
        cfg.n_samples = n;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn finish(mut res: ExperimentResult, cli: &Cli) -> Result<bool> {
    let json = res.write(&cli.out)?;
    for r in &res.reports {
        println!(
            "{:<44} {:<5} stat={:<12.5e} p={:.4}",
            r.claim,
            if r.pass { "PASS" } else { "FAIL" },
            r.statistic,
            r.p_value
        );
    }
    for c in &res.controls {
        println!(
            "{:<44} {}",
            format!("control {}", c.name),
            if c.detected { "DETECTED" } else { "MISSED" }
        );
    }
    eprintln!(
        "{}: {:.1} s, report {}",
        res.experiment,
        res.wall_time,
        json.display()
    );
    Ok(res.all_pass())
}

fn uniform_points(start: f64, stop: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![start];
    }
    let step = (stop - start) / (points - 1) as f64;
    (0..points).map(|i| start + step * i as f64).collect()
}

fn run(cli: &Cli) -> Result<bool> {
    let cfg = load_config(cli)?;
    match &cli.command {
        Command::VerifyDensities => finish(run_verify_densities(&cfg)?, cli),
        Command::VerifyTheorem1 => finish(run_verify_theorem1(&cfg)?, cli),
        Command::VerifyConditionals { y } => finish(run_verify_conditionals(&cfg, *y)?, cli),
        Command::Convergence { steps } => finish(run_convergence_study(&cfg, steps)?, cli),
        Command::Tabulate {
            law,
            x,
            u,
            y,
            start,
            stop,
            points,
        } => {
            let spec = DensitySpec::new(*law, *x, *u, *y)?;
            let grid = TimeGrid::adaptive(uniform_points(*start, *stop, *points))?;
            let out = cli.out.join(format!("tabulate-{}.csv", law.name()));
            println!("{}", run_tabulate(&spec, &grid, &out)?.display());
            Ok(true)
        }
        Command::Sample { sampler, n } => {
            let out = cli.out.join(format!("sample-{}.csv", sampler.name()));
            println!("{}", run_sample(&cfg, *sampler, *n, &out)?.display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match with_workers(cli.workers, || run(&cli)) {
        Ok(Ok(true)) => ExitCode::SUCCESS,
        Ok(Ok(false)) => ExitCode::from(1),
        Ok(Err(e)) | Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
