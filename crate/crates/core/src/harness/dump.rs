use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use super::result::csv_error;
use super::{experiment_stream, streams};
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::path::PathSample;
use crate::samplers::{
    sample_bessel_bridge, sample_meander, sample_tau, sample_theorem1_rhs, BesselBridgeSpec,
    MeanderConstruction, MeanderSpec, VPathSampler, WalkParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerKind {
    Tau,
    VPath,
    BesselBridge,
    Meander,
    Theorem1Rhs,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 5] = [
        SamplerKind::Tau,
        SamplerKind::VPath,
        SamplerKind::BesselBridge,
        SamplerKind::Meander,
        SamplerKind::Theorem1Rhs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SamplerKind::Tau => "tau",
            SamplerKind::VPath => "v_path",
            SamplerKind::BesselBridge => "bessel_bridge",
            SamplerKind::Meander => "meander",
            SamplerKind::Theorem1Rhs => "theorem1_rhs",
        }
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SamplerKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let norm = s.replace('-', "_");
        SamplerKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| format!("unknown sampler {s:?}"))
    }
}

/// Rows of one draw: `(u, value)` pairs plus the hitting time and
/// truncation flag.
struct Draw {
    rows: Vec<(String, f64)>,
    tau: Option<f64>,
    truncated: bool,
}

impl From<PathSample> for Draw {
    fn from(p: PathSample) -> Self {
        Draw {
            rows: p
                .grid
                .points()
                .iter()
                .map(|u| u.to_string())
                .zip(p.values.iter().copied())
                .collect(),
            tau: p.tau,
            truncated: p.is_truncated(),
        }
    }
}

fn draw(kind: SamplerKind, cfg: &ExperimentConfig, k: u64) -> Result<Draw> {
    let rng = experiment_stream(cfg.seed, streams::DUMP).split(k);
    let grid = &cfg.u_grid;
    let path = match kind {
        SamplerKind::Tau => {
            let t = sample_tau(cfg.x, &mut rng.clone())?;
            return Ok(Draw {
                rows: vec![(String::new(), t)],
                tau: Some(t),
                truncated: false,
            });
        }
        SamplerKind::VPath => {
            let params = WalkParams::new(cfg.x, cfg.step_size, cfg.t_cap).with_track_max(true);
            VPathSampler::new(params)?.sample(grid, &rng)?
        }
        SamplerKind::BesselBridge => sample_bessel_bridge(
            &BesselBridgeSpec::unit(cfg.x, grid.clone())?,
            &mut rng.clone(),
        )?,
        SamplerKind::Meander => {
            let spec = MeanderSpec::new(grid.clone(), MeanderConstruction::RayleighBridge)?;
            sample_meander(&spec, &rng)?
        }
        SamplerKind::Theorem1Rhs => sample_theorem1_rhs(grid, &rng)?,
    };
    Ok(path.into())
}

/// Writes `n` draws of `kind` as CSV rows
/// `sampler, x, u, value, tau, truncated, seed, stream_id`, one row per grid
/// point (one per draw for `tau`). `stream_id` is the draw's substream index.
pub fn run_sample(
    cfg: &ExperimentConfig,
    kind: SamplerKind,
    n: usize,
    out: &Path,
) -> Result<PathBuf> {
    cfg.validate()?;
    let draws: Vec<Draw> = (0..n as u64)
        .into_par_iter()
        .map(|k| draw(kind, cfg, k))
        .collect::<Result<_>>()?;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut w = csv::Writer::from_path(out).map_err(|e| csv_error(out, e))?;
    w.write_record([
        "sampler",
        "x",
        "u",
        "value",
        "tau",
        "truncated",
        "seed",
        "stream_id",
    ])
    .map_err(|e| csv_error(out, e))?;
    let x = if kind == SamplerKind::Theorem1Rhs {
        1.0
    } else {
        cfg.x
    };
    for (k, d) in draws.iter().enumerate() {
        let tau = d.tau.map(|t| t.to_string()).unwrap_or_default();
        for (u, v) in &d.rows {
            w.write_record([
                kind.name().to_string(),
                x.to_string(),
                u.clone(),
                v.to_string(),
                tau.clone(),
                d.truncated.to_string(),
                cfg.seed.to_string(),
                k.to_string(),
            ])
            .map_err(|e| csv_error(out, e))?;
        }
    }
    w.flush().map_err(|e| Error::io(out, e))?;
    Ok(out.to_path_buf())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for k in SamplerKind::ALL {
            assert_eq!(k.name().parse::<SamplerKind>().unwrap(), k);
        }
        assert_eq!("v-path".parse::<SamplerKind>().unwrap(), SamplerKind::VPath);
        assert!("nope".parse::<SamplerKind>().is_err());
    }

    #[test]
    fn dump_rows() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig {
            step_size: 1e-3,
            ..Default::default()
        };
        let out = dir.path().join("v.csv");
        run_sample(&cfg, SamplerKind::VPath, 7, &out).unwrap();
        let mut r = csv::Reader::from_path(&out).unwrap();
        assert_eq!(
            r.headers().unwrap(),
            vec![
                "sampler",
                "x",
                "u",
                "value",
                "tau",
                "truncated",
                "seed",
                "stream_id"
            ]
        );
        let rows: Vec<_> = r.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), 7 * cfg.u_grid.len());
        assert_eq!(&rows[0][2], "0");
        assert_eq!(&rows[0][3], "1");
        let out2 = dir.path().join("t.csv");
        run_sample(&cfg, SamplerKind::Tau, 5, &out2).unwrap();
        let n = csv::Reader::from_path(&out2).unwrap().records().count();
        assert_eq!(n, 5);
    }
}
