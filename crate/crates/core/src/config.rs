use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{make_fraction_grid, TimeGrid};

/// Parameters shared by every verification experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub x: f64,
    pub u_grid: TimeGrid,
    pub n_samples: usize,
    pub step_size: f64,
    pub t_cap: f64,
    pub seed: u64,
    pub alpha: f64,
}

/// On-disk form: one key per field, nothing else allowed.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    x: Option<f64>,
    u_grid: Option<Vec<f64>>,
    n_samples: Option<usize>,
    step_size: Option<f64>,
    t_cap: Option<f64>,
    seed: Option<u64>,
    alpha: Option<f64>,
}

pub const DEFAULT_U: [f64; 3] = [0.25, 0.5, 0.75];

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            x: 1.0,
            u_grid: make_fraction_grid(&DEFAULT_U).expect("default grid"),
            n_samples: 100_000,
            step_size: 1e-4,
            t_cap: 1e8,
            seed: 1,
            alpha: 0.01,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(self.x > 0.0 && self.x.is_finite()) {
            return bad(format!("x must be positive, got {}", self.x));
        }
        if !self.u_grid.is_fractions() {
            return bad("u_grid must be a fractions grid".into());
        }
        if self.n_samples < 100 {
            return bad(format!("n_samples must be >= 100, got {}", self.n_samples));
        }
        if !(self.step_size > 0.0 && self.step_size < 1.0) {
            return bad(format!(
                "step_size must be in (0, 1), got {}",
                self.step_size
            ));
        }
        if !(self.t_cap > 1.0) {
            return bad(format!("t_cap must exceed 1, got {}", self.t_cap));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must be in (0, 1), got {}", self.alpha));
        }
        Ok(())
    }

    /// Parses the flat key-value (TOML) form. Missing keys take defaults.
    pub fn from_toml_str(text: &str) -> std::result::Result<Self, String> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| e.message().to_string())?;
        let d = ExperimentConfig::default();
        let u_grid = match raw.u_grid {
            Some(u) => make_fraction_grid(&u).map_err(|e| e.to_string())?,
            None => d.u_grid,
        };
        let cfg = ExperimentConfig {
            x: raw.x.unwrap_or(d.x),
            u_grid,
            n_samples: raw.n_samples.unwrap_or(d.n_samples),
            step_size: raw.step_size.unwrap_or(d.step_size),
            t_cap: raw.t_cap.unwrap_or(d.t_cap),
            seed: raw.seed.unwrap_or(d.seed),
            alpha: raw.alpha.unwrap_or(d.alpha),
        };
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|message| Error::Parse {
            path: path.to_path_buf(),
            message,
        })
    }

    /// Serialized back to the flat on-disk form.
    pub fn to_toml_string(&self) -> String {
        let u: Vec<String> = self
            .u_grid
            .interior()
            .iter()
            .map(|u| format!("{u:?}"))
            .collect();
        format!(
            "x = {:?}\nu_grid = [{}]\nn_samples = {}\nstep_size = {:?}\nt_cap = {:?}\nseed = {}\nalpha = {:?}\n",
            self.x,
            u.join(", "),
            self.n_samples,
            self.step_size,
            self.t_cap,
            self.seed,
            self.alpha
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let cfg = ExperimentConfig::from_toml_str(
            "x = 2.0\nu_grid = [0.5]\nn_samples = 500\nstep_size = 0.001\nt_cap = 100.0\nseed = 9\nalpha = 0.05\n",
        )
        .unwrap();
        assert_eq!(cfg.x, 2.0);
        assert_eq!(cfg.u_grid.points(), &[0.0, 0.5, 1.0]);
        assert_eq!(cfg.n_samples, 500);
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn unknown_key_is_an_error() {
        let err = ExperimentConfig::from_toml_str("x = 1.0\nbogus = 3\n").unwrap_err();
        assert!(err.contains("bogus"), "{err}");
    }

    #[test]
    fn invariants_enforced() {
        assert!(ExperimentConfig::from_toml_str("step_size = 1.5").is_err());
        assert!(ExperimentConfig::from_toml_str("t_cap = 0.5").is_err());
        assert!(ExperimentConfig::from_toml_str("n_samples = 99").is_err());
        assert!(ExperimentConfig::from_toml_str("alpha = 1.0").is_err());
        assert!(ExperimentConfig::from_toml_str("x = -1.0").is_err());
        assert!(ExperimentConfig::from_toml_str("u_grid = [2.0]").is_err());
    }

    #[test]
    fn toml_round_trip() {
        let cfg = ExperimentConfig {
            x: 3.0,
            seed: 77,
            ..Default::default()
        };
        let back = ExperimentConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
        assert_eq!(cfg, back);
    }
}
