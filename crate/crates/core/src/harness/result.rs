use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::stats::TestReport;

/// Tests run on a deliberately broken sampler. The control is detected when
/// at least one of them fails.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControlReport {
    pub name: String,
    pub detected: bool,
    pub reports: Vec<TestReport>,
}

impl ControlReport {
    pub fn new(name: impl Into<String>, reports: Vec<TestReport>) -> Self {
        ControlReport {
            name: name.into(),
            detected: reports.iter().any(|r| !r.pass),
            reports,
        }
    }
}

/// A CSV table produced by an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Table {
            name: name.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
        w.write_record(&self.header)
            .map_err(|e| csv_error(path, e))?;
        for row in &self.rows {
            w.write_record(row).map_err(|e| csv_error(path, e))?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }
}

pub(crate) fn csv_error(path: &Path, e: csv::Error) -> Error {
    let path = path.to_path_buf();
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io { path, source },
        other => Error::Parse {
            path,
            message: format!("{other:?}"),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub reports: Vec<TestReport>,
    pub controls: Vec<ControlReport>,
    /// Output files, relative to the output directory.
    pub artifacts: Vec<PathBuf>,
    /// Kept out of the JSON so that reruns are byte-identical.
    #[serde(skip)]
    pub wall_time: f64,
    #[serde(skip)]
    pub tables: Vec<Table>,
}

impl ExperimentResult {
    pub fn new(experiment: &str, config: &ExperimentConfig) -> Self {
        ExperimentResult {
            experiment: experiment.to_string(),
            config: config.clone(),
            reports: Vec::new(),
            controls: Vec::new(),
            artifacts: Vec::new(),
            wall_time: 0.0,
            tables: Vec::new(),
        }
    }

    /// Every claim passes and every negative control is detected.
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass) && self.controls.iter().all(|c| c.detected)
    }

    pub fn failures(&self) -> Vec<&TestReport> {
        self.reports.iter().filter(|r| !r.pass).collect()
    }

    pub fn report(&self, claim: &str) -> Option<&TestReport> {
        self.reports.iter().find(|r| r.claim == claim)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }

    /// Writes the tables as `<experiment>-<table>.csv` and the result as
    /// `<experiment>.json` into `dir`; returns the JSON path.
    pub fn write(&mut self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for t in &self.tables {
            let name = PathBuf::from(format!("{}-{}.csv", self.experiment, t.name));
            t.write(&dir.join(&name))?;
            if !self.artifacts.contains(&name) {
                self.artifacts.push(name);
            }
        }
        let json = dir.join(format!("{}.json", self.experiment));
        fs::write(&json, self.to_json() + "\n").map_err(|e| Error::io(&json, e))?;
        Ok(json)
    }
}
