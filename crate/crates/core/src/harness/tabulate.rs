use std::path::{Path, PathBuf};

use super::result::csv_error;
use crate::analytic::DensitySpec;
use crate::error::{Error, Result};
use crate::grid::TimeGrid;

/// Writes `law, x, u, arg, value` for every grid point to `out`.
pub fn run_tabulate(spec: &DensitySpec, grid: &TimeGrid, out: &Path) -> Result<PathBuf> {
    spec.validate()?;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut w = csv::Writer::from_path(out).map_err(|e| csv_error(out, e))?;
    w.write_record(["law", "x", "u", "arg", "value"])
        .map_err(|e| csv_error(out, e))?;
    let u = spec.u.map(|u| u.to_string()).unwrap_or_default();
    for &arg in grid.points() {
        let value = spec.eval(arg)?;
        w.write_record([
            spec.law.name().to_string(),
            spec.x.to_string(),
            u.clone(),
            arg.to_string(),
            value.to_string(),
        ])
        .map_err(|e| csv_error(out, e))?;
    }
    w.flush().map_err(|e| Error::io(out, e))?;
    Ok(out.to_path_buf())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::Law;
    use std::f64::consts::PI;

    fn rows(path: &Path) -> Vec<csv::StringRecord> {
        csv::Reader::from_path(path)
            .unwrap()
            .records()
            .map(|r| r.unwrap())
            .collect()
    }

    #[test]
    fn v_density_table() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("v.csv");
        let ys: Vec<f64> = (1..=50).map(|i| i as f64 / 10.0).collect();
        let grid = TimeGrid::adaptive(ys).unwrap();
        let spec = DensitySpec::new(Law::VDensity, 1.0, Some(0.5), None).unwrap();
        run_tabulate(&spec, &grid, &out).unwrap();
        let r = rows(&out);
        assert_eq!(r.len(), 50);
        assert!(r.iter().all(|row| row[4].parse::<f64>().unwrap() > 0.0));
        let at1 = r.iter().find(|row| &row[3] == "1").unwrap();
        assert!((at1[4].parse::<f64>().unwrap() - 8.0 / (5.0 * PI)).abs() < 1e-14);
        assert_eq!(&at1[0], "v_density");
    }

    #[test]
    fn tail_rows_follow_the_asymptote() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("tail.csv");
        let grid = TimeGrid::adaptive((10..=100).map(|y| y as f64).collect()).unwrap();
        let spec = DensitySpec::new(Law::VDensity, 1.0, Some(0.5), None).unwrap();
        run_tabulate(&spec, &grid, &out).unwrap();
        for row in rows(&out) {
            let y: f64 = row[3].parse().unwrap();
            let v: f64 = row[4].parse().unwrap();
            assert!((v * y * y / (2.0 / PI) - 1.0).abs() < 0.01, "{y}");
        }
    }

    #[test]
    fn io_error_names_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        std::fs::write(&blocker, "").unwrap();
        let out = blocker.join("x.csv");
        let grid = TimeGrid::adaptive(vec![1.0]).unwrap();
        let spec = DensitySpec::new(Law::TauDensity, 1.0, None, None).unwrap();
        let err = run_tabulate(&spec, &grid, &out).unwrap_err();
        assert!(err.to_string().contains("file"));
    }
}
