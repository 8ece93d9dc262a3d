use crate::error::{Error, Result};

/// A sorted sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDist {
    sorted: Vec<f64>,
}

impl EmpiricalDist {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InsufficientData {
                what: "empirical distribution".into(),
                needed: 1,
                got: 0,
            });
        }
        if let Some(&bad) = values.iter().find(|v| v.is_nan()) {
            return Err(Error::domain("sample value", "not NaN", bad));
        }
        values.sort_by(f64::total_cmp);
        Ok(EmpiricalDist { sorted: values })
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec())
    }

    pub fn n(&self) -> usize {
        self.sorted.len()
    }

    pub fn sorted_values(&self) -> &[f64] {
        &self.sorted
    }

    pub fn min(&self) -> f64 {
        self.sorted[0]
    }

    pub fn max(&self) -> f64 {
        self.sorted[self.sorted.len() - 1]
    }

    /// Number of sample points `≤ x`.
    pub fn count_le(&self, x: f64) -> usize {
        self.sorted.partition_point(|&v| v <= x)
    }

    pub fn count_gt(&self, x: f64) -> usize {
        self.n() - self.count_le(x)
    }

    pub fn mean(&self) -> f64 {
        self.sorted.iter().sum::<f64>() / self.n() as f64
    }

    /// Unbiased sample variance; zero for a single point.
    pub fn variance(&self) -> f64 {
        let n = self.n();
        if n < 2 {
            return 0.0;
        }
        let m = self.mean();
        self.sorted.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1) as f64
    }

    /// Lower empirical quantile: the `ceil(p n)`-th smallest point.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.n();
        let k = ((p * n as f64).ceil() as usize).clamp(1, n);
        self.sorted[k - 1]
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }
}

/// Fraction of the sample `≤ x`.
pub fn ecdf_eval(d: &EmpiricalDist, x: f64) -> f64 {
    d.count_le(x) as f64 / d.n() as f64
}
