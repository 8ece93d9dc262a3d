use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    Ks1,
    Ks2,
    Chi2,
    TailFit,
    /// Deterministic or Monte Carlo quantity compared with a fixed tolerance.
    Tolerance,
}

/// Outcome of one statistical comparison.
///
/// For `TailFit` and `Tolerance` reports there is no p-value in
/// the usual sense; `p_value` is 1 when the tolerance holds and 0 otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub kind: TestKind,
    pub statistic: f64,
    pub p_value: f64,
    pub n: Vec<usize>,
    pub pass: bool,
    pub notes: Vec<String>,
    pub claim: String,
}

impl TestReport {
    pub fn new(kind: TestKind, statistic: f64, p_value: f64, n: Vec<usize>, alpha: f64) -> Self {
        let p_value = if p_value.is_nan() {
            0.0
        } else {
            p_value.clamp(0.0, 1.0)
        };
        TestReport {
            kind,
            statistic,
            p_value,
            n,
            pass: p_value > alpha,
            notes: Vec::new(),
            claim: String::new(),
        }
    }

    /// A pass/fail verdict from a tolerance check.
    pub fn verdict(kind: TestKind, statistic: f64, ok: bool, n: Vec<usize>) -> Self {
        let mut r = TestReport::new(kind, statistic, if ok { 1.0 } else { 0.0 }, n, 0.5);
        r.pass = ok;
        r
    }

    pub fn with_claim(mut self, claim: impl Into<String>) -> Self {
        self.claim = claim.into();
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_p_above_alpha() {
        assert!(TestReport::new(TestKind::Ks1, 0.1, 0.02, vec![10], 0.01).pass);
        assert!(!TestReport::new(TestKind::Ks1, 0.1, 0.01, vec![10], 0.01).pass);
        assert_eq!(
            TestReport::new(TestKind::Ks1, 0.1, 1.5, vec![10], 0.01).p_value,
            1.0
        );
        assert_eq!(
            TestReport::new(TestKind::Ks1, 0.1, f64::NAN, vec![10], 0.01).p_value,
            0.0
        );
    }

    #[test]
    fn json_fields() {
        let r = TestReport::verdict(TestKind::Tolerance, 0.25, true, vec![1])
            .with_claim("mills-integral")
            .with_note("abs error 1e-12");
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in [
            "kind",
            "statistic",
            "p_value",
            "n",
            "pass",
            "notes",
            "claim",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["kind"], "tolerance");
        assert_eq!(v["pass"], true);
        let back: TestReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
