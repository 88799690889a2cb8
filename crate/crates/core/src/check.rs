use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

/// Outcome of one inequality or identity verification.
///
/// `margin` is the signed slack in the natural units of the check (nats, Fisher units, trace
/// distance, ...). A check passes iff `margin >= -tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    /// Provenance: constructor labels, seeds and parameters.
    pub inputs: BTreeMap<String, String>,
    pub margin: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Non-normative rows are experiments and never gate a run.
    pub normative: bool,
    pub diagnostics: BTreeMap<String, f64>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, margin: f64, tolerance: f64) -> Self {
        CheckReport {
            name: name.into(),
            inputs: BTreeMap::new(),
            margin,
            tolerance,
            passed: margin >= -tolerance,
            normative: true,
            diagnostics: BTreeMap::new(),
        }
    }

    pub fn input(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.inputs.insert(key.into(), value.to_string());
        self
    }

    pub fn diag(mut self, key: impl Into<String>, value: f64) -> Self {
        self.diagnostics.insert(key.into(), value);
        self
    }

    /// Replaces the tolerance and re-evaluates the verdict.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.passed = self.margin >= -tolerance;
        self
    }

    pub fn non_normative(mut self) -> Self {
        self.normative = false;
        self
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} margin={:.3e} tol={:.1e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.margin,
            self.tolerance
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_margin_within_tolerance() {
        assert!(CheckReport::new("a", -1e-10, 1e-9).passed);
        assert!(!CheckReport::new("a", -2e-9, 1e-9).passed);
        assert!(!CheckReport::new("a", f64::NAN, 1e-9).passed);
    }
}
