//! Pass/fail records shared by the identity, Monte Carlo and falsifier checks.

use std::collections::BTreeMap;

use serde::Serialize;

/// Where the largest residual of a check was found.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualLocation {
    pub row: usize,
    pub col: usize,
    pub p: (f64, f64),
    pub q: (f64, f64),
}

/// Outcome of one verification check. Field names are a stable JSON contract.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub pass: bool,
    pub max_residual: f64,
    pub residual_location: Option<ResidualLocation>,
    pub n_entries_tested: usize,
    pub n_entries_outside_band: usize,
    /// Absolute tolerance for deterministic checks.
    pub tolerance: Option<f64>,
    /// Band half-width in standard errors for statistical checks.
    pub confidence_sigmas: Option<f64>,
    /// Minimum fraction of entries that must fall inside their band.
    pub min_pass_fraction: Option<f64>,
    pub message: Option<String>,
    pub metadata: BTreeMap<String, String>,
}

impl VerificationReport {
    pub fn new(check_name: impl Into<String>) -> Self {
        VerificationReport {
            check_name: check_name.into(),
            pass: false,
            max_residual: 0.0,
            residual_location: None,
            n_entries_tested: 0,
            n_entries_outside_band: 0,
            tolerance: None,
            confidence_sigmas: None,
            min_pass_fraction: None,
            message: None,
            metadata: BTreeMap::new(),
        }
    }

    /// A failed report carrying the error that prevented the check from running.
    pub fn failure(check_name: impl Into<String>, message: impl Into<String>) -> Self {
        VerificationReport {
            message: Some(message.into()),
            ..VerificationReport::new(check_name)
        }
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.metadata.insert(key.into(), value.to_string());
        self
    }

    /// One summary line, `PASS`/`FAIL` first.
    pub fn summary(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let mut line = format!(
            "{verdict} {}: max_residual={:e}, outside={}/{}",
            self.check_name, self.max_residual, self.n_entries_outside_band, self.n_entries_tested
        );
        if let Some(msg) = &self.message {
            line.push_str(&format!(" ({msg})"));
        }
        line
    }
}
