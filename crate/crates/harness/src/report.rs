use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::SuiteConfig;
use crate::error::Result;

/// Everything needed to replay one failing trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureWitness {
    pub seed: u64,
    pub stream: u64,
    pub trial: u64,
    pub message: String,
    pub inputs: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub label: String,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    /// Trials that hit a recoverable domain violation and were redrawn.
    pub resamples: usize,
    pub ok: bool,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub failures: Vec<FailureWitness>,
    #[serde(skip_serializing_if = "Value::is_null", default)]
    pub details: Value,
}

impl CaseResult {
    pub fn new(label: impl Into<String>) -> Self {
        CaseResult {
            label: label.into(),
            trials: 0,
            passed: 0,
            failed: 0,
            resamples: 0,
            ok: false,
            failures: Vec::new(),
            details: Value::Null,
        }
    }

    pub fn pass(&mut self) {
        self.trials += 1;
        self.passed += 1;
    }

    pub fn fail(&mut self, witness: FailureWitness) {
        self.trials += 1;
        self.failed += 1;
        self.failures.push(witness);
    }

    /// Passes when nothing failed and at most 1% of trials needed a redraw.
    pub fn finish(mut self) -> Self {
        self.ok = self.failed == 0 && self.resamples * 100 <= self.trials;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub passed: usize,
    pub failed: usize,
    pub resamples: usize,
    pub ok: bool,
    pub elapsed_ms: u64,
    pub cases: Vec<CaseResult>,
}

impl SuiteResult {
    pub fn new(suite: &str, cases: Vec<CaseResult>, elapsed_ms: u64) -> Self {
        SuiteResult {
            suite: suite.to_string(),
            passed: cases.iter().map(|c| c.passed).sum(),
            failed: cases.iter().map(|c| c.failed).sum(),
            resamples: cases.iter().map(|c| c.resamples).sum(),
            ok: cases.iter().all(|c| c.ok),
            elapsed_ms,
            cases,
        }
    }

    pub fn case(&self, label: &str) -> Option<&CaseResult> {
        self.cases.iter().find(|c| c.label == label)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub ok: bool,
    pub suites: Vec<SuiteResult>,
}

impl SuiteReport {
    pub fn new(config: SuiteConfig, suites: Vec<SuiteResult>) -> Self {
        SuiteReport { config, ok: suites.iter().all(|s| s.ok), suites }
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.suite == name)
    }

    /// A copy with timings zeroed, for comparing runs.
    pub fn without_timings(&self) -> Self {
        let mut copy = self.clone();
        for s in &mut copy.suites {
            s.elapsed_ms = 0;
        }
        copy
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}
