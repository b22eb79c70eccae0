//! Check results and run reports shared by the verification suites and the CLI.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// One measured quantity against its tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    /// `pass` is `max_deviation <= tolerance`; NaN never passes.
    pub fn new(check: impl Into<String>, max_deviation: f64, tolerance: f64) -> Self {
        CheckResult { check: check.into(), max_deviation, tolerance, pass: max_deviation <= tolerance }
    }

    /// Boolean outcome recorded as deviation 0 (pass) or 1 (fail) at tolerance 0.
    pub fn boolean(check: impl Into<String>, ok: bool) -> Self {
        Self::new(check, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    /// Failure caused by an error rather than a measurement.
    pub fn failed(check: impl Into<String>, reason: &str) -> Self {
        CheckResult { check: format!("{}: {reason}", check.into()), max_deviation: f64::INFINITY, tolerance: 0.0, pass: false }
    }
}

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub parameters: Map<String, Value>,
    pub checks: Vec<CheckResult>,
    /// Seconds.
    pub wall_time: f64,
    pub pass: bool,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport {
            schema: SCHEMA_VERSION,
            command: command.into(),
            parameters: Map::new(),
            checks: Vec::new(),
            wall_time: 0.0,
            pass: true,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn push(&mut self, check: CheckResult) {
        self.pass &= check.pass;
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = CheckResult>) {
        for c in checks {
            self.push(c);
        }
    }

    pub fn finish(&mut self, started: Instant) {
        self.wall_time = started.elapsed().as_secs_f64();
        self.pass = self.checks.iter().all(|c| c.pass);
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        // infinities are not representable in JSON; serde_json writes them as null
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text table, one check per line.
    pub fn to_table(&self) -> String {
        let width = self.checks.iter().map(|c| c.check.len()).max().unwrap_or(5).max(5);
        let mut out = format!("{:<width$}  {:>12}  {:>9}  result\n", "check", "deviation", "tol");
        for c in &self.checks {
            out.push_str(&format!(
                "{:<width$}  {:>12.3e}  {:>9.1e}  {}\n",
                c.check,
                c.max_deviation,
                c.tolerance,
                if c.pass { "pass" } else { "FAIL" }
            ));
        }
        out.push_str(&format!(
            "{} checks, {} failed, {:.2}s\n",
            self.checks.len(),
            self.failures().count(),
            self.wall_time
        ));
        out
    }
}
