use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use cfl_core::report::{Check, Report};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    pub value: f64,
    pub tolerance: Option<f64>,
}

impl From<Check> for Verdict {
    fn from(c: Check) -> Self {
        Verdict { check: c.name, pass: c.pass, value: c.residual, tolerance: c.tolerance }
    }
}

/// What every subcommand prints on stdout. Field order is the key order.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub command: String,
    /// SHA-256 of the canonical inputs: arguments and file contents.
    pub inputs_digest: String,
    pub verdicts: Vec<Verdict>,
    pub data: Value,
    /// Seconds; the only field that differs between identical runs.
    pub wall_time: f64,
}

impl RunReport {
    pub fn new(command: &str, inputs: &Value) -> Self {
        let canonical = serde_json::to_vec(&serde_json::json!({ "command": command, "inputs": inputs })).expect("json");
        RunReport {
            command: command.to_string(),
            inputs_digest: hex::encode(Sha256::digest(&canonical)),
            verdicts: Vec::new(),
            data: Value::Null,
            wall_time: 0.0,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.verdicts.push(check.into());
    }

    pub fn extend(&mut self, report: Report) {
        self.verdicts.extend(report.checks.into_iter().map(Verdict::from));
    }

    /// Adds every check of `report` with `prefix` in front of its name.
    pub fn extend_prefixed(&mut self, prefix: &str, report: Report) {
        for c in report.checks {
            self.push(Check { name: format!("{prefix}{}", c.name), ..c });
        }
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for v in &self.verdicts {
            let tol = v.tolerance.map(|t| format!(" (tol {t:e})")).unwrap_or_default();
            out.push_str(&format!("{} {}: {:e}{tol}\n", if v.pass { "PASS" } else { "FAIL" }, v.check, v.value));
        }
        let failed = self.verdicts.iter().filter(|v| !v.pass).count();
        out.push_str(&format!("{}: {} checks, {failed} failed, {:.2}s\n", self.command, self.verdicts.len(), self.wall_time));
        out
    }
}

/// SHA-256 of a file's bytes, for inclusion in the inputs.
pub fn file_digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
