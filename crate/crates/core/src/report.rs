//! Named pass/fail checks shared by the verification routines.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Size of the worst mismatch; 0 for exact checks that hold.
    pub residual: f64,
    /// Threshold `residual` was compared against, for tolerance checks.
    #[serde(default)]
    pub tolerance: Option<f64>,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, residual: f64) -> Self {
        Check { name: name.into(), pass, residual, tolerance: None }
    }

    /// Passes when `residual ≤ tol`.
    pub fn within(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Check { tolerance: Some(tol), ..Check::new(name, residual <= tol, residual) }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn worst_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}
