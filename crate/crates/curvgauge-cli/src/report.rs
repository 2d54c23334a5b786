//! Report schema shared by every subcommand.
//!
//! The JSON layout is part of the external contract (see the repository
//! README): a flat object with a `checks` array, camelCase field names,
//! and `wallTimeMs`/`toolVersion` as the only fields that may differ
//! between reruns of identical flags.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub tool_version: &'static str,
    pub command: String,
    pub rng: &'static str,
    pub seed: u64,
    pub config: Value,
    pub checks: Vec<Check>,
    pub summary: Summary,
    pub wall_time_ms: u64,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

impl Check {
    /// A residual-style check: passes when `worst <= tol`.
    pub fn residual(name: &str, worst: f64, tol: f64) -> Check {
        Check {
            name: name.to_string(),
            pass: worst <= tol,
            worst_residual: Some(worst),
            tolerance: Some(tol),
            detail: None,
        }
    }

    /// A floor-style check: passes when `value >= floor`. The residual
    /// column records the value itself.
    pub fn floor(name: &str, value: f64, floor: f64) -> Check {
        Check {
            name: name.to_string(),
            pass: value >= floor,
            worst_residual: Some(value),
            tolerance: Some(floor),
            detail: None,
        }
    }

    pub fn boolean(name: &str, pass: bool) -> Check {
        Check {
            name: name.to_string(),
            pass,
            worst_residual: None,
            tolerance: None,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: Value) -> Check {
        self.detail = Some(detail);
        self
    }
}

impl Report {
    pub fn new(command: &str, seed: u64, config: Value, checks: Vec<Check>) -> Report {
        let passed = checks.iter().filter(|c| c.pass).count();
        let failed = checks.len() - passed;
        Report {
            tool_version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            rng: curvgauge::rng::RNG_ALGORITHM,
            seed,
            config,
            checks,
            summary: Summary { passed, failed },
            wall_time_ms: 0,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    /// One line per check on stderr, JSON payload to the chosen sink.
    pub fn print_summary(&self) {
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            match (c.worst_residual, c.tolerance) {
                (Some(w), Some(t)) => {
                    eprintln!("{status} {} residual={w:.3e} tol={t:.3e}", c.name)
                }
                _ => eprintln!("{status} {}", c.name),
            }
        }
        eprintln!(
            "{} passed, {} failed ({} ms)",
            self.summary.passed, self.summary.failed, self.wall_time_ms
        );
    }
}
