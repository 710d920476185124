//! The machine-readable report every command can write.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use localcolor_core::constants::Breach;
use localcolor_core::RoundStats;

/// JSON Schema for [`RunReport`], also printed by `localcolor schema`.
pub const RUN_REPORT_SCHEMA: &str = include_str!("../schema/run-report.schema.json");

/// One verification verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Verdict {
    pub fn new(check: &str, pass: bool, detail: Option<String>) -> Verdict {
        Verdict { check: check.into(), pass, detail }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    /// The arguments after the program name, as given.
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub profile: Option<String>,
    pub outcome: String,
    pub exit_code: i32,
    pub stats: Option<RoundStats>,
    pub palette: Option<u64>,
    pub colors_used: Option<usize>,
    pub breaches: Vec<Breach>,
    /// Present (possibly empty) exactly when verification was requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<Vec<Verdict>>,
    /// Command-specific payload.
    pub details: Value,
    /// Only with `--timing`, so default reports are reproducible byte for
    /// byte.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl RunReport {
    pub fn new(command: &str, args: &[String]) -> RunReport {
        RunReport {
            command: command.into(),
            args: args.to_vec(),
            seed: None,
            profile: None,
            outcome: String::new(),
            exit_code: 0,
            stats: None,
            palette: None,
            colors_used: None,
            breaches: Vec::new(),
            verification: None,
            details: Value::Null,
            wall_time_ms: None,
        }
    }

    pub fn verified(&self) -> bool {
        self.verification.iter().flatten().all(|v| v.pass)
    }
}
