use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::RunConfig;

pub const SCHEMA: &str = "covariant-lab/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// Passes when `value < tolerance`.
    Below,
    /// Passes when `value > tolerance`.
    Above,
}

/// One verdict: a measured value against a tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// `None` when the measurement is not a finite number.
    pub value: Option<f64>,
    pub tolerance: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, relation: Relation, tolerance: f64) -> Self {
        let pass = value.is_finite()
            && match relation {
                Relation::Below => value < tolerance,
                Relation::Above => value > tolerance,
            };
        Self { name: name.into(), value: value.is_finite().then_some(value), tolerance, relation, pass }
    }

    pub fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(name, value, Relation::Below, tolerance)
    }

    pub fn above(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self::new(name, value, Relation::Above, tolerance)
    }

    /// A boolean verdict recorded as value 1 (true) or 0 (false).
    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self::new(name, if ok { 1.0 } else { 0.0 }, Relation::Above, 0.5)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub schema: String,
    pub command: String,
    pub config: RunConfig,
    pub results: Value,
    pub checks: Vec<Check>,
    /// Conjunction of all check verdicts.
    pub pass: bool,
    pub wall_time_ms: u64,
    pub notes: Vec<String>,
}

impl ReportEnvelope {
    pub fn new(command: &str, config: &RunConfig, results: Value, checks: Vec<Check>, notes: Vec<String>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self {
            schema: SCHEMA.to_string(),
            command: command.to_string(),
            config: config.clone(),
            results,
            checks,
            pass,
            wall_time_ms: 0,
            notes,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelope serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}
