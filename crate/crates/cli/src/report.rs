//! The JSON report shared by every subcommand.
//!
//! Exact rationals are serialized as `"p/q"` strings and Monte Carlo values as
//! mean, standard error and sample count, so every number is tagged exact or
//! estimated. Reports carry no timing unless requested, which keeps them
//! byte-reproducible for a fixed seed.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use chaos::Estimate;
use laws::rational::fmt_q;
use laws::Q;
use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

/// A numeric result, tagged by how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Value {
    /// Exact rational, rendered `p/q`.
    Exact { value: String },
    /// Monte Carlo estimate.
    Estimate { mean: f64, stderr: f64, n: usize },
    /// Deterministic floating-point quantity (quadrature, fitted slope, residual).
    Float { value: f64 },
    /// Boolean outcome without a numeric value.
    Flag { value: bool },
}

impl Value {
    pub fn exact(q: &Q) -> Self {
        Value::Exact { value: fmt_q(q) }
    }

    pub fn estimate(e: &Estimate) -> Self {
        Value::Estimate { mean: e.mean, stderr: e.stderr, n: e.n }
    }

    pub fn float(v: f64) -> Self {
        Value::Float { value: v }
    }

    pub fn flag(v: bool) -> Self {
        Value::Flag { value: v }
    }

    fn render(&self) -> String {
        match self {
            Value::Exact { value } => value.clone(),
            Value::Estimate { mean, stderr, .. } => format!("{mean:.6e} ± {stderr:.2e}"),
            Value::Float { value } => format!("{value:.6e}"),
            Value::Flag { value } => value.to_string(),
        }
    }
}

/// One named check with its value and verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: Value,
    /// Reference the value is compared with, when there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Value>,
    pub pass: bool,
}

/// One row of a convergence table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub depth: u32,
    pub estimate: f64,
    pub stderr: f64,
}

/// A named convergence table, exportable as CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub rows: Vec<TableRow>,
}

impl Table {
    /// CSV with columns `depth,estimate,stderr`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("depth,estimate,stderr\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{:e},{:e}", r.depth, r.estimate, r.stderr);
        }
        out
    }
}

/// Overall verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Result of one experiment, or of a suite when `sections` is non-empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    /// Command path, e.g. `chaos qv`.
    pub command: String,
    /// Echo of the effective configuration.
    pub config: BTreeMap<String, Json>,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<Table>,
    /// Command-specific payload (polynomial tables, tuple laws, ...).
    #[serde(default, skip_serializing_if = "Json::is_null")]
    pub data: Json,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sections: Vec<ExperimentReport>,
    pub status: Status,
    /// Wall time in milliseconds, only when explicitly requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl ExperimentReport {
    pub fn new(command: &str) -> Self {
        ExperimentReport {
            command: command.to_string(),
            config: BTreeMap::new(),
            checks: Vec::new(),
            tables: Vec::new(),
            data: Json::Null,
            sections: Vec::new(),
            status: Status::Pass,
            wall_time_ms: None,
        }
    }

    /// Records a configuration entry.
    pub fn config(&mut self, key: &str, value: impl Into<Json>) -> &mut Self {
        self.config.insert(key.to_string(), value.into());
        self
    }

    /// Adds a check without a target.
    pub fn check(&mut self, name: impl Into<String>, value: Value, pass: bool) -> &mut Self {
        self.checks.push(Check { name: name.into(), value, target: None, pass });
        self
    }

    /// Adds a check compared with a target.
    pub fn check_against(&mut self, name: impl Into<String>, value: Value, target: Value, pass: bool) -> &mut Self {
        self.checks.push(Check { name: name.into(), value, target: Some(target), pass });
        self
    }

    /// Sets `status` from the checks and sections.
    pub fn finish(mut self) -> Self {
        let ok = self.checks.iter().all(|c| c.pass) && self.sections.iter().all(|s| s.status == Status::Pass);
        self.status = if ok { Status::Pass } else { Status::Fail };
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Looks up a check by name, searching sections too.
    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .or_else(|| self.sections.iter().find_map(|s| s.find(name)))
    }

    /// First convergence table, searching sections too.
    pub fn first_table(&self) -> Option<&Table> {
        self.tables.first().or_else(|| self.sections.iter().find_map(|s| s.first_table()))
    }

    /// Pretty JSON followed by a newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    /// Plain-text summary: one line per check, then any text payload.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(&mut out, 0);
        out
    }

    fn write_text(&self, out: &mut String, indent: usize) {
        let pad = " ".repeat(indent);
        let verdict = |p: bool| if p { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{pad}[{}] {}", verdict(self.passed()), self.command);
        if let Some(text) = self.data.get("text").and_then(Json::as_str) {
            for line in text.lines() {
                let _ = writeln!(out, "{pad}  {line}");
            }
        }
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let target = c.target.as_ref().map(|t| format!("  (target {})", t.render())).unwrap_or_default();
            let _ = writeln!(out, "{pad}  {} {:<width$}  {}{target}", verdict(c.pass), c.name, c.value.render());
        }
        for s in &self.sections {
            s.write_text(out, indent + 2);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use laws::rational::q;

    #[test]
    fn round_trips_through_json() {
        let mut r = ExperimentReport::new("demo");
        r.config("seed", 42).config("law", "normal");
        r.check("exact", Value::exact(&q(-3, 7)), true);
        r.check_against(
            "mc",
            Value::Estimate { mean: 0.1 + 0.2, stderr: 1.0 / 3.0, n: 10 },
            Value::float(0.3),
            true,
        );
        r.check("flag", Value::flag(false), false);
        r.tables.push(Table { name: "t".into(), rows: vec![TableRow { depth: 3, estimate: 1e-7, stderr: 2.5 }] });
        let r = r.finish();
        assert_eq!(r.status, Status::Fail);
        let back: ExperimentReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn csv_has_the_documented_columns() {
        let t = Table { name: "x".into(), rows: vec![TableRow { depth: 2, estimate: 0.5, stderr: 0.25 }] };
        assert_eq!(t.to_csv(), "depth,estimate,stderr\n2,5e-1,2.5e-1\n");
    }
}
