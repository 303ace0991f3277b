//! Experiment reports.
//!
//! JSON schema (version 1):
//!
//! ```text
//! {
//!   "schema_version": 1,
//!   "experiment": "<name>",
//!   "config": { ... },
//!   "checks": [
//!     { "id": "...", "anchor": "...", "values": { "<key>": <number|string|bool|array> },
//!       "threshold": <number|null>, "pass": <bool> }
//!   ],
//!   "pass": <bool>
//! }
//! ```
//!
//! Checks are sorted by id. The CSV flattening has one row per scalar value:
//! `experiment,check,anchor,key,value,threshold,pass`; arrays expand to keys
//! `key[i]`.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{LabError, Result};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub values: BTreeMap<String, Value>,
    pub threshold: Option<f64>,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            anchor: anchor.into(),
            values: BTreeMap::new(),
            threshold: None,
            pass: true,
        }
    }

    /// Records a value. Non-finite floats are stored as strings since JSON has no infinity.
    pub fn value(mut self, key: &str, v: impl Serialize) -> Self {
        let v = serde_json::to_value(v).unwrap_or(Value::Null);
        self.values.insert(key.to_string(), v);
        self
    }

    pub fn number(self, key: &str, x: f64) -> Self {
        if x.is_finite() {
            self.value(key, x)
        } else {
            self.value(key, x.to_string())
        }
    }

    pub fn numbers(self, key: &str, xs: &[f64]) -> Self {
        let v: Vec<Value> = xs
            .iter()
            .map(|&x| {
                if x.is_finite() {
                    Value::from(x)
                } else {
                    Value::from(x.to_string())
                }
            })
            .collect();
        self.value(key, v)
    }

    pub fn threshold(mut self, t: f64) -> Self {
        self.threshold = Some(t);
        self
    }

    pub fn pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    /// A check that failed with an error rather than a verdict.
    pub fn errored(id: impl Into<String>, anchor: impl Into<String>, err: &LabError) -> Self {
        Self::new(id, anchor).value("error", err.to_string()).pass(false)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub experiment: String,
    pub config: Value,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

impl ExperimentReport {
    pub fn new(experiment: &str, config: Value, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let pass = checks.iter().all(|c| c.pass);
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            experiment: experiment.to_string(),
            config,
            checks,
            pass,
        }
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let io = |e: csv::Error| LabError::Io(std::io::Error::other(e));
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["experiment", "check", "anchor", "key", "value", "threshold", "pass"])
            .map_err(io)?;
        for c in &self.checks {
            let threshold = c.threshold.map(|t| t.to_string()).unwrap_or_default();
            let mut rows = Vec::new();
            for (k, v) in &c.values {
                flatten(k, v, &mut rows);
            }
            for (key, value) in rows {
                w.write_record([
                    self.experiment.as_str(),
                    &c.id,
                    &c.anchor,
                    &key,
                    &value,
                    &threshold,
                    if c.pass { "true" } else { "false" },
                ])
                .map_err(io)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn flatten(key: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&format!("{key}[{i}]"), item, out);
            }
        }
        Value::Object(map) => {
            for (k, item) in map {
                flatten(&format!("{key}.{k}"), item, out);
            }
        }
        Value::String(s) => out.push((key.to_string(), s.clone())),
        other => out.push((key.to_string(), other.to_string())),
    }
}
