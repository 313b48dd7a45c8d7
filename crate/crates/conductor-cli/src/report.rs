//! Report records and deterministic JSON serialization.
//!
//! Identical script + configuration produces byte-identical JSON: keys are
//! emitted in sorted order, arrays in script order, and timings are kept
//! out of the stable output unless explicitly requested.

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

/// One executed statement.
#[derive(Debug, Clone)]
pub struct Record {
    pub index: usize,
    pub command: String,
    pub op: String,
    pub anchor: Option<String>,
    pub status: Status,
    pub details: Vec<(String, Value)>,
    pub witnesses: Vec<String>,
    pub bound_exceeded: bool,
    pub timing_ms: Option<u128>,
}

impl Record {
    pub fn to_json(&self, with_timings: bool) -> Value {
        let mut obj = Map::new();
        obj.insert("index".into(), json!(self.index));
        obj.insert("command".into(), json!(self.command));
        obj.insert("op".into(), json!(self.op));
        obj.insert(
            "anchor".into(),
            match &self.anchor {
                Some(a) => json!(a),
                None => Value::Null,
            },
        );
        obj.insert("status".into(), json!(self.status.as_str()));
        let mut details = Map::new();
        for (k, v) in &self.details {
            details.insert(k.clone(), v.clone());
        }
        obj.insert("details".into(), Value::Object(details));
        obj.insert("witnesses".into(), json!(self.witnesses));
        if self.bound_exceeded {
            obj.insert("bound_exceeded".into(), json!(true));
        }
        if with_timings {
            if let Some(t) = self.timing_ms {
                obj.insert("timing_ms".into(), json!(t as u64));
            }
        }
        Value::Object(obj)
    }
}

/// The full report of a run.
#[derive(Debug, Clone)]
pub struct Report {
    pub field: String,
    pub degree_bound: u32,
    pub probe_degree: u32,
    pub seed: u64,
    pub fail_fast: bool,
    pub records: Vec<Record>,
}

impl Report {
    pub fn any_fail(&self) -> bool {
        self.records.iter().any(|r| r.status == Status::Fail)
    }

    pub fn any_error(&self) -> bool {
        self.records.iter().any(|r| r.status == Status::Error)
    }

    pub fn any_bound_exceeded(&self) -> bool {
        self.records.iter().any(|r| r.bound_exceeded)
    }

    /// Exit code: 0 all-pass, 1 check failure, 3 any bound exceeded.
    /// (2 is reserved for usage and parse errors, decided by the caller.)
    pub fn exit_code(&self) -> i32 {
        if self.any_bound_exceeded() {
            3
        } else if self.any_fail() || self.any_error() {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self, with_timings: bool) -> Value {
        let mut config = Map::new();
        config.insert("degree_bound".into(), json!(self.degree_bound));
        config.insert("fail_fast".into(), json!(self.fail_fast));
        config.insert("field".into(), json!(self.field));
        config.insert("probe_degree".into(), json!(self.probe_degree));
        config.insert("seed".into(), json!(self.seed));
        let mut summary = Map::new();
        let count = |s: Status| {
            self.records
                .iter()
                .filter(|r| r.status == s)
                .count()
        };
        summary.insert("error".into(), json!(count(Status::Error)));
        summary.insert("fail".into(), json!(count(Status::Fail)));
        summary.insert("pass".into(), json!(count(Status::Pass)));
        let mut obj = Map::new();
        obj.insert("schema".into(), json!(1));
        obj.insert("config".into(), Value::Object(config));
        obj.insert(
            "records".into(),
            Value::Array(self.records.iter().map(|r| r.to_json(with_timings)).collect()),
        );
        obj.insert("summary".into(), Value::Object(summary));
        Value::Object(obj)
    }

    pub fn to_json_string(&self, with_timings: bool) -> String {
        serde_json::to_string_pretty(&self.to_json(with_timings)).expect("serializable")
            + "\n"
    }

    /// One line per record for the terminal.
    pub fn human(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let anchor = r
                .anchor
                .as_deref()
                .map(|a| format!("  [{a}]"))
                .unwrap_or_default();
            out.push_str(&format!(
                "[{:>3}] {:<5} {}{}\n",
                r.index,
                r.status.as_str().to_uppercase(),
                r.command,
                anchor
            ));
            for w in &r.witnesses {
                out.push_str(&format!("      witness: {w}\n"));
            }
        }
        let code = self.exit_code();
        out.push_str(&format!(
            "{} records, {} pass, {} fail, {} error; exit {}\n",
            self.records.len(),
            self.records.iter().filter(|r| r.status == Status::Pass).count(),
            self.records.iter().filter(|r| r.status == Status::Fail).count(),
            self.records.iter().filter(|r| r.status == Status::Error).count(),
            code
        ));
        out
    }
}
