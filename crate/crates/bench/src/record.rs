//! Per-run records and their CSV / JSON forms.

use std::{fs, io, path::Path};

use serde::{Deserialize, Serialize};
use steiner_core::Cost;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Timeout,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Timeout => "timeout",
            Status::Error => "error",
        }
    }
}

/// One (instance, algorithm) execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub class: String,
    /// Label such as `greedy`, `ir-k3` or `ir-k3-nocache`.
    pub algorithm: String,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub cost: Option<Cost>,
    pub best_known: Option<Cost>,
    pub ratio: Option<f64>,
    pub seconds: f64,
    pub status: Status,
    pub message: Option<String>,
}

impl RunRecord {
    pub fn new(instance: impl Into<String>, class: impl Into<String>, algorithm: impl Into<String>) -> Self {
        RunRecord {
            instance: instance.into(),
            class: class.into(),
            algorithm: algorithm.into(),
            k: None,
            seed: None,
            restarts: None,
            cost: None,
            best_known: None,
            ratio: None,
            seconds: 0.0,
            status: Status::Ok,
            message: None,
        }
    }

    /// Records a validated cost and derives the ratio when a reference exists.
    pub fn with_cost(mut self, cost: Cost, best_known: Option<Cost>) -> Self {
        self.cost = Some(cost);
        self.best_known = best_known;
        self.ratio = best_known.map(|b| cost as f64 / b as f64);
        self
    }

    pub fn solved(&self) -> bool {
        self.status == Status::Ok && self.ratio.is_some()
    }
}

/// Result row `instance,algorithm,cost,seconds,status`.
pub fn write_result(r: &RunRecord) -> String {
    let cost = match (r.status, r.cost) {
        (Status::Ok, Some(c)) => c.to_string(),
        _ => String::new(),
    };
    format!("{},{},{},{:.3},{}", r.instance, r.algorithm, cost, r.seconds, r.status.as_str())
}

pub const RESULT_HEADER: &str = "instance,algorithm,cost,seconds,status";

pub fn write_results(records: &[RunRecord]) -> String {
    let mut out = String::from(RESULT_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&write_result(r));
        out.push('\n');
    }
    out
}

pub fn records_to_csv(records: &[RunRecord]) -> io::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
    String::from_utf8(bytes).map_err(io::Error::other)
}

pub fn records_from_csv(text: &str) -> io::Result<Vec<RunRecord>> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect::<Result<_, _>>().map_err(io::Error::other)
}

/// Reads `.json` files as a JSON array and anything else as CSV.
pub fn read_records(path: &Path) -> io::Result<Vec<RunRecord>> {
    let text = fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).map_err(io::Error::other)
    } else {
        records_from_csv(&text)
    }
}
