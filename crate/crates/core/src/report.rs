//! Check records and their aggregation into a sorted, reproducible report.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use serde::Serialize;

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The check does not apply to this instance, e.g. a sign test in
    /// characteristic 2.
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub name: String,
    /// Instance index within its suite.
    pub index: u64,
    pub status: Status,
    /// The statement this check exercises.
    pub anchor: String,
    /// Witness or counterexample summary.
    pub summary: String,
    pub elapsed_ms: u64,
    /// The offending input, for replay, on failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<serde_json::Value>,
}

impl Record {
    /// Everything except timing, for reproducibility comparisons.
    pub fn fingerprint(&self) -> (String, u64, Status, String, String) {
        (self.name.clone(), self.index, self.status, self.anchor.clone(), self.summary.clone())
    }
}

/// What a single check produced before it is timed and named.
pub struct Outcome {
    pub status: Status,
    pub summary: String,
    pub instance: Option<serde_json::Value>,
}

impl Outcome {
    pub fn verdict(passed: bool, summary: impl Into<String>) -> Self {
        Self { status: if passed { Status::Pass } else { Status::Fail }, summary: summary.into(), instance: None }
    }

    pub fn skipped(summary: impl Into<String>) -> Self {
        Self { status: Status::Skipped, summary: summary.into(), instance: None }
    }

    /// Attaches the input when the check failed.
    pub fn with_instance(mut self, instance: impl FnOnce() -> serde_json::Value) -> Self {
        if self.status == Status::Fail {
            self.instance = Some(instance());
        }
        self
    }
}

/// Runs one check, turning errors and panics into failing records.
pub fn timed(name: &str, index: u64, anchor: &str, check: impl FnOnce() -> Result<Outcome>) -> Record {
    let start = Instant::now();
    let outcome = match catch_unwind(AssertUnwindSafe(check)) {
        Ok(Ok(o)) => o,
        Ok(Err(e)) => Outcome::verdict(false, format!("error: {e}")),
        Err(panic) => {
            let msg = panic.downcast_ref::<String>().cloned().or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default();
            Outcome::verdict(false, format!("panic: {msg}"))
        }
    };
    Record {
        name: name.to_string(),
        index,
        status: outcome.status,
        anchor: anchor.to_string(),
        summary: outcome.summary,
        elapsed_ms: start.elapsed().as_millis() as u64,
        instance: outcome.instance,
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub seed: u64,
    pub records: Vec<Record>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

impl Report {
    pub fn new(seed: u64, mut records: Vec<Record>) -> Self {
        records.sort_by(|a, b| (&a.name, a.index).cmp(&(&b.name, b.index)));
        Self { seed, records }
    }

    pub fn extend(&mut self, more: Vec<Record>) {
        self.records.extend(more);
        self.records.sort_by(|a, b| (&a.name, a.index).cmp(&(&b.name, b.index)));
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status != Status::Fail)
    }

    pub fn counts(&self) -> Counts {
        let mut c = Counts::default();
        for r in &self.records {
            match r.status {
                Status::Pass => c.pass += 1,
                Status::Fail => c.fail += 1,
                Status::Skipped => c.skipped += 1,
            }
        }
        c
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }
}
