//! Replay reports: one record per assertion, note or failed definition.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
    Note,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
            Status::Note => "note",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Record {
    pub scenario: String,
    pub assertion: String,
    pub status: Status,
    pub detail: String,
    pub anchor: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReplayReport {
    pub records: Vec<Record>,
}

impl ReplayReport {
    pub fn count(&self, s: Status) -> usize {
        self.records.iter().filter(|r| r.status == s).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn success(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    pub fn extend(&mut self, other: ReplayReport) {
        self.records.extend(other.records);
    }

    /// JSON array of `{scenario, assertion, status, detail, anchor}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.records).expect("records serialize")
    }
}

impl fmt::Display for ReplayReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            write!(f, "{:<4}  {}: {}", r.status.as_str().to_uppercase(), r.scenario, r.assertion)?;
            if !r.detail.is_empty() {
                write!(f, "  [{}]", r.detail)?;
            }
            writeln!(f)?;
        }
        writeln!(
            f,
            "{} passed, {} failed, {} skipped, {} notes",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skip),
            self.count(Status::Note)
        )
    }
}
