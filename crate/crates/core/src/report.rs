//! Pass/fail records shared by the verification routines.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// One verified property.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The mathematical statement being checked.
    #[serde(rename = "paper_ref")]
    pub reference: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, reference: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            reference: reference.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        }
    }

    pub fn skip(name: &str, reference: &str, detail: impl Into<String>) -> Self {
        Check { name: name.into(), reference: reference.into(), status: Status::Skip, detail: detail.into() }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

/// Collects at most `cap` violation messages while counting all of them.
#[derive(Clone, Debug, Default)]
pub(crate) struct Violations {
    pub count: u64,
    pub first: Vec<String>,
}

impl Violations {
    pub const CAP: usize = 8;

    pub fn record(&mut self, msg: impl FnOnce() -> String) {
        self.count += 1;
        if self.first.len() < Self::CAP {
            self.first.push(msg());
        }
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn summary(&self, checked: u64, what: &str) -> String {
        if self.count == 0 {
            format!("{checked} {what} checked, no violations")
        } else {
            format!("{} of {checked} {what} violate: {}", self.count, self.first.join("; "))
        }
    }
}
