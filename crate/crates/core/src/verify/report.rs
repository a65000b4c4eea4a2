use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::oracle::MembershipVerdict;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail(String),
    Skipped(String),
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail(_) => "fail",
            Status::Skipped(_) => "skipped",
        }
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            Status::Pass => None,
            Status::Fail(r) | Status::Skipped(r) => Some(r),
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Status::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Status::Fail(_))
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.reason() {
            None => f.write_str(self.as_str()),
            Some(r) => write!(f, "{} ({r})", self.as_str()),
        }
    }
}

/// One check of a report.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    pub params: Vec<(String, String)>,
    pub status: Status,
    pub witness: Vec<(String, String)>,
    pub certificates: Vec<MembershipVerdict>,
    pub elapsed_ms: f64,
    /// The failure came from a resource limit rather than a refuted claim.
    pub resource: bool,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>) -> Self {
        CheckRecord {
            name: name.into(),
            params: Vec::new(),
            status: Status::Pass,
            witness: Vec::new(),
            certificates: Vec::new(),
            elapsed_ms: 0.0,
            resource: false,
        }
    }

    pub fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.push((key.into(), alloc::format!("{value}")));
        self
    }

    pub fn note(&mut self, key: &str, value: impl fmt::Display) {
        self.witness.push((key.into(), alloc::format!("{value}")));
    }

    /// Records a failure, keeping the first reason.
    pub fn fail(&mut self, reason: impl Into<String>) {
        if !self.status.is_fail() {
            self.status = Status::Fail(reason.into());
        }
    }

    pub fn skip(&mut self, reason: impl Into<String>) {
        self.status = Status::Skipped(reason.into());
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerificationReport {
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| !r.status.is_fail())
    }

    pub fn count(&self, status: &str) -> usize {
        self.records.iter().filter(|r| r.status.as_str() == status).count()
    }

    /// Failures that were all caused by resource limits.
    pub fn only_resource_failures(&self) -> bool {
        let mut any = false;
        for r in self.records.iter().filter(|r| r.status.is_fail()) {
            if !r.resource {
                return false;
            }
            any = true;
        }
        any
    }

    pub fn get(&self, name: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.status.is_fail())
    }
}

/// Source of wall time in milliseconds; the core has no clock of its own.
pub trait Clock {
    fn now_ms(&self) -> f64;
}

pub struct NoClock;

impl Clock for NoClock {
    fn now_ms(&self) -> f64 {
        0.0
    }
}
