//! Named pass/fail results shared by performance and feasibility reports.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn from_bool(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::NotApplicable => "n/a",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub verdict: Verdict,
    pub measured: Option<f64>,
    pub required: Option<f64>,
    /// Positive when the requirement is met with room to spare.
    pub margin: Option<f64>,
    pub note: Option<String>,
}

impl CheckResult {
    pub fn measured(
        name: &'static str,
        pass: bool,
        measured: f64,
        required: f64,
        margin: f64,
    ) -> Self {
        CheckResult {
            name,
            verdict: Verdict::from_bool(pass),
            measured: Some(measured),
            required: Some(required),
            margin: Some(margin),
            note: None,
        }
    }

    pub fn not_applicable(name: &'static str, note: impl Into<String>) -> Self {
        CheckResult {
            name,
            verdict: Verdict::NotApplicable,
            measured: None,
            required: None,
            margin: None,
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

/// An ordered list of checks, one entry per configured check.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeasibilityReport {
    pub checks: Vec<CheckResult>,
}

impl FeasibilityReport {
    pub fn push(&mut self, check: CheckResult) {
        debug_assert!(
            self.get(check.name).is_none(),
            "duplicate check {}",
            check.name
        );
        self.checks.push(check);
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// True when no check failed. Not-applicable checks do not count against.
    pub fn all_pass(&self) -> bool {
        !self.checks.iter().any(CheckResult::failed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.failed())
    }
}
