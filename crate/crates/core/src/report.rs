//! Check results shared by the verification suites.

use std::fmt;
use std::time::Duration;

use crate::exact::RatK;
use crate::wick::VertexField;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    Warning,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Warning => "warning",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub id: String,
    /// Short description of the statement being checked.
    pub anchor: String,
    pub status: Status,
    pub witness: Option<String>,
}

impl CheckResult {
    pub fn pass(id: impl Into<String>, anchor: impl Into<String>) -> Self {
        CheckResult { id: id.into(), anchor: anchor.into(), status: Status::Pass, witness: None }
    }

    pub fn fail(id: impl Into<String>, anchor: impl Into<String>, witness: impl Into<String>) -> Self {
        CheckResult { id: id.into(), anchor: anchor.into(), status: Status::Fail, witness: Some(witness.into()) }
    }

    pub fn with_status(id: impl Into<String>, anchor: impl Into<String>, status: Status, witness: Option<String>) -> Self {
        CheckResult { id: id.into(), anchor: anchor.into(), status, witness }
    }

    pub fn from_bool(id: impl Into<String>, anchor: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) -> Self {
        if ok {
            CheckResult::pass(id, anchor)
        } else {
            CheckResult::fail(id, anchor, witness())
        }
    }

    /// Passes when the two fields are identical; the witness is the difference.
    pub fn fields(id: impl Into<String>, anchor: impl Into<String>, lhs: &VertexField, rhs: &VertexField) -> Self {
        let diff = lhs.checked_add(&rhs.scale_i(-1));
        match diff {
            Ok(d) if d.is_zero() => CheckResult::pass(id, anchor),
            Ok(d) => CheckResult::fail(id, anchor, format!("difference {:?}", d)),
            Err(e) => CheckResult::fail(id, anchor, e.to_string()),
        }
    }

    pub fn scalars(id: impl Into<String>, anchor: impl Into<String>, lhs: &RatK, rhs: &RatK) -> Self {
        CheckResult::from_bool(id, anchor, lhs == rhs, || format!("{} != {}", lhs, rhs))
    }

    pub fn from_result(id: impl Into<String>, anchor: impl Into<String>, r: crate::Result<CheckResult>) -> Self {
        let id = id.into();
        let anchor = anchor.into();
        match r {
            Ok(c) => c,
            Err(e) => CheckResult::fail(id, anchor, format!("error: {}", e)),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<CheckResult>,
    pub elapsed: Duration,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report { suite: suite.into(), checks: Vec::new(), elapsed: Duration::ZERO }
    }

    pub fn push(&mut self, c: CheckResult) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = CheckResult>) {
        self.checks.extend(cs);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| c.status == Status::Fail).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::RatK;

    #[test]
    fn counts_and_witnesses() {
        let mut r = Report::new("s");
        r.push(CheckResult::pass("a", "x"));
        r.push(CheckResult::from_bool("b", "x", false, || "why".into()));
        r.push(CheckResult::scalars("c", "x", &RatK::k(), &RatK::k()));
        r.push(CheckResult::from_result("d", "x", Err(crate::Error::Undefined("no".into()))));
        assert_eq!(r.count(Status::Pass), 2);
        assert_eq!(r.count(Status::Fail), 2);
        assert!(!r.passed());
        assert_eq!(r.failures()[0].witness.as_deref(), Some("why"));
        assert_eq!(Status::Warning.to_string(), "warning");
    }
}
