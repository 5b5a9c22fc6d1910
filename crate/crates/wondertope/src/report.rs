//! Structured pass/fail records produced by every verifier.

use std::fmt;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub witness: Value,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

/// Checks in insertion order; `summary` always equals the tallies of `checks`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub title: String,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn new(title: impl Into<String>) -> Self {
        VerificationReport { schema: 1, title: title.into(), checks: vec![], summary: Summary::default() }
    }

    pub fn push(&mut self, name: impl Into<String>, status: Status, witness: Value) {
        match status {
            Status::Pass => self.summary.pass += 1,
            Status::Fail => self.summary.fail += 1,
            Status::Skipped => self.summary.skipped += 1,
        }
        self.checks.push(Check { name: name.into(), status, witness });
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool, witness: Value) -> bool {
        self.push(name, if ok { Status::Pass } else { Status::Fail }, witness);
        ok
    }

    pub fn skip(&mut self, name: impl Into<String>, reason: impl Into<String>) {
        self.push(name, Status::Skipped, Value::String(reason.into()));
    }

    /// Appends the checks of `other`, prefixing their names.
    pub fn merge(&mut self, prefix: &str, other: VerificationReport) {
        for c in other.checks {
            let name = if prefix.is_empty() { c.name } else { format!("{prefix}: {}", c.name) };
            self.push(name, c.status, c.witness);
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skip",
            };
            let w = match &c.witness {
                Value::Null => String::new(),
                Value::String(s) => format!("  {s}"),
                other => format!("  {other}"),
            };
            writeln!(f, "  [{tag}] {}{w}", c.name)?;
        }
        write!(
            f,
            "{} passed, {} failed, {} skipped",
            self.summary.pass, self.summary.fail, self.summary.skipped
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn summary_tracks_checks() {
        let mut r = VerificationReport::new("t");
        r.check("a", true, Value::Null);
        r.check("b", false, json!({"pole": 2}));
        r.skip("c", "n/a");
        assert_eq!(r.summary, Summary { pass: 1, fail: 1, skipped: 1 });
        assert!(!r.passed());
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["checks"][1]["status"], "fail");
    }
}
