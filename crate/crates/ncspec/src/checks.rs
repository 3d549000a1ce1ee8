//! Named numerical checks with residuals, the common currency of every
//! verifier in the crate.

use crate::linalg::Closeness;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

/// One check: a stable identifier, a human description, and the residual
/// measured against its threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: String,
    pub description: String,
    pub residual: f64,
    pub threshold: f64,
}

impl Check {
    pub fn new(id: impl Into<String>, description: impl Into<String>, c: Closeness) -> Self {
        Self {
            id: id.into(),
            description: description.into(),
            residual: c.residual,
            threshold: c.threshold,
        }
    }

    /// An entry for a condition that holds automatically in finite dimension.
    pub fn trivial(id: impl Into<String>, description: impl Into<String>, threshold: f64) -> Self {
        Self {
            id: id.into(),
            description: format!("{} (trivial in finite dimension)", description.into()),
            residual: 0.0,
            threshold,
        }
    }

    pub fn verdict(&self) -> Verdict {
        if self.residual <= self.threshold {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict() == Verdict::Pass
    }
}

/// An ordered list of checks.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CheckList {
    pub checks: Vec<Check>,
}

impl CheckList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn record(&mut self, id: &str, description: &str, c: Closeness) {
        self.push(Check::new(id, description, c));
    }

    pub fn extend(&mut self, other: CheckList) {
        self.checks.extend(other.checks);
    }

    /// Appends `other` with every id prefixed by `prefix.`.
    pub fn extend_prefixed(&mut self, prefix: &str, other: CheckList) {
        for mut c in other.checks {
            c.id = format!("{prefix}.{}", c.id);
            self.checks.push(c);
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }

    /// Largest residual among checks whose id starts with `prefix`.
    pub fn worst(&self, prefix: &str) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.id.starts_with(prefix))
            .map(|c| c.residual)
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_follows_threshold() {
        let ok = Check::new("a", "x", Closeness::new(1e-12, 1e-10));
        let bad = Check::new("b", "y", Closeness::new(1e-3, 1e-10));
        assert!(ok.passed());
        assert!(!bad.passed());
        let mut list = CheckList::new();
        list.push(ok);
        assert!(list.all_pass());
        list.push(bad);
        assert!(!list.all_pass());
        assert_eq!(list.failures().count(), 1);
        assert_eq!(list.worst(""), 1e-3);
    }

    #[test]
    fn trivial_checks_pass() {
        let t = Check::trivial("n1.summability", "heat kernel trace class", 1e-10);
        assert!(t.passed());
        assert!(t.description.contains("trivial"));
    }
}
