//! Plain-text reports: one tab-separated record per line, fixed field order.
//!
//! ```text
//! ncspec-report 1
//! version 0.1.0
//! command verify-n1
//! input gallery two-point
//! option tol 1e-10
//! check <id> <residual> <threshold> <pass|fail> <description>
//! variant <name> <dirac residual> <dirac-bar residual> <equal|unequal|undecided> <valid|invalid>
//! example <name> <dim> <summary>
//! note <text>
//! summary <passed> <failed>
//! verdict <pass|fail>
//! ```

use std::fmt::Write;

use ncspec::{Check, CheckList, Variant};

pub const FORMAT_VERSION: u32 = 1;

/// Relation between a product variant and the transported product
/// extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Equal,
    Unequal,
    Undecided,
}

impl Relation {
    /// `Equal` within `eq_tol`, `Unequal` beyond `witness`.
    pub fn classify(residual: f64, eq_tol: f64, witness: f64) -> Self {
        if residual <= eq_tol {
            Relation::Equal
        } else if residual > witness {
            Relation::Unequal
        } else {
            Relation::Undecided
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Equal => "equal",
            Relation::Unequal => "unequal",
            Relation::Undecided => "undecided",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariantRow {
    pub variant: Variant,
    pub dirac: f64,
    pub dirac_bar: f64,
    pub relation: Relation,
    /// Whether the variant's product passes every N=(1,1) check.
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleRow {
    pub name: String,
    pub dim: usize,
    pub summary: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub input: String,
    pub options: Vec<(String, String)>,
    pub checks: CheckList,
    pub variants: Vec<VariantRow>,
    pub examples: Vec<ExampleRow>,
    pub notes: Vec<String>,
    /// Set when a condition outside the check list fails.
    pub extra_failure: bool,
}

impl Report {
    pub fn new(command: &str, input: impl Into<String>) -> Self {
        Self {
            command: command.to_string(),
            input: input.into(),
            options: Vec::new(),
            checks: CheckList::new(),
            variants: Vec::new(),
            examples: Vec::new(),
            notes: Vec::new(),
            extra_failure: false,
        }
    }

    pub fn option(&mut self, key: &str, value: impl ToString) {
        self.options.push((key.to_string(), value.to_string()));
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.all_pass() && !self.extra_failure
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "ncspec-report {FORMAT_VERSION}");
        let _ = writeln!(out, "version {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "command {}", self.command);
        let _ = writeln!(out, "input {}", clean(&self.input));
        for (k, v) in &self.options {
            let _ = writeln!(out, "option {k} {}", clean(v));
        }
        for c in &self.checks.checks {
            out.push_str(&check_line(c));
        }
        for v in &self.variants {
            let _ = writeln!(
                out,
                "variant\t{}\t{:.6e}\t{:.6e}\t{}\t{}",
                v.variant,
                v.dirac,
                v.dirac_bar,
                v.relation.as_str(),
                if v.valid { "valid" } else { "invalid" }
            );
        }
        for e in &self.examples {
            let _ = writeln!(out, "example\t{}\t{}\t{}", e.name, e.dim, clean(&e.summary));
        }
        for n in &self.notes {
            let _ = writeln!(out, "note\t{}", clean(n));
        }
        let failed = self.checks.failures().count();
        let _ = writeln!(out, "summary\t{}\t{}", self.checks.len() - failed, failed);
        let _ = writeln!(out, "verdict\t{}", if self.passed() { "pass" } else { "fail" });
        out
    }
}

fn check_line(c: &Check) -> String {
    format!(
        "check\t{}\t{:.6e}\t{:.6e}\t{}\t{}\n",
        c.id,
        c.residual,
        c.threshold,
        c.verdict().as_str(),
        clean(&c.description)
    )
}

/// Keeps every record on one line with tab-free fields.
fn clean(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use ncspec::linalg::Closeness;

    #[test]
    fn renders_records_in_order() {
        let mut r = Report::new("verify-n1", "gallery trivial");
        r.option("tol", "1e-10");
        r.checks.record("n1.a", "first\tcheck", Closeness::new(0.0, 1e-10));
        r.checks.record("n1.b", "second", Closeness::new(2.0, 1e-10));
        r.note("line\nbreak");
        let text = r.render();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "ncspec-report 1");
        assert_eq!(lines[2], "command verify-n1");
        assert_eq!(lines[3], "input gallery trivial");
        assert_eq!(lines[4], "option tol 1e-10");
        assert_eq!(lines[5], "check\tn1.a\t0.000000e0\t1.000000e-10\tpass\tfirst check");
        assert_eq!(lines[6], "check\tn1.b\t2.000000e0\t1.000000e-10\tfail\tsecond");
        assert_eq!(lines[7], "note\tline break");
        assert_eq!(lines[8], "summary\t1\t1");
        assert_eq!(lines[9], "verdict\tfail");
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn extra_failure_fails_an_empty_report() {
        let mut r = Report::new("check-mult", "x");
        assert_eq!(r.exit_code(), 0);
        r.extra_failure = true;
        assert_eq!(r.exit_code(), 1);
        assert!(r.render().ends_with("verdict\tfail\n"));
    }

    #[test]
    fn relation_thresholds() {
        assert_eq!(Relation::classify(1e-12, 1e-10, 1e-6), Relation::Equal);
        assert_eq!(Relation::classify(1e-8, 1e-10, 1e-6), Relation::Undecided);
        assert_eq!(Relation::classify(1e-3, 1e-10, 1e-6), Relation::Unequal);
    }
}
