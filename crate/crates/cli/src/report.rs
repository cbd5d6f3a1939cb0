//! Plain-text and JSON rendering of reproduction reports.

use std::fmt::Write;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub computed: String,
    pub expected: String,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, computed: impl Into<String>, expected: impl Into<String>, pass: bool) -> Self {
        Self {
            name: name.into(),
            computed: computed.into(),
            expected: expected.into(),
            pass,
        }
    }

    /// |computed − target| ≤ rtol·|target|.
    pub fn relative(name: impl Into<String>, computed: f64, target: f64, rtol: f64) -> Self {
        let err = (computed - target).abs() / target.abs();
        Self::new(
            name,
            format!("{computed:.6} ({:+.2}%)", 100.0 * (computed - target) / target.abs()),
            format!("{target} ± {}%", 100.0 * rtol),
            err <= rtol,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub title: String,
    /// Header of the label column followed by the value columns.
    pub columns: Vec<String>,
    pub rows: Vec<(String, Vec<f64>)>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub case: String,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(case: &str) -> Self {
        Self {
            case: case.to_string(),
            ..Default::default()
        }
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn table(&mut self, title: &str, columns: &[&str], rows: Vec<(String, Vec<f64>)>) {
        self.tables.push(Table {
            title: title.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
        });
    }

    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.pass).count()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let title = format!("reproduce {}", self.case);
        writeln!(s, "{title}\n{}\n", "=".repeat(title.len())).unwrap();
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            writeln!(
                s,
                "{tag}  {:width$}  computed {}  expected {}",
                c.name, c.computed, c.expected
            )
            .unwrap();
        }
        writeln!(s, "\n{} of {} checks passed", self.passed(), self.checks.len()).unwrap();
        for t in &self.tables {
            writeln!(s, "\n{}", t.title).unwrap();
            let label_w = t
                .rows
                .iter()
                .map(|(l, _)| l.len())
                .chain(t.columns.first().map(|c| c.len()))
                .max()
                .unwrap_or(0);
            let mut header = String::new();
            for (i, c) in t.columns.iter().enumerate() {
                if i == 0 {
                    write!(header, "{c:label_w$}").unwrap();
                } else {
                    write!(header, "  {c:>16}").unwrap();
                }
            }
            writeln!(s, "{}", header.trim_end()).unwrap();
            for (label, values) in &t.rows {
                write!(s, "{label:label_w$}").unwrap();
                for v in values {
                    write!(s, "  {:>16}", format!("{v:.6}")).unwrap();
                }
                s.push('\n');
            }
        }
        if !self.notes.is_empty() {
            writeln!(s, "\nnotes").unwrap();
            for n in &self.notes {
                writeln!(s, "- {n}").unwrap();
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_check_uses_target_scale() {
        assert!(Check::relative("a", 104.0, 100.0, 0.05).pass);
        assert!(!Check::relative("a", 106.0, 100.0, 0.05).pass);
    }

    #[test]
    fn text_lists_every_check() {
        let mut r = Report::new("demo");
        r.check(Check::new("one", "1", "1", true));
        r.check(Check::new("two", "2", "3", false));
        let t = r.to_text();
        assert!(t.contains("PASS  one"));
        assert!(t.contains("FAIL  two"));
        assert!(t.contains("1 of 2 checks passed"));
    }
}
