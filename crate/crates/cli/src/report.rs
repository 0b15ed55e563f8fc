//! Self-contained verification reports with deterministic serialization.
//!
//! Emitted files carry only reproducible content: keys are sorted, floats are
//! printed with 17 significant digits, and wall-clock timings stay on the
//! console (runs with the same config and seed produce byte-identical
//! artifacts).

use anyonfock::format_float;
use std::fmt::Write as _;

/// One named check: a computed value against an expected value at a
/// tolerance, plus the verdict and its wall-clock cost.
#[derive(Debug, Clone)]
pub struct CheckRecord {
    pub name: String,
    pub computed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Console-only; never serialized.
    pub runtime_ms: f64,
}

impl CheckRecord {
    /// Standard pass rule: `|computed - expected| <= tolerance`.
    pub fn within(name: impl Into<String>, computed: f64, expected: f64, tolerance: f64) -> Self {
        CheckRecord {
            name: name.into(),
            computed,
            expected,
            tolerance,
            pass: (computed - expected).abs() <= tolerance,
            runtime_ms: 0.0,
        }
    }

    /// Bound rule: `computed <= tolerance` (expected 0).
    pub fn bounded(name: impl Into<String>, computed: f64, tolerance: f64) -> Self {
        CheckRecord {
            name: name.into(),
            computed,
            expected: 0.0,
            tolerance,
            pass: computed <= tolerance,
            runtime_ms: 0.0,
        }
    }
}

/// Columnar side table (pmf comparisons, sweep gaps, ...).
#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    /// Pre-formatted cells (floats via [`format_float`]).
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    /// CSV rendering with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Outcome of one suite run.
#[derive(Debug, Clone)]
pub struct Report {
    pub suite: String,
    pub version: String,
    pub checks: Vec<CheckRecord>,
    pub tables: Vec<Table>,
    /// Flat echo of the resolved configuration.
    pub config: Vec<(String, String)>,
}

fn json_escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    for ch in text.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

impl Report {
    pub fn new(suite: impl Into<String>, config: Vec<(String, String)>) -> Self {
        Report {
            suite: suite.into(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            checks: Vec::new(),
            tables: Vec::new(),
            config,
        }
    }

    /// A suite passes iff every check passes.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn extend(&mut self, mut other: Report) {
        self.checks.append(&mut other.checks);
        self.tables.append(&mut other.tables);
    }

    /// Deterministic JSON document (sorted keys, fixed float format, no
    /// wall-clock fields).
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n  \"checks\": [\n");
        for (i, c) in self.checks.iter().enumerate() {
            let _ = write!(
                out,
                "    {{\"computed\": {}, \"expected\": {}, \"name\": \"{}\", \"pass\": {}, \"tolerance\": {}}}",
                format_float(c.computed),
                format_float(c.expected),
                json_escape(&c.name),
                c.pass,
                format_float(c.tolerance),
            );
            out.push_str(if i + 1 < self.checks.len() { ",\n" } else { "\n" });
        }
        out.push_str("  ],\n  \"config\": {");
        for (i, (k, v)) in self.config.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "\"{}\": \"{}\"", json_escape(k), json_escape(v));
        }
        let _ = write!(out, "}},\n  \"passed\": {},\n  \"suite\": \"{}\",\n", self.passed(), json_escape(&self.suite));
        out.push_str("  \"tables\": {");
        let mut tables: Vec<&Table> = self.tables.iter().collect();
        tables.sort_by(|a, b| a.name.cmp(&b.name));
        for (i, t) in tables.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "\"{}\": {{\"columns\": [", json_escape(&t.name));
            for (j, col) in t.columns.iter().enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "\"{}\"", json_escape(col));
            }
            out.push_str("], \"rows\": [");
            for (j, row) in t.rows.iter().enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                out.push('[');
                for (k, cell) in row.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    let _ = write!(out, "\"{}\"", json_escape(cell));
                }
                out.push(']');
            }
            out.push_str("]}");
        }
        let _ = write!(out, "}},\n  \"version\": \"{}\"\n}}\n", json_escape(&self.version));
        out
    }

    /// Checks as CSV (the verdict table).
    pub fn checks_csv(&self) -> String {
        let mut out = String::from("name,computed,expected,tolerance,pass\n");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                c.name,
                format_float(c.computed),
                format_float(c.expected),
                format_float(c.tolerance),
                c.pass
            );
        }
        out
    }

    /// Console summary, one line per check with timing.
    pub fn console_summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(
                out,
                "[{}] {:<58} computed {:>13.6e}  expected {:>13.6e}  tol {:>9.2e}  ({:.1} ms)",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.computed,
                c.expected,
                c.tolerance,
                c.runtime_ms
            );
        }
        let _ = writeln!(
            out,
            "suite {}: {} of {} checks passed",
            self.suite,
            self.checks.iter().filter(|c| c.pass).count(),
            self.checks.len()
        );
        out
    }
}

/// Minimal re-parse of an emitted report for the `report` subcommand: the
/// verdict plus per-check lines, straight from the JSON.
pub fn summarize_json(text: &str) -> anyhow::Result<String> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let mut out = String::new();
    let suite = value["suite"].as_str().unwrap_or("?");
    let passed = value["passed"].as_bool().unwrap_or(false);
    let checks = value["checks"].as_array().cloned().unwrap_or_default();
    for c in &checks {
        let _ = writeln!(
            out,
            "[{}] {:<58} computed {:>13.6e}  expected {:>13.6e}  tol {:>9.2e}",
            if c["pass"].as_bool().unwrap_or(false) {
                "PASS"
            } else {
                "FAIL"
            },
            c["name"].as_str().unwrap_or("?"),
            c["computed"].as_f64().unwrap_or(f64::NAN),
            c["expected"].as_f64().unwrap_or(f64::NAN),
            c["tolerance"].as_f64().unwrap_or(f64::NAN),
        );
    }
    let _ = writeln!(
        out,
        "suite {suite}: {} ({} checks)",
        if passed { "PASS" } else { "FAIL" },
        checks.len()
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_deterministic_and_reparses() {
        let mut r = Report::new("demo", vec![("run.seed".into(), "7".into())]);
        r.checks.push(CheckRecord::within("alpha", 1.0 + 1e-13, 1.0, 1e-12));
        r.checks.push(CheckRecord::bounded("beta", 0.5, 0.25));
        let mut t = Table::new("sweep", &["kappa", "gap"]);
        t.push_row(vec!["10".into(), format_float(0.125)]);
        r.tables.push(t);
        let a = r.to_json();
        let b = r.to_json();
        assert_eq!(a, b);
        let value: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(value["passed"], serde_json::Value::Bool(false));
        assert_eq!(value["checks"][0]["name"], "alpha");
        let reparsed = value["checks"][0]["computed"].as_f64().unwrap();
        assert_eq!(reparsed, 1.0 + 1e-13);
        assert!(summarize_json(&a).unwrap().contains("[FAIL] beta"));
    }

    #[test]
    fn csv_has_header_and_rows() {
        let mut r = Report::new("demo", vec![]);
        r.checks.push(CheckRecord::within("gamma", 2.0, 2.0, 1e-9));
        let csv = r.checks_csv();
        assert!(csv.starts_with("name,computed,expected,tolerance,pass\n"));
        assert!(csv.contains("gamma"));
        assert!(csv.trim_end().ends_with("true"));
    }
}
