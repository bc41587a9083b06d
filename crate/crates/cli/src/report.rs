//! Experiment reports and their text, JSON and CSV renderings.

use std::fmt::Write as _;
use std::time::Duration;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "mvlab-report/1";

/// Text output lists per-instance results only up to this many rows.
const TEXT_RESULT_ROWS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub observed: Value,
    pub expected: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub seed: u64,
    pub parameters: Map<String, Value>,
    pub results: Vec<Value>,
    pub summary: Map<String, Value>,
    pub theory: Map<String, Value>,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Report {
            schema: SCHEMA,
            command: command.to_string(),
            seed,
            parameters: Map::new(),
            results: Vec::new(),
            summary: Map::new(),
            theory: Map::new(),
            checks: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.parameters.insert(key.to_string(), json!(value));
        self
    }

    pub fn stat(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.summary.insert(key.to_string(), json!(value));
        self
    }

    pub fn theory(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.theory.insert(key.to_string(), json!(value));
        self
    }

    pub fn check(&mut self, name: &str, pass: bool, observed: impl Serialize, expected: impl Into<String>) -> &mut Self {
        self.checks.push(Check { name: name.to_string(), pass, observed: json!(observed), expected: expected.into() });
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => self.render_text(),
            Format::Csv => self.render_csv(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} (seed {})", self.command, self.seed);
        for (k, v) in &self.parameters {
            let _ = writeln!(out, "  {k} = {}", scalar_text(v));
        }
        if !self.results.is_empty() {
            let _ = writeln!(out, "results: {}", self.results.len());
            for r in self.results.iter().take(TEXT_RESULT_ROWS) {
                let _ = writeln!(out, "  {}", scalar_text(r));
            }
            if self.results.len() > TEXT_RESULT_ROWS {
                let _ = writeln!(out, "  ... {} more (use --format json)", self.results.len() - TEXT_RESULT_ROWS);
            }
        }
        for (title, map) in [("summary", &self.summary), ("theory", &self.theory)] {
            if !map.is_empty() {
                let _ = writeln!(out, "{title}:");
                for (k, v) in map {
                    let _ = writeln!(out, "  {k}: {}", scalar_text(v));
                }
            }
        }
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{} {}: {} (expected {})",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                scalar_text(&c.observed),
                c.expected
            );
        }
        let _ = writeln!(out, "elapsed: {:.3}s", self.elapsed.as_secs_f64());
        out
    }

    /// The per-instance results as a table; columns are the keys of the
    /// first result.
    fn render_csv(&self) -> String {
        let mut out = String::new();
        let Some(Value::Object(first)) = self.results.first() else {
            return out;
        };
        let keys: Vec<&String> = first.keys().collect();
        let _ = writeln!(out, "{}", keys.iter().map(|k| csv_field(k)).collect::<Vec<_>>().join(","));
        for r in &self.results {
            let row: Vec<String> = keys.iter().map(|k| csv_field(&r.get(k.as_str()).map(scalar_text).unwrap_or_default())).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(scalar_text).collect::<Vec<_>>().join(" ")),
        Value::Object(map) => map.iter().map(|(k, v)| format!("{k}={}", scalar_text(v))).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A rational as `{"exact": "p/q", "value": f}`.
pub fn rational(r: &BigRational) -> Value {
    json!({ "exact": r.to_string(), "value": r.to_f64().unwrap_or(f64::NAN) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_omits_elapsed_and_is_stable() {
        let mut a = Report::new("demo", 7);
        a.param("n", 3).stat("rate", 0.5).check("ok", true, 1, "1");
        let mut b = a.clone();
        b.elapsed = Duration::from_secs(5);
        assert_eq!(a.render(Format::Json), b.render(Format::Json));
        assert!(!a.render(Format::Json).contains("elapsed"));
        assert!(a.render(Format::Text).contains("PASS ok"));
    }

    #[test]
    fn csv_uses_first_result_columns() {
        let mut r = Report::new("demo", 0);
        r.results.push(json!({"t": 0, "value": "1/16"}));
        r.results.push(json!({"t": 1, "value": "5/8"}));
        assert_eq!(r.render(Format::Csv), "t,value\n0,1/16\n1,5/8\n");
    }

    #[test]
    fn failing_check_fails_report() {
        let mut r = Report::new("demo", 0);
        r.check("a", true, 0, "0").check("b", false, 1, "0");
        assert!(!r.passed());
    }
}
