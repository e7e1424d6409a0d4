//! Verdict reports: one JSON shape for every subcommand, with stable key
//! order (serde_json maps are sorted), rationals as `p/q` strings, and
//! shortest round-trip floats.

use serde_json::{json, Value};

/// Machine-readable outcome of a subcommand run.
#[derive(Debug, Clone)]
pub struct VerdictReport {
    pub command: String,
    pub inputs: Value,
    pub verdict: Value,
    /// Provenance of the method that produced the verdict (exhaustive scan,
    /// closed form, Monte Carlo with seed, ...).
    pub method: Value,
    pub warnings: Vec<String>,
    /// Human-readable one-liners for text output.
    pub text_lines: Vec<String>,
    /// CSV rows (header first) for tabular commands.
    pub csv: Option<Vec<String>>,
    /// Force a nonzero exit (self-test failure).
    pub exit_override: Option<i32>,
}

impl VerdictReport {
    pub fn new(command: &str, inputs: Value, verdict: Value, method: Value) -> Self {
        VerdictReport {
            command: command.to_string(),
            inputs,
            verdict,
            method,
            warnings: Vec::new(),
            text_lines: Vec::new(),
            csv: None,
            exit_override: None,
        }
    }

    pub fn with_text(mut self, lines: Vec<String>) -> Self {
        self.text_lines = lines;
        self
    }

    pub fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings = warnings;
        self
    }

    pub fn with_csv(mut self, rows: Vec<String>) -> Self {
        self.csv = Some(rows);
        self
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "verdict": self.verdict,
            "method": self.method,
            "warnings": self.warnings,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub fn emit(report: &VerdictReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.to_json_value())
                .expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => match &report.csv {
            Some(rows) => {
                let mut s = rows.join("\n");
                s.push('\n');
                s
            }
            None => emit(report, Format::Text),
        },
        Format::Text => {
            let mut s = String::new();
            for line in &report.text_lines {
                s.push_str(line);
                s.push('\n');
            }
            for w in &report.warnings {
                s.push_str("warning: ");
                s.push_str(w);
                s.push('\n');
            }
            s
        }
    }
}
