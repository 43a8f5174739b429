//! Deterministic report assembly: human-readable tables by default, a flat
//! key-path rendering behind `--format flat`. Re-running the same command
//! on the same input is byte-identical.

use std::fmt::Write as _;

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Flat,
}

pub struct Report {
    pub command: String,
    format: Format,
    lines: Vec<(String, String)>,
    pub failed: bool,
}

impl Report {
    pub fn new(command: impl Into<String>, format: Format) -> Report {
        Report { command: command.into(), format, lines: Vec::new(), failed: false }
    }

    pub fn kv(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.lines.push((key.into(), value.into()));
    }

    pub fn window(&mut self, name: &str, value: impl std::fmt::Display) {
        self.kv(format!("window.{name}"), format!("{value}"));
    }

    pub fn verdict(&mut self, key: impl Into<String>, pass: bool) {
        if !pass {
            self.failed = true;
        }
        self.kv(key, if pass { "pass" } else { "FAIL" });
    }

    pub fn table(&mut self, prefix: &str, t: &cdga_core::derived::CohomologyTable) {
        self.kv(format!("{prefix}.window"), format!("{}..{}", t.window.0, t.window.1));
        for (d, dim) in &t.dims {
            let flag = if t.edge.contains(d) { " [edge]" } else { "" };
            self.kv(format!("{prefix}.H[{d}]"), format!("{dim}{flag}"));
        }
        for d in &t.edge {
            if !t.dims.contains_key(d) {
                self.kv(format!("{prefix}.H[{d}]"), "unavailable [edge]".to_string());
            }
        }
        if let Some(internal) = &t.internal {
            for ((d, n), dim) in internal {
                self.kv(format!("{prefix}.H[{d}][internal {n}]"), format!("{dim}"));
            }
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        match self.format {
            Format::Human => {
                let _ = writeln!(out, "== {}", self.command);
                let width = self.lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &self.lines {
                    let _ = writeln!(out, "{k:<width$}  {v}");
                }
                let _ = writeln!(out, "result: {}", if self.failed { "FAIL" } else { "pass" });
            }
            Format::Flat => {
                let _ = writeln!(out, "command = {}", self.command);
                for (k, v) in &self.lines {
                    let _ = writeln!(out, "{k} = {v}");
                }
                let _ = writeln!(out, "result = {}", if self.failed { "FAIL" } else { "pass" });
            }
        }
        out
    }
}
