//! Result-payload rendering.
//!
//! Payloads are flat `key = value` lines grouped under `[section]` headers —
//! the human-readable table and the machine-parsable block are the same
//! bytes. Floats go through Rust's shortest-roundtrip formatter, so equal
//! numbers always render to equal text and payloads can be compared with a
//! plain byte diff.

use std::fmt::Display;
use std::fmt::Write as _;

/// Incremental builder for one payload document.
pub struct Report {
    text: String,
}

impl Report {
    pub fn new() -> Report {
        Report {
            text: String::new(),
        }
    }

    /// Starts a `[name]` section; sections after the first are preceded by a
    /// blank line.
    pub fn section(&mut self, name: &str) {
        if !self.text.is_empty() {
            self.text.push('\n');
        }
        let _ = writeln!(self.text, "[{name}]");
    }

    pub fn kv(&mut self, key: impl Display, value: impl Display) {
        let _ = writeln!(self.text, "{key} = {value}");
    }

    pub fn render(self) -> String {
        self.text
    }
}

/// Space-joins a sequence of displayable values into one field.
pub fn joined<T: Display>(values: impl IntoIterator<Item = T>) -> String {
    let mut out = String::new();
    for (i, value) in values.into_iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{value}");
    }
    out
}

/// Renders a ±1 coloring as a compact `+-+…` string.
pub fn sign_string(signs: &[i8]) -> String {
    signs
        .iter()
        .map(|&s| if s >= 0 { '+' } else { '-' })
        .collect()
}
