//! Text formats and built-in generators for finite ortholattices.

mod generators;
mod greechie;
mod oml;

use thiserror::Error;

use crate::lattice::LatticeError;

pub use generators::{gen_boolean, gen_mo, horizontal_sum};
pub use greechie::{parse_greechie, GreechieDiagram, MAX_BLOCK_ATOMS};
pub use oml::{parse_lattice, serialize, LatticeDocument};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: unknown element reference `{token}`")]
    DanglingLabel { line: usize, token: String },
    #[error("incomplete document: {0}")]
    Incomplete(String),
    #[error("invalid lattice: {0}")]
    Invalid(LatticeError),
    #[error("greechie diagram: {0}")]
    Diagram(String),
    #[error("pasting is not an orthomodular lattice: {0}")]
    PastingInvalid(LatticeError),
}

impl FormatError {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}

/// Parse either format, dispatching on the header line.
pub fn parse_any(text: &str) -> Result<crate::lattice::OrthoLattice, FormatError> {
    let header = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if header.starts_with("gre") {
        parse_greechie(text)
    } else {
        parse_lattice(text)
    }
}

/// Split a line into whitespace-separated tokens with 1-based columns,
/// dropping a trailing `#` comment.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let body = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &body[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &body[s..]));
    }
    out
}
