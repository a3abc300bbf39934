//! The `.oml` line format.
//!
//! ```text
//! oml 1
//! name mo-2
//! elements 6
//! bottom 0
//! top 5
//! label 1 a0
//! cover 0 1
//! ortho 1 2
//! ```
//!
//! `cover i j` means `j` covers `i`; element references in `cover`,
//! `ortho`, `bottom` and `top` are decimal indices or labels. The
//! serializer writes directives grouped by kind, each group ordered by
//! index, one per line with LF endings.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::lattice::{Element, OrthoLattice, Structure, MAX_ELEMENTS};

use super::{tokens, FormatError};

/// Hasse-diagram presentation of an ortholattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDocument {
    pub name: Option<String>,
    pub elements: usize,
    pub bottom: Element,
    pub top: Element,
    pub labels: Vec<Option<String>>,
    /// `(i, j)` with `j` covering `i`.
    pub covers: Vec<(Element, Element)>,
    /// Each complement pair once, smaller index first.
    pub ortho_pairs: Vec<(Element, Element)>,
}

impl LatticeDocument {
    pub fn from_lattice(l: &OrthoLattice) -> Self {
        let mut covers = Vec::new();
        for x in l.elements() {
            for y in l.covers_of(x) {
                covers.push((x, y));
            }
        }
        covers.sort_unstable();
        let ortho_pairs = l
            .elements()
            .filter_map(|x| {
                let y = l.ortho_unchecked(x);
                (x <= y).then_some((x, y))
            })
            .collect();
        Self {
            name: l.name().map(str::to_string),
            elements: l.size(),
            bottom: l.bottom(),
            top: l.top(),
            labels: l.elements().map(|x| l.label(x).map(|s| s.into_owned())).collect(),
            covers,
            ortho_pairs,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("oml 1\n");
        if let Some(name) = &self.name {
            writeln!(out, "name {name}").unwrap();
        }
        writeln!(out, "elements {}", self.elements).unwrap();
        writeln!(out, "bottom {}", self.bottom).unwrap();
        writeln!(out, "top {}", self.top).unwrap();
        for (i, label) in self.labels.iter().enumerate() {
            if let Some(label) = label {
                writeln!(out, "label {i} {label}").unwrap();
            }
        }
        for (i, j) in &self.covers {
            writeln!(out, "cover {i} {j}").unwrap();
        }
        for (i, j) in &self.ortho_pairs {
            writeln!(out, "ortho {i} {j}").unwrap();
        }
        out
    }

    /// Reflexive-transitive closure of the covers, plus the ortho map.
    pub fn to_structure(&self) -> Result<Structure, FormatError> {
        let n = self.elements;
        if n > MAX_ELEMENTS {
            return Err(FormatError::Invalid(crate::lattice::LatticeError::TooLarge {
                size: n,
                cap: MAX_ELEMENTS,
            }));
        }
        let refs = self.covers.iter().chain(&self.ortho_pairs).flat_map(|&(i, j)| [i, j]);
        if let Some(x) = refs.chain([self.bottom, self.top]).find(|&x| x >= n) {
            return Err(FormatError::Incomplete(format!("element {x} out of range for {n} elements")));
        }
        if self.labels.len() != n {
            return Err(FormatError::Incomplete(format!("{} labels for {n} elements", self.labels.len())));
        }
        let mut succ = vec![Vec::new(); n];
        for &(i, j) in &self.covers {
            succ[i].push(j);
        }
        let mut leq = vec![false; n * n];
        let mut queue = VecDeque::new();
        for start in 0..n {
            leq[start * n + start] = true;
            queue.push_back(start);
            while let Some(x) = queue.pop_front() {
                for &y in &succ[x] {
                    if y == start {
                        return Err(FormatError::Invalid(
                            crate::lattice::LatticeError::LawViolation {
                                law: crate::lattice::Law::PartialOrder,
                                witness: vec![start, x],
                            },
                        ));
                    }
                    if !leq[start * n + y] {
                        leq[start * n + y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        let mut ortho = vec![usize::MAX; n];
        for &(i, j) in &self.ortho_pairs {
            for (x, y) in [(i, j), (j, i)] {
                if ortho[x] != usize::MAX && ortho[x] != y {
                    return Err(FormatError::Incomplete(format!(
                        "element {x} has two orthocomplements ({} and {y})",
                        ortho[x]
                    )));
                }
                ortho[x] = y;
            }
        }
        if let Some(x) = ortho.iter().position(|&y| y == usize::MAX) {
            return Err(FormatError::Incomplete(format!(
                "element {x} has no orthocomplement"
            )));
        }
        Ok(Structure {
            size: n,
            leq,
            ortho,
            bottom: self.bottom,
            top: self.top,
            labels: self.labels.clone(),
            name: self.name.clone(),
        })
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let lines: Vec<(usize, Vec<(usize, &str)>)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, tokens(l)))
            .filter(|(_, t)| !t.is_empty())
            .collect();
        let Some((first_line, header)) = lines.first() else {
            return Err(FormatError::syntax(1, 1, "empty document"));
        };
        if header.len() != 2 || header[0].1 != "oml" || header[1].1 != "1" {
            return Err(FormatError::syntax(*first_line, 1, "expected header `oml 1`"));
        }

        // First pass: size, labels and name.
        let mut elements = None;
        let mut name = None;
        for (line, toks) in &lines[1..] {
            match toks[0].1 {
                "elements" => {
                    expect_args(*line, toks, 1)?;
                    if elements.is_some() {
                        return Err(FormatError::syntax(*line, 1, "duplicate `elements`"));
                    }
                    let (col, tok) = toks[1];
                    let n: usize = tok
                        .parse()
                        .map_err(|_| FormatError::syntax(*line, col, "expected element count"))?;
                    if n == 0 || n > MAX_ELEMENTS {
                        return Err(FormatError::syntax(
                            *line,
                            col,
                            format!("element count must be in 1..={MAX_ELEMENTS}"),
                        ));
                    }
                    elements = Some(n);
                }
                "name" => {
                    if toks.len() < 2 {
                        return Err(FormatError::syntax(*line, 1, "`name` needs a value"));
                    }
                    name = Some(
                        toks[1..]
                            .iter()
                            .map(|t| t.1)
                            .collect::<Vec<_>>()
                            .join(" "),
                    );
                }
                _ => {}
            }
        }
        let n = elements.ok_or_else(|| FormatError::Incomplete("missing `elements`".into()))?;
        let mut labels: Vec<Option<String>> = vec![None; n];
        let mut by_label: HashMap<&str, Vec<Element>> = HashMap::new();
        for (line, toks) in &lines[1..] {
            if toks[0].1 == "label" {
                expect_args(*line, toks, 2)?;
                let i = index(*line, toks[1], n)?;
                if labels[i].is_some() {
                    return Err(FormatError::syntax(*line, toks[1].0, "element labelled twice"));
                }
                labels[i] = Some(toks[2].1.to_string());
                by_label.entry(toks[2].1).or_default().push(i);
            }
        }
        let resolve = |line: usize, (col, tok): (usize, &str)| -> Result<Element, FormatError> {
            if tok.bytes().all(|b| b.is_ascii_digit()) {
                return index(line, (col, tok), n);
            }
            match by_label.get(tok).map(Vec::as_slice) {
                Some([x]) => Ok(*x),
                Some(_) => Err(FormatError::syntax(line, col, format!("ambiguous label `{tok}`"))),
                None => Err(FormatError::DanglingLabel {
                    line,
                    token: tok.to_string(),
                }),
            }
        };

        let mut bottom = None;
        let mut top = None;
        let mut covers = Vec::new();
        let mut ortho_pairs = Vec::new();
        for (line, toks) in &lines[1..] {
            let line = *line;
            match toks[0].1 {
                "elements" | "name" | "label" => {}
                "bottom" | "top" => {
                    expect_args(line, toks, 1)?;
                    let x = resolve(line, toks[1])?;
                    let slot = if toks[0].1 == "bottom" { &mut bottom } else { &mut top };
                    if slot.replace(x).is_some() {
                        return Err(FormatError::syntax(line, 1, format!("duplicate `{}`", toks[0].1)));
                    }
                }
                "cover" => {
                    expect_args(line, toks, 2)?;
                    let i = resolve(line, toks[1])?;
                    let j = resolve(line, toks[2])?;
                    if i == j {
                        return Err(FormatError::syntax(line, toks[2].0, "element cannot cover itself"));
                    }
                    covers.push((i, j));
                }
                "ortho" => {
                    expect_args(line, toks, 2)?;
                    let i = resolve(line, toks[1])?;
                    let j = resolve(line, toks[2])?;
                    ortho_pairs.push((i.min(j), i.max(j)));
                }
                other => {
                    return Err(FormatError::syntax(
                        line,
                        toks[0].0,
                        format!("unknown directive `{other}`"),
                    ))
                }
            }
        }
        covers.sort_unstable();
        covers.dedup();
        ortho_pairs.sort_unstable();
        ortho_pairs.dedup();
        Ok(Self {
            name,
            elements: n,
            bottom: bottom.ok_or_else(|| FormatError::Incomplete("missing `bottom`".into()))?,
            top: top.ok_or_else(|| FormatError::Incomplete("missing `top`".into()))?,
            labels,
            covers,
            ortho_pairs,
        })
    }
}

fn expect_args(line: usize, toks: &[(usize, &str)], count: usize) -> Result<(), FormatError> {
    if toks.len() != count + 1 {
        let col = toks.get(count + 1).map_or(toks.last().unwrap().0, |t| t.0);
        return Err(FormatError::syntax(
            line,
            col,
            format!("`{}` takes {count} argument(s)", toks[0].1),
        ));
    }
    Ok(())
}

fn index(line: usize, (col, tok): (usize, &str), n: usize) -> Result<Element, FormatError> {
    let i: usize = tok
        .parse()
        .map_err(|_| FormatError::syntax(line, col, format!("expected an element index, got `{tok}`")))?;
    if i >= n {
        return Err(FormatError::DanglingLabel {
            line,
            token: tok.to_string(),
        });
    }
    Ok(i)
}

/// Parse and fully validate an `.oml` document.
pub fn parse_lattice(text: &str) -> Result<OrthoLattice, FormatError> {
    let doc = LatticeDocument::parse(text)?;
    OrthoLattice::from_structure(doc.to_structure()?).map_err(FormatError::Invalid)
}

pub fn serialize(l: &OrthoLattice) -> String {
    LatticeDocument::from_lattice(l).to_text()
}
