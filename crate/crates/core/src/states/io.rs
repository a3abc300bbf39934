//! The `.state` text format.
//!
//! ```text
//! state 1
//! lattice mo-2 3f2a9c0d11e4b786
//! value 0 0/1
//! value 1 7/10
//! ```
//!
//! The lattice line carries the name (`-` if unnamed) and fingerprint.
//! An optional `approximate` line marks rounded values. Several states are
//! separated by blank lines.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{State, StateError};
use crate::formats::{tokens, FormatError};
use crate::lattice::{Element, OrthoLattice};
use crate::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct StateDocument {
    pub lattice_name: Option<String>,
    pub fingerprint: String,
    pub approximate: bool,
    pub values: BTreeMap<Element, Rational>,
}

impl StateDocument {
    /// Attach to a lattice, checking the fingerprint and completeness.
    pub fn into_state(self, l: &OrthoLattice) -> Result<State, StateError> {
        let expected = l.fingerprint();
        if self.fingerprint != expected {
            return Err(StateError::LatticeMismatch {
                expected,
                found: self.fingerprint,
            });
        }
        let mut s = State::from_assignment(l, &self.values)?;
        s.approximate = self.approximate;
        Ok(s)
    }
}

pub fn write_state(l: &OrthoLattice, s: &State) -> String {
    let mut out = String::from("state 1\n");
    out.push_str(&format!("lattice {} {}\n", l.name().unwrap_or("-"), l.fingerprint()));
    if s.approximate {
        out.push_str("approximate\n");
    }
    for (i, v) in s.values.iter().enumerate() {
        out.push_str(&format!("value {i} {}/{}\n", v.numer(), v.denom()));
    }
    out
}

/// Blocks separated by blank lines.
pub fn write_states(l: &OrthoLattice, states: &[State]) -> String {
    states
        .iter()
        .map(|s| write_state(l, s))
        .collect::<Vec<_>>()
        .join("\n")
}

fn parse_rational(line: usize, column: usize, tok: &str) -> Result<Rational, FormatError> {
    let bad = || FormatError::syntax(line, column, format!("bad rational `{tok}`"));
    let (n, d) = match tok.split_once('/') {
        Some((n, d)) => (n, d),
        None => (tok, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

fn parse_block(lines: &[(usize, &str)]) -> Result<StateDocument, FormatError> {
    let mut it = lines
        .iter()
        .map(|&(no, l)| (no, tokens(l)))
        .filter(|(_, t)| !t.is_empty());
    match it.next() {
        Some((_, t)) if t.len() == 2 && t[0].1 == "state" && t[1].1 == "1" => {}
        Some((no, t)) => return Err(FormatError::syntax(no, t[0].0, "expected `state 1`")),
        None => return Err(FormatError::Incomplete("empty state block".into())),
    }
    let mut doc = StateDocument {
        lattice_name: None,
        fingerprint: String::new(),
        approximate: false,
        values: BTreeMap::new(),
    };
    let mut seen_lattice = false;
    for (no, t) in it {
        match t[0].1 {
            "lattice" if t.len() == 3 && !seen_lattice => {
                seen_lattice = true;
                doc.lattice_name = (t[1].1 != "-").then(|| t[1].1.to_string());
                doc.fingerprint = t[2].1.to_string();
            }
            "approximate" if t.len() == 1 => doc.approximate = true,
            "value" if t.len() == 3 => {
                let e: Element = t[1]
                    .1
                    .parse()
                    .map_err(|_| FormatError::syntax(no, t[1].0, "bad element index"))?;
                let v = parse_rational(no, t[2].0, t[2].1)?;
                if doc.values.insert(e, v).is_some() {
                    return Err(FormatError::syntax(no, t[1].0, format!("duplicate value for {e}")));
                }
            }
            other => {
                return Err(FormatError::syntax(no, t[0].0, format!("unexpected `{other}`")));
            }
        }
    }
    if !seen_lattice {
        return Err(FormatError::Incomplete("missing lattice line".into()));
    }
    Ok(doc)
}

fn blocks(text: &str) -> Vec<Vec<(usize, &str)>> {
    let mut out: Vec<Vec<(usize, &str)>> = Vec::new();
    let mut cur = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        if line.trim().is_empty() {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        } else {
            cur.push((i + 1, line));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

pub fn parse_state(text: &str) -> Result<StateDocument, FormatError> {
    let bs = blocks(text);
    match bs.as_slice() {
        [one] => parse_block(one),
        [] => Err(FormatError::Incomplete("no state".into())),
        _ => Err(FormatError::Incomplete("expected one state block".into())),
    }
}

pub fn parse_states(text: &str) -> Result<Vec<StateDocument>, FormatError> {
    blocks(text).iter().map(|b| parse_block(b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::gen_mo;
    use crate::states::tests::{mo2_state, q};
    use crate::states::state_polytope_vertices;

    #[test]
    fn round_trip() {
        let l = gen_mo(2).unwrap();
        let s = mo2_state(q(7, 10), q(1, 2));
        let text = write_state(&l, &s);
        assert!(text.starts_with("state 1\nlattice mo-2 "));
        assert!(text.contains("value 1 7/10\n"));
        let back = parse_state(&text).unwrap().into_state(&l).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn vertex_dump_round_trip() {
        let l = gen_mo(3).unwrap();
        let vs = state_polytope_vertices(&l).unwrap().vertices.unwrap();
        let text = write_states(&l, &vs);
        let back: Vec<State> = parse_states(&text)
            .unwrap()
            .into_iter()
            .map(|d| d.into_state(&l).unwrap())
            .collect();
        assert_eq!(back, vs);
    }

    #[test]
    fn errors() {
        let l = gen_mo(2).unwrap();
        let fp = l.fingerprint();
        let missing = format!("state 1\nlattice - {fp}\nvalue 0 0\n");
        assert_eq!(
            parse_state(&missing).unwrap().into_state(&l),
            Err(StateError::MissingElement(1))
        );
        let wrong = "state 1\nlattice - 0000000000000000\nvalue 0 0\n";
        assert!(matches!(
            parse_state(wrong).unwrap().into_state(&l),
            Err(StateError::LatticeMismatch { .. })
        ));
        assert!(matches!(
            parse_state("state 1\nlattice - x\nvalue 0 1/0\n"),
            Err(FormatError::Syntax { line: 3, column: 9, .. })
        ));
        assert!(matches!(parse_state("state 2\n"), Err(FormatError::Syntax { line: 1, .. })));
        assert!(matches!(parse_state("state 1\n"), Err(FormatError::Incomplete(_))));
    }
}
