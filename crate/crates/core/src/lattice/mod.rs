//! Finite orthocomplemented lattices.
//!
//! An [`OrthoLattice`] is an immutable value: the order relation, meets,
//! joins and the orthocomplement are fixed at construction, after every
//! ortholattice law has been verified. Raw, unverified input lives in a
//! [`Structure`]; [`Structure::validate`] reports on it law by law and
//! [`OrthoLattice::from_structure`] turns it into a lattice or an error.

mod bitset;
mod blocks;
mod iso;
mod laws;

use std::borrow::Cow;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub(crate) use bitset::BitSet;
pub(crate) use blocks::bron_kerbosch;
pub use blocks::Block;
pub use iso::find_isomorphism;
pub use laws::{Law, LawReport};

/// Handle of a lattice element: an index in `0..size`.
pub type Element = usize;

/// Largest element count accepted for table-backed lattices.
pub const MAX_ELEMENTS: usize = 4096;

/// Largest outcome count accepted for powerset lattices (2^20 elements).
pub const MAX_BOOLEAN_ATOMS: u32 = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("element handle {handle} out of range for a lattice of {size} elements")]
    HandleOutOfRange { handle: Element, size: usize },
    #[error("not a lattice: elements {0} and {1} have no unique meet or join")]
    NotALattice(Element, Element),
    #[error("law `{law}` violated at {witness:?}")]
    LawViolation { law: Law, witness: Vec<Element> },
    #[error("{size} elements exceeds the cap of {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("size parameter {requested} outside {min}..={max}")]
    SizeOutOfRange { requested: usize, min: usize, max: usize },
    #[error("malformed structure: {0}")]
    Malformed(String),
}

/// Unverified lattice data: an order matrix, an orthocomplement map and
/// distinguished bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Structure {
    pub size: usize,
    /// Row-major `size * size` matrix; `leq[a * size + b]` is `a <= b`.
    pub leq: Vec<bool>,
    pub ortho: Vec<Element>,
    pub bottom: Element,
    pub top: Element,
    pub labels: Vec<Option<String>>,
    pub name: Option<String>,
}

/// Down-sets and up-sets of a (putative) partial order.
struct Order {
    down: Vec<BitSet>,
    up: Vec<BitSet>,
    down_count: Vec<usize>,
    up_count: Vec<usize>,
}

impl Order {
    fn new(size: usize, leq: &[bool]) -> Self {
        let mut down = vec![BitSet::new(size); size];
        let mut up = vec![BitSet::new(size); size];
        for a in 0..size {
            for b in 0..size {
                if leq[a * size + b] {
                    down[b].insert(a);
                    up[a].insert(b);
                }
            }
        }
        let down_count = down.iter().map(BitSet::count).collect();
        let up_count = up.iter().map(BitSet::count).collect();
        Self {
            down,
            up,
            down_count,
            up_count,
        }
    }

    /// The greatest common lower bound, if there is exactly one.
    fn meet(&self, a: Element, b: Element) -> Option<Element> {
        let lower = self.down[a].and(&self.down[b]);
        let want = lower.count();
        let mut found = None;
        for m in lower.iter() {
            if self.down_count[m] == want && self.down[m] == lower {
                if found.is_some() {
                    return None;
                }
                found = Some(m);
            }
        }
        found
    }

    fn join(&self, a: Element, b: Element) -> Option<Element> {
        let upper = self.up[a].and(&self.up[b]);
        let want = upper.count();
        let mut found = None;
        for m in upper.iter() {
            if self.up_count[m] == want && self.up[m] == upper {
                if found.is_some() {
                    return None;
                }
                found = Some(m);
            }
        }
        found
    }

    /// Meet and join tables, or the lexicographically first pair lacking one.
    fn tables(&self, size: usize) -> Result<(Vec<u32>, Vec<u32>), (Element, Element)> {
        let mut meet = vec![0u32; size * size];
        let mut join = vec![0u32; size * size];
        for a in 0..size {
            for b in a..size {
                let m = self.meet(a, b).ok_or((a, b))?;
                let j = self.join(a, b).ok_or((a, b))?;
                meet[a * size + b] = m as u32;
                meet[b * size + a] = m as u32;
                join[a * size + b] = j as u32;
                join[b * size + a] = j as u32;
            }
        }
        Ok((meet, join))
    }
}

impl Structure {
    fn well_formed(&self) -> Result<(), String> {
        let n = self.size;
        if n == 0 {
            return Err("no elements".into());
        }
        if self.leq.len() != n * n {
            return Err(format!("order matrix has {} entries, expected {}", self.leq.len(), n * n));
        }
        if self.ortho.len() != n {
            return Err(format!("ortho map has {} entries, expected {n}", self.ortho.len()));
        }
        if let Some(bad) = self.ortho.iter().find(|&&x| x >= n) {
            return Err(format!("ortho image {bad} out of range"));
        }
        if self.bottom >= n || self.top >= n {
            return Err("bottom or top out of range".into());
        }
        if !self.labels.is_empty() && self.labels.len() != n {
            return Err(format!("{} labels for {n} elements", self.labels.len()));
        }
        Ok(())
    }

    fn first_partial_order_violation(&self, order: &Order) -> Option<Vec<Element>> {
        let n = self.size;
        let le = |a: usize, b: usize| self.leq[a * n + b];
        for a in 0..n {
            if !le(a, a) {
                return Some(vec![a]);
            }
            for b in 0..n {
                if a != b && le(a, b) && le(b, a) {
                    return Some(vec![a, b]);
                }
                if le(a, b) {
                    // a <= b <= c must give a <= c
                    if let Some(c) = order.up[b].first_not_in(&order.up[a]) {
                        return Some(vec![a, b, c]);
                    }
                }
            }
        }
        None
    }

    /// Check every ortholattice law, one report per law. Malformed input
    /// yields a single failing well-formedness report.
    pub fn validate(&self) -> Vec<LawReport> {
        if self.well_formed().is_err() {
            return vec![LawReport::fail(Law::WellFormed, vec![])];
        }
        let n = self.size;
        let le = |a: usize, b: usize| self.leq[a * n + b];
        let order = Order::new(n, &self.leq);
        let mut reports = vec![LawReport::pass(Law::WellFormed)];

        reports.push(LawReport::from_witness(
            Law::PartialOrder,
            self.first_partial_order_violation(&order),
        ));
        reports.push(LawReport::from_witness(
            Law::Bounds,
            (0..n)
                .find(|&x| !(le(self.bottom, x) && le(x, self.top)))
                .map(|x| vec![x]),
        ));
        let tables = order.tables(n);
        reports.push(LawReport::from_witness(
            Law::Lattice,
            tables.as_ref().err().map(|&(a, b)| vec![a, b]),
        ));
        reports.push(LawReport::from_witness(
            Law::Involution,
            (0..n)
                .find(|&a| self.ortho[self.ortho[a]] != a)
                .map(|a| vec![a]),
        ));
        let reversal = (0..n).find_map(|a| {
            (0..n)
                .find(|&b| le(a, b) && !le(self.ortho[b], self.ortho[a]))
                .map(|b| vec![a, b])
        });
        reports.push(LawReport::from_witness(Law::OrderReversing, reversal));
        let complement = (0..n).find(|&a| {
            let na = self.ortho[a];
            let (m, j) = match &tables {
                Ok((meet, join)) => (Some(meet[a * n + na] as usize), Some(join[a * n + na] as usize)),
                Err(_) => (order.meet(a, na), order.join(a, na)),
            };
            m != Some(self.bottom) || j != Some(self.top)
        });
        reports.push(LawReport::from_witness(
            Law::Complement,
            complement.map(|a| vec![a]),
        ));
        reports
    }
}

#[derive(Debug, Clone)]
enum Repr {
    /// Subsets of `atoms` outcomes; element `i` is the subset with bitmask `i`.
    Powerset { atoms: u32 },
    Table {
        leq: Vec<bool>,
        meet: Vec<u32>,
        join: Vec<u32>,
        ortho: Vec<u32>,
    },
}

/// A finite ortholattice whose laws have been verified.
#[derive(Debug, Clone)]
pub struct OrthoLattice {
    size: usize,
    bottom: Element,
    top: Element,
    repr: Repr,
    labels: Vec<Option<String>>,
    name: Option<String>,
}

impl OrthoLattice {
    /// Validate `structure` and precompute meet and join tables.
    pub fn from_structure(structure: Structure) -> Result<Self, LatticeError> {
        structure.well_formed().map_err(LatticeError::Malformed)?;
        let n = structure.size;
        if n > MAX_ELEMENTS {
            return Err(LatticeError::TooLarge {
                size: n,
                cap: MAX_ELEMENTS,
            });
        }
        let order = Order::new(n, &structure.leq);
        if let Some(witness) = structure.first_partial_order_violation(&order) {
            return Err(LatticeError::LawViolation {
                law: Law::PartialOrder,
                witness,
            });
        }
        let (meet, join) = order
            .tables(n)
            .map_err(|(a, b)| LatticeError::NotALattice(a, b))?;
        for report in structure.validate() {
            if !report.holds {
                return Err(LatticeError::LawViolation {
                    law: report.law,
                    witness: report.witness.unwrap_or_default(),
                });
            }
        }
        let labels = if structure.labels.is_empty() {
            vec![None; n]
        } else {
            structure.labels
        };
        Ok(Self {
            size: n,
            bottom: structure.bottom,
            top: structure.top,
            repr: Repr::Table {
                leq: structure.leq,
                meet,
                join,
                ortho: structure.ortho.iter().map(|&x| x as u32).collect(),
            },
            labels,
            name: structure.name,
        })
    }

    /// The Boolean algebra of subsets of `atoms` outcomes. Element `i` is
    /// the subset whose bitmask is `i`.
    pub fn powerset(atoms: u32) -> Result<Self, LatticeError> {
        if atoms == 0 || atoms > MAX_BOOLEAN_ATOMS {
            return Err(LatticeError::SizeOutOfRange {
                requested: atoms as usize,
                min: 1,
                max: MAX_BOOLEAN_ATOMS as usize,
            });
        }
        let size = 1usize << atoms;
        Ok(Self {
            size,
            bottom: 0,
            top: size - 1,
            repr: Repr::Powerset { atoms },
            labels: Vec::new(),
            name: Some(format!("boolean-{atoms}")),
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bottom(&self) -> Element {
        self.bottom
    }

    pub fn top(&self) -> Element {
        self.top
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.size
    }

    pub fn label(&self, x: Element) -> Option<Cow<'_, str>> {
        match &self.repr {
            Repr::Powerset { atoms } if x < self.size => {
                let items: Vec<String> = (0..*atoms)
                    .filter(|i| x >> i & 1 == 1)
                    .map(|i| i.to_string())
                    .collect();
                Some(Cow::Owned(format!("{{{}}}", items.join(","))))
            }
            _ => self.labels.get(x)?.as_deref().map(Cow::Borrowed),
        }
    }

    /// Label if present, otherwise the index.
    pub fn display(&self, x: Element) -> String {
        self.label(x)
            .map(|l| l.into_owned())
            .unwrap_or_else(|| x.to_string())
    }

    /// Resolve a textual reference: a decimal index or a label.
    pub fn resolve(&self, token: &str) -> Option<Element> {
        if let Ok(i) = token.parse::<usize>() {
            return (i < self.size).then_some(i);
        }
        self.elements()
            .find(|&x| self.label(x).as_deref() == Some(token))
    }

    pub fn check(&self, x: Element) -> Result<Element, LatticeError> {
        if x < self.size {
            Ok(x)
        } else {
            Err(LatticeError::HandleOutOfRange {
                handle: x,
                size: self.size,
            })
        }
    }

    pub fn is_powerset(&self) -> bool {
        matches!(self.repr, Repr::Powerset { .. })
    }

    /// `a <= b`; panics on out-of-range handles.
    #[inline]
    pub fn leq_unchecked(&self, a: Element, b: Element) -> bool {
        match &self.repr {
            Repr::Powerset { .. } => {
                assert!(a < self.size && b < self.size);
                a & !b == 0
            }
            Repr::Table { leq, .. } => leq[a * self.size + b],
        }
    }

    #[inline]
    pub fn meet_unchecked(&self, a: Element, b: Element) -> Element {
        match &self.repr {
            Repr::Powerset { .. } => {
                assert!(a < self.size && b < self.size);
                a & b
            }
            Repr::Table { meet, .. } => meet[a * self.size + b] as Element,
        }
    }

    #[inline]
    pub fn join_unchecked(&self, a: Element, b: Element) -> Element {
        match &self.repr {
            Repr::Powerset { .. } => {
                assert!(a < self.size && b < self.size);
                a | b
            }
            Repr::Table { join, .. } => join[a * self.size + b] as Element,
        }
    }

    #[inline]
    pub fn ortho_unchecked(&self, a: Element) -> Element {
        match &self.repr {
            Repr::Powerset { .. } => {
                assert!(a < self.size);
                !a & self.top
            }
            Repr::Table { ortho, .. } => ortho[a] as Element,
        }
    }

    pub fn leq(&self, a: Element, b: Element) -> Result<bool, LatticeError> {
        Ok(self.leq_unchecked(self.check(a)?, self.check(b)?))
    }

    pub fn meet(&self, a: Element, b: Element) -> Result<Element, LatticeError> {
        Ok(self.meet_unchecked(self.check(a)?, self.check(b)?))
    }

    pub fn join(&self, a: Element, b: Element) -> Result<Element, LatticeError> {
        Ok(self.join_unchecked(self.check(a)?, self.check(b)?))
    }

    pub fn ortho(&self, a: Element) -> Result<Element, LatticeError> {
        Ok(self.ortho_unchecked(self.check(a)?))
    }

    /// `a <= ¬b`, which is symmetric in `a` and `b`.
    pub fn is_orthogonal(&self, a: Element, b: Element) -> Result<bool, LatticeError> {
        Ok(self.orthogonal_unchecked(self.check(a)?, self.check(b)?))
    }

    #[inline]
    pub fn orthogonal_unchecked(&self, a: Element, b: Element) -> bool {
        self.leq_unchecked(a, self.ortho_unchecked(b))
    }

    /// Minimal nonzero elements, ascending.
    pub fn atoms(&self) -> Vec<Element> {
        if let Repr::Powerset { atoms } = self.repr {
            return (0..atoms).map(|i| 1usize << i).collect();
        }
        self.elements()
            .filter(|&x| {
                x != self.bottom
                    && self.leq_unchecked(self.bottom, x)
                    && !self
                        .elements()
                        .any(|y| y != self.bottom && y != x && self.leq_unchecked(y, x))
            })
            .collect()
    }

    /// Copy out the raw order and orthocomplement data.
    pub fn to_structure(&self) -> Structure {
        let n = self.size;
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = self.leq_unchecked(a, b);
            }
        }
        Structure {
            size: n,
            leq,
            ortho: self.elements().map(|a| self.ortho_unchecked(a)).collect(),
            bottom: self.bottom,
            top: self.top,
            labels: self
                .elements()
                .map(|x| self.label(x).map(Cow::into_owned))
                .collect(),
            name: self.name.clone(),
        }
    }

    /// Elements `y` with `x` covered by `y`.
    pub fn covers_of(&self, x: Element) -> Vec<Element> {
        if let Repr::Powerset { atoms } = self.repr {
            return (0..atoms)
                .filter(|i| x >> i & 1 == 0)
                .map(|i| x | 1 << i)
                .collect();
        }
        self.elements()
            .filter(|&y| {
                y != x
                    && self.leq_unchecked(x, y)
                    && !self
                        .elements()
                        .any(|z| z != x && z != y && self.leq_unchecked(x, z) && self.leq_unchecked(z, y))
            })
            .collect()
    }

    /// Short hex digest of the order and orthocomplement (labels excluded).
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.size as u64).to_le_bytes());
        hasher.update((self.bottom as u64).to_le_bytes());
        hasher.update((self.top as u64).to_le_bytes());
        let mut byte = 0u8;
        let mut filled = 0;
        for a in self.elements() {
            hasher.update((self.ortho_unchecked(a) as u64).to_le_bytes());
            for b in self.elements() {
                byte = byte << 1 | self.leq_unchecked(a, b) as u8;
                filled += 1;
                if filled == 8 {
                    hasher.update([byte]);
                    byte = 0;
                    filled = 0;
                }
            }
        }
        hasher.update([byte]);
        hasher
            .finalize()
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

impl PartialEq for OrthoLattice {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
            && self.bottom == other.bottom
            && self.top == other.top
            && self.name == other.name
            && self.elements().all(|a| {
                self.ortho_unchecked(a) == other.ortho_unchecked(a)
                    && self.label(a) == other.label(a)
                    && self
                        .elements()
                        .all(|b| self.leq_unchecked(a, b) == other.leq_unchecked(a, b))
            })
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// 0 < a < b < 1 and 0 < b' < a' < 1 with a, a' and b, b' complementary.
    pub(crate) fn o6() -> OrthoLattice {
        let (bot, a, b, bp, ap, top) = (0, 1, 2, 3, 4, 5);
        let n = 6;
        let mut leq = vec![false; n * n];
        let pairs = [(a, b), (bp, ap)];
        for x in 0..n {
            leq[x * n + x] = true;
            leq[bot * n + x] = true;
            leq[x * n + top] = true;
        }
        for (x, y) in pairs {
            leq[x * n + y] = true;
        }
        OrthoLattice::from_structure(Structure {
            size: n,
            leq,
            ortho: vec![top, ap, bp, b, a, bot],
            bottom: bot,
            top,
            labels: vec![],
            name: Some("o6".into()),
        })
        .unwrap()
    }

    pub(crate) fn mo2() -> OrthoLattice {
        crate::formats::gen_mo(2).unwrap()
    }

    #[test]
    fn boolean_order_and_ops() {
        let b3 = OrthoLattice::powerset(3).unwrap();
        // {0} <= {0,1}
        assert!(b3.leq(0b001, 0b011).unwrap());
        assert!(b3.leq(b3.bottom(), b3.top()).unwrap());
        assert_eq!(b3.meet(0b011, 0b110).unwrap(), 0b010);
        assert_eq!(b3.ortho(0b001).unwrap(), 0b110);
        assert_eq!(b3.ortho(b3.bottom()).unwrap(), b3.top());
        assert!(b3.is_orthogonal(0b001, 0b010).unwrap());
        assert_eq!(b3.atoms(), vec![1, 2, 4]);
    }

    #[test]
    fn mo2_cross_block() {
        let l = mo2();
        let (a, ap, b) = (1, 2, 3);
        assert!(!l.leq(a, b).unwrap());
        assert_eq!(l.meet(a, b).unwrap(), l.bottom());
        assert_eq!(l.join(a, b).unwrap(), l.top());
        assert_eq!(l.ortho(a).unwrap(), ap);
        assert!(!l.is_orthogonal(a, b).unwrap());
        assert!(l.is_orthogonal(a, ap).unwrap());
    }

    #[test]
    fn handle_errors() {
        let l = mo2();
        assert_eq!(
            l.leq(0, 6),
            Err(LatticeError::HandleOutOfRange { handle: 6, size: 6 })
        );
        assert!(l.meet(9, 0).is_err());
        assert!(l.ortho(6).is_err());
        assert!(l.is_orthogonal(0, 17).is_err());
    }

    #[test]
    fn chain_atoms() {
        let chain = OrthoLattice::powerset(1).unwrap();
        assert_eq!(chain.atoms(), vec![1]);
        assert_eq!(chain.size(), 2);
    }

    #[test]
    fn non_lattice_is_rejected_with_pair() {
        // 0 < a, b < c, d < 1: a and b have two minimal upper bounds.
        let n = 6;
        let mut leq = vec![false; n * n];
        for x in 0..n {
            leq[x * n + x] = true;
            leq[x] = true;
            leq[x * n + 5] = true;
        }
        for (x, y) in [(1, 3), (1, 4), (2, 3), (2, 4)] {
            leq[x * n + y] = true;
        }
        let s = Structure {
            size: n,
            leq,
            ortho: vec![5, 2, 1, 4, 3, 0],
            bottom: 0,
            top: 5,
            labels: vec![],
            name: None,
        };
        assert_eq!(
            OrthoLattice::from_structure(s.clone()).unwrap_err(),
            LatticeError::NotALattice(1, 2)
        );
        let lattice_report = s.validate().into_iter().find(|r| r.law == Law::Lattice).unwrap();
        assert!(!lattice_report.holds);
        assert_eq!(lattice_report.witness, Some(vec![1, 2]));
    }

    #[test]
    fn self_complement_fails_complement_law() {
        // MO(1) shape with a and a' both mapped to themselves.
        let l = crate::formats::gen_boolean(2).unwrap();
        let mut s = l.to_structure();
        s.ortho = vec![3, 1, 2, 0];
        let reports = s.validate();
        let c = reports.iter().find(|r| r.law == Law::Complement).unwrap();
        assert!(!c.holds);
        assert_eq!(c.witness, Some(vec![1]));
        assert!(OrthoLattice::from_structure(s).is_err());
    }

    #[test]
    fn malformed_structure_reported() {
        let s = Structure {
            size: 2,
            leq: vec![true],
            ortho: vec![1, 0],
            bottom: 0,
            top: 1,
            labels: vec![],
            name: None,
        };
        let reports = s.validate();
        assert_eq!(reports.len(), 1);
        assert!(!reports[0].holds);
    }

    #[test]
    fn de_morgan_and_order_consistency() {
        for l in [o6(), mo2(), crate::formats::gen_boolean(3).unwrap()] {
            for a in l.elements() {
                for b in l.elements() {
                    let m = l.meet_unchecked(a, b);
                    let dual = l.ortho_unchecked(
                        l.join_unchecked(l.ortho_unchecked(a), l.ortho_unchecked(b)),
                    );
                    assert_eq!(m, dual);
                    let le = l.leq_unchecked(a, b);
                    assert_eq!(le, m == a);
                    assert_eq!(le, l.join_unchecked(a, b) == b);
                }
            }
        }
    }

    #[test]
    fn structure_round_trip() {
        let l = mo2();
        let back = OrthoLattice::from_structure(l.to_structure()).unwrap();
        assert_eq!(back, l);
        let b = crate::formats::gen_boolean(3).unwrap();
        let back = OrthoLattice::from_structure(b.to_structure()).unwrap();
        assert_eq!(back, b);
        assert_eq!(back.fingerprint(), b.fingerprint());
        assert_ne!(b.fingerprint(), l.fingerprint());
    }

    #[test]
    fn resolve_tokens() {
        let l = mo2();
        assert_eq!(l.resolve("3"), Some(3));
        assert_eq!(l.resolve("a0'"), Some(2));
        assert_eq!(l.resolve("nope"), None);
        assert_eq!(l.resolve("6"), None);
    }
}
