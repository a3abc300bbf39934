use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Element, OrthoLattice};

/// Named laws checked by the lattice, state and Cox validators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    WellFormed,
    PartialOrder,
    Bounds,
    Lattice,
    Involution,
    OrderReversing,
    Complement,
    Orthomodular,
    Modular,
    Distributive,
    StateRange,
    StateBottom,
    StateTop,
    StateComplement,
    StateAdditivity,
    StateOrder,
    CoxNonnegative,
    CoxNullity,
    CoxComplement,
    CoxFamilyAdditivity,
}

impl Law {
    pub const ORTHOLATTICE: [Law; 7] = [
        Law::WellFormed,
        Law::PartialOrder,
        Law::Bounds,
        Law::Lattice,
        Law::Involution,
        Law::OrderReversing,
        Law::Complement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::WellFormed => "well-formed",
            Law::PartialOrder => "partial-order",
            Law::Bounds => "bounds",
            Law::Lattice => "lattice",
            Law::Involution => "involution",
            Law::OrderReversing => "order-reversing",
            Law::Complement => "complement",
            Law::Orthomodular => "orthomodular",
            Law::Modular => "modular",
            Law::Distributive => "distributive",
            Law::StateRange => "state-range",
            Law::StateBottom => "state-bottom",
            Law::StateTop => "state-top",
            Law::StateComplement => "state-complement",
            Law::StateAdditivity => "state-additivity",
            Law::StateOrder => "state-order",
            Law::CoxNonnegative => "cox-nonnegative",
            Law::CoxNullity => "cox-nullity",
            Law::CoxComplement => "cox-complement",
            Law::CoxFamilyAdditivity => "cox-family-additivity",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of checking one law. A failing report always carries the
/// lexicographically first violating tuple of element handles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReport {
    pub law: Law,
    pub holds: bool,
    pub witness: Option<Vec<Element>>,
}

impl LawReport {
    pub fn pass(law: Law) -> Self {
        Self {
            law,
            holds: true,
            witness: None,
        }
    }

    pub fn fail(law: Law, witness: Vec<Element>) -> Self {
        Self {
            law,
            holds: false,
            witness: Some(witness),
        }
    }

    pub fn from_witness(law: Law, witness: Option<Vec<Element>>) -> Self {
        match witness {
            Some(w) => Self::fail(law, w),
            None => Self::pass(law),
        }
    }
}

impl OrthoLattice {
    /// Re-check every ortholattice law on this lattice.
    pub fn validate_ortholattice(&self) -> Vec<LawReport> {
        self.to_structure().validate()
    }

    /// `a <= b` implies `b = a ∨ (¬a ∧ b)`, over all ordered pairs.
    pub fn is_orthomodular(&self) -> LawReport {
        let n = self.size();
        let witness = (0..n).into_par_iter().find_map_first(|a| {
            (0..n)
                .find(|&b| !self.law_holds_at(Law::Orthomodular, &[a, b]).unwrap_or(true))
                .map(|b| vec![a, b])
        });
        LawReport::from_witness(Law::Orthomodular, witness)
    }

    /// `a <= c` implies `a ∨ (b ∧ c) = (a ∨ b) ∧ c`, over all triples.
    pub fn is_modular(&self) -> LawReport {
        self.first_triple(Law::Modular)
    }

    /// `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)`, over all triples.
    pub fn is_distributive(&self) -> LawReport {
        self.first_triple(Law::Distributive)
    }

    /// A distributive ortholattice is a Boolean algebra.
    pub fn is_boolean(&self) -> bool {
        self.is_distributive().holds
    }

    fn first_triple(&self, law: Law) -> LawReport {
        let n = self.size();
        let witness = (0..n).into_par_iter().find_map_first(|a| {
            for b in 0..n {
                for c in 0..n {
                    if !self.law_holds_at(law, &[a, b, c]).unwrap_or(true) {
                        return Some(vec![a, b, c]);
                    }
                }
            }
            None
        });
        LawReport::from_witness(law, witness)
    }

    /// Evaluate `law` at one tuple. `None` when the law does not apply to a
    /// tuple of that length or a handle is out of range. Vacuous instances
    /// (an unmet premise) count as holding.
    pub fn law_holds_at(&self, law: Law, tuple: &[Element]) -> Option<bool> {
        if tuple.iter().any(|&x| x >= self.size()) {
            return None;
        }
        let le = |a, b| self.leq_unchecked(a, b);
        let m = |a, b| self.meet_unchecked(a, b);
        let j = |a, b| self.join_unchecked(a, b);
        let o = |a| self.ortho_unchecked(a);
        Some(match (law, tuple) {
            (Law::Involution, &[a]) => o(o(a)) == a,
            (Law::Complement, &[a]) => j(a, o(a)) == self.top() && m(a, o(a)) == self.bottom(),
            (Law::Bounds, &[a]) => le(self.bottom(), a) && le(a, self.top()),
            (Law::OrderReversing, &[a, b]) => !le(a, b) || le(o(b), o(a)),
            (Law::Orthomodular, &[a, b]) => !le(a, b) || b == j(a, m(o(a), b)),
            (Law::Modular, &[a, b, c]) => !le(a, c) || j(a, m(b, c)) == m(j(a, b), c),
            (Law::Distributive, &[a, b, c]) => m(a, j(b, c)) == j(m(a, b), m(a, c)),
            _ => return None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::{gen_boolean, gen_mo};
    use crate::lattice::tests::o6;

    fn assert_witness_violates(l: &OrthoLattice, r: &LawReport) {
        assert!(!r.holds);
        let w = r.witness.as_ref().expect("failing report carries a witness");
        assert_eq!(l.law_holds_at(r.law, w), Some(false), "{:?}", r);
    }

    #[test]
    fn boolean_laws() {
        for n in 1..=4 {
            let l = gen_boolean(n).unwrap();
            assert!(l.validate_ortholattice().iter().all(|r| r.holds));
            assert!(l.is_distributive().holds);
            assert!(l.is_modular().holds);
            assert!(l.is_orthomodular().holds);
        }
    }

    #[test]
    fn mo_family() {
        for n in 1..=4 {
            let l = gen_mo(n).unwrap();
            assert!(l.validate_ortholattice().iter().all(|r| r.holds));
            assert!(l.is_orthomodular().holds);
            assert!(l.is_modular().holds);
            let d = l.is_distributive();
            if n == 1 {
                assert!(d.holds);
            } else {
                assert_witness_violates(&l, &d);
            }
        }
    }

    #[test]
    fn mo2_distributivity_witness_shape() {
        // a ∧ (b ∨ ¬b) = a while (a ∧ b) ∨ (a ∧ ¬b) = 0.
        let l = gen_mo(2).unwrap();
        let (a, b, nb) = (1, 3, 4);
        assert_eq!(l.law_holds_at(Law::Distributive, &[a, b, nb]), Some(false));
        assert_eq!(l.is_distributive().witness, Some(vec![1, 2, 3]));
    }

    #[test]
    fn o6_is_ortho_but_not_orthomodular() {
        let l = o6();
        assert!(l.validate_ortholattice().iter().all(|r| r.holds));
        let r = l.is_orthomodular();
        assert_witness_violates(&l, &r);
        assert_eq!(r.witness, Some(vec![1, 2]));
        assert_witness_violates(&l, &l.is_modular());
        assert_witness_violates(&l, &l.is_distributive());
    }

    #[test]
    fn implication_chain() {
        for l in [o6(), gen_mo(3).unwrap(), gen_boolean(3).unwrap()] {
            let d = l.is_distributive().holds;
            let m = l.is_modular().holds;
            let om = l.is_orthomodular().holds;
            assert!(!d || m);
            assert!(!m || om);
        }
    }

    #[test]
    fn law_holds_at_rejects_bad_shapes() {
        let l = gen_mo(2).unwrap();
        assert_eq!(l.law_holds_at(Law::Modular, &[1, 2]), None);
        assert_eq!(l.law_holds_at(Law::Involution, &[99]), None);
    }
}
