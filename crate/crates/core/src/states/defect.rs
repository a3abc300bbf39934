use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{state_constraints, State, StateError};
use crate::lattice::{Element, LatticeError, OrthoLattice};
use crate::lp::{FeasibleTableau, LpOutcome};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DefectKind {
    InclusionExclusion,
    TotalProbability,
    Superadditivity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DefectReport {
    pub kind: DefectKind,
    /// `[a, b]` followed by the derived elements the terms are read at.
    pub elements: Vec<Element>,
    pub left: Rational,
    pub right: Rational,
    pub defect: Rational,
}

impl DefectReport {
    /// Recompute the report from the state and its two operands.
    pub fn verify(&self, l: &OrthoLattice, s: &State) -> bool {
        let (a, b) = (self.elements[0], self.elements[1]);
        let again = match self.kind {
            DefectKind::InclusionExclusion => inclusion_exclusion_defect(l, s, a, b),
            DefectKind::TotalProbability => total_probability_defect(l, s, a, b),
            DefectKind::Superadditivity => superadditivity_defect(l, s, a, b),
        };
        again.as_ref() == Ok(self)
    }
}

fn checked(l: &OrthoLattice, s: &State, a: Element, b: Element) -> Result<(), LatticeError> {
    l.check(a)?;
    l.check(b)?;
    if s.values.len() != l.size() {
        return Err(LatticeError::Malformed(format!(
            "state has {} values, lattice has {} elements",
            s.values.len(),
            l.size()
        )));
    }
    Ok(())
}

/// `s(a∨b) - [s(a) + s(b) - s(a∧b)]`.
pub fn inclusion_exclusion_defect(
    l: &OrthoLattice,
    s: &State,
    a: Element,
    b: Element,
) -> Result<DefectReport, LatticeError> {
    checked(l, s, a, b)?;
    let (j, m) = (l.join_unchecked(a, b), l.meet_unchecked(a, b));
    let v = &s.values;
    let left = v[j].clone();
    let right = &v[a] + &v[b] - &v[m];
    Ok(DefectReport {
        kind: DefectKind::InclusionExclusion,
        elements: vec![a, b, j, m],
        defect: &left - &right,
        left,
        right,
    })
}

/// `s(a) - s(a∧b) - s(a∧¬b)`.
pub fn total_probability_defect(
    l: &OrthoLattice,
    s: &State,
    a: Element,
    b: Element,
) -> Result<DefectReport, LatticeError> {
    checked(l, s, a, b)?;
    let m = l.meet_unchecked(a, b);
    let mc = l.meet_unchecked(a, l.ortho_unchecked(b));
    let v = &s.values;
    let left = v[a].clone();
    let right = &v[m] + &v[mc];
    Ok(DefectReport {
        kind: DefectKind::TotalProbability,
        elements: vec![a, b, m, mc],
        defect: &left - &right,
        left,
        right,
    })
}

/// `s(a∨b) - s(a) - s(b)`.
pub fn superadditivity_defect(
    l: &OrthoLattice,
    s: &State,
    a: Element,
    b: Element,
) -> Result<DefectReport, LatticeError> {
    checked(l, s, a, b)?;
    let j = l.join_unchecked(a, b);
    let v = &s.values;
    let left = v[j].clone();
    let right = &v[a] + &v[b];
    Ok(DefectReport {
        kind: DefectKind::Superadditivity,
        elements: vec![a, b, j],
        defect: &left - &right,
        left,
        right,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperadditivityWitness {
    pub state: State,
    pub a: Element,
    pub b: Element,
    pub report: DefectReport,
}

/// Over all pairs `a < b` with `a ∧ b = 0` that are not orthogonal,
/// maximize `s(a∨b) - s(a) - s(b)` over the state polytope. Returns the
/// largest strictly positive gap, ties going to the first pair, or `None`
/// if the classical sum rule always binds.
pub fn superadditivity_witness(l: &OrthoLattice) -> Result<Option<SuperadditivityWitness>, StateError> {
    let poly = state_constraints(l);
    let (a_mat, b_vec) = poly.standard_form();
    let tableau = FeasibleTableau::new(&a_mat, &b_vec).map_err(|_| StateError::NoState)?;
    let n = l.size();
    let bottom = l.bottom();
    let pairs: Vec<(Element, Element)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| {
            a != bottom
                && b != bottom
                && l.meet_unchecked(a, b) == bottom
                && !l.orthogonal_unchecked(a, b)
        })
        .collect();
    let results: Vec<(Rational, Element, Element, Vec<Rational>)> = pairs
        .par_iter()
        .filter_map(|&(a, b)| {
            let mut c = vec![Rational::zero(); 2 * n];
            c[l.join_unchecked(a, b)] += Rational::from_integer(1.into());
            c[a] -= Rational::from_integer(1.into());
            c[b] -= Rational::from_integer(1.into());
            match tableau.maximize(&c) {
                LpOutcome::Optimal { point, value } => Some((value, a, b, point)),
                LpOutcome::Unbounded => None,
            }
        })
        .collect();
    let mut best: Option<(Rational, Element, Element, Vec<Rational>)> = None;
    for r in results {
        if best.as_ref().is_none_or(|bst| r.0 > bst.0) {
            best = Some(r);
        }
    }
    let Some((value, a, b, mut point)) = best else {
        return Ok(None);
    };
    if !value.is_positive() {
        return Ok(None);
    }
    point.truncate(n);
    let state = State::new(point);
    let report = superadditivity_defect(l, &state, a, b)?;
    Ok(Some(SuperadditivityWitness { state, a, b, report }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::{gen_boolean, gen_mo};
    use crate::states::tests::{mo2_state, q};
    use crate::states::{kolmogorov_from_weights, random_state, state_polytope_vertices, validate_state};

    #[test]
    fn classical_lattices_have_no_defects() {
        let (l, s) = kolmogorov_from_weights(&[q(1, 2), q(1, 3), q(1, 6)]).unwrap();
        for a in l.elements() {
            for b in l.elements() {
                assert!(inclusion_exclusion_defect(&l, &s, a, b).unwrap().defect.is_zero());
                assert!(total_probability_defect(&l, &s, a, b).unwrap().defect.is_zero());
            }
        }
        assert_eq!(superadditivity_witness(&gen_boolean(3).unwrap()).unwrap(), None);
    }

    #[test]
    fn mo2_inclusion_exclusion() {
        let l = gen_mo(2).unwrap();
        let s = mo2_state(q(1, 5), q(1, 5));
        let r = inclusion_exclusion_defect(&l, &s, 1, 3).unwrap();
        assert_eq!(r.elements, vec![1, 3, 5, 0]);
        assert_eq!(r.defect, q(3, 5));
        assert!(r.verify(&l, &s));
        for a in l.elements() {
            let b = l.ortho_unchecked(a);
            assert!(inclusion_exclusion_defect(&l, &s, a, b).unwrap().defect.is_zero());
        }
    }

    #[test]
    fn mo2_total_probability() {
        let l = gen_mo(2).unwrap();
        let s = mo2_state(q(7, 10), q(1, 2));
        let r = total_probability_defect(&l, &s, 1, 3).unwrap();
        assert_eq!(r.defect, q(7, 10));
        for a in l.elements() {
            assert!(total_probability_defect(&l, &s, a, a).unwrap().defect.is_zero());
        }
        assert!(total_probability_defect(&l, &s, 1, 9).is_err());
    }

    #[test]
    fn mo2_witness() {
        let l = gen_mo(2).unwrap();
        let w = superadditivity_witness(&l).unwrap().unwrap();
        assert_eq!((w.a, w.b), (1, 3));
        assert_eq!(w.report.defect, q(1, 1));
        assert!(w.state.values[1].is_zero() && w.state.values[3].is_zero());
        assert!(validate_state(&l, &w.state).unwrap().holds);
        assert!(w.report.verify(&l, &w.state));
        assert!(superadditivity_witness(&gen_mo(3).unwrap()).unwrap().is_some());
    }

    #[test]
    fn vertex_states_on_boolean() {
        let l = gen_boolean(3).unwrap();
        let vs = state_polytope_vertices(&l).unwrap().vertices.unwrap();
        assert_eq!(vs.len(), 3);
        let s = random_state(&l, 11).unwrap();
        for v in vs.iter().chain([&s]) {
            for a in l.elements() {
                for b in l.elements() {
                    assert!(total_probability_defect(&l, v, a, b).unwrap().defect.is_zero());
                }
            }
        }
    }
}
