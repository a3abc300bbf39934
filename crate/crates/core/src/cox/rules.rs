use num_traits::{One, Signed, Zero};

use crate::lattice::{bron_kerbosch, Element, Law, LawReport, OrthoLattice};
use crate::states::State;
use crate::Rational;

/// Maximal families of pairwise orthogonal nonzero elements, each sorted,
/// in lexicographic order.
pub(crate) fn orthogonal_families(l: &OrthoLattice) -> Vec<Vec<Element>> {
    let nz: Vec<Element> = l.elements().filter(|&e| e != l.bottom()).collect();
    let adj: Vec<Vec<bool>> = nz
        .iter()
        .map(|&a| nz.iter().map(|&b| a != b && l.orthogonal_unchecked(a, b)).collect())
        .collect();
    let mut cliques = Vec::new();
    bron_kerbosch(&adj, vec![], (0..nz.len()).collect(), vec![], &mut cliques);
    let mut fams: Vec<Vec<Element>> = cliques
        .into_iter()
        .map(|c| {
            let mut f: Vec<Element> = c.into_iter().map(|i| nz[i]).collect();
            f.sort_unstable();
            f
        })
        .collect();
    fams.sort();
    fams
}

/// Check the rules deduced from the associativity route: nullity
/// `s(0) = 0`, the complement rule `s(¬a) = 1 - s(a)`, additivity
/// `s(⋁F) = Σ_{a∈F} s(a)` over every subfamily (two or more members) of
/// every maximal orthogonal family, and nonnegativity. The first failure
/// is reported with its witness.
pub fn cox_rules_check(l: &OrthoLattice, s: &State) -> LawReport {
    let v = &s.values;
    if v.len() != l.size() {
        return LawReport::fail(Law::WellFormed, vec![]);
    }
    if !v[l.bottom()].is_zero() {
        return LawReport::fail(Law::CoxNullity, vec![l.bottom()]);
    }
    if let Some(a) = l
        .elements()
        .find(|&a| &v[a] + &v[l.ortho_unchecked(a)] != Rational::one())
    {
        return LawReport::fail(Law::CoxComplement, vec![a]);
    }
    for fam in orthogonal_families(l) {
        let k = fam.len();
        if k >= usize::BITS as usize - 1 {
            continue;
        }
        for mask in 1usize..1 << k {
            if mask.count_ones() < 2 {
                continue;
            }
            let members: Vec<Element> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| fam[i]).collect();
            let join = members
                .iter()
                .fold(l.bottom(), |acc, &m| l.join_unchecked(acc, m));
            let sum: Rational = members.iter().map(|&m| &v[m]).sum();
            if v[join] != sum {
                return LawReport::fail(Law::CoxFamilyAdditivity, members);
            }
        }
    }
    if let Some(a) = l.elements().find(|&a| v[a].is_negative()) {
        return LawReport::fail(Law::CoxNonnegative, vec![a]);
    }
    LawReport::pass(Law::CoxFamilyAdditivity)
}
