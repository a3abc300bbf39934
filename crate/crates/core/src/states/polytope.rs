use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{State, StateError};
use crate::lattice::{Element, OrthoLattice};
use crate::linalg::{solve_affine, AffineSolution};
use crate::lp::{Certificate, FeasibleTableau};
use crate::Rational;

pub const MAX_FREE_DIMENSIONS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    Bottom,
    Top,
    Complement(Element),
    Additivity(Element, Element),
    Lower(Element),
    Upper(Element),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
}

/// Sparse linear constraint `Σ coeff·x_e  (= or <=)  rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub terms: Vec<(Element, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    fn new(kind: ConstraintKind, terms: Vec<(Element, i64)>, relation: Relation, rhs: i64) -> Self {
        let mut merged: Vec<(Element, i64)> = Vec::new();
        for (e, c) in terms {
            match merged.iter_mut().find(|(x, _)| *x == e) {
                Some((_, acc)) => *acc += c,
                None => merged.push((e, c)),
            }
        }
        merged.retain(|&(_, c)| c != 0);
        merged.sort();
        Self {
            kind,
            terms: merged
                .into_iter()
                .map(|(e, c)| (e, Rational::from_integer(c.into())))
                .collect(),
            relation,
            rhs: Rational::from_integer(rhs.into()),
        }
    }

    pub fn lhs(&self, x: &[Rational]) -> Rational {
        self.terms.iter().map(|(e, c)| c * &x[*e]).sum()
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        let lhs = self.lhs(x);
        match self.relation {
            Relation::Eq => lhs == self.rhs,
            Relation::Le => lhs <= self.rhs,
        }
    }

    fn dense(&self, n: usize) -> Vec<Rational> {
        let mut row = vec![Rational::zero(); n];
        for (e, c) in &self.terms {
            row[*e] = c.clone();
        }
        row
    }
}

/// The state axioms of a lattice as linear constraints over one variable
/// per element, with vertices filled in on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct StatePolytope {
    pub size: usize,
    pub constraints: Vec<Constraint>,
    pub vertices: Option<Vec<State>>,
}

impl StatePolytope {
    pub fn equalities(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(|c| c.relation == Relation::Eq)
    }

    /// Solution set of the equalities, or `None` if they are inconsistent.
    pub fn affine_hull(&self) -> Option<AffineSolution> {
        let rows: Vec<(Vec<Rational>, Rational)> = self
            .equalities()
            .map(|c| (c.dense(self.size), c.rhs.clone()))
            .collect();
        solve_affine(self.size, &rows)
    }

    /// Dimension of the affine solution set of the equalities.
    pub fn free_dimensions(&self) -> Option<usize> {
        self.affine_hull().map(|s| s.free.len())
    }

    /// Standard form `A z = b, z >= 0` over `z = (x, u)` with slack
    /// `x_e + u_e = 1`.
    pub fn standard_form(&self) -> (Vec<Vec<Rational>>, Vec<Rational>) {
        let n = self.size;
        let mut a = Vec::new();
        let mut b = Vec::new();
        for c in self.equalities() {
            let mut row = c.dense(n);
            row.resize(2 * n, Rational::zero());
            a.push(row);
            b.push(c.rhs.clone());
        }
        for e in 0..n {
            let mut row = vec![Rational::zero(); 2 * n];
            row[e] = Rational::one();
            row[n + e] = Rational::one();
            a.push(row);
            b.push(Rational::one());
        }
        (a, b)
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        self.constraints.iter().all(|c| c.is_satisfied(x))
    }
}

/// Emit the state axioms of `l`: bottom, top, one complement equation per
/// pair `a < ¬a`, one additivity equation per unordered orthogonal pair,
/// then the bounds `0 <= x <= 1` per element.
pub fn state_constraints(l: &OrthoLattice) -> StatePolytope {
    let n = l.size();
    let mut cs = vec![
        Constraint::new(ConstraintKind::Bottom, vec![(l.bottom(), 1)], Relation::Eq, 0),
        Constraint::new(ConstraintKind::Top, vec![(l.top(), 1)], Relation::Eq, 1),
    ];
    for a in l.elements() {
        let c = l.ortho_unchecked(a);
        if a < c {
            cs.push(Constraint::new(
                ConstraintKind::Complement(a),
                vec![(a, 1), (c, 1)],
                Relation::Eq,
                1,
            ));
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if l.orthogonal_unchecked(a, b) {
                let j = l.join_unchecked(a, b);
                cs.push(Constraint::new(
                    ConstraintKind::Additivity(a, b),
                    vec![(j, 1), (a, -1), (b, -1)],
                    Relation::Eq,
                    0,
                ));
            }
        }
    }
    for e in 0..n {
        cs.push(Constraint::new(ConstraintKind::Lower(e), vec![(e, -1)], Relation::Le, 0));
        cs.push(Constraint::new(ConstraintKind::Upper(e), vec![(e, 1)], Relation::Le, 1));
    }
    StatePolytope {
        size: n,
        constraints: cs,
        vertices: None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Admission {
    Feasible(State),
    /// Farkas multipliers for [`StatePolytope::standard_form`].
    Infeasible(Certificate),
}

impl Admission {
    pub fn admits(&self) -> bool {
        matches!(self, Admission::Feasible(_))
    }
}

/// Decide by exact LP whether `l` carries any state. When the polytope is
/// small enough to enumerate, the returned state is the centroid of the
/// vertices; otherwise it is a basic feasible solution.
pub fn admits_state(l: &OrthoLattice) -> Admission {
    let poly = state_constraints(l);
    let (a, b) = poly.standard_form();
    match FeasibleTableau::new(&a, &b) {
        Err(cert) => Admission::Infeasible(cert),
        Ok(t) => {
            if let Ok(p) = state_polytope_vertices(l) {
                if let Some(vs) = p.vertices.filter(|v| !v.is_empty()) {
                    return Admission::Feasible(centroid(&vs));
                }
            }
            let mut z = t.point();
            z.truncate(l.size());
            Admission::Feasible(State::new(z))
        }
    }
}

fn centroid(vs: &[State]) -> State {
    let k = Rational::from_integer((vs.len() as i64).into());
    let n = vs[0].values.len();
    let values = (0..n)
        .map(|e| vs.iter().map(|v| &v.values[e]).sum::<Rational>() / &k)
        .collect();
    State::new(values)
}

/// Enumerate every vertex of the state polytope exactly. The vertices are
/// sorted lexicographically by value vector.
pub fn state_polytope_vertices(l: &OrthoLattice) -> Result<StatePolytope, StateError> {
    let mut poly = state_constraints(l);
    let Some(hull) = poly.affine_hull() else {
        poly.vertices = Some(Vec::new());
        return Ok(poly);
    };
    let k = hull.free.len();
    if k > MAX_FREE_DIMENSIONS {
        return Err(StateError::DimensionCap {
            dimension: k,
            cap: MAX_FREE_DIMENSIONS,
        });
    }
    // x = p + D t with 0 <= x <= 1 becomes D_e t <= 1 - p_e, -D_e t <= p_e.
    let n = poly.size;
    let mut a = Vec::with_capacity(2 * n);
    let mut b = Vec::with_capacity(2 * n);
    for e in 0..n {
        let row: Vec<Rational> = hull.directions.iter().map(|d| d[e].clone()).collect();
        a.push(row.iter().map(|x| -x.clone()).collect());
        b.push(hull.particular[e].clone());
        a.push(row);
        b.push(Rational::one() - &hull.particular[e]);
    }
    let ts = crate::polytope::vertices(k, &a, &b);
    let mut vs: Vec<State> = ts
        .iter()
        .map(|t| {
            let mut x = hull.particular.clone();
            for (d, ti) in hull.directions.iter().zip(t) {
                if !ti.is_zero() {
                    for (xe, de) in x.iter_mut().zip(d) {
                        *xe += ti * de;
                    }
                }
            }
            State::new(x)
        })
        .collect();
    vs.sort_by(|p, q| p.values.cmp(&q.values));
    vs.dedup();
    poly.vertices = Some(vs);
    Ok(poly)
}

/// A convex combination of the polytope vertices with weights drawn from
/// a ChaCha8 stream seeded by `seed`.
pub fn random_state(l: &OrthoLattice, seed: u64) -> Result<State, StateError> {
    let poly = state_polytope_vertices(l)?;
    let vs = poly.vertices.unwrap_or_default();
    random_mixture(&vs, seed)
}

pub(crate) fn random_mixture(vs: &[State], seed: u64) -> Result<State, StateError> {
    if vs.is_empty() {
        return Err(StateError::NoState);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w: Vec<Rational> = vs
        .iter()
        .map(|_| Rational::from_integer(rng.random_range(1..=1_000_000i64).into()))
        .collect();
    let total: Rational = w.iter().sum();
    let n = vs[0].values.len();
    let values = (0..n)
        .map(|e| {
            vs.iter()
                .zip(&w)
                .filter(|(v, _)| !v.values[e].is_zero())
                .map(|(v, wi)| &v.values[e] * wi)
                .sum::<Rational>()
                / &total
        })
        .collect();
    Ok(State::new(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::{gen_boolean, gen_mo};
    use crate::lattice::{Structure, OrthoLattice};
    use crate::states::tests::q;
    use crate::states::validate_state;

    fn chain2() -> OrthoLattice {
        OrthoLattice::from_structure(Structure {
            size: 2,
            leq: vec![true, true, false, true],
            ortho: vec![1, 0],
            bottom: 0,
            top: 1,
            labels: vec![None, None],
            name: Some("chain-2".into()),
        })
        .unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(state_constraints(&gen_boolean(2).unwrap()).free_dimensions(), Some(1));
        assert_eq!(state_constraints(&gen_mo(2).unwrap()).free_dimensions(), Some(2));
        assert_eq!(state_constraints(&chain2()).free_dimensions(), Some(0));
    }

    #[test]
    fn constraint_layout_is_deterministic() {
        let p = state_constraints(&gen_boolean(2).unwrap());
        // bottom, top, 2 complements, 4 orthogonal pairs, 8 bounds
        assert_eq!(p.constraints.len(), 2 + 2 + 4 + 8);
        assert_eq!(p.constraints[0].kind, ConstraintKind::Bottom);
        assert_eq!(p.constraints[2].kind, ConstraintKind::Complement(0));
        assert_eq!(p.constraints[4].kind, ConstraintKind::Additivity(0, 1));
        assert_eq!(p, state_constraints(&gen_boolean(2).unwrap()));
    }

    #[test]
    fn vertex_counts() {
        let v = |l: &OrthoLattice| state_polytope_vertices(l).unwrap().vertices.unwrap();
        let b2 = v(&gen_boolean(2).unwrap());
        assert_eq!(b2.len(), 2);
        assert_eq!(b2[0].values, vec![q(0, 1), q(0, 1), q(1, 1), q(1, 1)]);
        assert_eq!(v(&gen_mo(2).unwrap()).len(), 4);
        assert_eq!(v(&chain2()).len(), 1);
        for n in 2..=4 {
            let l = gen_mo(n).unwrap();
            let p = state_polytope_vertices(&l).unwrap();
            let vs = p.vertices.as_ref().unwrap();
            assert_eq!(vs.len(), 1 << n);
            for s in vs {
                assert!(p.is_satisfied(&s.values));
                assert!(validate_state(&l, s).unwrap().holds);
            }
        }
    }

    #[test]
    fn admission() {
        let l = gen_boolean(3).unwrap();
        match admits_state(&l) {
            Admission::Feasible(s) => {
                assert_eq!(s.values[1], q(1, 3));
                assert!(validate_state(&l, &s).unwrap().holds);
            }
            Admission::Infeasible(_) => panic!(),
        }
        let l = gen_mo(3).unwrap();
        let Admission::Feasible(s) = admits_state(&l) else { panic!() };
        for a in l.atoms() {
            assert_eq!(s.values[a], q(1, 2));
        }
    }

    #[test]
    fn random_states_are_valid_and_reproducible() {
        let l = gen_mo(2).unwrap();
        for seed in 0..100 {
            let s = random_state(&l, seed).unwrap();
            assert!(validate_state(&l, &s).unwrap().holds);
        }
        let l = gen_boolean(2).unwrap();
        assert_eq!(random_state(&l, 7).unwrap(), random_state(&l, 7).unwrap());
        assert_ne!(random_state(&l, 7).unwrap(), random_state(&l, 8).unwrap());
        let c = chain2();
        assert_eq!(random_state(&c, 3).unwrap().values, vec![q(0, 1), q(1, 1)]);
        assert_eq!(random_mixture(&[], 0), Err(StateError::NoState));
    }

    #[test]
    fn dimension_cap() {
        let l = gen_mo(13).unwrap();
        assert_eq!(
            state_polytope_vertices(&l).unwrap_err(),
            StateError::DimensionCap {
                dimension: 13,
                cap: MAX_FREE_DIMENSIONS
            }
        );
        assert!(admits_state(&l).admits());
    }
}
