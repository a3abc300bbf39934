//! Probability states on finite ortholattices.
//!
//! A state assigns a value in `[0,1]` to every element, with `s(0) = 0`,
//! `s(1) = 1`, `s(¬a) = 1 - s(a)` and `s(a ∨ b) = s(a) + s(b)` for
//! orthogonal `a, b`. Everything here is exact unless a state is marked
//! approximate.

mod defect;
mod io;
mod polytope;

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::formats::FormatError;
use crate::lattice::{Element, Law, LatticeError, LawReport, OrthoLattice};
use crate::Rational;

pub use defect::{
    inclusion_exclusion_defect, superadditivity_defect, superadditivity_witness,
    total_probability_defect, DefectKind,
    DefectReport, SuperadditivityWitness,
};
pub use io::{parse_state, parse_states, write_state, write_states, StateDocument};
pub use polytope::{
    admits_state, random_state, state_constraints, state_polytope_vertices, Admission,
    Constraint, ConstraintKind, Relation, StatePolytope, MAX_FREE_DIMENSIONS,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("no value for element {0}")]
    MissingElement(Element),
    #[error("{values} values given for a lattice of {size} elements")]
    LengthMismatch { values: usize, size: usize },
    #[error("weights sum to {0}, not 1")]
    Normalization(Rational),
    #[error("weight {index} is negative")]
    NegativeWeight { index: usize },
    #[error("state polytope has {dimension} free dimensions, cap is {cap}")]
    DimensionCap { dimension: usize, cap: usize },
    #[error("the lattice admits no state")]
    NoState,
    #[error("state belongs to lattice {found}, expected {expected}")]
    LatticeMismatch { expected: String, found: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Format(#[from] FormatError),
}

/// One value per lattice element, indexed by element handle.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub values: Vec<Rational>,
    /// Set when values were rounded from floating point.
    pub approximate: bool,
}

impl State {
    pub fn new(values: Vec<Rational>) -> Self {
        Self {
            values,
            approximate: false,
        }
    }

    /// Build from a partial map; every element of `l` must be present.
    pub fn from_assignment(
        l: &OrthoLattice,
        assignment: &BTreeMap<Element, Rational>,
    ) -> Result<Self, StateError> {
        let values = l
            .elements()
            .map(|e| assignment.get(&e).cloned().ok_or(StateError::MissingElement(e)))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some((&e, _)) = assignment.iter().find(|(&e, _)| e >= l.size()) {
            return Err(LatticeError::HandleOutOfRange {
                handle: e,
                size: l.size(),
            }
            .into());
        }
        Ok(Self::new(values))
    }

    /// Round floating-point values to rationals with denominator `10^12`.
    pub fn from_f64(values: &[f64]) -> Self {
        let scale = 1_000_000_000_000i64;
        let values = values
            .iter()
            .map(|&v| {
                let n = (v * scale as f64).round() as i64;
                Rational::new(n.into(), scale.into())
            })
            .collect();
        Self {
            values,
            approximate: true,
        }
    }

    pub fn value(&self, x: Element) -> &Rational {
        &self.values[x]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Pointwise convex combination `t·self + (1-t)·other`.
    pub fn mix(&self, other: &State, t: &Rational) -> State {
        let u = Rational::one() - t;
        State {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| t * x + &u * y)
                .collect(),
            approximate: self.approximate || other.approximate,
        }
    }
}

/// Arithmetic used by the law checker: exact, or floating point with a
/// tolerance.
trait Scalar: Sync {
    type V: Sync + Send + Clone;
    fn eq(&self, a: &Self::V, b: &Self::V) -> bool;
    fn le(&self, a: &Self::V, b: &Self::V) -> bool;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn zero(&self) -> Self::V;
    fn one(&self) -> Self::V;
}

struct Exact;

impl Scalar for Exact {
    type V = Rational;
    fn eq(&self, a: &Rational, b: &Rational) -> bool {
        a == b
    }
    fn le(&self, a: &Rational, b: &Rational) -> bool {
        a <= b
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
}

struct Approx(f64);

impl Scalar for Approx {
    type V = f64;
    fn eq(&self, a: &f64, b: &f64) -> bool {
        (a - b).abs() <= self.0
    }
    fn le(&self, a: &f64, b: &f64) -> bool {
        *a <= b + self.0
    }
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
    fn zero(&self) -> f64 {
        0.0
    }
    fn one(&self) -> f64 {
        1.0
    }
}

fn check<S: Scalar>(l: &OrthoLattice, s: &[S::V], k: &S) -> Result<LawReport, StateError> {
    if s.len() != l.size() {
        return Err(StateError::LengthMismatch {
            values: s.len(),
            size: l.size(),
        });
    }
    let (bottom, top) = (l.bottom(), l.top());
    if !k.eq(&s[bottom], &k.zero()) {
        return Ok(LawReport::fail(Law::StateBottom, vec![bottom]));
    }
    if !k.eq(&s[top], &k.one()) {
        return Ok(LawReport::fail(Law::StateTop, vec![top]));
    }
    let n = l.size();
    let additivity = (0..n).into_par_iter().find_map_first(|a| {
        (a + 1..n)
            .find(|&b| {
                l.orthogonal_unchecked(a, b)
                    && !k.eq(&s[l.join_unchecked(a, b)], &k.add(&s[a], &s[b]))
            })
            .map(|b| vec![a, b])
    });
    if let Some(w) = additivity {
        return Ok(LawReport::fail(Law::StateAdditivity, w));
    }
    if let Some(a) = (0..n).find(|&a| !k.eq(&k.add(&s[a], &s[l.ortho_unchecked(a)]), &k.one())) {
        return Ok(LawReport::fail(Law::StateComplement, vec![a]));
    }
    if let Some(a) = (0..n).find(|&a| !(k.le(&k.zero(), &s[a]) && k.le(&s[a], &k.one()))) {
        return Ok(LawReport::fail(Law::StateRange, vec![a]));
    }
    let order = (0..n).into_par_iter().find_map_first(|a| {
        (0..n)
            .find(|&b| a != b && l.leq_unchecked(a, b) && !k.le(&s[a], &s[b]))
            .map(|b| vec![a, b])
    });
    Ok(match order {
        Some(w) => LawReport::fail(Law::StateOrder, w),
        None => LawReport::pass(Law::StateAdditivity),
    })
}

/// Check every state law exactly. Laws are tried in the order bottom,
/// top, additivity, complement, range, order; the first failure is
/// reported with its witness.
pub fn validate_state(l: &OrthoLattice, s: &State) -> Result<LawReport, StateError> {
    check(l, &s.values, &Exact)
}

/// Same laws as [`validate_state`] on floating-point values, comparing
/// with absolute tolerance `tol`.
pub fn validate_state_approx(l: &OrthoLattice, s: &[f64], tol: f64) -> Result<LawReport, StateError> {
    check(l, s, &Approx(tol))
}

/// Re-evaluate a state law at a witness tuple. `None` if the tuple has
/// the wrong arity for the law.
pub fn state_law_holds_at(l: &OrthoLattice, s: &State, law: Law, w: &[Element]) -> Option<bool> {
    if w.iter().any(|&x| x >= l.size()) {
        return None;
    }
    let v = &s.values;
    Some(match (law, w) {
        (Law::StateBottom, [x]) => *x == l.bottom() && v[*x].is_zero(),
        (Law::StateTop, [x]) => *x == l.top() && v[*x].is_one(),
        (Law::StateAdditivity, [a, b]) => {
            !l.orthogonal_unchecked(*a, *b) || v[l.join_unchecked(*a, *b)] == &v[*a] + &v[*b]
        }
        (Law::StateComplement, [a]) => &v[*a] + &v[l.ortho_unchecked(*a)] == Rational::one(),
        (Law::StateRange, [a]) => !v[*a].is_negative() && v[*a] <= Rational::one(),
        (Law::StateOrder, [a, b]) => !l.leq_unchecked(*a, *b) || v[*a] <= v[*b],
        _ => return None,
    })
}

/// The classical measure `s(A) = Σ_{i∈A} w_i` on the Boolean algebra of
/// subsets of `weights.len()` outcomes.
pub fn kolmogorov_from_weights(weights: &[Rational]) -> Result<(OrthoLattice, State), StateError> {
    let l = crate::formats::gen_boolean(weights.len() as u32)?;
    if let Some(index) = weights.iter().position(Signed::is_negative) {
        return Err(StateError::NegativeWeight { index });
    }
    let total: Rational = weights.iter().sum();
    if !total.is_one() {
        return Err(StateError::Normalization(total));
    }
    let mut values = vec![Rational::zero(); l.size()];
    for mask in 1..l.size() {
        let low = mask.trailing_zeros() as usize;
        values[mask] = &values[mask & (mask - 1)] + &weights[low];
    }
    Ok((l, State::new(values)))
}
