use super::{
    born, max_abs, projector_from_basis, subspace_join, subspace_meet, subspace_ortho, DensityMatrix,
    HilbertError, Projection, SubspaceBasis, Tolerances,
};
use crate::lattice::{Law, LatticeError, OrthoLattice, Structure};
use crate::states::State;

pub const DEFAULT_CLOSURE_CAP: usize = 512;

/// A finite lattice of subspaces together with the subspace behind each
/// element.
#[derive(Debug, Clone)]
pub struct ProjectionLattice {
    pub lattice: OrthoLattice,
    pub embedding: Vec<SubspaceBasis>,
    pub projections: Vec<Projection>,
}

struct Closure {
    tol: Tolerances,
    cap: usize,
    bases: Vec<SubspaceBasis>,
    projections: Vec<Projection>,
}

impl Closure {
    /// Index of an existing equal subspace, or the index the new one got.
    fn intern(&mut self, b: SubspaceBasis) -> Result<usize, HilbertError> {
        let p = projector_from_basis(&b);
        for (i, q) in self.projections.iter().enumerate() {
            if q.rank() != p.rank() {
                continue;
            }
            let d = p.distance(q);
            if d < self.tol.ambiguity {
                return Ok(i);
            }
            if d < self.tol.equality {
                return Err(HilbertError::IllConditioned(d));
            }
        }
        if self.bases.len() == self.cap {
            return Err(HilbertError::ClosureOverflow { cap: self.cap });
        }
        self.bases.push(b);
        self.projections.push(p);
        Ok(self.bases.len() - 1)
    }
}

/// Close `{0, C^d} ∪ seeds` under meet, join and orthocomplement.
///
/// Elements are numbered 0 for the null space, 1 for the full space, then
/// seeds in order, then new subspaces in discovery order. Seeds are
/// labelled `s0`, `s1`, ... and their complements `~s0`, ...
pub fn generate_projection_lattice(
    seeds: &[SubspaceBasis],
    cap: usize,
    tol: &Tolerances,
) -> Result<ProjectionLattice, HilbertError> {
    let Some(d) = seeds.first().map(SubspaceBasis::dim) else {
        return Err(HilbertError::EmptySpace);
    };
    if let Some(s) = seeds.iter().find(|s| s.dim() != d) {
        return Err(HilbertError::DimensionMismatch(s.dim(), d));
    }
    let mut c = Closure {
        tol: *tol,
        cap: cap.max(2),
        bases: Vec::new(),
        projections: Vec::new(),
    };
    c.intern(SubspaceBasis::zero(d))?;
    c.intern(SubspaceBasis::full(d))?;
    let mut seed_index = Vec::new();
    for s in seeds {
        seed_index.push(c.intern(s.clone())?);
    }
    let mut ortho: Vec<Option<usize>> = Vec::new();
    let mut i = 0;
    while i < c.bases.len() {
        let o = c.intern(subspace_ortho(&c.bases[i]))?;
        for j in 0..=i {
            let m = subspace_meet(&c.bases[i], &c.bases[j])?;
            c.intern(m)?;
            let jn = subspace_join(&c.bases[i], &c.bases[j])?;
            c.intern(jn)?;
        }
        ortho.resize(c.bases.len(), None);
        ortho[i] = Some(o);
        i += 1;
    }
    let n = c.bases.len();
    let ortho: Vec<usize> = ortho.into_iter().map(|o| o.expect("closed")).collect();

    // a <= b iff P_b P_a = P_a
    let mut leq = vec![false; n * n];
    for a in 0..n {
        for b in 0..n {
            let pa = c.projections[a].matrix();
            let pb = c.projections[b].matrix();
            leq[a * n + b] = max_abs(&(pb * pa - pa)) < tol.equality;
        }
    }
    let mut labels = vec![None; n];
    labels[0] = Some("0".to_string());
    labels[1] = Some("1".to_string());
    for (k, &s) in seed_index.iter().enumerate() {
        if labels[s].is_none() {
            labels[s] = Some(format!("s{k}"));
        }
    }
    for (k, &s) in seed_index.iter().enumerate() {
        let o = ortho[s];
        if labels[o].is_none() {
            labels[o] = Some(format!("~s{k}"));
        }
    }
    let lattice = OrthoLattice::from_structure(Structure {
        size: n,
        leq,
        ortho,
        bottom: 0,
        top: 1,
        labels,
        name: Some(format!("closure-d{d}")),
    })?;
    if let Some(w) = lattice.is_orthomodular().witness {
        return Err(LatticeError::LawViolation {
            law: Law::Orthomodular,
            witness: w,
        }
        .into());
    }
    Ok(ProjectionLattice {
        lattice,
        embedding: c.bases,
        projections: c.projections,
    })
}

/// Born values `tr(ρ P_x)` for every element, plus their rational
/// rounding.
#[derive(Debug, Clone)]
pub struct BornState {
    pub values: Vec<f64>,
    pub state: State,
}

pub fn born_state_on_lattice(rho: &DensityMatrix, pl: &ProjectionLattice) -> Result<BornState, HilbertError> {
    let values = pl
        .projections
        .iter()
        .map(|p| born(rho, p))
        .collect::<Result<Vec<_>, _>>()?;
    let state = State::from_f64(&values);
    Ok(BornState { values, state })
}
