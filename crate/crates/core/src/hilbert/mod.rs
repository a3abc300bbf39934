//! Finite-dimensional complex Hilbert spaces: projections, density
//! operators, the Born rule, and subspace lattice operations.
//!
//! All arithmetic is `f64`. Tolerances are collected in [`Tolerances`].

mod closure;
mod io;
mod random;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

use crate::lattice::LatticeError;

pub use closure::{born_state_on_lattice, generate_projection_lattice, BornState, ProjectionLattice, DEFAULT_CLOSURE_CAP};
pub use io::{parse_matrix, write_matrix};
pub use random::{random_density, random_projection, random_resolution, random_unit_vector};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HilbertError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("vectors are not orthonormal (deviation {0:.3e})")]
    NotOrthonormal(f64),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not idempotent (deviation {0:.3e})")]
    NotIdempotent(f64),
    #[error("trace is {0}, not 1")]
    Trace(f64),
    #[error("negative eigenvalue {0:.3e}")]
    NotPositive(f64),
    #[error("vector norm is {0}, not 1")]
    NotUnit(f64),
    #[error("rank {rank} exceeds dimension {dim}")]
    RankTooLarge { rank: usize, dim: usize },
    #[error("dimension must be at least 1")]
    EmptySpace,
    #[error("Born value has imaginary part {0:.3e}")]
    ComplexValue(f64),
    #[error("Born value {0} lies outside [0,1]")]
    OutOfRange(f64),
    #[error("closure exceeded {cap} elements")]
    ClosureOverflow { cap: usize },
    #[error("subspaces at projector distance {0:.3e} are neither clearly equal nor distinct")]
    IllConditioned(f64),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("matrix format: {0}")]
    Format(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Hermiticity, idempotence and orthonormality checks.
    pub structure: f64,
    /// Eigenvalue threshold separating zero from nonzero.
    pub rank: f64,
    /// Projector distance below which subspaces are equal.
    pub equality: f64,
    /// Distances in `[ambiguity, equality)` are reported as ill-conditioned.
    pub ambiguity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            structure: 1e-9,
            rank: 1e-9,
            equality: 1e-8,
            ambiguity: 1e-10,
        }
    }
}

impl Tolerances {
    /// Override the equality threshold, keeping the ambiguity band two
    /// decades wide.
    pub fn with_equality(eq: f64) -> Self {
        Self {
            equality: eq,
            ambiguity: eq / 100.0,
            ..Self::default()
        }
    }
}

/// Largest absolute entry.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn hermitian_deviation(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

fn check_square(m: &CMatrix) -> Result<usize, HilbertError> {
    if m.nrows() != m.ncols() {
        return Err(HilbertError::NotSquare(m.nrows(), m.ncols()));
    }
    if m.nrows() == 0 {
        return Err(HilbertError::EmptySpace);
    }
    Ok(m.nrows())
}

/// Orthonormal vectors spanning a subspace of `C^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    dim: usize,
    vectors: Vec<CVector>,
}

impl SubspaceBasis {
    pub fn new(dim: usize, vectors: Vec<CVector>) -> Result<Self, HilbertError> {
        Self::with_tolerance(dim, vectors, Tolerances::default().structure)
    }

    pub fn with_tolerance(dim: usize, vectors: Vec<CVector>, tol: f64) -> Result<Self, HilbertError> {
        if dim == 0 {
            return Err(HilbertError::EmptySpace);
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
            return Err(HilbertError::DimensionMismatch(v.len(), dim));
        }
        let mut worst: f64 = 0.0;
        for (i, u) in vectors.iter().enumerate() {
            for (j, v) in vectors.iter().enumerate().skip(i) {
                let ip = u.dotc(v);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ip - Complex64::new(target, 0.0)).norm());
            }
        }
        if worst > tol {
            return Err(HilbertError::NotOrthonormal(worst));
        }
        Ok(Self { dim, vectors })
    }

    /// Orthonormalize an arbitrary spanning set; vectors that add nothing
    /// new are dropped.
    pub fn span(dim: usize, spanning: &[CVector]) -> Result<Self, HilbertError> {
        if dim == 0 {
            return Err(HilbertError::EmptySpace);
        }
        if let Some(v) = spanning.iter().find(|v| v.len() != dim) {
            return Err(HilbertError::DimensionMismatch(v.len(), dim));
        }
        let mut p = CMatrix::zeros(dim, dim);
        for v in spanning {
            p += v * v.adjoint();
        }
        Ok(Self::range_of(&p, 1e-9 * (1.0 + max_abs(&p))))
    }

    /// Eigenvectors of a Hermitian matrix with eigenvalue above `threshold`.
    fn range_of(h: &CMatrix, threshold: f64) -> Self {
        let dim = h.nrows();
        let eig = SymmetricEigen::new(h.clone());
        let mut idx: Vec<usize> = (0..dim).filter(|&i| eig.eigenvalues[i] > threshold).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let vectors = idx
            .into_iter()
            .map(|i| eig.eigenvectors.column(i).into_owned())
            .collect();
        Self { dim, vectors }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            vectors: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        Self {
            dim,
            vectors: (0..dim)
                .map(|i| CVector::from_fn(dim, |r, _| Complex64::new(if r == i { 1.0 } else { 0.0 }, 0.0)))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }
}

/// An orthogonal projection `P = P† = P²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    matrix: CMatrix,
}

impl Projection {
    pub fn new(matrix: CMatrix) -> Result<Self, HilbertError> {
        Self::with_tolerance(matrix, Tolerances::default().structure)
    }

    pub fn with_tolerance(matrix: CMatrix, tol: f64) -> Result<Self, HilbertError> {
        check_square(&matrix)?;
        let h = hermitian_deviation(&matrix);
        if h > tol {
            return Err(HilbertError::NotHermitian(h));
        }
        let i = max_abs(&(&matrix * &matrix - &matrix));
        if i > tol {
            return Err(HilbertError::NotIdempotent(i));
        }
        Ok(Self { matrix })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            matrix: CMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Trace, rounded to the nearest integer.
    pub fn rank(&self) -> usize {
        self.matrix.trace().re.round().max(0.0) as usize
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn complement(&self) -> Projection {
        Projection {
            matrix: CMatrix::identity(self.dim(), self.dim()) - &self.matrix,
        }
    }

    /// Largest entry of `self - other`.
    pub fn distance(&self, other: &Projection) -> f64 {
        max_abs(&(&self.matrix - &other.matrix))
    }
}

/// A positive semidefinite Hermitian matrix of unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self, HilbertError> {
        check_square(&matrix)?;
        let h = hermitian_deviation(&matrix);
        if h > 1e-9 {
            return Err(HilbertError::NotHermitian(h));
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(HilbertError::Trace(tr.re));
        }
        let min = SymmetricEigen::new(matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min < -1e-9 {
            return Err(HilbertError::NotPositive(min));
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|` for a unit vector.
    pub fn pure(psi: &CVector) -> Result<Self, HilbertError> {
        check_unit(psi)?;
        Self::new(psi * psi.adjoint())
    }

    /// `I/d`.
    pub fn maximally_mixed(dim: usize) -> Result<Self, HilbertError> {
        if dim == 0 {
            return Err(HilbertError::EmptySpace);
        }
        Ok(Self {
            matrix: CMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

fn check_unit(v: &CVector) -> Result<(), HilbertError> {
    let n = v.norm();
    if (n - 1.0).abs() > 1e-9 {
        return Err(HilbertError::NotUnit(n));
    }
    Ok(())
}

pub fn projector_from_basis(b: &SubspaceBasis) -> Projection {
    let mut m = CMatrix::zeros(b.dim, b.dim);
    for v in &b.vectors {
        m += v * v.adjoint();
    }
    Projection { matrix: m }
}

/// `tr(ρP)`, real part, clamped into `[0,1]` when within `1e-9` of it.
pub fn born(rho: &DensityMatrix, p: &Projection) -> Result<f64, HilbertError> {
    if rho.dim() != p.dim() {
        return Err(HilbertError::DimensionMismatch(rho.dim(), p.dim()));
    }
    // tr(ρP) = Σ_ij ρ_ij P_ji
    let mut t = Complex64::new(0.0, 0.0);
    for i in 0..rho.dim() {
        for j in 0..rho.dim() {
            t += rho.matrix[(i, j)] * p.matrix[(j, i)];
        }
    }
    if t.im.abs() >= 1e-12 {
        return Err(HilbertError::ComplexValue(t.im));
    }
    let v = t.re;
    if !(-1e-9..=1.0 + 1e-9).contains(&v) {
        return Err(HilbertError::OutOfRange(v));
    }
    Ok(v.clamp(0.0, 1.0))
}

/// `|⟨ψ,φ⟩|²`.
pub fn transition_probability(psi: &CVector, phi: &CVector) -> Result<f64, HilbertError> {
    if psi.len() != phi.len() {
        return Err(HilbertError::DimensionMismatch(psi.len(), phi.len()));
    }
    check_unit(psi)?;
    check_unit(phi)?;
    Ok(psi.dotc(phi).norm_sqr().min(1.0))
}

fn same_dim(a: &SubspaceBasis, b: &SubspaceBasis) -> Result<usize, HilbertError> {
    if a.dim != b.dim {
        return Err(HilbertError::DimensionMismatch(a.dim, b.dim));
    }
    Ok(a.dim)
}

/// Intersection: the kernel of `(I - P_A) + (I - P_B)`.
pub fn subspace_meet(a: &SubspaceBasis, b: &SubspaceBasis) -> Result<SubspaceBasis, HilbertError> {
    let d = same_dim(a, b)?;
    let pa = projector_from_basis(a);
    let pb = projector_from_basis(b);
    let s = CMatrix::identity(d, d) * Complex64::new(2.0, 0.0) - pa.matrix - pb.matrix;
    let eig = SymmetricEigen::new(s);
    let vectors = (0..d)
        .filter(|&i| eig.eigenvalues[i].abs() < Tolerances::default().rank)
        .map(|i| eig.eigenvectors.column(i).into_owned())
        .collect();
    Ok(SubspaceBasis { dim: d, vectors })
}

/// Span of the union: the range of `P_A + P_B`.
pub fn subspace_join(a: &SubspaceBasis, b: &SubspaceBasis) -> Result<SubspaceBasis, HilbertError> {
    same_dim(a, b)?;
    let s = projector_from_basis(a).matrix + projector_from_basis(b).matrix;
    Ok(SubspaceBasis::range_of(&s, Tolerances::default().rank))
}

/// Orthogonal complement: the range of `I - P_A`.
pub fn subspace_ortho(a: &SubspaceBasis) -> SubspaceBasis {
    SubspaceBasis::range_of(&projector_from_basis(a).complement().matrix, 0.5)
}

/// Basis vector `|i⟩` of `C^dim`.
pub fn ket(dim: usize, i: usize) -> CVector {
    CVector::from_fn(dim, |r, _| Complex64::new(if r == i { 1.0 } else { 0.0 }, 0.0))
}

/// Normalized vector from real and imaginary parts.
pub fn unit(re: &[f64], im: &[f64]) -> CVector {
    let v = CVector::from_iterator(
        re.len(),
        re.iter()
            .zip(im.iter().chain(std::iter::repeat(&0.0)))
            .map(|(&r, &i)| Complex64::new(r, i)),
    );
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn line(v: CVector) -> SubspaceBasis {
        SubspaceBasis::new(v.len(), vec![v]).unwrap()
    }

    pub(crate) fn plus() -> CVector {
        unit(&[1.0, 1.0], &[])
    }

    #[test]
    fn projector_examples() {
        assert_eq!(projector_from_basis(&SubspaceBasis::zero(2)), Projection::zero(2));
        assert!(projector_from_basis(&SubspaceBasis::full(2)).distance(&Projection::identity(2)) < 1e-15);
        let p = projector_from_basis(&line(plus()));
        for z in p.matrix().iter() {
            assert!((z - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        }
        assert_eq!(p.rank(), 1);
        assert!(Projection::new(p.matrix().clone()).is_ok());
        assert!(matches!(
            SubspaceBasis::new(2, vec![ket(2, 0), plus()]),
            Err(HilbertError::NotOrthonormal(_))
        ));
    }

    #[test]
    fn born_examples() {
        let rho = DensityMatrix::pure(&ket(2, 0)).unwrap();
        assert_eq!(born(&rho, &Projection::identity(2)).unwrap(), 1.0);
        assert_eq!(born(&rho, &projector_from_basis(&line(ket(2, 0)))).unwrap(), 1.0);
        let half = born(&rho, &projector_from_basis(&line(plus()))).unwrap();
        assert!((half - 0.5).abs() < 1e-15);
        assert!(matches!(
            born(&rho, &Projection::identity(3)),
            Err(HilbertError::DimensionMismatch(2, 3))
        ));
    }

    #[test]
    fn transition_examples() {
        let psi = ket(2, 0);
        assert_eq!(transition_probability(&psi, &psi).unwrap(), 1.0);
        assert_eq!(transition_probability(&psi, &ket(2, 1)).unwrap(), 0.0);
        assert!((transition_probability(&psi, &plus()).unwrap() - 0.5).abs() < 1e-15);
        let long = psi.clone() * Complex64::new(2.0, 0.0);
        assert!(matches!(transition_probability(&psi, &long), Err(HilbertError::NotUnit(_))));
    }

    #[test]
    fn subspace_examples() {
        assert_eq!(subspace_ortho(&SubspaceBasis::full(2)).rank(), 0);
        assert_eq!(subspace_join(&line(ket(2, 0)), &line(ket(2, 1))).unwrap().rank(), 2);
        assert_eq!(subspace_meet(&line(ket(2, 0)), &line(plus())).unwrap().rank(), 0);
        let a = line(ket(3, 0));
        let b = SubspaceBasis::span(3, &[ket(3, 0), ket(3, 1)]).unwrap();
        let m = subspace_meet(&a, &b).unwrap();
        assert!(projector_from_basis(&m).distance(&projector_from_basis(&a)) < 1e-12);
        let oo = subspace_ortho(&subspace_ortho(&b));
        assert!(projector_from_basis(&oo).distance(&projector_from_basis(&b)) < 1e-9);
        assert!(subspace_meet(&a, &line(ket(2, 0))).is_err());
    }

    #[test]
    fn density_validation() {
        assert!(matches!(
            DensityMatrix::new(CMatrix::identity(2, 2)),
            Err(HilbertError::Trace(_))
        ));
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = Complex64::new(1.5, 0.0);
        m[(1, 1)] = Complex64::new(-0.5, 0.0);
        assert!(matches!(DensityMatrix::new(m), Err(HilbertError::NotPositive(_))));
        assert!(DensityMatrix::maximally_mixed(3).is_ok());
    }
}
