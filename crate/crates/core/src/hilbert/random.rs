use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{projector_from_basis, CMatrix, CVector, DensityMatrix, HilbertError, Projection, SubspaceBasis};

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn gaussian_vector(rng: &mut ChaCha8Rng, d: usize) -> CVector {
    CVector::from_fn(d, |_, _| gaussian(rng))
}

/// `k` orthonormal vectors by Gram-Schmidt on complex Gaussian draws.
fn orthonormal(rng: &mut ChaCha8Rng, d: usize, k: usize) -> Vec<CVector> {
    let mut out: Vec<CVector> = Vec::with_capacity(k);
    while out.len() < k {
        let mut v = gaussian_vector(rng, d);
        // two passes for numerical orthogonality
        for _ in 0..2 {
            for u in &out {
                let c = u.dotc(&v);
                v -= u * c;
            }
        }
        let n = v.norm();
        if n > 1e-6 {
            out.push(v / Complex64::new(n, 0.0));
        }
    }
    out
}

pub fn random_unit_vector(d: usize, seed: u64) -> Result<CVector, HilbertError> {
    if d == 0 {
        return Err(HilbertError::EmptySpace);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(orthonormal(&mut rng, d, 1).remove(0))
}

/// `G G† / tr(G G†)` for a complex Gaussian `d × d` matrix `G`.
pub fn random_density(d: usize, seed: u64) -> Result<DensityMatrix, HilbertError> {
    if d == 0 {
        return Err(HilbertError::EmptySpace);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = CMatrix::from_fn(d, d, |_, _| gaussian(&mut rng));
    let mut m = &g * g.adjoint();
    let tr = m.trace().re;
    m /= Complex64::new(tr, 0.0);
    // exact Hermitian symmetry and unit trace before validation
    let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let tr = m.trace().re;
    DensityMatrix::new(m / Complex64::new(tr, 0.0))
}

pub fn random_projection(d: usize, rank: usize, seed: u64) -> Result<Projection, HilbertError> {
    if d == 0 {
        return Err(HilbertError::EmptySpace);
    }
    if rank > d {
        return Err(HilbertError::RankTooLarge { rank, dim: d });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vs = orthonormal(&mut rng, d, rank);
    Ok(projector_from_basis(&SubspaceBasis::new(d, vs)?))
}

/// Mutually orthogonal projections summing to the identity: a random
/// orthonormal basis cut into between 1 and `d` consecutive groups.
pub fn random_resolution(d: usize, seed: u64) -> Result<Vec<Projection>, HilbertError> {
    if d == 0 {
        return Err(HilbertError::EmptySpace);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = orthonormal(&mut rng, d, d);
    let mut cuts: Vec<usize> = (1..d).filter(|_| rng.random_bool(0.5)).collect();
    cuts.push(d);
    let mut out = Vec::with_capacity(cuts.len());
    let mut start = 0;
    for end in cuts {
        let b = SubspaceBasis::new(d, basis[start..end].to_vec())?;
        out.push(projector_from_basis(&b));
        start = end;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{born, max_abs};
    use nalgebra::SymmetricEigen;

    #[test]
    fn density_examples() {
        let r = random_density(1, 5).unwrap();
        assert!((r.matrix()[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let r = random_density(3, 42).unwrap();
        assert!((r.matrix().trace().re - 1.0).abs() < 1e-12);
        let min = SymmetricEigen::new(r.matrix().clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        assert!(min >= -1e-9);
        assert_eq!(random_density(3, 42).unwrap(), r);
    }

    #[test]
    fn projection_examples() {
        assert_eq!(random_projection(3, 0, 1).unwrap(), Projection::zero(3));
        let p = random_projection(4, 2, 9).unwrap();
        assert_eq!(p.rank(), 2);
        assert!(Projection::new(p.matrix().clone()).is_ok());
        assert!(matches!(random_projection(2, 3, 0), Err(HilbertError::RankTooLarge { .. })));
    }

    #[test]
    fn resolutions_sum_to_identity() {
        for seed in 0..20 {
            let ps = random_resolution(3, seed).unwrap();
            let mut sum = CMatrix::zeros(3, 3);
            for p in &ps {
                sum += p.matrix();
            }
            assert!(max_abs(&(sum - CMatrix::identity(3, 3))) < 1e-12);
            let rho = random_density(3, seed + 100).unwrap();
            let total: f64 = ps.iter().map(|p| born(&rho, p).unwrap()).sum();
            assert!((total - 1.0).abs() < 1e-9);
        }
    }
}
