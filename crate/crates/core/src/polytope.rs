//! Exact vertex enumeration by the double-description method.
//!
//! A bounded polytope `{ t : A t <= b }` is homogenized to the pointed cone
//! `{ (t, λ) : A t - b λ <= 0, λ >= 0 }`. Starting from a simplicial cone
//! cut out by `dim + 1` independent rows, the remaining rows are added one
//! at a time; new extreme rays come from adjacent pairs on opposite sides
//! of each new hyperplane (combinatorial adjacency test). Rays with
//! `λ > 0` are the vertices.

use num_traits::{One, Signed, Zero};

use crate::lattice::BitSet;
use crate::linalg::{dot, invert, RowEchelon};
use crate::Rational;

#[derive(Debug, Clone)]
struct Ray {
    coords: Vec<Rational>,
    zeros: BitSet,
}

/// Scale so the first nonzero coordinate has absolute value one.
fn normalize(v: &mut [Rational]) {
    if let Some(p) = v.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
        let inv = p.recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
    }
}

/// Vertices of the bounded polytope `{ t : a t <= b }` in dimension
/// `dim`, sorted lexicographically without duplicates. An empty polytope
/// yields no vertices.
///
/// Panics if the homogenized system does not have full rank, which means
/// the polytope is unbounded.
pub fn vertices(dim: usize, a: &[Vec<Rational>], b: &[Rational]) -> Vec<Vec<Rational>> {
    // Homogenized rows, zero rows checked and removed, duplicates merged.
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (ai, bi) in a.iter().zip(b) {
        assert_eq!(ai.len(), dim);
        if ai.iter().all(Zero::is_zero) {
            if bi.is_negative() {
                return Vec::new();
            }
            continue;
        }
        let mut r = ai.clone();
        r.push(-bi.clone());
        normalize(&mut r);
        rows.push(r);
    }
    let mut lambda = vec![Rational::zero(); dim + 1];
    lambda[dim] = -Rational::one();
    rows.push(lambda);
    rows.sort();
    rows.dedup();

    let d = dim + 1;
    let mut ech = RowEchelon::new(d);
    let mut initial = Vec::with_capacity(d);
    for (i, r) in rows.iter().enumerate() {
        if ech.insert(r.clone()) {
            initial.push(i);
            if initial.len() == d {
                break;
            }
        }
    }
    assert_eq!(initial.len(), d, "polytope is unbounded");

    let basis: Vec<Vec<Rational>> = initial.iter().map(|&i| rows[i].clone()).collect();
    let inv = invert(&basis).expect("independent rows");
    let mut processed = BitSet::new(rows.len());
    for &i in &initial {
        processed.insert(i);
    }
    // Ray j is minus column j of the inverse: tight on every initial row but j.
    let mut rays: Vec<Ray> = (0..d)
        .map(|j| {
            let mut coords: Vec<Rational> = inv.iter().map(|r| -r[j].clone()).collect();
            normalize(&mut coords);
            let mut zeros = BitSet::new(rows.len());
            for (k, &i) in initial.iter().enumerate() {
                if k != j {
                    zeros.insert(i);
                }
            }
            Ray { coords, zeros }
        })
        .collect();

    for (i, row) in rows.iter().enumerate() {
        if processed.contains(i) {
            continue;
        }
        let values: Vec<Rational> = rays.iter().map(|r| dot(row, &r.coords)).collect();
        let plus: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_negative()).collect();
        let mut next: Vec<Ray> = Vec::new();
        for &p in &plus {
            for &m in &minus {
                let common = rays[p].zeros.and(&rays[m].zeros);
                if common.count() + 2 < d {
                    continue;
                }
                let adjacent = !rays.iter().enumerate().any(|(k, r)| {
                    k != p && k != m && common.is_subset(&r.zeros)
                });
                if !adjacent {
                    continue;
                }
                let mut coords: Vec<Rational> = rays[m]
                    .coords
                    .iter()
                    .zip(&rays[p].coords)
                    .map(|(xm, xp)| &values[p] * xm - &values[m] * xp)
                    .collect();
                normalize(&mut coords);
                let mut zeros = common;
                zeros.insert(i);
                next.push(Ray { coords, zeros });
            }
        }
        for (k, mut r) in rays.into_iter().enumerate() {
            if values[k].is_zero() {
                r.zeros.insert(i);
                next.push(r);
            } else if values[k].is_negative() {
                next.push(r);
            }
        }
        rays = next;
        processed.insert(i);
    }

    let mut out: Vec<Vec<Rational>> = rays
        .into_iter()
        .filter(|r| r.coords[dim].is_positive())
        .map(|r| {
            let l = r.coords[dim].clone();
            r.coords[..dim].iter().map(|x| x / &l).collect()
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn box_constraints(dim: usize) -> (Vec<Vec<Rational>>, Vec<Rational>) {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for i in 0..dim {
            let mut up = vec![q(0, 1); dim];
            up[i] = q(1, 1);
            let mut down = vec![q(0, 1); dim];
            down[i] = q(-1, 1);
            a.push(up);
            b.push(q(1, 1));
            a.push(down);
            b.push(q(0, 1));
        }
        (a, b)
    }

    #[test]
    fn cube_vertices() {
        for dim in 0..=5 {
            let (a, b) = box_constraints(dim);
            let v = vertices(dim, &a, &b);
            assert_eq!(v.len(), 1 << dim);
            for p in &v {
                assert!(p.iter().all(|x| x.is_zero() || x.is_one()));
            }
        }
    }

    #[test]
    fn simplex_with_redundant_rows() {
        // t0, t1 >= 0, t0 + t1 <= 1, plus the redundant t0 <= 2
        let a = vec![
            vec![q(-1, 1), q(0, 1)],
            vec![q(0, 1), q(-1, 1)],
            vec![q(1, 1), q(1, 1)],
            vec![q(2, 1), q(2, 1)],
            vec![q(1, 1), q(0, 1)],
        ];
        let b = vec![q(0, 1), q(0, 1), q(1, 1), q(2, 1), q(2, 1)];
        let v = vertices(2, &a, &b);
        assert_eq!(
            v,
            vec![
                vec![q(0, 1), q(0, 1)],
                vec![q(0, 1), q(1, 1)],
                vec![q(1, 1), q(0, 1)]
            ]
        );
    }

    #[test]
    fn empty_polytope() {
        // t <= 0 and t >= 1
        let a = vec![vec![q(1, 1)], vec![q(-1, 1)]];
        let b = vec![q(0, 1), q(-1, 1)];
        assert!(vertices(1, &a, &b).is_empty());
        assert!(vertices(0, &[], &[]).len() == 1);
    }

    #[test]
    fn cross_polytope() {
        // |t0| + |t1| + |t2| <= 1: 8 facets, 6 vertices
        let mut a = Vec::new();
        for s in 0..8 {
            a.push(
                (0..3)
                    .map(|i| if s >> i & 1 == 1 { q(-1, 1) } else { q(1, 1) })
                    .collect::<Vec<_>>(),
            );
        }
        let b = vec![q(1, 1); 8];
        let v = vertices(3, &a, &b);
        assert_eq!(v.len(), 6);
    }

    #[test]
    fn brute_force_agreement() {
        // Every vertex from the DD method is a basic feasible point found by
        // solving all dim-subsets of rows, and vice versa.
        let a = vec![
            vec![q(1, 1), q(2, 1)],
            vec![q(3, 1), q(-1, 1)],
            vec![q(-1, 1), q(0, 1)],
            vec![q(0, 1), q(-1, 1)],
            vec![q(1, 1), q(1, 1)],
        ];
        let b = vec![q(4, 1), q(3, 1), q(0, 1), q(0, 1), q(5, 2)];
        let dd = vertices(2, &a, &b);
        let mut brute = Vec::new();
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                if let Some(inv) = invert(&[a[i].clone(), a[j].clone()]) {
                    let t: Vec<Rational> = inv.iter().map(|r| &r[0] * &b[i] + &r[1] * &b[j]).collect();
                    if a.iter().zip(&b).all(|(r, bi)| dot(r, &t) <= *bi) {
                        brute.push(t);
                    }
                }
            }
        }
        brute.sort();
        brute.dedup();
        assert_eq!(dd, brute);
    }
}
