//! Exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::Rational;

/// Incrementally maintained reduced row echelon basis of a row space.
#[derive(Debug, Clone)]
pub struct RowEchelon {
    width: usize,
    rows: Vec<Vec<Rational>>,
    /// Pivot column of each row.
    pivots: Vec<usize>,
}

impl RowEchelon {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `row` against the basis; returns the remainder.
    pub fn reduce(&self, mut row: Vec<Rational>) -> Vec<Rational> {
        assert_eq!(row.len(), self.width);
        for (basis, &p) in self.rows.iter().zip(&self.pivots) {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, b) in row.iter_mut().zip(basis) {
                    if !b.is_zero() {
                        *x -= &f * b;
                    }
                }
            }
        }
        row
    }

    /// Add `row` to the span; returns false if it was already in it.
    pub fn insert(&mut self, row: Vec<Rational>) -> bool {
        let mut row = self.reduce(row);
        let Some(p) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = row[p].recip();
        for x in row.iter_mut() {
            *x *= &inv;
        }
        for basis in self.rows.iter_mut() {
            if !basis[p].is_zero() {
                let f = basis[p].clone();
                for (x, r) in basis.iter_mut().zip(&row) {
                    if !r.is_zero() {
                        *x -= &f * r;
                    }
                }
            }
        }
        self.rows.push(row);
        self.pivots.push(p);
        true
    }
}

/// Solution set `{ particular + directions * t }` of a linear system.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSolution {
    pub particular: Vec<Rational>,
    /// One direction per free variable, each of full length.
    pub directions: Vec<Vec<Rational>>,
    pub free: Vec<usize>,
}

/// Solve `rows * x = rhs` exactly. Each row is `(coefficients, rhs)`.
/// Returns `None` if the system is inconsistent.
pub fn solve_affine(width: usize, rows: &[(Vec<Rational>, Rational)]) -> Option<AffineSolution> {
    let mut ech = RowEchelon::new(width + 1);
    for (coeffs, rhs) in rows {
        let mut r = coeffs.clone();
        r.push(rhs.clone());
        ech.insert(r);
    }
    if ech.pivots.contains(&width) {
        return None;
    }
    let mut particular = vec![Rational::zero(); width];
    for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
        particular[p] = row[width].clone();
    }
    let free: Vec<usize> = (0..width).filter(|c| !ech.pivots.contains(c)).collect();
    let directions = free
        .iter()
        .map(|&f| {
            let mut d = vec![Rational::zero(); width];
            d[f] = Rational::one();
            for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                d[p] = -row[f].clone();
            }
            d
        })
        .collect();
    Some(AffineSolution {
        particular,
        directions,
        free,
    })
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let Some(first) = rows.first() else {
        return 0;
    };
    let mut ech = RowEchelon::new(first.len());
    for r in rows {
        ech.insert(r.clone());
    }
    ech.rank()
}

/// Inverse of a square matrix by Gauss-Jordan elimination.
pub fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn row(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x, 1)).collect()
    }

    #[test]
    fn solves_and_parametrizes() {
        // x0 + x1 = 1, x2 = 1/2
        let sol = solve_affine(3, &[(row(&[1, 1, 0]), q(1, 1)), (row(&[0, 0, 1]), q(1, 2))]).unwrap();
        assert_eq!(sol.free, vec![1]);
        assert_eq!(sol.particular, vec![q(1, 1), q(0, 1), q(1, 2)]);
        assert_eq!(sol.directions, vec![row(&[-1, 1, 0])]);
    }

    #[test]
    fn inconsistent() {
        assert!(solve_affine(1, &[(row(&[1]), q(0, 1)), (row(&[2]), q(1, 1))]).is_none());
    }

    #[test]
    fn rank_and_inverse() {
        assert_eq!(rank(&[row(&[1, 2]), row(&[2, 4]), row(&[0, 1])]), 2);
        let m = vec![row(&[2, 1]), row(&[1, 1])];
        let inv = invert(&m).unwrap();
        assert_eq!(inv, vec![row(&[1, -1]), row(&[-1, 2])]);
        assert!(invert(&[row(&[1, 2]), row(&[2, 4])]).is_none());
    }
}
