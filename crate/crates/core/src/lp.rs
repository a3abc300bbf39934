//! Exact two-phase simplex over the rationals.
//!
//! Problems are in standard form `A z = b, z >= 0`. Pivoting follows
//! Bland's rule, so the method terminates on degenerate problems. An
//! infeasible system comes with a Farkas certificate `y` satisfying
//! `Aᵀy >= 0` and `bᵀy < 0`.

use num_traits::{One, Signed, Zero};

use crate::linalg::dot;
use crate::Rational;

/// Farkas multipliers proving `A z = b, z >= 0` has no solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub multipliers: Vec<Rational>,
}

impl Certificate {
    /// Check `Aᵀy >= 0` column by column and `bᵀy < 0`.
    pub fn verify(&self, a: &[Vec<Rational>], b: &[Rational]) -> bool {
        let y = &self.multipliers;
        if y.len() != a.len() || b.len() != a.len() {
            return false;
        }
        let cols = a.first().map_or(0, Vec::len);
        let columns_ok = (0..cols).all(|j| {
            let s: Rational = a
                .iter()
                .zip(y)
                .filter(|(row, yi)| !row[j].is_zero() && !yi.is_zero())
                .map(|(row, yi)| &row[j] * yi)
                .sum();
            !s.is_negative()
        });
        columns_ok && dot(b, y).is_negative()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { point: Vec<Rational>, value: Rational },
    Unbounded,
}

/// A tableau holding a feasible basis, ready for phase-two objectives.
#[derive(Debug, Clone)]
pub struct FeasibleTableau {
    vars: usize,
    /// Rows of `[B⁻¹A | B⁻¹b]` restricted to original columns.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
}

impl FeasibleTableau {
    /// Run phase one. Returns the feasible tableau or a certificate.
    pub fn new(a: &[Vec<Rational>], b: &[Rational]) -> Result<Self, Certificate> {
        let m = a.len();
        let n = a.first().map_or(0, Vec::len);
        let width = n + m + 1;
        let rhs = n + m;
        let mut flipped = vec![false; m];
        let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
        for i in 0..m {
            let mut row = Vec::with_capacity(width);
            let neg = b[i].is_negative();
            flipped[i] = neg;
            row.extend(a[i].iter().map(|x| if neg { -x.clone() } else { x.clone() }));
            row.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
            row.push(if neg { -b[i].clone() } else { b[i].clone() });
            t.push(row);
        }
        let mut basis: Vec<usize> = (n..n + m).collect();
        let cost: Vec<Rational> = (0..n + m)
            .map(|j| if j >= n { Rational::one() } else { Rational::zero() })
            .collect();
        minimize(&mut t, &mut basis, &cost, n + m);

        let objective: Rational = basis
            .iter()
            .zip(&t)
            .map(|(&bj, row)| &cost[bj] * &row[rhs])
            .sum();
        if objective.is_positive() {
            // y_i = c_Bᵀ B⁻¹ e_i, read off the artificial columns
            let y: Vec<Rational> = (0..m)
                .map(|i| {
                    let yi: Rational = basis
                        .iter()
                        .zip(&t)
                        .map(|(&bj, row)| &cost[bj] * &row[n + i])
                        .sum();
                    if flipped[i] {
                        yi
                    } else {
                        -yi
                    }
                })
                .collect();
            return Err(Certificate { multipliers: y });
        }

        // Drive artificials out of the basis; rows where that is
        // impossible are redundant and dropped.
        let mut keep = vec![true; m];
        for r in 0..m {
            if basis[r] >= n {
                if let Some(j) = (0..n).find(|&j| !t[r][j].is_zero()) {
                    pivot(&mut t, &mut basis, r, j);
                } else {
                    keep[r] = false;
                }
            }
        }
        let mut rows = Vec::new();
        let mut kept_basis = Vec::new();
        for r in 0..m {
            if keep[r] {
                let mut row = t[r][..n].to_vec();
                row.push(t[r][rhs].clone());
                rows.push(row);
                kept_basis.push(basis[r]);
            }
        }
        Ok(Self {
            vars: n,
            rows,
            basis: kept_basis,
        })
    }

    /// Current basic feasible solution.
    pub fn point(&self) -> Vec<Rational> {
        let mut z = vec![Rational::zero(); self.vars];
        for (row, &bj) in self.rows.iter().zip(&self.basis) {
            z[bj] = row[self.vars].clone();
        }
        z
    }

    /// Maximize `cᵀz` over the feasible set.
    pub fn maximize(&self, c: &[Rational]) -> LpOutcome {
        let mut t = self.rows.clone();
        let mut basis = self.basis.clone();
        let cost: Vec<Rational> = c.iter().map(|x| -x.clone()).collect();
        if !minimize(&mut t, &mut basis, &cost, self.vars) {
            return LpOutcome::Unbounded;
        }
        let mut point = vec![Rational::zero(); self.vars];
        for (row, &bj) in t.iter().zip(&basis) {
            point[bj] = row[self.vars].clone();
        }
        let value = dot(c, &point);
        LpOutcome::Optimal { point, value }
    }
}

/// Bland's-rule simplex minimizing `cost` over columns `0..entering_limit`.
/// The last column of each row is the right-hand side. Returns false if
/// the objective is unbounded below.
fn minimize(t: &mut [Vec<Rational>], basis: &mut [usize], cost: &[Rational], entering_limit: usize) -> bool {
    let rhs = t.first().map_or(0, |r| r.len() - 1);
    loop {
        let entering = (0..entering_limit).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let reduced = basis
                .iter()
                .zip(t.iter())
                .filter(|(_, row)| !row[j].is_zero())
                .fold(cost[j].clone(), |acc, (&bj, row)| acc - &cost[bj] * &row[j]);
            reduced.is_negative()
        });
        let Some(j) = entering else {
            return true;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for (r, row) in t.iter().enumerate() {
            if row[j].is_positive() {
                let ratio = &row[rhs] / &row[j];
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => ratio < *lratio || (ratio == *lratio && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            return false;
        };
        pivot(t, basis, r, j);
    }
}

fn pivot(t: &mut [Vec<Rational>], basis: &mut [usize], r: usize, j: usize) {
    let inv = t[r][j].recip();
    for x in t[r].iter_mut() {
        *x *= &inv;
    }
    let pivot_row = t[r].clone();
    for (k, row) in t.iter_mut().enumerate() {
        if k != r && !row[j].is_zero() {
            let f = row[j].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
    }
    basis[r] = j;
}
