//! Two-phase revised simplex for equality-form programs
//!
//! ```text
//! minimize c·x  subject to  A x = b,  x >= 0
//! ```
//!
//! Generic over [`Scalar`]: with [`Rational`](crate::Rational) every pivot is
//! exact, with floats entries below the scalar's negligible threshold count as
//! zero. Bland's rule is used for both entering and leaving variables, so the
//! method terminates on degenerate programs.
//!
//! Only the basis inverse is kept up to date; columns are stored sparsely and
//! priced on demand, which suits the wide 0/1 coupling programs used here.

use crate::error::{Error, Result};
use crate::scalar::{ordered_sum, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution<S> {
    pub value: S,
    pub x: Vec<S>,
}

struct Revised<S> {
    /// Original columns as `(row, value)` lists, rows with negative rhs
    /// already negated. Column `n + i` is the artificial for row `i`.
    cols: Vec<Vec<(usize, S)>>,
    binv: Vec<Vec<S>>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    xb: Vec<S>,
}

impl<S: Scalar> Revised<S> {
    fn n(&self) -> usize {
        self.cols.len()
    }

    /// `(B^-1 a_j)_i`.
    fn entry(&self, i: usize, j: usize) -> S {
        if j >= self.n() {
            return self.binv[i][j - self.n()].clone();
        }
        ordered_sum(
            self.cols[j]
                .iter()
                .map(|(r, v)| self.binv[i][*r].clone() * v.clone()),
        )
    }

    fn column(&self, j: usize) -> Vec<S> {
        (0..self.basis.len()).map(|i| self.entry(i, j)).collect()
    }

    fn reduced_cost(&self, j: usize, cost: &[S], y: &[S]) -> S {
        let dot = if j >= self.n() {
            y[j - self.n()].clone()
        } else {
            ordered_sum(self.cols[j].iter().map(|(r, v)| y[*r].clone() * v.clone()))
        };
        cost[j].clone() - dot
    }

    fn duals(&self, cost: &[S]) -> Vec<S> {
        let m = self.basis.len();
        (0..m)
            .map(|r| {
                ordered_sum(
                    (0..m)
                        .filter(|&i| !cost[self.basis[i]].is_zero())
                        .map(|i| cost[self.basis[i]].clone() * self.binv[i][r].clone()),
                )
            })
            .collect()
    }

    fn pivot(&mut self, p: usize, u: &[S], entering: usize) {
        let inv = S::one() / u[p].clone();
        for v in self.binv[p].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() * inv.clone();
            }
        }
        self.xb[p] = self.xb[p].clone() * inv;
        let pivot_row = std::mem::take(&mut self.binv[p]);
        let support: Vec<usize> = (0..pivot_row.len())
            .filter(|&k| !pivot_row[k].is_zero())
            .collect();
        for i in 0..self.basis.len() {
            if i == p || u[i].is_zero() {
                continue;
            }
            let f = u[i].clone();
            for &k in &support {
                self.binv[i][k] = self.binv[i][k].clone() - f.clone() * pivot_row[k].clone();
            }
            self.xb[i] = self.xb[i].clone() - f * self.xb[p].clone();
        }
        self.binv[p] = pivot_row;
        self.is_basic[self.basis[p]] = false;
        self.is_basic[entering] = true;
        self.basis[p] = entering;
    }

    /// Runs simplex iterations with entering candidates `< allowed`.
    fn optimize(&mut self, cost: &[S], allowed: usize) -> Result<()> {
        loop {
            let y = self.duals(cost);
            let entering = (0..allowed).find(|&j| {
                if self.is_basic[j] {
                    return false;
                }
                let d = self.reduced_cost(j, cost, &y);
                d.is_negative() && !d.is_negligible()
            });
            let Some(col) = entering else {
                return Ok(());
            };
            let u = self.column(col);
            let mut leave: Option<(usize, S)> = None;
            for (i, a) in u.iter().enumerate() {
                if !a.is_positive() || a.is_negligible() {
                    continue;
                }
                let ratio = self.xb[i].clone() / a.clone();
                let better = match &leave {
                    None => true,
                    Some((best_i, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*best_i])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((p, _)) = leave else {
                return Err(Error::Unbounded);
            };
            self.pivot(p, &u, col);
        }
    }

    fn objective(&self, cost: &[S]) -> S {
        ordered_sum(
            self.basis
                .iter()
                .zip(&self.xb)
                .map(|(&j, x)| cost[j].clone() * x.clone()),
        )
    }
}

/// Solves `min c·x, A x = b, x >= 0`.
///
/// Rows that turn out to be linear combinations of others are tolerated:
/// their artificial variables are left basic at zero after phase one.
pub fn solve_equality_form<S: Scalar>(a: &[Vec<S>], b: &[S], c: &[S]) -> Result<LpSolution<S>> {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m, "rhs length");
    assert!(a.iter().all(|r| r.len() == n), "constraint width");

    let flip: Vec<bool> = b.iter().map(|v| v.is_negative()).collect();
    let cols = (0..n)
        .map(|j| {
            (0..m)
                .filter(|&i| !a[i][j].is_zero())
                .map(|i| {
                    (
                        i,
                        if flip[i] {
                            -a[i][j].clone()
                        } else {
                            a[i][j].clone()
                        },
                    )
                })
                .collect()
        })
        .collect();
    let binv = (0..m)
        .map(|i| {
            (0..m)
                .map(|k| if k == i { S::one() } else { S::zero() })
                .collect()
        })
        .collect();
    let xb = b.iter().map(|v| v.abs()).collect();
    let mut is_basic = vec![false; n + m];
    is_basic[n..].iter_mut().for_each(|v| *v = true);
    let mut lp = Revised {
        cols,
        binv,
        basis: (n..n + m).collect(),
        is_basic,
        xb,
    };

    // phase one: minimize the sum of artificials
    let phase1: Vec<S> = (0..n + m)
        .map(|j| if j < n { S::zero() } else { S::one() })
        .collect();
    lp.optimize(&phase1, n + m)?;
    if !lp.objective(&phase1).is_negligible() {
        return Err(Error::Infeasible);
    }

    // drive zero-level artificials out of the basis where possible
    for i in 0..m {
        if lp.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !lp.is_basic[j] && !lp.entry(i, j).is_negligible()) {
                let u = lp.column(j);
                lp.pivot(i, &u, j);
            }
        }
    }

    // phase two; artificials left basic sit on redundant rows and never enter
    let phase2: Vec<S> = c.iter().cloned().chain((0..m).map(|_| S::zero())).collect();
    lp.optimize(&phase2, n)?;

    let mut x = vec![S::zero(); n];
    for (i, &j) in lp.basis.iter().enumerate() {
        if j < n {
            x[j] = lp.xb[i].clone();
        }
    }
    Ok(LpSolution {
        value: lp.objective(&phase2),
        x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_transport_problem() {
        // supply (1/2, 1/2), demand (1/4, 3/4), costs [[0, 1], [1, 0]]
        let a = vec![
            vec![q(1, 1), q(1, 1), q(0, 1), q(0, 1)],
            vec![q(0, 1), q(0, 1), q(1, 1), q(1, 1)],
            vec![q(1, 1), q(0, 1), q(1, 1), q(0, 1)],
        ];
        let b = vec![q(1, 2), q(1, 2), q(1, 4)];
        let c = vec![q(0, 1), q(1, 1), q(1, 1), q(0, 1)];
        let sol = solve_equality_form(&a, &b, &c).unwrap();
        assert_eq!(sol.value, q(1, 4));
        assert_eq!(sol.x, vec![q(1, 4), q(1, 4), q(0, 1), q(1, 2)]);
    }

    #[test]
    fn redundant_rows_are_tolerated() {
        // x0 + x1 = 1 stated twice
        let a = vec![vec![1.0, 1.0], vec![1.0, 1.0], vec![2.0, 2.0]];
        let sol = solve_equality_form(&a, &[1.0, 1.0, 2.0], &[3.0, 2.0]).unwrap();
        assert!((sol.value - 2.0_f64).abs() < 1e-12);
        assert_eq!(sol.x, vec![0.0, 1.0]);
    }

    #[test]
    fn negative_rhs_rows_are_flipped() {
        // -x0 - x1 = -2, minimize x0 - x1 -> x1 = 2
        let sol = solve_equality_form(&[vec![-1.0, -1.0]], &[-2.0], &[1.0, -1.0]).unwrap();
        assert_eq!(sol.value, -2.0);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        assert!(matches!(
            solve_equality_form(&a, &[1.0, 2.0], &[0.0, 0.0]),
            Err(Error::Infeasible)
        ));
        assert!(matches!(
            solve_equality_form(&[vec![1.0, -1.0]], &[0.0], &[-1.0, 0.0]),
            Err(Error::Unbounded)
        ));
    }

    #[test]
    fn degenerate_program_terminates() {
        // classic cycling example (Beale) in equality form with slacks
        let a = vec![
            vec![0.25, -60.0, -0.04, 9.0, 1.0, 0.0, 0.0],
            vec![0.5, -90.0, -0.02, 3.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
        ];
        let c = vec![-0.75, 150.0, -0.02, 6.0, 0.0, 0.0, 0.0];
        let sol = solve_equality_form(&a, &[0.0, 0.0, 1.0], &c).unwrap();
        assert!((sol.value + 0.05_f64).abs() < 1e-12);
    }
}
