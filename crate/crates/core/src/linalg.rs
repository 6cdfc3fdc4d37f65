//! Small dense LU factorization with partial pivoting.

use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct Lu<S> {
    lu: Vec<Vec<S>>,
    perm: Vec<usize>,
    swaps: usize,
}

impl<S: Scalar> Lu<S> {
    /// `None` when a pivot column is entirely negligible.
    pub fn new(a: &[Vec<S>]) -> Option<Self> {
        let n = a.len();
        let mut lu = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| {
                lu[i][k]
                    .abs()
                    .partial_cmp(&lu[j][k].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })?;
            if lu[p][k].is_negligible() {
                return None;
            }
            if p != k {
                lu.swap(p, k);
                perm.swap(p, k);
                swaps += 1;
            }
            for i in k + 1..n {
                let f = lu[i][k].clone() / lu[k][k].clone();
                if f.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let v = lu[i][j].clone() - f.clone() * lu[k][j].clone();
                    lu[i][j] = v;
                }
                lu[i][k] = f;
            }
        }
        Some(Lu { lu, perm, swaps })
    }

    pub fn determinant(&self) -> S {
        let d = (0..self.lu.len()).fold(S::one(), |acc, i| acc * self.lu[i][i].clone());
        if self.swaps % 2 == 1 {
            -d
        } else {
            d
        }
    }

    pub fn solve(&self, b: &[S]) -> Vec<S> {
        let n = self.lu.len();
        let mut x: Vec<S> = self.perm.iter().map(|&p| b[p].clone()).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] = x[i].clone() - self.lu[i][j].clone() * x[j].clone();
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] = x[i].clone() - self.lu[i][j].clone() * x[j].clone();
            }
            x[i] = x[i].clone() / self.lu[i][i].clone();
        }
        x
    }

    pub fn inverse(&self) -> Vec<Vec<S>> {
        let n = self.lu.len();
        let cols: Vec<Vec<S>> = (0..n)
            .map(|j| {
                let e: Vec<S> = (0..n)
                    .map(|i| if i == j { S::one() } else { S::zero() })
                    .collect();
                self.solve(&e)
            })
            .collect();
        (0..n)
            .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
            .collect()
    }
}

pub fn norm_one<S: Scalar>(a: &[Vec<S>]) -> f64 {
    let n = a.first().map_or(0, Vec::len);
    (0..n)
        .map(|j| a.iter().map(|r| r[j].to_f64_lossy().abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Reciprocal 1-norm condition number, `1 / (|A| |A^-1|)`; zero when the
/// factorization fails.
pub fn reciprocal_condition<S: Scalar>(a: &[Vec<S>]) -> f64 {
    match Lu::new(a) {
        Some(lu) => {
            let denom = norm_one(a) * norm_one(&lu.inverse());
            if denom > 0.0 && denom.is_finite() {
                1.0 / denom
            } else {
                0.0
            }
        }
        None => 0.0,
    }
}
