//! Exact spanning-tree counts via the matrix-tree theorem.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use super::Graph;

/// Spanning trees of a multigraph on `node_count` nodes. Parallel edges are
/// counted with multiplicity; loops are ignored. A disconnected multigraph
/// yields zero.
pub fn count_spanning_trees_multigraph(node_count: usize, edges: &[(usize, usize)]) -> BigUint {
    if node_count <= 1 {
        return BigUint::from(1u8);
    }
    // reduced Laplacian: drop the last node's row and column
    let k = node_count - 1;
    let mut lap = vec![vec![BigInt::zero(); k]; k];
    for &(a, b) in edges {
        if a == b {
            continue;
        }
        for (u, v) in [(a, b), (b, a)] {
            if u < k {
                lap[u][u] += 1;
                if v < k {
                    lap[u][v] -= 1;
                }
            }
        }
    }
    bareiss_determinant(lap)
        .to_biguint()
        .expect("Laplacian minors are nonnegative")
}

/// Fraction-free Gaussian elimination; every intermediate is an exact
/// integer minor of the input.
fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let k = a.len();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for p in 0..k {
        if a[p][p].is_zero() {
            match (p + 1..k).find(|&r| !a[r][p].is_zero()) {
                Some(r) => {
                    a.swap(p, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in p + 1..k {
            for j in p + 1..k {
                let v = &a[i][j] * &a[p][p] - &a[i][p] * &a[p][j];
                a[i][j] = v / &prev;
            }
            a[i][p] = BigInt::zero();
        }
        prev = a[p][p].clone();
    }
    let det = if k == 0 {
        BigInt::from(1)
    } else {
        a[k - 1][k - 1].clone()
    };
    let det = det * sign;
    debug_assert!(!det.is_negative());
    det
}

pub fn count_spanning_trees(g: &Graph) -> BigUint {
    count_spanning_trees_multigraph(g.node_count(), g.edges())
}

/// Spanning trees of `g` that contain edge `e`, counted as the spanning
/// trees of the contraction `g / e`.
pub fn count_spanning_trees_with_edge(g: &Graph, e: usize) -> BigUint {
    let (keep, merge) = g.edge(e);
    // merged node takes `keep`'s label; labels above `merge` shift down
    let relabel = |v: usize| {
        let v = if v == merge { keep } else { v };
        if v > merge {
            v - 1
        } else {
            v
        }
    };
    let contracted: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(idx, _)| idx != e)
        .map(|(_, &(a, b))| (relabel(a), relabel(b)))
        .collect();
    count_spanning_trees_multigraph(g.node_count() - 1, &contracted)
}
