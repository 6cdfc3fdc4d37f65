//! Shortest-path counts between all node pairs.

use std::collections::VecDeque;

use rayon::prelude::*;

use super::{EdgeSubset, Graph};
use crate::error::{Error, Result};

/// BFS distances and shortest-path counts from one source.
#[derive(Debug, Clone)]
struct SourceBfs {
    dist: Vec<usize>,
    sigma: Vec<u128>,
}

fn bfs_counts(g: &Graph, source: usize) -> Result<SourceBfs> {
    let n = g.node_count();
    let mut dist = vec![usize::MAX; n];
    let mut sigma = vec![0u128; n];
    dist[source] = 0;
    sigma[source] = 1;
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        for &(w, _) in g.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                sigma[w] = sigma[w]
                    .checked_add(sigma[v])
                    .ok_or(Error::Overflow("geodesics"))?;
            }
        }
    }
    Ok(SourceBfs { dist, sigma })
}

/// Geodesic statistics for one unordered pair `source < target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairGeodesics {
    pub source: usize,
    pub target: usize,
    pub distance: usize,
    /// Number of shortest paths between the pair.
    pub sigma: u128,
    /// `(edge, number of shortest paths through it)` for every edge with a
    /// nonzero count, in edge order.
    pub through: Vec<(usize, u128)>,
}

impl PairGeodesics {
    pub fn through_edge(&self, e: usize) -> u128 {
        self.through
            .binary_search_by_key(&e, |&(edge, _)| edge)
            .map_or(0, |k| self.through[k].1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicCounts {
    node_count: usize,
    pairs: Vec<PairGeodesics>,
}

impl GeodesicCounts {
    /// Unordered pairs in lexicographic order of `(source, target)`.
    pub fn pairs(&self) -> &[PairGeodesics] {
        &self.pairs
    }

    /// Number of distinct unordered pairs, `n(n-1)/2`.
    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn pair(&self, a: usize, b: usize) -> &PairGeodesics {
        let (s, t) = (a.min(b), a.max(b));
        assert!(s != t && t < self.node_count, "invalid pair ({a}, {b})");
        // offset of row s in the upper triangle
        let n = self.node_count;
        let idx = s * (2 * n - s - 1) / 2 + (t - s - 1);
        &self.pairs[idx]
    }
}

/// Shortest-path counts for every unordered node pair, and for each pair the
/// number of those paths crossing every edge.
///
/// An edge `(u, v)` lies on a shortest `s`-`t` path in the orientation
/// `u -> v` exactly when `d(s,u) + 1 + d(v,t) = d(s,t)`, and then carries
/// `sigma(s,u) * sigma(v,t)` of them.
pub fn geodesic_counts(g: &Graph) -> Result<GeodesicCounts> {
    let n = g.node_count();
    let per_source: Vec<SourceBfs> = (0..n)
        .into_par_iter()
        .map(|s| bfs_counts(g, s))
        .collect::<Result<_>>()?;

    let pairs = (0..n)
        .flat_map(|s| (s + 1..n).map(move |t| (s, t)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(s, t)| {
            let from_s = &per_source[s];
            let from_t = &per_source[t];
            let d = from_s.dist[t];
            let mut through = Vec::new();
            for (e, &(a, b)) in g.edges().iter().enumerate() {
                let mut count = 0u128;
                for (u, v) in [(a, b), (b, a)] {
                    if from_s.dist[u] + 1 + from_t.dist[v] == d {
                        let c = from_s.sigma[u]
                            .checked_mul(from_t.sigma[v])
                            .ok_or(Error::Overflow("geodesics"))?;
                        count += c;
                    }
                }
                if count > 0 {
                    through.push((e, count));
                }
            }
            Ok(PairGeodesics {
                source: s,
                target: t,
                distance: d,
                sigma: from_s.sigma[t],
                through,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(GeodesicCounts {
        node_count: n,
        pairs,
    })
}

/// Every shortest path between `s` and `t`, as edge sets.
pub fn geodesic_paths(g: &Graph, s: usize, t: usize, limit: usize) -> Result<Vec<EdgeSubset>> {
    let from_s = bfs_counts(g, s)?;
    let mut out = Vec::new();
    let mut stack = Vec::new();
    walk_back(g, &from_s.dist, s, t, &mut stack, &mut out, limit)?;
    Ok(out)
}

fn walk_back(
    g: &Graph,
    dist: &[usize],
    s: usize,
    v: usize,
    stack: &mut Vec<usize>,
    out: &mut Vec<EdgeSubset>,
    limit: usize,
) -> Result<()> {
    if v == s {
        if out.len() == limit {
            return Err(Error::LimitExceeded {
                what: "geodesic enumeration",
                limit,
            });
        }
        let mut edges = stack.clone();
        edges.sort_unstable();
        out.push(EdgeSubset::from_sorted(edges));
        return Ok(());
    }
    for &(w, e) in g.neighbors(v) {
        if dist[w] + 1 == dist[v] {
            stack.push(e);
            walk_back(g, dist, s, w, stack, out, limit)?;
            stack.pop();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_pairs_use_direct_edge() {
        let c3 = Graph::cycle(3).unwrap();
        let gc = geodesic_counts(&c3).unwrap();
        assert_eq!(gc.pair_count(), 3);
        for p in gc.pairs() {
            assert_eq!(p.sigma, 1);
            let direct = c3.edge_index(p.source, p.target).unwrap();
            assert_eq!(p.through, vec![(direct, 1)]);
        }
    }

    #[test]
    fn path_end_pair_crosses_both_edges() {
        let p3 = Graph::path(3).unwrap();
        let gc = geodesic_counts(&p3).unwrap();
        let p = gc.pair(2, 0);
        assert_eq!((p.sigma, p.distance), (1, 2));
        assert_eq!(p.through_edge(0), 1);
        assert_eq!(p.through_edge(1), 1);
    }

    #[test]
    fn four_cycle_diagonals() {
        // explicit paths between 0 and 2: 0-1-2 and 0-3-2
        let c4 = Graph::cycle(4).unwrap();
        let gc = geodesic_counts(&c4).unwrap();
        let p = gc.pair(0, 2);
        assert_eq!(p.sigma, 2);
        for e in 0..4 {
            assert_eq!(p.through_edge(e), 1);
        }
        let paths = geodesic_paths(&c4, 0, 2, 10).unwrap();
        assert_eq!(paths.len(), 2);
    }

    #[test]
    fn sigma_recurrence_over_predecessors() {
        let g = Graph::new(
            7,
            [
                (0, 1),
                (0, 2),
                (1, 3),
                (2, 3),
                (3, 4),
                (3, 5),
                (4, 6),
                (5, 6),
                (1, 2),
            ],
        )
        .unwrap();
        for s in 0..g.node_count() {
            let bfs = bfs_counts(&g, s).unwrap();
            for t in 0..g.node_count() {
                if t == s {
                    continue;
                }
                let from_preds: u128 = g
                    .neighbors(t)
                    .iter()
                    .filter(|&&(w, _)| bfs.dist[w] + 1 == bfs.dist[t])
                    .map(|&(w, _)| bfs.sigma[w])
                    .sum();
                assert_eq!(bfs.sigma[t], from_preds);
            }
        }
        let gc = geodesic_counts(&g).unwrap();
        for p in gc.pairs() {
            assert!(p.sigma >= 1);
            assert!(p.through.iter().all(|&(_, c)| c <= p.sigma));
            let paths = geodesic_paths(&g, p.source, p.target, 1000).unwrap();
            assert_eq!(paths.len() as u128, p.sigma);
            for e in 0..g.edge_count() {
                let hits = paths.iter().filter(|q| q.contains(e)).count() as u128;
                assert_eq!(hits, p.through_edge(e));
            }
        }
    }
}
