//! Simple connected graphs with a canonical edge order, plus the
//! combinatorial machinery built on them.

mod counting;
mod enumerate;
mod geodesic;

pub use counting::{
    count_spanning_trees, count_spanning_trees_multigraph, count_spanning_trees_with_edge,
};
pub use enumerate::{enumerate_spanning_trees, enumerate_subtrees, DEFAULT_ENUMERATION_LIMIT};
pub use geodesic::{geodesic_counts, geodesic_paths, GeodesicCounts, PairGeodesics};

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::ops::Index;

use crate::error::{Error, Result};
use crate::scalar::{ordered_sum, Scalar};

/// Finite, connected, simple, unweighted graph.
///
/// Edges are stored as `(i, j)` with `i < j`, sorted lexicographically; the
/// position of an edge in that order is its index everywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewNodes(n));
        }
        let mut canon = Vec::new();
        for (a, b) in edges {
            for node in [a, b] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            canon.push((a.min(b), a.max(b)));
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adjacency = vec![Vec::new(); n];
        for (idx, &(i, j)) in canon.iter().enumerate() {
            adjacency[i].push((j, idx));
            adjacency[j].push((i, idx));
        }
        let g = Graph {
            n,
            edges: canon,
            adjacency,
        };
        if g.reachable_from(0, None).iter().any(|&r| !r) {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Result<Self> {
        Graph::new(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Graph::path(n);
        }
        Graph::new(n, (1..n).map(|i| (i - 1, i)).chain([(0, n - 1)]))
    }

    pub fn complete(n: usize) -> Result<Self> {
        Graph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&(a.min(b), a.max(b))).ok()
    }

    /// `(neighbor, edge index)` pairs of node `v`.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.n
    }

    /// An edge whose removal disconnects the graph.
    pub fn is_bridge(&self, e: usize) -> bool {
        let (_, j) = self.edges[e];
        !self.reachable_from(self.edges[e].0, Some(e))[j]
    }

    fn reachable_from(&self, start: usize, skip_edge: Option<usize>) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            for &(w, e) in &self.adjacency[v] {
                if Some(e) != skip_edge && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Canonical edge-list text (see [`parse_graph`]).
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for (i, j) in &self.edges {
            let _ = writeln!(out, "{i} {j}");
        }
        out
    }
}

/// Parses the edge-list format: a header line `n m` followed by `m` lines
/// `i j`. Anything after `#` on a line is ignored, as are blank lines.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header \"n m\"".into(),
    })?;
    let [n, m] = parse_pair(header_line, header)?;

    let mut edges = Vec::with_capacity(m);
    for (line, content) in lines {
        if edges.len() == m {
            return Err(Error::Parse {
                line,
                msg: format!("more than the declared {m} edges"),
            });
        }
        let [i, j] = parse_pair(line, content)?;
        if let Some(node) = [i, j].into_iter().find(|&v| v >= n) {
            return Err(Error::Parse {
                line,
                msg: format!("node {node} out of range for n = {n}"),
            });
        }
        if i == j {
            return Err(Error::Parse {
                line,
                msg: format!("self-loop at node {i}"),
            });
        }
        edges.push((i, j));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            msg: format!("expected {m} edges, found {}", edges.len()),
        });
    }
    Graph::new(n, edges)
}

fn parse_pair(line: usize, content: &str) -> Result<[usize; 2]> {
    let fields: Vec<&str> = content.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::Parse {
            line,
            msg: format!("expected two integers, got {:?}", content),
        });
    }
    let mut out = [0usize; 2];
    for (slot, f) in out.iter_mut().zip(&fields) {
        *slot = f.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("not a nonnegative integer: {f:?}"),
        })?;
    }
    Ok(out)
}

/// One value per edge, in canonical edge order.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeVector<S>(Vec<S>);

impl<S: Scalar> EdgeVector<S> {
    pub fn new(g: &Graph, values: Vec<S>) -> Result<Self> {
        if values.len() != g.edge_count() {
            return Err(Error::LengthMismatch {
                what: "edge vector",
                expected: g.edge_count(),
                found: values.len(),
            });
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite_value()) {
            return Err(Error::InvalidCentrality(format!(
                "entry {bad} is not finite"
            )));
        }
        Ok(EdgeVector(values))
    }

    pub fn zeros(g: &Graph) -> Self {
        EdgeVector(vec![S::zero(); g.edge_count()])
    }

    pub(crate) fn from_vec_unchecked(values: Vec<S>) -> Self {
        EdgeVector(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[S] {
        &self.0
    }

    pub fn into_values(self) -> Vec<S> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, S> {
        self.0.iter()
    }

    pub fn dot(&self, other: &Self) -> Result<S> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                what: "edge vector",
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(ordered_sum(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.clone() * b.clone()),
        ))
    }

    /// Entrywise product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                what: "edge vector",
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(EdgeVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.clone() * b.clone())
                .collect(),
        ))
    }

    pub fn max_abs_diff(&self, other: &Self) -> S {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a.clone() - b.clone()).abs())
            .fold(S::zero(), |acc, d| if d > acc { d } else { acc })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> EdgeVector<T> {
        EdgeVector(self.0.iter().map(f).collect())
    }
}

impl<S> Index<usize> for EdgeVector<S> {
    type Output = S;

    fn index(&self, e: usize) -> &S {
        &self.0[e]
    }
}

/// A set of edge indices, kept sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeSubset(Vec<usize>);

impl EdgeSubset {
    pub fn new(g: &Graph, mut edges: Vec<usize>) -> Result<Self> {
        edges.sort_unstable();
        edges.dedup();
        if let Some(&bad) = edges.iter().find(|&&e| e >= g.edge_count()) {
            return Err(Error::InvalidDistribution(format!(
                "edge index {bad} out of range"
            )));
        }
        Ok(EdgeSubset(edges))
    }

    /// Looks up node pairs in `g`; every pair must be an edge.
    pub fn from_pairs(g: &Graph, pairs: &[(usize, usize)]) -> Result<Self> {
        let edges = pairs
            .iter()
            .map(|&(a, b)| {
                g.edge_index(a, b).ok_or_else(|| {
                    Error::InvalidDistribution(format!("({a}, {b}) is not an edge of the graph"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        EdgeSubset::new(g, edges)
    }

    pub(crate) fn from_sorted(edges: Vec<usize>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        EdgeSubset(edges)
    }

    pub fn edges(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    /// Sorted endpoints touched by the subset.
    pub fn nodes(&self, g: &Graph) -> Vec<usize> {
        let mut nodes: Vec<usize> = self
            .0
            .iter()
            .flat_map(|&e| {
                let (i, j) = g.edge(e);
                [i, j]
            })
            .collect();
        nodes.sort_unstable();
        nodes.dedup();
        nodes
    }

    /// Connected and acyclic with at least one edge.
    pub fn is_subtree(&self, g: &Graph) -> bool {
        if self.0.is_empty() {
            return false;
        }
        let nodes = self.nodes(g);
        if nodes.len() != self.0.len() + 1 {
            return false;
        }
        // k edges on k+1 nodes form a tree iff they are connected
        let mut parent: Vec<usize> = (0..g.node_count()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &e in &self.0 {
            let (i, j) = g.edge(e);
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri == rj {
                return false;
            }
            parent[ri] = rj;
        }
        true
    }

    pub fn is_spanning_tree(&self, g: &Graph) -> bool {
        self.0.len() + 1 == g.node_count() && self.is_subtree(g)
    }

    /// Node pairs of the subset's edges, for serialization.
    pub fn pairs(&self, g: &Graph) -> Vec<(usize, usize)> {
        self.0.iter().map(|&e| g.edge(e)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_path_and_triangle() {
        let p3 = parse_graph("3 2\n0 1\n1 2").unwrap();
        assert_eq!(p3.edges(), &[(0, 1), (1, 2)]);
        let c3 = parse_graph("3 3\n0 1\n1 2\n0 2").unwrap();
        assert_eq!(c3.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(c3, Graph::cycle(3).unwrap());
    }

    #[test]
    fn canonicalizes_orientation_and_order() {
        let g = parse_graph("# header comment\n4 3\n3 2 # trailing\n\n1 0\n2 1\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(g.edge_index(2, 1), Some(1));
        assert_eq!(g.edge_index(0, 3), None);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(
            parse_graph("2 1\n0 0"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("3 3\n0 1\n1 0\n1 2"),
            Err(Error::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            parse_graph("4 2\n0 1\n2 3"),
            Err(Error::Disconnected)
        ));
        assert!(matches!(parse_graph("1 0"), Err(Error::TooFewNodes(1))));
        assert!(matches!(
            parse_graph("3 2\n0 1\n1 x"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(parse_graph("3 2\n0 1"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_graph("3 1\n0 1\n1 2"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_graph("3 2\n0 1\n1 5"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            Graph::new(3, [(0, 1), (1, 5)]),
            Err(Error::NodeOutOfRange { node: 5, n: 3 })
        ));
        assert!(matches!(parse_graph(""), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn text_round_trip() {
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(parse_graph(&k4.to_text()).unwrap(), k4);
        assert_eq!(k4.to_text(), "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    }

    #[test]
    fn bridges() {
        let g = Graph::new(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let bridges: Vec<bool> = (0..g.edge_count()).map(|e| g.is_bridge(e)).collect();
        // edges: 01, 02, 12, 23
        assert_eq!(bridges, vec![false, false, false, true]);
    }

    #[test]
    fn subset_checks() {
        let c3 = Graph::cycle(3).unwrap();
        assert!(EdgeSubset::new(&c3, vec![0, 1]).unwrap().is_subtree(&c3));
        assert!(!EdgeSubset::new(&c3, vec![0, 1, 2]).unwrap().is_subtree(&c3));
        assert!(!EdgeSubset::new(&c3, vec![]).unwrap().is_subtree(&c3));
        let g = Graph::path(4).unwrap();
        assert!(!EdgeSubset::new(&g, vec![0, 2]).unwrap().is_subtree(&g));
        assert!(EdgeSubset::new(&g, vec![3]).is_err());
        assert!(EdgeSubset::from_pairs(&g, &[(0, 2)]).is_err());
    }

    #[test]
    fn edge_vector_validation() {
        let p3 = Graph::path(3).unwrap();
        assert!(EdgeVector::new(&p3, vec![1.0]).is_err());
        assert!(EdgeVector::new(&p3, vec![1.0, f64::NAN]).is_err());
        let a = EdgeVector::new(&p3, vec![1.0, 2.0]).unwrap();
        let b = EdgeVector::new(&p3, vec![3.0, 4.0]).unwrap();
        assert_eq!(a.dot(&b).unwrap(), 11.0);
        assert_eq!(a.max_abs_diff(&b), 2.0);
    }
}
