use super::{EdgeSubset, Graph};
use crate::error::{Error, Result};

pub const DEFAULT_ENUMERATION_LIMIT: usize = 1_000_000;

/// Every connected acyclic edge subset with at least one edge.
///
/// Subtrees are grouped by their smallest edge index `r`. Starting from `{r}`
/// the search branches on one frontier edge at a time (include it, or exclude
/// it for the rest of the branch), where the frontier holds edges with index
/// above `r` and exactly one endpoint inside the current tree. Each subtree is
/// reached by exactly one include/exclude sequence, so no deduplication is
/// needed.
pub fn enumerate_subtrees(g: &Graph, limit: usize) -> Result<Vec<EdgeSubset>> {
    let mut out = Vec::new();
    for root in 0..g.edge_count() {
        let (a, b) = g.edge(root);
        let mut in_tree = vec![false; g.node_count()];
        in_tree[a] = true;
        in_tree[b] = true;
        let mut search = SubtreeSearch {
            g,
            root,
            in_tree,
            excluded: vec![false; g.edge_count()],
            tree: vec![root],
            out: &mut out,
            limit,
        };
        search.run()?;
    }
    for t in &mut out {
        t.0.sort_unstable();
    }
    out.sort_unstable_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    Ok(out)
}

struct SubtreeSearch<'a> {
    g: &'a Graph,
    root: usize,
    in_tree: Vec<bool>,
    excluded: Vec<bool>,
    tree: Vec<usize>,
    out: &'a mut Vec<EdgeSubset>,
    limit: usize,
}

impl SubtreeSearch<'_> {
    fn frontier_edge(&self) -> Option<usize> {
        self.g
            .edges()
            .iter()
            .enumerate()
            .skip(self.root + 1)
            .find(|&(e, &(i, j))| !self.excluded[e] && self.in_tree[i] != self.in_tree[j])
            .map(|(e, _)| e)
    }

    fn run(&mut self) -> Result<()> {
        let Some(e) = self.frontier_edge() else {
            if self.out.len() == self.limit {
                return Err(Error::LimitExceeded {
                    what: "subtree enumeration",
                    limit: self.limit,
                });
            }
            self.out.push(EdgeSubset(self.tree.clone()));
            return Ok(());
        };
        let (i, j) = self.g.edge(e);
        let new_node = if self.in_tree[i] { j } else { i };

        self.in_tree[new_node] = true;
        self.tree.push(e);
        self.run()?;
        self.tree.pop();
        self.in_tree[new_node] = false;

        self.excluded[e] = true;
        self.run()?;
        self.excluded[e] = false;
        Ok(())
    }
}

/// All spanning trees, via include/exclude over edges in index order with
/// cycle and connectivity pruning.
pub fn enumerate_spanning_trees(g: &Graph, limit: usize) -> Result<Vec<EdgeSubset>> {
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(g.node_count() - 1);
    let mut removed = vec![false; g.edge_count()];
    spanning_rec(g, 0, &mut chosen, &mut removed, &mut out, limit)?;
    Ok(out)
}

fn spanning_rec(
    g: &Graph,
    next: usize,
    chosen: &mut Vec<usize>,
    removed: &mut [bool],
    out: &mut Vec<EdgeSubset>,
    limit: usize,
) -> Result<()> {
    if chosen.len() + 1 == g.node_count() {
        if out.len() == limit {
            return Err(Error::LimitExceeded {
                what: "spanning tree enumeration",
                limit,
            });
        }
        out.push(EdgeSubset(chosen.clone()));
        return Ok(());
    }
    if next == g.edge_count() {
        return Ok(());
    }
    if !closes_cycle(g, chosen, next) {
        chosen.push(next);
        spanning_rec(g, next + 1, chosen, removed, out, limit)?;
        chosen.pop();
    }
    removed[next] = true;
    if still_connected(g, removed) {
        spanning_rec(g, next + 1, chosen, removed, out, limit)?;
    }
    removed[next] = false;
    Ok(())
}

fn closes_cycle(g: &Graph, chosen: &[usize], e: usize) -> bool {
    let mut parent: Vec<usize> = (0..g.node_count()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &c in chosen {
        let (i, j) = g.edge(c);
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        parent[ri] = rj;
    }
    let (i, j) = g.edge(e);
    find(&mut parent, i) == find(&mut parent, j)
}

fn still_connected(g: &Graph, removed: &[bool]) -> bool {
    let mut seen = vec![false; g.node_count()];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &(w, e) in g.neighbors(v) {
            if !removed[e] && !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == g.node_count()
}
