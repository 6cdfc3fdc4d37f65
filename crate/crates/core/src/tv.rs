//! Total-variation functionals.
//!
//! * [`tv_signal`]: `Σ_{(i,j)∈E} (x_i - x_j)²` for an ordinary signal.
//! * [`tv_joint_discrete`]: its expectation under a finite joint distribution.
//! * [`tv_tree_marginals`]: the minimum of that expectation over joints with
//!   prescribed marginals, which on a tree is the sum of per-edge W².
//! * [`tv_eta_direct`] / [`tv_eta`]: the expected tree variation under a
//!   subtree distribution, by explicit expectation and as the inner product
//!   `⟨C_η, W_N⟩`.

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;

use crate::centrality::{EdgeCentrality, ExplicitEta};
use crate::error::{Error, Result};
use crate::graph::{EdgeSubset, EdgeVector, Graph};
use crate::marginals::{discrete_metric_cost, w2_oracle, wasserstein_edge_vector, MarginalSet};
use crate::oracles::{lp_min_tv_marginals, DEFAULT_LP_GUARD};
use crate::scalar::{ordered_sum, Scalar};

/// Largest per-node support accepted by [`tree_coupling`].
pub const COUPLING_MAX_SUPPORT: usize = 16;

/// Tolerance on joint masses summing to one.
pub const JOINT_TOLERANCE: f64 = 1e-12;

/// Real value per node.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal<S>(Vec<S>);

impl<S: Scalar> Signal<S> {
    pub fn new(values: Vec<S>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite_value()) {
            return Err(Error::InvalidMarginal(
                "signal entries must be finite".into(),
            ));
        }
        Ok(Signal(values))
    }

    pub fn values(&self) -> &[S] {
        &self.0
    }
}

pub fn tv_signal<S: Scalar>(g: &Graph, x: &Signal<S>) -> Result<S> {
    if x.0.len() != g.node_count() {
        return Err(Error::LengthMismatch {
            what: "signal",
            expected: g.node_count(),
            found: x.0.len(),
        });
    }
    Ok(ordered_sum(g.edges().iter().map(|&(i, j)| {
        let d = x.0[i].clone() - x.0[j].clone();
        d.clone() * d
    })))
}

/// Probability mass function over tuples of per-node atom indices.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution<S> {
    support_sizes: Vec<usize>,
    atoms: BTreeMap<Vec<usize>, S>,
}

impl<S: Scalar> JointDistribution<S> {
    /// Repeated tuples are merged and zero masses dropped.
    pub fn new(
        support_sizes: Vec<usize>,
        atoms: impl IntoIterator<Item = (Vec<usize>, S)>,
    ) -> Result<Self> {
        let mut merged: BTreeMap<Vec<usize>, S> = BTreeMap::new();
        for (tuple, mass) in atoms {
            if tuple.len() != support_sizes.len()
                || tuple
                    .iter()
                    .zip(&support_sizes)
                    .any(|(&a, &size)| a >= size)
            {
                return Err(Error::InvalidMarginal(format!(
                    "atom {tuple:?} outside the support"
                )));
            }
            if mass.is_negative() || !mass.is_finite_value() {
                return Err(Error::InvalidMarginal(format!("invalid mass {mass:?}")));
            }
            if mass.is_zero() {
                continue;
            }
            let slot = merged.entry(tuple).or_insert_with(S::zero);
            *slot = slot.clone() + mass;
        }
        let total = ordered_sum(merged.values().cloned());
        if !total.within(&S::one(), JOINT_TOLERANCE) {
            return Err(Error::InvalidMarginal(format!(
                "joint masses sum to {total:?}"
            )));
        }
        Ok(JointDistribution {
            support_sizes,
            atoms: merged,
        })
    }

    pub fn node_count(&self) -> usize {
        self.support_sizes.len()
    }

    pub fn support_sizes(&self) -> &[usize] {
        &self.support_sizes
    }

    pub fn atoms(&self) -> &BTreeMap<Vec<usize>, S> {
        &self.atoms
    }

    pub fn mass(&self, tuple: &[usize]) -> S {
        self.atoms.get(tuple).cloned().unwrap_or_else(S::zero)
    }

    pub fn node_marginal(&self, i: usize) -> Vec<S> {
        let mut out = vec![S::zero(); self.support_sizes[i]];
        for (tuple, mass) in &self.atoms {
            out[tuple[i]] = out[tuple[i]].clone() + mass.clone();
        }
        out
    }

    pub fn pair_marginal(&self, i: usize, j: usize) -> Vec<Vec<S>> {
        let mut out = vec![vec![S::zero(); self.support_sizes[j]]; self.support_sizes[i]];
        for (tuple, mass) in &self.atoms {
            let cell = &mut out[tuple[i]][tuple[j]];
            *cell = cell.clone() + mass.clone();
        }
        out
    }

    pub fn convert<T: Scalar>(&self) -> JointDistribution<T> {
        JointDistribution {
            support_sizes: self.support_sizes.clone(),
            atoms: self
                .atoms
                .iter()
                .map(|(k, v)| (k.clone(), T::from_rational(&v.to_rational())))
                .collect(),
        }
    }
}

/// Squared distance between atom `a` of node `i` and atom `b` of node `j`.
pub trait GroundCost<S> {
    fn squared_distance(&self, i: usize, a: usize, j: usize, b: usize) -> S;
}

/// 0/1 metric on a support shared by all nodes.
#[derive(Debug, Clone, Copy, Default)]
pub struct DiscreteMetric;

impl<S: Scalar> GroundCost<S> for DiscreteMetric {
    fn squared_distance(&self, _i: usize, a: usize, _j: usize, b: usize) -> S {
        if a == b {
            S::zero()
        } else {
            S::one()
        }
    }
}

/// Atoms located on the real line, per node.
#[derive(Debug, Clone)]
pub struct AtomPositions<S> {
    pub positions: Vec<Vec<S>>,
}

impl<S: Scalar> GroundCost<S> for AtomPositions<S> {
    fn squared_distance(&self, i: usize, a: usize, j: usize, b: usize) -> S {
        let d = self.positions[i][a].clone() - self.positions[j][b].clone();
        d.clone() * d
    }
}

/// `Σ_x μ(x) Σ_{(i,j)∈E} d(x_i, x_j)²`.
pub fn tv_joint_discrete<S: Scalar, C: GroundCost<S>>(
    g: &Graph,
    mu: &JointDistribution<S>,
    cost: &C,
) -> Result<S> {
    if mu.node_count() != g.node_count() {
        return Err(Error::LengthMismatch {
            what: "joint distribution",
            expected: g.node_count(),
            found: mu.node_count(),
        });
    }
    Ok(ordered_sum(mu.atoms.iter().map(|(x, mass)| {
        let edge_cost = ordered_sum(
            g.edges()
                .iter()
                .map(|&(i, j)| cost.squared_distance(i, x[i], j, x[j])),
        );
        mass.clone() * edge_cost
    })))
}

/// Sum of per-edge W² over the tree `t`.
pub fn tv_tree_marginals<S: Scalar>(t: &Graph, ns: &MarginalSet<S>) -> Result<S> {
    if !t.is_tree() {
        return Err(Error::NotATree);
    }
    let w = wasserstein_edge_vector(t, ns)?;
    Ok(ordered_sum(w.into_values()))
}

/// Tree variation of the marginals restricted to the nodes of subtree `t`.
pub fn tv_subtree_marginals<S: Scalar>(
    g: &Graph,
    t: &EdgeSubset,
    ns: &MarginalSet<S>,
) -> Result<S> {
    let terms = t
        .edges()
        .iter()
        .map(|&e| {
            let (i, j) = g.edge(e);
            ns.w2(i, j)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ordered_sum(terms))
}

/// `⟨C, W_N⟩`.
pub fn tv_eta<S: Scalar>(g: &Graph, c: &EdgeCentrality<S>, ns: &MarginalSet<S>) -> Result<S> {
    let w = wasserstein_edge_vector(g, ns)?;
    c.as_vector().dot(&w)
}

/// Per-edge terms `C(e) · W_N(e)` of [`tv_eta`].
pub fn tv_eta_decomposition<S: Scalar>(
    g: &Graph,
    c: &EdgeCentrality<S>,
    ns: &MarginalSet<S>,
) -> Result<EdgeVector<S>> {
    let w = wasserstein_edge_vector(g, ns)?;
    c.as_vector().hadamard(&w)
}

/// `Σ_T p(T) T_T(N)` by explicit expectation over the subtrees of `eta`.
///
/// With `use_lp_oracle` each tree variation is the exact minimum over
/// couplings from [`lp_min_tv_marginals`] (discrete marginals only) instead
/// of the per-edge closed form.
pub fn tv_eta_direct<S: Scalar>(
    g: &Graph,
    eta: &ExplicitEta<S>,
    ns: &MarginalSet<S>,
    use_lp_oracle: bool,
) -> Result<S> {
    if ns.len() != g.node_count() {
        return Err(Error::LengthMismatch {
            what: "marginal set",
            expected: g.node_count(),
            found: ns.len(),
        });
    }
    let terms = eta
        .entries()
        .par_iter()
        .map(|(t, p)| {
            let value = if use_lp_oracle {
                lp_subtree(g, t, ns)?
            } else {
                tv_subtree_marginals(g, t, ns)?
            };
            Ok(p.clone() * value)
        })
        .collect::<Result<Vec<S>>>()?;
    Ok(ordered_sum(terms))
}

fn lp_subtree<S: Scalar>(g: &Graph, t: &EdgeSubset, ns: &MarginalSet<S>) -> Result<S> {
    let (tree, nodes) = induced_tree(g, t)?;
    let (value, _) = lp_min_tv_marginals(&tree, &ns.restrict(&nodes), DEFAULT_LP_GUARD)?;
    Ok(value)
}

/// The subtree as a standalone graph on its own nodes, with the original
/// node ids in local order.
pub fn induced_tree(g: &Graph, t: &EdgeSubset) -> Result<(Graph, Vec<usize>)> {
    let nodes = t.nodes(g);
    let local = |v: usize| nodes.binary_search(&v).expect("endpoint of subtree");
    let edges: Vec<(usize, usize)> = t
        .edges()
        .iter()
        .map(|&e| {
            let (i, j) = g.edge(e);
            (local(i), local(j))
        })
        .collect();
    let tree = Graph::new(nodes.len(), edges)?;
    if !tree.is_tree() {
        return Err(Error::NotATree);
    }
    Ok((tree, nodes))
}

/// Joint distribution on all nodes of tree `t` whose pairwise marginal on
/// every edge is an optimal coupling of the endpoint marginals.
///
/// Edges are oriented away from `root`; each child is drawn from its
/// optimal-coupling conditional given the parent. Where the parent atom has
/// zero mass the child's own marginal is used as the conditional.
pub fn tree_coupling<S: Scalar>(
    t: &Graph,
    root: usize,
    ns: &MarginalSet<S>,
) -> Result<JointDistribution<S>> {
    if !t.is_tree() {
        return Err(Error::NotATree);
    }
    if root >= t.node_count() {
        return Err(Error::NodeOutOfRange {
            node: root,
            n: t.node_count(),
        });
    }
    if ns.len() != t.node_count() {
        return Err(Error::LengthMismatch {
            what: "marginal set",
            expected: t.node_count(),
            found: ns.len(),
        });
    }
    let weights = ns.discrete_weights()?;
    let size = weights[0].len();
    if size > COUPLING_MAX_SUPPORT {
        return Err(Error::GuardExceeded {
            what: "coupling support",
            size,
            guard: COUPLING_MAX_SUPPORT,
        });
    }
    let cost = discrete_metric_cost::<S>(size);

    let n = t.node_count();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([root]);
    parent[root] = root;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &(w, _) in t.neighbors(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }

    // conditionals[v][a][b] = P(x_v = b | x_parent = a)
    let mut conditionals: Vec<Vec<Vec<S>>> = vec![Vec::new(); n];
    for &v in &order[1..] {
        let p = parent[v];
        let (_, plan) = w2_oracle(weights[p], weights[v], &cost)?;
        conditionals[v] = plan
            .weights()
            .iter()
            .zip(weights[p])
            .map(|(row, mass)| {
                if mass.is_zero() {
                    weights[v].to_vec()
                } else {
                    row.iter().map(|x| x.clone() / mass.clone()).collect()
                }
            })
            .collect();
    }

    let mut partial: Vec<(Vec<usize>, S)> = weights[root]
        .iter()
        .enumerate()
        .filter(|(_, w)| !w.is_zero())
        .map(|(a, w)| {
            let mut tuple = vec![0; n];
            tuple[root] = a;
            (tuple, w.clone())
        })
        .collect();
    for &v in &order[1..] {
        let p = parent[v];
        let mut next = Vec::with_capacity(partial.len());
        for (tuple, mass) in partial {
            for (b, c) in conditionals[v][tuple[p]].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut extended = tuple.clone();
                extended[v] = b;
                next.push((extended, mass.clone() * c.clone()));
            }
        }
        partial = next;
    }
    JointDistribution::new(vec![size; n], partial)
}
