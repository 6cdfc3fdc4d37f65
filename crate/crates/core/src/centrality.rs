//! Edge centralities as images of subtree distributions.
//!
//! A distribution `η` over subtrees of `G` induces the centrality
//! `C_η(e) = P_{T~η}(e ∈ T)`. The three named families below have closed
//! forms; [`centrality_from_eta`] evaluates the expectation directly for an
//! explicit distribution.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use log::warn;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{
    count_spanning_trees, count_spanning_trees_with_edge, enumerate_spanning_trees,
    geodesic_counts, geodesic_paths, EdgeSubset, EdgeVector, Graph,
};
use crate::linalg::{reciprocal_condition, Lu};
use crate::scalar::{ordered_sum, Rational, Scalar};

/// Tolerance on explicit subtree probabilities summing to one.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

/// Draws attempted by [`probe_matrix`] before giving up.
pub const PROBE_RETRY_BUDGET: usize = 32;

/// Smallest reciprocal condition number accepted for a probe matrix.
pub const PROBE_MIN_RCOND: f64 = 1e-10;

/// Nonnegative value per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeCentrality<S>(EdgeVector<S>);

impl<S: Scalar> EdgeCentrality<S> {
    pub fn new(values: EdgeVector<S>) -> Result<Self> {
        if let Some(e) = values.iter().position(|v| v.is_negative()) {
            return Err(Error::InvalidCentrality(format!(
                "entry {e} is negative ({:?})",
                values[e]
            )));
        }
        Ok(EdgeCentrality(values))
    }

    pub fn from_values(g: &Graph, values: Vec<S>) -> Result<Self> {
        EdgeCentrality::new(EdgeVector::new(g, values)?)
    }

    pub fn as_vector(&self) -> &EdgeVector<S> {
        &self.0
    }

    pub fn values(&self) -> &[S] {
        self.0.values()
    }

    pub fn into_vector(self) -> EdgeVector<S> {
        self.0
    }
}

/// `1 / |E|` on every edge.
pub fn constant_centrality<S: Scalar>(g: &Graph) -> EdgeCentrality<S> {
    let v = S::one() / S::from_count(g.edge_count());
    EdgeCentrality(EdgeVector::from_vec_unchecked(vec![v; g.edge_count()]))
}

/// Fraction of geodesics through each edge, averaged over the `n(n-1)/2`
/// unordered node pairs.
pub fn betweenness_centrality<S: Scalar>(g: &Graph) -> Result<EdgeCentrality<S>> {
    let counts = geodesic_counts(g)?;
    let mut totals = vec![S::zero(); g.edge_count()];
    for pair in counts.pairs() {
        for &(e, through) in &pair.through {
            totals[e] = totals[e].clone() + S::from_ratio(through, pair.sigma);
        }
    }
    let c = S::from_count(counts.pair_count());
    let values = totals.into_iter().map(|t| t / c.clone()).collect();
    Ok(EdgeCentrality(EdgeVector::from_vec_unchecked(values)))
}

/// Share of spanning trees containing each edge, from exact counts.
pub fn spanning_tree_centrality<S: Scalar>(g: &Graph) -> EdgeCentrality<S> {
    let total = BigInt::from(count_spanning_trees(g));
    let values: Vec<S> = (0..g.edge_count())
        .into_par_iter()
        .map(|e| {
            let with_edge = BigInt::from(count_spanning_trees_with_edge(g, e));
            S::from_rational(&Rational::new(with_edge, total.clone()))
        })
        .collect();
    EdgeCentrality(EdgeVector::from_vec_unchecked(values))
}

/// The named subtree distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Uniform over single-edge subtrees.
    SingleEdgeUniform,
    /// Uniform node pair, then a uniform geodesic between them.
    GeodesicPairs,
    /// Uniform over spanning trees.
    SpanningTreeUniform,
}

impl Family {
    pub const ALL: [Family; 3] = [
        Family::SingleEdgeUniform,
        Family::GeodesicPairs,
        Family::SpanningTreeUniform,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::SingleEdgeUniform => "constant",
            Family::GeodesicPairs => "betweenness",
            Family::SpanningTreeUniform => "spanning-tree",
        }
    }

    /// Closed-form centrality of the family.
    pub fn centrality<S: Scalar>(self, g: &Graph) -> Result<EdgeCentrality<S>> {
        match self {
            Family::SingleEdgeUniform => Ok(constant_centrality(g)),
            Family::GeodesicPairs => betweenness_centrality(g),
            Family::SpanningTreeUniform => Ok(spanning_tree_centrality(g)),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" | "single-edge-uniform" => Ok(Family::SingleEdgeUniform),
            "betweenness" | "geodesic-pairs" => Ok(Family::GeodesicPairs),
            "spanning-tree" | "spanning-tree-uniform" => Ok(Family::SpanningTreeUniform),
            other => Err(Error::InvalidDistribution(format!(
                "unknown family {other:?}"
            ))),
        }
    }
}

/// A probability distribution listed subtree by subtree.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitEta<S> {
    entries: Vec<(EdgeSubset, S)>,
}

impl<S: Scalar> ExplicitEta<S> {
    /// Validates every subset as a subtree of `g` and the probabilities as a
    /// pmf. Edgeless entries carry no edges and are dropped with a warning.
    pub fn new(g: &Graph, entries: Vec<(EdgeSubset, S)>) -> Result<Self> {
        let mut kept = Vec::with_capacity(entries.len());
        let mut total = S::zero();
        for (subset, p) in entries {
            if p.is_negative() || !p.is_finite_value() {
                return Err(Error::InvalidDistribution(format!(
                    "invalid probability {p:?}"
                )));
            }
            total = total + p.clone();
            if subset.is_empty() {
                warn!("ignoring edgeless subtree with probability {p:?}");
                continue;
            }
            if let Some(&bad) = subset.edges().iter().find(|&&e| e >= g.edge_count()) {
                return Err(Error::InvalidDistribution(format!(
                    "edge index {bad} out of range"
                )));
            }
            if !subset.is_subtree(g) {
                return Err(Error::InvalidDistribution(format!(
                    "edges {:?} do not form a subtree",
                    subset.pairs(g)
                )));
            }
            kept.push((subset, p));
        }
        if !total.within(&S::one(), PROBABILITY_TOLERANCE) {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total:?}, not 1"
            )));
        }
        Ok(ExplicitEta { entries: kept })
    }

    pub fn entries(&self) -> &[(EdgeSubset, S)] {
        &self.entries
    }

    /// `Σ_T p(T) |T|`, the expected number of edges of a sampled subtree.
    pub fn expected_size(&self) -> S {
        ordered_sum(
            self.entries
                .iter()
                .map(|(t, p)| p.clone() * S::from_count(t.len())),
        )
    }

    /// Pointwise `alpha * self + (1 - alpha) * other`, merging equal subtrees.
    pub fn mix(&self, other: &Self, alpha: S) -> Self {
        let beta = S::one() - alpha.clone();
        let mut merged: BTreeMap<EdgeSubset, S> = BTreeMap::new();
        for (t, p) in &self.entries {
            let slot = merged.entry(t.clone()).or_insert_with(S::zero);
            *slot = slot.clone() + alpha.clone() * p.clone();
        }
        for (t, p) in &other.entries {
            let slot = merged.entry(t.clone()).or_insert_with(S::zero);
            *slot = slot.clone() + beta.clone() * p.clone();
        }
        ExplicitEta {
            entries: merged.into_iter().collect(),
        }
    }
}

/// A subtree distribution, either explicit or one of the named families.
#[derive(Debug, Clone, PartialEq)]
pub enum SubtreeDistribution<S> {
    Explicit(ExplicitEta<S>),
    Family(Family),
}

impl<S: Scalar> SubtreeDistribution<S> {
    pub fn centrality(&self, g: &Graph) -> Result<EdgeCentrality<S>> {
        match self {
            SubtreeDistribution::Explicit(eta) => Ok(centrality_from_eta(g, eta)),
            SubtreeDistribution::Family(f) => f.centrality(g),
        }
    }
}

/// `C_η(e) = Σ_{T ∋ e} p(T)`.
pub fn centrality_from_eta<S: Scalar>(g: &Graph, eta: &ExplicitEta<S>) -> EdgeCentrality<S> {
    let mut values = vec![S::zero(); g.edge_count()];
    for (t, p) in &eta.entries {
        for &e in t.edges() {
            values[e] = values[e].clone() + p.clone();
        }
    }
    EdgeCentrality(EdgeVector::from_vec_unchecked(values))
}

/// Materializes a named family as an explicit distribution.
pub fn eta_for_family<S: Scalar>(
    g: &Graph,
    family: Family,
    limit: usize,
) -> Result<ExplicitEta<S>> {
    let entries = match family {
        Family::SingleEdgeUniform => {
            let p = S::one() / S::from_count(g.edge_count());
            (0..g.edge_count())
                .map(|e| (EdgeSubset::from_sorted(vec![e]), p.clone()))
                .collect()
        }
        Family::GeodesicPairs => {
            let n = g.node_count();
            let c = S::from_count(n * (n - 1) / 2);
            let mut acc: BTreeMap<EdgeSubset, S> = BTreeMap::new();
            for s in 0..n {
                for t in s + 1..n {
                    let paths = geodesic_paths(g, s, t, limit)?;
                    let p = S::one() / (c.clone() * S::from_count(paths.len()));
                    for path in paths {
                        let slot = acc.entry(path).or_insert_with(S::zero);
                        *slot = slot.clone() + p.clone();
                    }
                    if acc.len() > limit {
                        return Err(Error::LimitExceeded {
                            what: "geodesic enumeration",
                            limit,
                        });
                    }
                }
            }
            acc.into_iter().collect()
        }
        Family::SpanningTreeUniform => {
            let trees = enumerate_spanning_trees(g, limit)?;
            let p = S::one() / S::from_count(trees.len());
            trees.into_iter().map(|t| (t, p.clone())).collect()
        }
    };
    Ok(ExplicitEta { entries })
}

/// Outcome of checking a probe matrix for invertibility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbeStatus {
    Invertible { rcond: f64 },
    IllConditioned { rcond: f64 },
}

/// `m` signals whose squared-edge-difference rows `y_i` form a square
/// matrix `Y`; the total variation of the point mass at signal `x_i` under a
/// centrality `C` is `(Y C)_i`.
#[derive(Debug, Clone)]
pub struct ProbeSystem<S> {
    signals: Vec<Vec<S>>,
    matrix: Vec<Vec<S>>,
    status: ProbeStatus,
    draws: usize,
}

impl<S: Scalar> ProbeSystem<S> {
    pub fn from_signals(g: &Graph, signals: Vec<Vec<S>>) -> Result<Self> {
        let m = g.edge_count();
        if signals.len() != m {
            return Err(Error::LengthMismatch {
                what: "probe signal count",
                expected: m,
                found: signals.len(),
            });
        }
        if let Some(bad) = signals.iter().find(|x| x.len() != g.node_count()) {
            return Err(Error::LengthMismatch {
                what: "probe signal",
                expected: g.node_count(),
                found: bad.len(),
            });
        }
        let matrix: Vec<Vec<S>> = signals
            .iter()
            .map(|x| {
                g.edges()
                    .iter()
                    .map(|&(k, l)| {
                        let d = x[k].clone() - x[l].clone();
                        d.clone() * d
                    })
                    .collect()
            })
            .collect();
        let invertible = Lu::new(&matrix).is_some();
        let rcond = reciprocal_condition(&matrix);
        let status = if invertible && rcond > PROBE_MIN_RCOND {
            ProbeStatus::Invertible { rcond }
        } else {
            ProbeStatus::IllConditioned { rcond }
        };
        Ok(ProbeSystem {
            signals,
            matrix,
            status,
            draws: 1,
        })
    }

    pub fn signals(&self) -> &[Vec<S>] {
        &self.signals
    }

    pub fn matrix(&self) -> &[Vec<S>] {
        &self.matrix
    }

    pub fn status(&self) -> ProbeStatus {
        self.status
    }

    pub fn is_invertible(&self) -> bool {
        matches!(self.status, ProbeStatus::Invertible { .. })
    }

    /// Number of random draws it took to find this system.
    pub fn draws(&self) -> usize {
        self.draws
    }

    pub fn determinant(&self) -> S {
        Lu::new(&self.matrix).map_or_else(S::zero, |lu| lu.determinant())
    }

    /// Total variation of each probe's point mass under `c`, i.e. `Y C`.
    pub fn forward(&self, c: &EdgeVector<S>) -> Result<Vec<S>> {
        self.matrix
            .iter()
            .map(|row| EdgeVector::from_vec_unchecked(row.clone()).dot(c))
            .collect()
    }
}

/// Draws uniform `[0, 1)` probe signals until the matrix is well conditioned.
pub fn probe_matrix<S: Scalar>(g: &Graph, seed: u64) -> Result<ProbeSystem<S>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for draw in 1..=PROBE_RETRY_BUDGET {
        let signals: Vec<Vec<S>> = (0..g.edge_count())
            .map(|_| {
                (0..g.node_count())
                    .map(|_| S::lit(rng.random::<f64>()))
                    .collect()
            })
            .collect();
        let mut system = ProbeSystem::from_signals(g, signals)?;
        if system.is_invertible() {
            system.draws = draw;
            return Ok(system);
        }
    }
    Err(Error::RetriesExhausted {
        what: "probe system",
        attempts: PROBE_RETRY_BUDGET,
    })
}

/// Solves `Y C = t` for the centrality whose probe total variations are `t`.
///
/// Round-off may leave entries that should be zero slightly negative; those
/// within `1e-9` of zero (relative to the largest entry) are clamped.
pub fn recover_centrality<S: Scalar>(
    g: &Graph,
    probes: &ProbeSystem<S>,
    tv_values: &[S],
) -> Result<EdgeCentrality<S>> {
    if tv_values.len() != g.edge_count() || probes.matrix.len() != g.edge_count() {
        return Err(Error::LengthMismatch {
            what: "probe total variations",
            expected: g.edge_count(),
            found: tv_values.len(),
        });
    }
    let rcond = match probes.status {
        ProbeStatus::Invertible { rcond } => rcond,
        ProbeStatus::IllConditioned { rcond } => return Err(Error::IllConditioned { rcond }),
    };
    let lu = Lu::new(&probes.matrix).ok_or(Error::IllConditioned { rcond })?;
    let raw = lu.solve(tv_values);
    let scale = raw
        .iter()
        .map(|v| v.abs())
        .fold(S::one(), |acc, v| if v > acc { v } else { acc });
    let floor = -(scale * S::lit(1e-9));
    let values = raw
        .into_iter()
        .map(|v| {
            if v.is_negative() && v >= floor {
                S::zero()
            } else {
                v
            }
        })
        .collect();
    EdgeCentrality::from_values(g, values)
}
