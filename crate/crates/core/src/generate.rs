//! Seeded random instances for tests, verification and the `gen` command.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::centrality::ExplicitEta;
use crate::error::{Error, Result};
use crate::graph::{EdgeSubset, Graph};
use crate::marginals::{EmpiricalMarginal, GaussianMarginal, MarginalSet};
use crate::scalar::Scalar;

/// Erdős–Rényi draws attempted before giving up on connectivity.
pub const CONNECTIVITY_RETRY_BUDGET: usize = 1000;

/// Denominator of the weights written by `gen`; dyadic so they are exact in
/// binary floating point.
pub const DYADIC_GRANULARITY: u64 = 1 << 20;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphFamily {
    Path,
    Cycle,
    Complete,
    ErdosRenyi { p: f64 },
}

impl GraphFamily {
    pub fn generate<R: Rng>(self, n: usize, rng: &mut R) -> Result<Graph> {
        match self {
            GraphFamily::Path => Graph::path(n),
            GraphFamily::Cycle => Graph::cycle(n),
            GraphFamily::Complete => Graph::complete(n),
            GraphFamily::ErdosRenyi { p } => erdos_renyi(n, p, rng),
        }
    }
}

/// `G(n, p)` conditioned on connectivity by rejection.
pub fn erdos_renyi<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if n < 2 {
        return Err(Error::TooFewNodes(n));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidDistribution(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    for _ in 0..CONNECTIVITY_RETRY_BUDGET {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(p) {
                    edges.push((i, j));
                }
            }
        }
        match Graph::new(n, edges) {
            Ok(g) => return Ok(g),
            Err(Error::Disconnected) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetriesExhausted {
        what: "connected Erdős–Rényi graph",
        attempts: CONNECTIVITY_RETRY_BUDGET,
    })
}

/// Random recursive tree: node `v` attaches to a uniform earlier node, then
/// labels are shuffled.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Result<Graph> {
    if n < 2 {
        return Err(Error::TooFewNodes(n));
    }
    let labels: Vec<usize> = sample(rng, n, n).into_vec();
    let edges: Vec<(usize, usize)> = (1..n)
        .map(|v| (labels[rng.random_range(0..v)], labels[v]))
        .collect();
    Graph::new(n, edges)
}

/// Connected graph with density drawn uniformly from `[0.3, 0.9)`.
pub fn random_connected_graph<R: Rng>(n: usize, rng: &mut R) -> Result<Graph> {
    let p = 0.3 + 0.6 * rng.random::<f64>();
    erdos_renyi(n, p, rng)
}

/// A pmf whose entries are multiples of `1 / granularity`, from sorted
/// uniform cut points.
pub fn random_pmf<S: Scalar, R: Rng>(size: usize, granularity: u64, rng: &mut R) -> Vec<S> {
    let mut cuts: Vec<u64> = (1..size)
        .map(|_| rng.random_range(0..=granularity))
        .collect();
    cuts.push(0);
    cuts.push(granularity);
    cuts.sort_unstable();
    cuts.windows(2)
        .map(|w| S::from_ratio(u128::from(w[1] - w[0]), u128::from(granularity)))
        .collect()
}

pub fn random_discrete_set<S: Scalar, R: Rng>(
    n: usize,
    support: usize,
    granularity: u64,
    rng: &mut R,
) -> Result<MarginalSet<S>> {
    MarginalSet::discrete_unlabeled(
        (0..n)
            .map(|_| random_pmf(support, granularity, rng))
            .collect(),
    )
}

/// Means uniform in `[-5, 5)`, standard deviations uniform in `[0, 2)`.
pub fn random_gaussian_set<S: Scalar, R: Rng>(n: usize, rng: &mut R) -> Result<MarginalSet<S>> {
    let marginals = (0..n)
        .map(|_| {
            let mean = S::lit(10.0 * rng.random::<f64>() - 5.0);
            let std = S::lit(2.0 * rng.random::<f64>());
            GaussianMarginal::new(mean, std)
        })
        .collect::<Result<Vec<_>>>()?;
    MarginalSet::gaussian(marginals)
}

/// `samples` values per node, uniform in `[-5, 5)`.
pub fn random_empirical_set<S: Scalar, R: Rng>(
    n: usize,
    samples: usize,
    rng: &mut R,
) -> Result<MarginalSet<S>> {
    let marginals = (0..n)
        .map(|_| {
            EmpiricalMarginal::new(
                (0..samples)
                    .map(|_| S::lit(10.0 * rng.random::<f64>() - 5.0))
                    .collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    MarginalSet::empirical(marginals)
}

/// Distribution on between 1 and `max_support` distinct members of
/// `subtrees`, with weights proportional to integers in `1..=12`.
pub fn random_explicit_eta<S: Scalar, R: Rng>(
    g: &Graph,
    subtrees: &[EdgeSubset],
    max_support: usize,
    rng: &mut R,
) -> Result<ExplicitEta<S>> {
    if subtrees.is_empty() || max_support == 0 {
        return Err(Error::InvalidDistribution(
            "no subtrees to draw from".into(),
        ));
    }
    let k = rng.random_range(1..=max_support.min(subtrees.len()));
    let picked = sample(rng, subtrees.len(), k).into_vec();
    let raw: Vec<u128> = (0..k).map(|_| rng.random_range(1..=12)).collect();
    let total: u128 = raw.iter().sum();
    let entries = picked
        .into_iter()
        .zip(raw)
        .map(|(i, w)| (subtrees[i].clone(), S::from_ratio(w, total)))
        .collect();
    ExplicitEta::new(g, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::One;

    #[test]
    fn erdos_renyi_is_connected_and_reproducible() {
        let a = erdos_renyi(8, 0.3, &mut seeded_rng(5)).unwrap();
        let b = erdos_renyi(8, 0.3, &mut seeded_rng(5)).unwrap();
        assert_eq!(a, b);
        assert!(matches!(
            erdos_renyi(6, 0.0, &mut seeded_rng(1)),
            Err(Error::RetriesExhausted { .. })
        ));
        assert_eq!(
            erdos_renyi(5, 1.0, &mut seeded_rng(1))
                .unwrap()
                .edge_count(),
            10
        );
    }

    #[test]
    fn trees_are_trees() {
        let mut rng = seeded_rng(3);
        for n in 2..12 {
            assert!(random_tree(n, &mut rng).unwrap().is_tree());
        }
    }

    #[test]
    fn pmfs_sum_to_one_exactly() {
        let mut rng = seeded_rng(9);
        for size in 1..7 {
            let q: Vec<Rational> = random_pmf(size, 12, &mut rng);
            assert!(q.iter().cloned().sum::<Rational>().is_one());
            let f: Vec<f64> = random_pmf(size, DYADIC_GRANULARITY, &mut rng);
            assert_eq!(f.iter().sum::<f64>(), 1.0);
        }
    }

    #[test]
    fn eta_is_valid() {
        let g = Graph::complete(4).unwrap();
        let subtrees = crate::graph::enumerate_subtrees(&g, 1000).unwrap();
        let mut rng = seeded_rng(2);
        for _ in 0..20 {
            let eta: ExplicitEta<Rational> =
                random_explicit_eta(&g, &subtrees, 5, &mut rng).unwrap();
            assert!((1..=5).contains(&eta.entries().len()));
        }
    }
}
