//! Randomized end-to-end checks of the closed forms against the oracles.

use std::fmt;

use rand::Rng;

use super::{assignment_oracle_empirical, lp_min_tv_marginals, DEFAULT_LP_GUARD};
use crate::centrality::{centrality_from_eta, eta_for_family, ExplicitEta, Family};
use crate::error::{Error, Result};
use crate::generate::{random_discrete_set, random_explicit_eta, random_pmf, seeded_rng};
use crate::graph::{
    enumerate_spanning_trees, enumerate_subtrees, Graph, DEFAULT_ENUMERATION_LIMIT,
};
use crate::marginals::{
    discrete_metric_cost, w2_discrete, w2_empirical, w2_oracle, wasserstein_edge_vector,
    DiscreteMarginal, EmpiricalMarginal, MarginalSet,
};
use crate::scalar::{ordered_sum, Rational, Scalar};
use crate::tv::{
    induced_tree, tree_coupling, tv_eta, tv_eta_direct, tv_joint_discrete, tv_tree_marginals,
    DiscreteMetric,
};

/// Largest graph accepted by the enumeration-backed checks.
pub const VERIFY_MAX_NODES: usize = 6;

const ETA_MAX_SUPPORT: usize = 6;
const WEIGHT_GRANULARITY: u64 = 12;

/// Largest absolute deviation seen by one check.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationReport {
    pub check: &'static str,
    pub cases: usize,
    pub max_deviation: f64,
}

impl DeviationReport {
    pub fn new(check: &'static str) -> Self {
        DeviationReport {
            check,
            cases: 0,
            max_deviation: 0.0,
        }
    }

    pub fn record<S: Scalar>(&mut self, a: &S, b: &S) {
        let d = (a.clone() - b.clone()).abs().to_f64_lossy();
        self.cases += 1;
        // NaN must not be swallowed by f64::max
        if d.is_nan() || d > self.max_deviation {
            self.max_deviation = d;
        }
    }

    pub fn passed(&self, tolerance: f64) -> bool {
        self.max_deviation <= tolerance
    }
}

impl fmt::Display for DeviationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} cases, max deviation {:.1e}",
            self.check, self.cases, self.max_deviation
        )
    }
}

fn check_size(g: &Graph) -> Result<()> {
    if g.node_count() > VERIFY_MAX_NODES {
        return Err(Error::GuardExceeded {
            what: "verification graph nodes",
            size: g.node_count(),
            guard: VERIFY_MAX_NODES,
        });
    }
    Ok(())
}

/// Compares `⟨C_η, W_N⟩` with the explicit expectation over subtrees, both
/// with per-subtree closed forms and with per-subtree LP minima.
///
/// Every trial draws a random explicit η and random discrete marginals with
/// two or three atoms, in exact arithmetic; each named family is checked
/// once more on top.
pub fn verify_theorem1(g: &Graph, trials: usize, seed: u64) -> Result<[DeviationReport; 2]> {
    check_size(g)?;
    let subtrees = enumerate_subtrees(g, DEFAULT_ENUMERATION_LIMIT)?;
    let mut rng = seeded_rng(seed);
    let mut closed = DeviationReport::new("tv identity closed form");
    let mut lp = DeviationReport::new("tv identity lp oracle");

    let mut run = |eta: &ExplicitEta<Rational>, rng: &mut rand_chacha::ChaCha8Rng| -> Result<()> {
        let support = rng.random_range(2..=3);
        let ns: MarginalSet<Rational> =
            random_discrete_set(g.node_count(), support, WEIGHT_GRANULARITY, rng)?;
        let inner = tv_eta(g, &centrality_from_eta(g, eta), &ns)?;
        closed.record(&inner, &tv_eta_direct(g, eta, &ns, false)?);
        lp.record(&inner, &tv_eta_direct(g, eta, &ns, true)?);
        Ok(())
    };
    for _ in 0..trials {
        let eta = random_explicit_eta(g, &subtrees, ETA_MAX_SUPPORT, &mut rng)?;
        run(&eta, &mut rng)?;
    }
    for family in Family::ALL {
        let eta = eta_for_family(g, family, DEFAULT_ENUMERATION_LIMIT)?;
        run(&eta, &mut rng)?;
    }
    Ok([closed, lp])
}

/// Outcome of [`verify_tree_claim`].
#[derive(Debug, Clone, PartialEq)]
pub struct TreeClaimReport {
    pub trials: usize,
    /// Spanning trees whose exact LP minimum differs from the sum of W².
    pub exact_mismatches: usize,
    /// Floating-point tree couplings against the exact minimum.
    pub coupling: DeviationReport,
    /// Instances on the full graph below `Σ_e W² - 1e-12`.
    pub lower_bound_violations: usize,
    /// Smallest `LP - Σ_e W²` on the full graph.
    pub min_lower_bound_gap: f64,
    /// Instances where the full graph is a tree and the bound is not tight.
    pub tree_equality_failures: usize,
}

impl TreeClaimReport {
    pub fn passed(&self, tolerance: f64) -> bool {
        self.exact_mismatches == 0
            && self.coupling.passed(tolerance)
            && self.lower_bound_violations == 0
            && self.tree_equality_failures == 0
    }
}

impl fmt::Display for TreeClaimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "tree claim: {} trials, {} exact mismatches",
            self.trials, self.exact_mismatches
        )?;
        writeln!(f, "{}", self.coupling)?;
        write!(
            f,
            "lower bound: {} violations, {} tree equality failures, min gap {:.1e}",
            self.lower_bound_violations, self.tree_equality_failures, self.min_lower_bound_gap
        )
    }
}

/// Per trial: a random spanning tree of `g` and random exact discrete
/// marginals. On the tree the LP minimum must equal the sum of W² exactly
/// and the Bayesian-network coupling must attain it; on `g` itself the LP
/// minimum must be at least the sum of W² over all edges.
pub fn verify_tree_claim(g: &Graph, trials: usize, seed: u64) -> Result<TreeClaimReport> {
    check_size(g)?;
    let spanning = enumerate_spanning_trees(g, DEFAULT_ENUMERATION_LIMIT)?;
    let mut rng = seeded_rng(seed);
    let slack = Rational::lit(1e-12);
    let mut report = TreeClaimReport {
        trials,
        exact_mismatches: 0,
        coupling: DeviationReport::new("tree coupling"),
        lower_bound_violations: 0,
        min_lower_bound_gap: f64::INFINITY,
        tree_equality_failures: 0,
    };
    for _ in 0..trials {
        let (tree, _) = induced_tree(g, &spanning[rng.random_range(0..spanning.len())])?;
        let support = rng.random_range(2..=3);
        let ns: MarginalSet<Rational> =
            random_discrete_set(g.node_count(), support, WEIGHT_GRANULARITY, &mut rng)?;

        let closed = tv_tree_marginals(&tree, &ns)?;
        let (value, joint) = lp_min_tv_marginals(&tree, &ns, DEFAULT_LP_GUARD)?;
        if value != closed || tv_joint_discrete(&tree, &joint, &DiscreteMetric)? != value {
            report.exact_mismatches += 1;
        }
        let root = rng.random_range(0..tree.node_count());
        let float_ns: MarginalSet<f64> = ns.convert();
        let coupled = tree_coupling(&tree, root, &float_ns)?;
        report.coupling.record(
            &tv_joint_discrete(&tree, &coupled, &DiscreteMetric)?,
            &closed.to_f64_lossy(),
        );

        let bound = ordered_sum(wasserstein_edge_vector(g, &ns)?.into_values());
        let (full, _) = lp_min_tv_marginals(g, &ns, DEFAULT_LP_GUARD)?;
        let gap = full.clone() - bound.clone();
        report.min_lower_bound_gap = report.min_lower_bound_gap.min(gap.to_f64_lossy());
        if full < bound.clone() - slack.clone() {
            report.lower_bound_violations += 1;
        }
        if g.is_tree() && full != bound {
            report.tree_equality_failures += 1;
        }
    }
    if trials == 0 {
        report.min_lower_bound_gap = 0.0;
    }
    Ok(report)
}

/// Sorted-sample W² against the permutation oracle (up to six samples) and
/// half-L1 discrete W² against the exact transport LP (up to six atoms).
pub fn verify_wasserstein(trials: usize, seed: u64) -> Result<[DeviationReport; 2]> {
    let mut rng = seeded_rng(seed);
    let mut empirical = DeviationReport::new("w2 empirical vs assignment");
    let mut discrete = DeviationReport::new("w2 discrete vs transport lp");
    for _ in 0..trials {
        let n = rng.random_range(1..=6);
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
            (0..n).map(|_| 10.0 * rng.random::<f64>() - 5.0).collect()
        };
        let (a, b) = (draw(&mut rng), draw(&mut rng));
        let closed = w2_empirical(
            &EmpiricalMarginal::new(a.clone())?,
            &EmpiricalMarginal::new(b.clone())?,
        )?;
        empirical.record(&closed, &assignment_oracle_empirical(&a, &b)?);

        let size = rng.random_range(1..=6);
        let p: Vec<Rational> = random_pmf(size, WEIGHT_GRANULARITY, &mut rng);
        let q: Vec<Rational> = random_pmf(size, WEIGHT_GRANULARITY, &mut rng);
        let (exact, _) = w2_oracle(&p, &q, &discrete_metric_cost(size))?;
        let to_f64 =
            |w: &[Rational]| DiscreteMarginal::new(w.iter().map(Scalar::to_f64_lossy).collect());
        let closed = w2_discrete(&to_f64(&p)?, &to_f64(&q)?)?;
        discrete.record(&closed, &exact.to_f64_lossy());
    }
    Ok([empirical, discrete])
}
