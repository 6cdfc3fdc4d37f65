//! Per-node marginal distributions and squared 2-Wasserstein distances.
//!
//! Three marginal kinds are supported, each with a closed form for W²:
//!
//! | kind      | parameters                         | W²(a, b)                              |
//! |-----------|------------------------------------|---------------------------------------|
//! | gaussian  | mean `m`, standard deviation `s`   | `(m_a - m_b)² + (s_a - s_b)²`         |
//! | empirical | `N` sorted samples `x_1 <= … <= x_N` | `(1/N) Σ_k (x_{a,k} - x_{b,k})²`       |
//! | discrete  | weights `p_k` on a shared support, 0/1 metric | `½ Σ_k |p_{a,k} - p_{b,k}|` |
//!
//! [`w2_oracle`] solves the underlying transport problem exactly and is used
//! to check the last two closed forms.

use crate::error::{Error, Result};
use crate::graph::{EdgeVector, Graph};
use crate::lp::solve_equality_form;
use crate::scalar::{ordered_sum, Rational, Scalar};

/// Absolute tolerance on probability vectors summing to one.
pub const SIMPLEX_TOLERANCE: f64 = 1e-12;

/// Largest support accepted by [`w2_oracle`].
pub const ORACLE_MAX_SUPPORT: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMarginal<S> {
    pub mean: S,
    pub std: S,
}

impl<S: Scalar> GaussianMarginal<S> {
    /// A zero standard deviation is allowed and models a point mass.
    pub fn new(mean: S, std: S) -> Result<Self> {
        if !mean.is_finite_value() || !std.is_finite_value() {
            return Err(Error::InvalidMarginal(
                "gaussian parameters must be finite".into(),
            ));
        }
        if std.is_negative() {
            return Err(Error::InvalidMarginal(format!("negative std {std:?}")));
        }
        Ok(GaussianMarginal { mean, std })
    }

    pub fn dirac(at: S) -> Self {
        GaussianMarginal {
            mean: at,
            std: S::zero(),
        }
    }
}

/// Uniform distribution over `N` samples, kept in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMarginal<S> {
    samples: Vec<S>,
}

impl<S: Scalar> EmpiricalMarginal<S> {
    pub fn new(mut samples: Vec<S>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidMarginal(
                "empirical marginal needs samples".into(),
            ));
        }
        if samples.iter().any(|s| !s.is_finite_value()) {
            return Err(Error::InvalidMarginal("samples must be finite".into()));
        }
        samples.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
        Ok(EmpiricalMarginal { samples })
    }

    pub fn samples(&self) -> &[S] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Probability weights over a support shared by the whole marginal set.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMarginal<S> {
    weights: Vec<S>,
}

impl<S: Scalar> DiscreteMarginal<S> {
    /// Accepts weights summing to one within [`SIMPLEX_TOLERANCE`] and
    /// renormalizes them; anything further off is rejected.
    pub fn new(weights: Vec<S>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidMarginal(
                "discrete marginal needs weights".into(),
            ));
        }
        if let Some(w) = weights
            .iter()
            .find(|w| w.is_negative() || !w.is_finite_value())
        {
            return Err(Error::InvalidMarginal(format!("invalid weight {w:?}")));
        }
        let total = ordered_sum(weights.iter().cloned());
        if !total.within(&S::one(), SIMPLEX_TOLERANCE) {
            return Err(Error::InvalidMarginal(format!(
                "weights sum to {total:?}, not 1"
            )));
        }
        let weights = if total == S::one() {
            weights
        } else {
            weights.into_iter().map(|w| w / total.clone()).collect()
        };
        Ok(DiscreteMarginal { weights })
    }

    pub fn point_mass(support_size: usize, at: usize) -> Self {
        let weights = (0..support_size)
            .map(|k| if k == at { S::one() } else { S::zero() })
            .collect();
        DiscreteMarginal { weights }
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarginalKind {
    Gaussian,
    Empirical,
    Discrete,
}

impl MarginalKind {
    pub fn name(self) -> &'static str {
        match self {
            MarginalKind::Gaussian => "gaussian",
            MarginalKind::Empirical => "empirical",
            MarginalKind::Discrete => "discrete",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Marginals<S> {
    Gaussian(Vec<GaussianMarginal<S>>),
    Empirical(Vec<EmpiricalMarginal<S>>),
    Discrete {
        support: Vec<String>,
        marginals: Vec<DiscreteMarginal<S>>,
    },
}

/// One marginal per node, all of the same kind.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalSet<S> {
    inner: Marginals<S>,
}

impl<S: Scalar> MarginalSet<S> {
    pub fn gaussian(marginals: Vec<GaussianMarginal<S>>) -> Result<Self> {
        if marginals.is_empty() {
            return Err(Error::InvalidMarginal("empty marginal set".into()));
        }
        Ok(MarginalSet {
            inner: Marginals::Gaussian(marginals),
        })
    }

    /// Point masses at the signal values (degenerate Gaussians).
    pub fn dirac(values: &[S]) -> Result<Self> {
        MarginalSet::gaussian(
            values
                .iter()
                .cloned()
                .map(GaussianMarginal::dirac)
                .collect(),
        )
    }

    pub fn empirical(marginals: Vec<EmpiricalMarginal<S>>) -> Result<Self> {
        let Some(first) = marginals.first() else {
            return Err(Error::InvalidMarginal("empty marginal set".into()));
        };
        let n = first.len();
        if let Some(bad) = marginals.iter().find(|m| m.len() != n) {
            return Err(Error::LengthMismatch {
                what: "empirical sample count",
                expected: n,
                found: bad.len(),
            });
        }
        Ok(MarginalSet {
            inner: Marginals::Empirical(marginals),
        })
    }

    pub fn discrete(support: Vec<String>, marginals: Vec<DiscreteMarginal<S>>) -> Result<Self> {
        if marginals.is_empty() {
            return Err(Error::InvalidMarginal("empty marginal set".into()));
        }
        if let Some(bad) = marginals.iter().find(|m| m.len() != support.len()) {
            return Err(Error::LengthMismatch {
                what: "discrete weight vector",
                expected: support.len(),
                found: bad.len(),
            });
        }
        Ok(MarginalSet {
            inner: Marginals::Discrete { support, marginals },
        })
    }

    /// Discrete set with support labels `s1, s2, …`.
    pub fn discrete_unlabeled(weights: Vec<Vec<S>>) -> Result<Self> {
        let size = weights.first().map_or(0, Vec::len);
        let support = (1..=size).map(|k| format!("s{k}")).collect();
        let marginals = weights
            .into_iter()
            .map(DiscreteMarginal::new)
            .collect::<Result<Vec<_>>>()?;
        MarginalSet::discrete(support, marginals)
    }

    pub fn marginals(&self) -> &Marginals<S> {
        &self.inner
    }

    pub fn kind(&self) -> MarginalKind {
        match self.inner {
            Marginals::Gaussian(_) => MarginalKind::Gaussian,
            Marginals::Empirical(_) => MarginalKind::Empirical,
            Marginals::Discrete { .. } => MarginalKind::Discrete,
        }
    }

    pub fn len(&self) -> usize {
        match &self.inner {
            Marginals::Gaussian(m) => m.len(),
            Marginals::Empirical(m) => m.len(),
            Marginals::Discrete { marginals, .. } => marginals.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Weight vectors of a discrete set.
    pub fn discrete_weights(&self) -> Result<Vec<&[S]>> {
        match &self.inner {
            Marginals::Discrete { marginals, .. } => {
                Ok(marginals.iter().map(|m| m.weights()).collect())
            }
            _ => Err(Error::KindMismatch {
                expected: "discrete",
                found: self.kind().name(),
            }),
        }
    }

    /// Squared Wasserstein distance between the marginals of nodes `i` and `j`.
    pub fn w2(&self, i: usize, j: usize) -> Result<S> {
        match &self.inner {
            Marginals::Gaussian(m) => Ok(w2_gaussian(&m[i], &m[j])),
            Marginals::Empirical(m) => w2_empirical(&m[i], &m[j]),
            Marginals::Discrete { marginals, .. } => w2_discrete(&marginals[i], &marginals[j]),
        }
    }

    /// Marginals of the listed nodes, in the given order.
    pub fn restrict(&self, nodes: &[usize]) -> Self {
        let inner = match &self.inner {
            Marginals::Gaussian(m) => {
                Marginals::Gaussian(nodes.iter().map(|&v| m[v].clone()).collect())
            }
            Marginals::Empirical(m) => {
                Marginals::Empirical(nodes.iter().map(|&v| m[v].clone()).collect())
            }
            Marginals::Discrete { support, marginals } => Marginals::Discrete {
                support: support.clone(),
                marginals: nodes.iter().map(|&v| marginals[v].clone()).collect(),
            },
        };
        MarginalSet { inner }
    }

    /// Exact copy of the set. Float parameters are rounded to the `1e-12`
    /// grid; discrete weights are then renormalized so each vector sums to
    /// exactly one.
    pub fn to_rational(&self) -> MarginalSet<Rational> {
        let inner = match &self.inner {
            Marginals::Gaussian(m) => Marginals::Gaussian(
                m.iter()
                    .map(|g| GaussianMarginal {
                        mean: g.mean.to_rational(),
                        std: g.std.to_rational(),
                    })
                    .collect(),
            ),
            Marginals::Empirical(m) => Marginals::Empirical(
                m.iter()
                    .map(|e| EmpiricalMarginal {
                        samples: e.samples.iter().map(Scalar::to_rational).collect(),
                    })
                    .collect(),
            ),
            Marginals::Discrete { support, marginals } => Marginals::Discrete {
                support: support.clone(),
                marginals: marginals
                    .iter()
                    .map(|d| {
                        let w: Vec<Rational> = d.weights.iter().map(Scalar::to_rational).collect();
                        let total: Rational = ordered_sum(w.iter().cloned());
                        DiscreteMarginal {
                            weights: w.into_iter().map(|x| x / total.clone()).collect(),
                        }
                    })
                    .collect(),
            },
        };
        MarginalSet { inner }
    }

    /// Converts every parameter to another scalar type through its exact
    /// rational value.
    pub fn convert<T: Scalar>(&self) -> MarginalSet<T> {
        let conv = |x: &S| T::from_rational(&x.to_rational());
        let inner = match &self.inner {
            Marginals::Gaussian(m) => Marginals::Gaussian(
                m.iter()
                    .map(|g| GaussianMarginal {
                        mean: conv(&g.mean),
                        std: conv(&g.std),
                    })
                    .collect(),
            ),
            Marginals::Empirical(m) => Marginals::Empirical(
                m.iter()
                    .map(|e| EmpiricalMarginal {
                        samples: e.samples.iter().map(conv).collect(),
                    })
                    .collect(),
            ),
            Marginals::Discrete { support, marginals } => Marginals::Discrete {
                support: support.clone(),
                marginals: marginals
                    .iter()
                    .map(|d| DiscreteMarginal {
                        weights: d.weights.iter().map(conv).collect(),
                    })
                    .collect(),
            },
        };
        MarginalSet { inner }
    }
}

pub fn w2_gaussian<S: Scalar>(a: &GaussianMarginal<S>, b: &GaussianMarginal<S>) -> S {
    let dm = a.mean.clone() - b.mean.clone();
    let ds = a.std.clone() - b.std.clone();
    dm.clone() * dm + ds.clone() * ds
}

/// Index-aligned mean squared difference of the sorted samples.
pub fn w2_empirical<S: Scalar>(a: &EmpiricalMarginal<S>, b: &EmpiricalMarginal<S>) -> Result<S> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            what: "empirical sample count",
            expected: a.len(),
            found: b.len(),
        });
    }
    let total = ordered_sum(a.samples.iter().zip(&b.samples).map(|(x, y)| {
        let d = x.clone() - y.clone();
        d.clone() * d
    }));
    Ok(total / S::from_count(a.len()))
}

/// Half the ℓ1 distance between weight vectors on a shared support.
pub fn w2_discrete<S: Scalar>(a: &DiscreteMarginal<S>, b: &DiscreteMarginal<S>) -> Result<S> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            what: "discrete support",
            expected: a.len(),
            found: b.len(),
        });
    }
    let l1 = ordered_sum(
        a.weights
            .iter()
            .zip(&b.weights)
            .map(|(x, y)| (x.clone() - y.clone()).abs()),
    );
    Ok(l1 / S::from_count(2))
}

/// `W_N(e) = W²(μ_i, μ_j)` for every edge `e = (i, j)`.
pub fn wasserstein_edge_vector<S: Scalar>(g: &Graph, ns: &MarginalSet<S>) -> Result<EdgeVector<S>> {
    if ns.len() != g.node_count() {
        return Err(Error::LengthMismatch {
            what: "marginal set",
            expected: g.node_count(),
            found: ns.len(),
        });
    }
    let values = g
        .edges()
        .iter()
        .map(|&(i, j)| ns.w2(i, j))
        .collect::<Result<Vec<_>>>()?;
    EdgeVector::new(g, values)
}

/// Joint weights of two discrete marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseCoupling<S> {
    weights: Vec<Vec<S>>,
}

impl<S: Scalar> PairwiseCoupling<S> {
    pub fn weights(&self) -> &[Vec<S>] {
        &self.weights
    }

    pub fn row_sums(&self) -> Vec<S> {
        self.weights
            .iter()
            .map(|r| ordered_sum(r.iter().cloned()))
            .collect()
    }

    pub fn col_sums(&self) -> Vec<S> {
        let cols = self.weights.first().map_or(0, Vec::len);
        (0..cols)
            .map(|j| ordered_sum(self.weights.iter().map(|r| r[j].clone())))
            .collect()
    }

    pub fn cost(&self, cost: &[Vec<S>]) -> S {
        ordered_sum(
            self.weights
                .iter()
                .zip(cost)
                .flat_map(|(w, c)| w.iter().zip(c).map(|(x, y)| x.clone() * y.clone())),
        )
    }
}

/// Exact optimal transport between weight vectors `a` and `b` under the
/// given cost matrix, solved as a transportation LP.
pub fn w2_oracle<S: Scalar>(a: &[S], b: &[S], cost: &[Vec<S>]) -> Result<(S, PairwiseCoupling<S>)> {
    let (ra, rb) = (a.len(), b.len());
    for size in [ra, rb] {
        if size > ORACLE_MAX_SUPPORT {
            return Err(Error::GuardExceeded {
                what: "transport support",
                size,
                guard: ORACLE_MAX_SUPPORT,
            });
        }
    }
    if cost.len() != ra || cost.iter().any(|r| r.len() != rb) {
        return Err(Error::LengthMismatch {
            what: "cost matrix",
            expected: ra * rb,
            found: cost.iter().map(Vec::len).sum(),
        });
    }
    let vars = ra * rb;
    let mut rows = Vec::with_capacity(ra + rb);
    let mut rhs = Vec::with_capacity(ra + rb);
    for i in 0..ra {
        let mut row = vec![S::zero(); vars];
        for cell in &mut row[i * rb..(i + 1) * rb] {
            *cell = S::one();
        }
        rows.push(row);
        rhs.push(a[i].clone());
    }
    // the last column constraint follows from the others
    for j in 0..rb.saturating_sub(1) {
        let mut row = vec![S::zero(); vars];
        for i in 0..ra {
            row[i * rb + j] = S::one();
        }
        rows.push(row);
        rhs.push(b[j].clone());
    }
    let objective: Vec<S> = cost.iter().flatten().cloned().collect();
    let mut sol = solve_equality_form(&rows, &rhs, &objective)?;
    for x in &mut sol.x {
        if x.is_negative() && x.is_negligible() {
            *x = S::zero();
        }
    }
    let weights = sol.x.chunks(rb.max(1)).map(<[S]>::to_vec).collect();
    Ok((sol.value, PairwiseCoupling { weights }))
}

/// 0/1 cost matrix of the discrete metric on `size` atoms.
pub fn discrete_metric_cost<S: Scalar>(size: usize) -> Vec<Vec<S>> {
    (0..size)
        .map(|i| {
            (0..size)
                .map(|j| if i == j { S::zero() } else { S::one() })
                .collect()
        })
        .collect()
}

pub fn squared_distance_cost<S: Scalar>(xs: &[S], ys: &[S]) -> Vec<Vec<S>> {
    xs.iter()
        .map(|x| {
            ys.iter()
                .map(|y| {
                    let d = x.clone() - y.clone();
                    d.clone() * d
                })
                .collect()
        })
        .collect()
}
