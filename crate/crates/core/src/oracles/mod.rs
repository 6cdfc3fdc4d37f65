//! Brute-force references used to check the closed forms.

mod verify;

pub use verify::{
    verify_theorem1, verify_tree_claim, verify_wasserstein, DeviationReport, TreeClaimReport,
    VERIFY_MAX_NODES,
};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lp::solve_equality_form;
use crate::marginals::MarginalSet;
use crate::scalar::{ordered_sum, Rational, Scalar};
use crate::tv::JointDistribution;

/// Default cap on the product-support size of the multimarginal LP.
pub const DEFAULT_LP_GUARD: usize = 4096;

/// Largest sample count accepted by [`assignment_oracle_empirical`].
pub const ASSIGNMENT_MAX_SAMPLES: usize = 8;

/// The coupling polytope of a discrete marginal set as an equality-form LP.
///
/// One variable per tuple of the product support (lexicographic, node 0
/// most significant). Node 0 contributes a constraint per atom; every later
/// node omits its last atom, whose constraint follows from total mass.
#[derive(Debug, Clone)]
pub struct LpInstance {
    pub node_count: usize,
    pub support_size: usize,
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
    pub objective: Vec<Rational>,
}

impl LpInstance {
    pub fn multimarginal<S: Scalar>(g: &Graph, ns: &MarginalSet<S>, guard: usize) -> Result<Self> {
        if ns.len() != g.node_count() {
            return Err(Error::LengthMismatch {
                what: "marginal set",
                expected: g.node_count(),
                found: ns.len(),
            });
        }
        let exact = ns.to_rational();
        let weights = exact.discrete_weights()?;
        let n = g.node_count();
        let size = weights[0].len();
        let vars = u32::try_from(n)
            .ok()
            .and_then(|e| size.checked_pow(e))
            .filter(|&v| v <= guard)
            .ok_or(Error::GuardExceeded {
                what: "product support",
                size: size.saturating_pow(n as u32),
                guard,
            })?;

        let tuples: Vec<Vec<usize>> = (0..vars).map(|v| decode_tuple(v, n, size)).collect();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (node, w) in weights.iter().enumerate() {
            let atoms = if node == 0 { size } else { size - 1 };
            for atom in 0..atoms {
                rows.push(
                    tuples
                        .iter()
                        .map(|t| {
                            if t[node] == atom {
                                Rational::from_count(1)
                            } else {
                                Rational::from_count(0)
                            }
                        })
                        .collect(),
                );
                rhs.push(w[atom].clone());
            }
        }
        let objective = tuples
            .iter()
            .map(|t| Rational::from_count(g.edges().iter().filter(|&&(i, j)| t[i] != t[j]).count()))
            .collect();
        Ok(LpInstance {
            node_count: n,
            support_size: size,
            rows,
            rhs,
            objective,
        })
    }

    pub fn variable_count(&self) -> usize {
        self.objective.len()
    }

    pub fn solve(&self) -> Result<(Rational, JointDistribution<Rational>)> {
        let sol =
            solve_equality_form(&self.rows, &self.rhs, &self.objective).map_err(|e| match e {
                // valid pmfs always admit the product coupling
                Error::Infeasible | Error::Unbounded => {
                    panic!("coupling LP reported {e}; marginals were validated")
                }
                other => other,
            })?;
        let atoms = sol
            .x
            .into_iter()
            .enumerate()
            .map(|(v, mass)| (decode_tuple(v, self.node_count, self.support_size), mass));
        let joint = JointDistribution::new(vec![self.support_size; self.node_count], atoms)?;
        Ok((sol.value, joint))
    }
}

fn decode_tuple(mut v: usize, n: usize, size: usize) -> Vec<usize> {
    let mut t = vec![0; n];
    for slot in t.iter_mut().rev() {
        *slot = v % size;
        v /= size;
    }
    t
}

/// Exact minimum of the expected graph variation over all joints with the
/// given discrete marginals (0/1 ground metric), with a minimizing joint.
///
/// The program is always solved in rational arithmetic; float inputs are
/// rationalized on the `1e-12` grid first.
pub fn lp_min_tv_marginals<S: Scalar>(
    g: &Graph,
    ns: &MarginalSet<S>,
    guard: usize,
) -> Result<(S, JointDistribution<S>)> {
    let (value, joint) = LpInstance::multimarginal(g, ns, guard)?.solve()?;
    Ok((S::from_rational(&value), joint.convert()))
}

/// `min_σ (1/N) Σ_k (a_k - b_σ(k))²` over all permutations.
pub fn assignment_oracle_empirical<S: Scalar>(a: &[S], b: &[S]) -> Result<S> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            what: "empirical sample count",
            expected: a.len(),
            found: b.len(),
        });
    }
    let n = a.len();
    if n > ASSIGNMENT_MAX_SAMPLES {
        return Err(Error::GuardExceeded {
            what: "assignment oracle samples",
            size: n,
            guard: ASSIGNMENT_MAX_SAMPLES,
        });
    }
    if n == 0 {
        return Err(Error::InvalidMarginal("empty sample list".into()));
    }
    let best = (0..n)
        .permutations(n)
        .map(|perm| {
            ordered_sum(perm.iter().enumerate().map(|(k, &p)| {
                let d = a[k].clone() - b[p].clone();
                d.clone() * d
            }))
        })
        .reduce(|x, y| if y < x { y } else { x })
        .expect("at least one permutation");
    Ok(best / S::from_count(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marginals::wasserstein_edge_vector;
    use crate::tv::{tv_joint_discrete, tv_tree_marginals, DiscreteMetric};
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn unit(a: usize) -> Vec<Rational> {
        (0..2)
            .map(|k| if k == a { q(1, 1) } else { q(0, 1) })
            .collect()
    }

    #[test]
    fn single_edge_forced_coupling() {
        let edge = Graph::path(2).unwrap();
        let ns = MarginalSet::discrete_unlabeled(vec![unit(0), unit(1)]).unwrap();
        let (value, joint) = lp_min_tv_marginals(&edge, &ns, DEFAULT_LP_GUARD).unwrap();
        assert_eq!(value, q(1, 1));
        assert_eq!(joint.mass(&[0, 1]), q(1, 1));
    }

    #[test]
    fn triangle_meets_edge_lower_bound() {
        let c3 = Graph::cycle(3).unwrap();
        let ns = MarginalSet::discrete_unlabeled(vec![unit(0), unit(1), unit(0)]).unwrap();
        let (value, joint) = lp_min_tv_marginals(&c3, &ns, DEFAULT_LP_GUARD).unwrap();
        assert_eq!(value, q(2, 1));
        assert_eq!(joint.mass(&[0, 1, 0]), q(1, 1));
        let w: Rational = wasserstein_edge_vector(&c3, &ns)
            .unwrap()
            .into_values()
            .into_iter()
            .sum();
        assert_eq!(value, w);
    }

    #[test]
    fn triangle_strictly_above_lower_bound() {
        // each edge's optimal coupling keeps a different atom in place; the
        // three requirements are incompatible in a single joint
        let c3 = Graph::cycle(3).unwrap();
        let ns = MarginalSet::discrete_unlabeled(vec![
            vec![q(1, 2), q(1, 2), q(0, 1)],
            vec![q(0, 1), q(1, 2), q(1, 2)],
            vec![q(1, 2), q(0, 1), q(1, 2)],
        ])
        .unwrap();
        let (value, joint) = lp_min_tv_marginals(&c3, &ns, DEFAULT_LP_GUARD).unwrap();
        let bound: Rational = wasserstein_edge_vector(&c3, &ns)
            .unwrap()
            .into_values()
            .into_iter()
            .sum();
        assert_eq!(bound, q(3, 2));
        assert!(value > bound, "{value} vs {bound}");
        assert_eq!(
            tv_joint_discrete(&c3, &joint, &DiscreteMetric).unwrap(),
            value
        );
        for v in 0..3 {
            assert_eq!(
                joint.node_marginal(v),
                ns.discrete_weights().unwrap()[v].to_vec()
            );
        }
    }

    #[test]
    fn path_lp_equals_closed_form() {
        let p3 = Graph::path(3).unwrap();
        let ns = MarginalSet::discrete_unlabeled(vec![
            vec![q(1, 5), q(3, 10), q(1, 2)],
            vec![q(2, 3), q(1, 6), q(1, 6)],
            vec![q(0, 1), q(1, 4), q(3, 4)],
        ])
        .unwrap();
        let (value, _) = lp_min_tv_marginals(&p3, &ns, DEFAULT_LP_GUARD).unwrap();
        assert_eq!(value, tv_tree_marginals(&p3, &ns).unwrap());
    }

    #[test]
    fn float_inputs_are_rationalized() {
        let p3 = Graph::path(3).unwrap();
        let ns =
            MarginalSet::discrete_unlabeled(vec![vec![0.7, 0.3], vec![0.2, 0.8], vec![0.5, 0.5]])
                .unwrap();
        let (value, joint) = lp_min_tv_marginals(&p3, &ns, DEFAULT_LP_GUARD).unwrap();
        assert!((value - 0.8_f64).abs() < 1e-12);
        assert!((tv_joint_discrete(&p3, &joint, &DiscreteMetric).unwrap() - 0.8_f64).abs() < 1e-12);
    }

    #[test]
    fn guard_and_kind_errors() {
        let k4 = Graph::complete(4).unwrap();
        let ns = MarginalSet::discrete_unlabeled(vec![vec![0.25; 4]; 4]).unwrap();
        assert!(matches!(
            lp_min_tv_marginals(&k4, &ns, 255),
            Err(Error::GuardExceeded { size: 256, .. })
        ));
        let dirac = MarginalSet::dirac(&[0.0; 4]).unwrap();
        assert!(matches!(
            lp_min_tv_marginals(&k4, &dirac, DEFAULT_LP_GUARD),
            Err(Error::KindMismatch { .. })
        ));
    }

    #[test]
    fn assignment_examples() {
        assert_eq!(
            assignment_oracle_empirical(&[0.0, 1.0], &[1.0, 3.0]).unwrap(),
            2.5
        );
        assert_eq!(
            assignment_oracle_empirical(&[0.0, 1.0], &[3.0, 1.0]).unwrap(),
            2.5
        );
        assert_eq!(
            assignment_oracle_empirical(&[4.0, 2.0], &[2.0, 4.0]).unwrap(),
            0.0
        );
        assert_eq!(
            assignment_oracle_empirical(&[0.0, 2.0, 5.0], &[1.0, 1.0, 6.0]).unwrap(),
            1.0
        );
        assert!(assignment_oracle_empirical(&[0.0; 9], &[0.0; 9]).is_err());
        assert!(assignment_oracle_empirical(&[0.0; 2], &[0.0; 3]).is_err());
    }
}
