//! Total variation of graph distributional signals through edge centralities.
//!
//! A distribution `η` over subtrees of a graph induces the edge centrality
//! `C_η(e) = P(e ∈ T)`, and the expected tree variation of marginals `N`
//! factors as `⟨C_η, W_N⟩` where `W_N(e)` is the squared 2-Wasserstein
//! distance between the endpoint marginals of `e`.
//!
//! ```
//! use disttv::{tv_eta, Family, Graph, MarginalSet};
//!
//! let p3 = Graph::path(3).unwrap();
//! let ns = MarginalSet::dirac(&[0.0, 1.0, 3.0]).unwrap();
//! let c = Family::SingleEdgeUniform.centrality::<f64>(&p3).unwrap();
//! assert_eq!(tv_eta(&p3, &c, &ns).unwrap(), 2.5);
//! ```
//!
//! Everything numeric is generic over [`Scalar`]; `f64`, `f32` and the exact
//! [`Rational`] are provided. The aliases below fix the common choices.

pub mod centrality;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod marginals;
pub mod oracles;
pub mod scalar;
pub mod tv;

pub use centrality::{
    betweenness_centrality, centrality_from_eta, constant_centrality, eta_for_family, probe_matrix,
    recover_centrality, spanning_tree_centrality, EdgeCentrality, ExplicitEta, Family, ProbeStatus,
    ProbeSystem, SubtreeDistribution,
};
pub use error::{Error, Result};
pub use graph::{parse_graph, EdgeSubset, EdgeVector, Graph};
pub use marginals::{
    w2_discrete, w2_empirical, w2_gaussian, wasserstein_edge_vector, DiscreteMarginal,
    EmpiricalMarginal, GaussianMarginal, MarginalKind, MarginalSet,
};
pub use oracles::{assignment_oracle_empirical, lp_min_tv_marginals};
pub use scalar::{Rational, Scalar};
pub use tv::{
    tree_coupling, tv_eta, tv_eta_decomposition, tv_eta_direct, tv_joint_discrete, tv_signal,
    tv_subtree_marginals, tv_tree_marginals, JointDistribution, Signal,
};

pub type EdgeVectorF64 = EdgeVector<f64>;
pub type EdgeVectorExact = EdgeVector<Rational>;
pub type CentralityF64 = EdgeCentrality<f64>;
pub type CentralityExact = EdgeCentrality<Rational>;
pub type MarginalSetF64 = MarginalSet<f64>;
pub type MarginalSetF32 = MarginalSet<f32>;
pub type MarginalSetExact = MarginalSet<Rational>;
pub type EtaF64 = ExplicitEta<f64>;
pub type EtaExact = ExplicitEta<Rational>;
pub type JointF64 = JointDistribution<f64>;
pub type JointExact = JointDistribution<Rational>;
