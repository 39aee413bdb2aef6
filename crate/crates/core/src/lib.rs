//! Markov entropic centrality on directed weighted graphs and the
//! entropy-guided two-stage clustering built on it.
//!
//! The walk model gives every node a self-loop and an auxiliary absorbing
//! state. A node's centrality is the entropy of where a walker started there
//! ends up, either after `t` steps or once absorbed.

pub mod bounds;
pub mod centrality;
pub mod clustering;
pub mod error;
pub mod eval;
pub mod graph;
pub mod linalg;
pub mod markov;
pub mod report;
pub mod synth;
pub mod weights;

pub use centrality::{
    centralization, centralization_sequence, compute_profile, entropic_centrality,
    CentralityProfile, CentralizationSequence, ModelConfig,
};
pub use clustering::{
    cluster_graph, subgraph_recluster, ClusterSet, ClusteringConfig, ClusteringOutcome, Linkage,
    RowClusterer,
};
pub use error::{Error, Result};
pub use eval::{kendall_tau_distance, pairwise_f_score, FScoreReport};
pub use graph::{parse_edge_list, Graph, GraphBuilder, GroundTruth};
pub use markov::{
    AbsorbingChain, AbsorptionDistribution, AbsorptionModel, Horizon, SolverConfig,
};
pub use report::{benchmark_run, BenchReport, ClusterJson};
pub use synth::{generate_planted_partition, SyntheticSpec};
pub use weights::{NodeWeight, WeightTransform};
