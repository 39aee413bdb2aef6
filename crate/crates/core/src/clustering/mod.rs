//! Two-stage clustering: local clusters around low-centrality query nodes,
//! then agglomeration of those clusters as supernodes.

mod agglomerate;
mod local;
mod row;

pub use agglomerate::{agglomerate, supernode_transitions, AgglomerationTrace, Level};
pub use local::{
    hub_count, pick_raw_cluster, process_raw_cluster, run_local_pass, select_high_entropy_set,
    LocalPass, RawCluster, TieEvent,
};
pub use row::{cluster_row_1d, Band, RowClusterer};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::centrality::{compute_profile, CentralityProfile, ModelConfig};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::markov::{AbsorptionDistribution, Horizon, SolverConfig};

/// Aggregate of Π over node pairs of two supernodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Linkage {
    #[default]
    Min,
    Mean,
    Max,
}

impl FromStr for Linkage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(Linkage::Min),
            "mean" => Ok(Linkage::Mean),
            "max" => Ok(Linkage::Max),
            _ => Err(Error::InvalidParameter(format!(
                "linkage `{s}` (expected min | mean | max)"
            ))),
        }
    }
}

impl fmt::Display for Linkage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Linkage::Min => "min",
            Linkage::Mean => "mean",
            Linkage::Max => "max",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusteringConfig {
    /// Fraction of items, by centrality, treated as hubs.
    pub she_fraction: f64,
    pub linkage: Linkage,
    /// Clustering passes counting the local stage as the first; 0 and 1
    /// both stop after the local stage.
    pub iterations: usize,
    pub rng_seed: u64,
    pub row_clusterer: RowClusterer,
    pub horizon: Horizon,
}

impl Default for ClusteringConfig {
    fn default() -> Self {
        ClusteringConfig {
            she_fraction: 0.3,
            linkage: Linkage::Min,
            iterations: 2,
            rng_seed: 0,
            row_clusterer: RowClusterer::Ward,
            horizon: Horizon::Infinite,
        }
    }
}

impl ClusteringConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.she_fraction > 0.0 && self.she_fraction <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "she fraction {} outside (0,1]",
                self.she_fraction
            )));
        }
        Ok(())
    }
}

/// Disjoint node sets in canonical order: members ascending, clusters by
/// smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterSet {
    clusters: Vec<Vec<usize>>,
}

impl ClusterSet {
    pub fn new<I, C>(sets: I) -> Self
    where
        I: IntoIterator<Item = C>,
        C: IntoIterator<Item = usize>,
    {
        let mut clusters: Vec<Vec<usize>> = sets
            .into_iter()
            .map(|c| {
                let mut v: Vec<usize> = c.into_iter().collect();
                v.sort_unstable();
                v.dedup();
                v
            })
            .filter(|v| !v.is_empty())
            .collect();
        clusters.sort();
        ClusterSet { clusters }
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Cluster position per node, `None` for uncovered nodes.
    pub fn assignment(&self, n: usize) -> Vec<Option<usize>> {
        let mut a = vec![None; n];
        for (k, c) in self.clusters.iter().enumerate() {
            for &u in c {
                a[u] = Some(k);
            }
        }
        a
    }

    pub fn is_partition_of(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for &u in self.clusters.iter().flatten() {
            if u >= n || seen[u] {
                return false;
            }
            seen[u] = true;
        }
        seen.into_iter().all(|s| s)
    }

    /// Whether every cluster of `self` lies inside one cluster of `coarser`.
    pub fn refines(&self, coarser: &ClusterSet, n: usize) -> bool {
        let a = coarser.assignment(n);
        self.clusters
            .iter()
            .all(|c| c.iter().all(|&u| a[u].is_some() && a[u] == a[c[0]]))
    }
}

/// Local clusters around every node, driven by the rows of `dist`.
pub fn prob_dist_clustering(
    dist: &AbsorptionDistribution,
    profile: &CentralityProfile,
    cfg: &ClusteringConfig,
    rng: &mut ChaCha8Rng,
    ties: &mut Vec<TieEvent>,
) -> ClusterSet {
    let pass = LocalPass {
        centrality: &profile.values,
        she_fraction: cfg.she_fraction,
        method: cfg.row_clusterer,
        admissible: None,
        level: 0,
    };
    let row = |q: usize| dist.row(q).to_vec();
    ClusterSet::new(run_local_pass(&pass, &row, rng, ties))
}

/// Everything a clustering run produces.
#[derive(Debug, Clone)]
pub struct ClusteringOutcome {
    pub profile: CentralityProfile,
    pub trace: AgglomerationTrace,
    pub ties: Vec<TieEvent>,
}

impl ClusteringOutcome {
    pub fn clusters(&self) -> &ClusterSet {
        self.trace.last()
    }
}

/// Full pipeline on `g`: distribution, centrality, local stage and
/// agglomeration.
pub fn cluster_graph(
    g: &Graph,
    model: ModelConfig,
    cfg: &ClusteringConfig,
    solver: SolverConfig,
) -> Result<ClusteringOutcome> {
    cfg.validate()?;
    let (dist, profile) = compute_profile(g, model, cfg.horizon, solver)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut ties = Vec::new();
    let stage1 = prob_dist_clustering(&dist, &profile, cfg, &mut rng, &mut ties);
    let trace = agglomerate(g, stage1, &dist, &profile, cfg, &mut rng, &mut ties);
    Ok(ClusteringOutcome {
        profile,
        trace,
        ties,
    })
}

/// Re-runs the pipeline inside each of the `k` largest clusters and splices
/// the refined clusters back in place of the originals.
pub fn subgraph_recluster(
    g: &Graph,
    base: &ClusterSet,
    k: usize,
    model: ModelConfig,
    cfg: &ClusteringConfig,
    solver: SolverConfig,
) -> Result<ClusterSet> {
    let mut by_size: Vec<usize> = (0..base.len()).collect();
    by_size.sort_by(|&a, &b| {
        base.clusters[b]
            .len()
            .cmp(&base.clusters[a].len())
            .then(a.cmp(&b))
    });
    let chosen: BTreeSet<usize> = by_size.into_iter().take(k).collect();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, c) in base.clusters.iter().enumerate() {
        if !chosen.contains(&i) || c.len() < 2 {
            out.push(c.clone());
            continue;
        }
        let sub = g.induced(c);
        let res = cluster_graph(&sub, model, cfg, solver)?;
        for part in res.clusters().clusters() {
            out.push(part.iter().map(|&j| c[j]).collect());
        }
    }
    Ok(ClusterSet::new(out))
}

/// A member `v` of a raw cluster and a destination `w` where the chained
/// absorption bound fails to keep `Π[q][w]` above σ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaViolation {
    pub member: usize,
    pub target: usize,
    /// `Π[q][w] − σ`, negative when violated.
    pub slack: f64,
}

/// Checks, for members `v` of `raw` with `d[v] ≤ σ` and targets `w` with
/// `Π[v][w] ≥ σ`, whether `Π[q][w] ≥ σ − tol`. Only a diagnostic: the
/// implication does not hold on every graph.
pub fn sigma_transitivity_violations(
    dist: &AbsorptionDistribution,
    d: &[f64],
    raw: &RawCluster,
    tol: f64,
) -> Vec<SigmaViolation> {
    let q = raw.query;
    let sigma = raw.sigma;
    let mut out = Vec::new();
    for &v in &raw.members {
        if v == q || d[v] > sigma {
            continue;
        }
        for (w, &p) in dist.row(v).iter().enumerate() {
            if w == q || p < sigma {
                continue;
            }
            let slack = dist.row(q)[w] - sigma;
            if slack < -tol {
                out.push(SigmaViolation {
                    member: v,
                    target: w,
                    slack,
                });
            }
        }
    }
    out
}
