//! Repeated local passes over clusters treated as supernodes.

use std::collections::BTreeSet;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::local::{run_local_pass, LocalPass, TieEvent};
use super::{ClusterSet, ClusteringConfig, Linkage};
use crate::centrality::CentralityProfile;
use crate::graph::Graph;
use crate::linalg::DenseMatrix;
use crate::markov::AbsorptionDistribution;

/// One clustering level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Level {
    pub clusters: ClusterSet,
    /// For each cluster, the positions of the previous level's clusters it
    /// absorbed. Empty on the first level.
    pub merges: Vec<Vec<usize>>,
    /// Supernode transition matrix the level was built from.
    #[serde(skip)]
    pub transitions: Option<DenseMatrix>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AgglomerationTrace {
    pub levels: Vec<Level>,
    /// Set when a round merged nothing and iteration stopped early.
    pub fixpoint: bool,
}

impl AgglomerationTrace {
    pub fn last(&self) -> &ClusterSet {
        &self.levels.last().expect("trace has a first level").clusters
    }
}

/// `T[a][b]` aggregates `Π[u][v]` over `u` in cluster `a` and `v` in `b`.
pub fn supernode_transitions(
    dist: &AbsorptionDistribution,
    clusters: &ClusterSet,
    linkage: Linkage,
) -> DenseMatrix {
    let cs = clusters.clusters();
    let k = cs.len();
    let mut t = DenseMatrix::zeros(k, k);
    for (a, ca) in cs.iter().enumerate() {
        for (b, cb) in cs.iter().enumerate() {
            let mut acc = match linkage {
                Linkage::Min => f64::INFINITY,
                Linkage::Max => f64::NEG_INFINITY,
                Linkage::Mean => 0.0,
            };
            for &u in ca {
                let row = dist.row(u);
                for &v in cb {
                    let x = row[v];
                    acc = match linkage {
                        Linkage::Min => acc.min(x),
                        Linkage::Max => acc.max(x),
                        Linkage::Mean => acc + x,
                    };
                }
            }
            if linkage == Linkage::Mean {
                acc /= (ca.len() * cb.len()) as f64;
            }
            t.row_mut(a)[b] = acc;
        }
    }
    t
}

/// Runs `cfg.iterations - 1` supernode rounds on top of `first`.
pub fn agglomerate(
    g: &Graph,
    first: ClusterSet,
    dist: &AbsorptionDistribution,
    profile: &CentralityProfile,
    cfg: &ClusteringConfig,
    rng: &mut ChaCha8Rng,
    ties: &mut Vec<TieEvent>,
) -> AgglomerationTrace {
    let mut levels = vec![Level {
        clusters: first,
        merges: Vec::new(),
        transitions: None,
    }];
    let mut fixpoint = false;
    for round in 1..cfg.iterations.max(1) {
        let current = levels.last().unwrap().clusters.clone();
        if current.len() < 2 {
            fixpoint = true;
            break;
        }
        let cs = current.clusters();
        let centrality: Vec<f64> = cs
            .iter()
            .map(|c| c.iter().map(|&u| profile.values[u]).sum::<f64>() / c.len() as f64)
            .collect();
        let t = supernode_transitions(dist, &current, cfg.linkage);
        let connected = |s: &BTreeSet<usize>| {
            let nodes: Vec<usize> = s.iter().flat_map(|&a| cs[a].iter().copied()).collect();
            g.is_weakly_connected(&nodes)
        };
        let pass = LocalPass {
            centrality: &centrality,
            she_fraction: cfg.she_fraction,
            method: cfg.row_clusterer,
            admissible: Some(&connected),
            level: round,
        };
        let row = |a: usize| t.row(a).to_vec();
        let groups = run_local_pass(&pass, &row, rng, ties);
        if groups.len() == cs.len() {
            fixpoint = true;
            break;
        }
        let mut merged: Vec<(Vec<usize>, Vec<usize>)> = groups
            .into_iter()
            .map(|grp| {
                let nodes = grp.iter().flat_map(|&a| cs[a].iter().copied()).collect();
                (nodes, grp.into_iter().collect())
            })
            .collect();
        for m in &mut merged {
            m.0.sort_unstable();
        }
        merged.sort();
        let merges = merged.iter().map(|m| m.1.clone()).collect();
        levels.push(Level {
            clusters: ClusterSet::new(merged.into_iter().map(|m| m.0)),
            merges,
            transitions: Some(t),
        });
    }
    AgglomerationTrace { levels, fixpoint }
}
