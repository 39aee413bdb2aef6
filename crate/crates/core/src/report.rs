//! Text and JSON output formats, and the timed benchmark run.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::centrality::{
    histogram_data, scatter_data, CentralityProfile, CentralizationSequence, ModelConfig,
    SeriesPoint,
};
use crate::clustering::{cluster_graph, subgraph_recluster, ClusterSet, ClusteringConfig, ClusteringOutcome};
use crate::error::{Error, Result};
use crate::eval::pairwise_f_score;
use crate::graph::{Graph, GroundTruth};
use crate::markov::{AbsorptionDistribution, SolverConfig};

/// Clusters below this size are flagged as insignificant in reports.
pub const INSIGNIFICANT_SIZE: usize = 3;

pub fn profile_csv(g: &Graph, profile: &CentralityProfile) -> String {
    let mut s = String::from("node,value\n");
    for (u, v) in profile.values.iter().enumerate() {
        let _ = writeln!(s, "{},{}", g.label(u), v);
    }
    s
}

pub fn series_csv(g: &Graph, points: &[SeriesPoint]) -> String {
    let mut s = String::from("node,t,value\n");
    for p in points {
        let _ = writeln!(s, "{},{},{}", g.label(p.node), p.horizon, p.value);
    }
    s
}

pub fn scatter_csv(g: &Graph, dist: &AbsorptionDistribution, profile: &CentralityProfile) -> String {
    let mut s = String::from("node,centrality,max_prob\n");
    for (u, (c, m)) in scatter_data(dist, profile).into_iter().enumerate() {
        let _ = writeln!(s, "{},{},{}", g.label(u), c, m);
    }
    s
}

pub fn histogram_csv(profile: &CentralityProfile, bins: usize) -> String {
    let mut s = String::from("bin_lo,bin_hi,count\n");
    for (lo, hi, c) in histogram_data(profile, bins) {
        let _ = writeln!(s, "{lo},{hi},{c}");
    }
    s
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CentralizationReport {
    pub horizon: String,
    pub centralization: f64,
    pub sequence: BTreeMap<String, f64>,
}

pub fn centralization_json(
    g: &Graph,
    profile: &CentralityProfile,
    value: f64,
    seq: &CentralizationSequence,
) -> Result<String> {
    let report = CentralizationReport {
        horizon: profile.horizon.to_string(),
        centralization: value,
        sequence: seq
            .nodes
            .iter()
            .zip(&seq.values)
            .map(|(&u, &v)| (g.label(u).to_string(), v))
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&report)?)
}

/// Echo of the settings a run used, in CLI spec syntax.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub alpha: String,
    pub mu: String,
    pub absorption: String,
    pub horizon: String,
    pub she_fraction: f64,
    pub iterations: usize,
    pub linkage: String,
    pub row_clusterer: String,
    pub seed: u64,
}

impl ConfigEcho {
    pub fn new(model: &ModelConfig, cfg: &ClusteringConfig) -> Self {
        ConfigEcho {
            alpha: model.alpha.to_string(),
            mu: model.mu.to_string(),
            absorption: model.absorption.to_string(),
            horizon: cfg.horizon.to_string(),
            she_fraction: cfg.she_fraction,
            iterations: cfg.iterations,
            linkage: cfg.linkage.to_string(),
            row_clusterer: cfg.row_clusterer.to_string(),
            seed: cfg.rng_seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelJson {
    pub clusters: Vec<Vec<String>>,
    pub merges: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterFlags {
    pub fixpoint: bool,
    pub tie_breaks: usize,
    /// Final-level cluster positions smaller than [`INSIGNIFICANT_SIZE`].
    pub insignificant: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterJson {
    pub config: ConfigEcho,
    pub levels: Vec<LevelJson>,
    pub flags: ClusterFlags,
}

fn labelled(g: &Graph, set: &ClusterSet) -> Vec<Vec<String>> {
    set.clusters()
        .iter()
        .map(|c| c.iter().map(|&u| g.label(u).to_string()).collect())
        .collect()
}

impl ClusterJson {
    pub fn new(g: &Graph, model: &ModelConfig, cfg: &ClusteringConfig, out: &ClusteringOutcome) -> Self {
        let levels = out
            .trace
            .levels
            .iter()
            .map(|l| LevelJson {
                clusters: labelled(g, &l.clusters),
                merges: l.merges.clone(),
            })
            .collect();
        let insignificant = out
            .clusters()
            .clusters()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() < INSIGNIFICANT_SIZE)
            .map(|(i, _)| i)
            .collect();
        ClusterJson {
            config: ConfigEcho::new(model, cfg),
            levels,
            flags: ClusterFlags {
                fixpoint: out.trace.fixpoint,
                tie_breaks: out.ties.len(),
                insignificant,
            },
        }
    }

    /// Final clusters as label lists.
    pub fn final_clusters(&self) -> Result<&[Vec<String>]> {
        self.levels
            .last()
            .map(|l| l.clusters.as_slice())
            .ok_or_else(|| Error::Evaluation("cluster file has no levels".into()))
    }

    /// Final clusters as a label → cluster position map.
    pub fn assignment(&self) -> Result<GroundTruth> {
        let mut t = GroundTruth::default();
        for (k, c) in self.final_clusters()?.iter().enumerate() {
            for l in c {
                t.assignment.insert(l.clone(), k as i64);
            }
        }
        Ok(t)
    }
}

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
];

/// Graphviz source with nodes filled by cluster; self-loops omitted.
pub fn clusters_dot(g: &Graph, clusters: &ClusterSet) -> String {
    let directed = g.is_directed();
    let mut s = String::new();
    let _ = writeln!(s, "{} clusters {{", if directed { "digraph" } else { "graph" });
    let _ = writeln!(s, "  node [style=filled];");
    let assign = clusters.assignment(g.n());
    for u in 0..g.n() {
        let colour = assign[u].map(|k| PALETTE[k % PALETTE.len()]).unwrap_or("#ffffff");
        let _ = writeln!(
            s,
            "  \"{}\" [fillcolor=\"{}\", cluster={}];",
            g.label(u),
            colour,
            assign[u].map(|k| k as i64).unwrap_or(-1)
        );
    }
    let arrow = if directed { "->" } else { "--" };
    for u in 0..g.n() {
        for &(v, w) in g.out_edges(u) {
            if v == u || (!directed && v < u) {
                continue;
            }
            let _ = writeln!(s, "  \"{}\" {} \"{}\" [weight={}];", g.label(u), arrow, g.label(v), w);
        }
    }
    s.push_str("}\n");
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub dataset: String,
    pub config: ConfigEcho,
    pub f_score: f64,
    pub n_clusters: usize,
    pub wall_ms: f64,
    pub seed: u64,
}

/// Times the full pipeline on `g`, optionally reclustering the `recluster`
/// largest clusters, and scores the result against `truth`.
#[allow(clippy::too_many_arguments)]
pub fn benchmark_run(
    dataset: &str,
    g: &Graph,
    truth: &GroundTruth,
    model: ModelConfig,
    cfg: &ClusteringConfig,
    recluster: usize,
    solver: SolverConfig,
) -> Result<(BenchReport, ClusterSet)> {
    let start = Instant::now();
    let out = cluster_graph(g, model, cfg, solver)?;
    let clusters = if recluster > 0 {
        subgraph_recluster(g, out.clusters(), recluster, model, cfg, solver)?
    } else {
        out.clusters().clone()
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let f = pairwise_f_score(&clusters.assignment(g.n()), &truth.per_node(g))?;
    Ok((
        BenchReport {
            dataset: dataset.to_string(),
            config: ConfigEcho::new(&model, cfg),
            f_score: f.f1,
            n_clusters: clusters.len(),
            wall_ms,
            seed: cfg.rng_seed,
        },
        clusters,
    ))
}
