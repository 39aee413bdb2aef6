//! Entropic centrality, centralization and row-distribution diagnostics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::markov::{
    asymptotic_rows, AbsorbingChain, AbsorptionDistribution, AbsorptionModel, Horizon,
    SolverConfig,
};
use crate::weights::{node_weights, NodeWeight, WeightTransform};

/// The three tuning knobs of the walk model.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ModelConfig {
    pub alpha: WeightTransform,
    pub mu: NodeWeight,
    pub absorption: AbsorptionModel,
}

impl ModelConfig {
    pub fn chain(&self, g: &Graph) -> Result<AbsorbingChain> {
        AbsorbingChain::new(g, self.alpha, self.absorption)
    }

    pub fn mu_vector(&self, g: &Graph) -> Vec<f64> {
        node_weights(g, self.mu, self.alpha)
    }
}

/// Per-node centrality at one horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityProfile {
    pub horizon: Horizon,
    pub config: ModelConfig,
    pub values: Vec<f64>,
}

impl CentralityProfile {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Node indices sorted by ascending value, ties by index.
    pub fn ascending(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.n()).collect();
        idx.sort_by(|&a, &b| self.values[a].total_cmp(&self.values[b]).then(a.cmp(&b)));
        idx
    }
}

/// `−Σ_v μ(v) q_v log₂ q_v`, with `0 log 0 = 0`.
pub fn weighted_entropy(row: &[f64], mu: &[f64]) -> f64 {
    let mut h = 0.0;
    for (&q, &m) in row.iter().zip(mu) {
        if q > 0.0 {
            h -= m * q * q.log2();
        }
    }
    // Rounding can leave −0 or a tiny negative on deterministic rows.
    h.max(0.0)
}

/// Plain Shannon entropy in bits.
pub fn entropy(row: &[f64]) -> f64 {
    row.iter()
        .filter(|&&q| q > 0.0)
        .map(|&q| -q * q.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Centrality of every source row of `dist`.
pub fn entropic_centrality(dist: &AbsorptionDistribution, mu: &[f64], config: ModelConfig) -> CentralityProfile {
    let values = (0..dist.n())
        .map(|u| weighted_entropy(dist.row(u), mu))
        .collect();
    CentralityProfile {
        horizon: dist.horizon,
        config,
        values,
    }
}

/// Chain, distribution and profile in one call.
pub fn compute_profile(
    g: &Graph,
    config: ModelConfig,
    horizon: Horizon,
    solver: SolverConfig,
) -> Result<(AbsorptionDistribution, CentralityProfile)> {
    let chain = config.chain(g)?;
    let dist = AbsorptionDistribution::compute(&chain, horizon, solver)?;
    let mu = config.mu_vector(g);
    let profile = entropic_centrality(&dist, &mu, config);
    Ok((dist, profile))
}

/// One point of a centrality time series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub node: usize,
    pub horizon: Horizon,
    pub value: f64,
}

/// Centrality of `sources` for t = 1..=t_max, followed by t = ∞.
pub fn centrality_series(
    g: &Graph,
    config: ModelConfig,
    sources: &[usize],
    t_max: usize,
    solver: SolverConfig,
) -> Result<Vec<SeriesPoint>> {
    if t_max == 0 {
        return Err(Error::InvalidParameter("t_max must be at least 1".into()));
    }
    for &u in sources {
        if u >= g.n() {
            return Err(Error::NodeIndex(u));
        }
    }
    let chain = config.chain(g)?;
    let mu = config.mu_vector(g);
    let n = g.n();
    let mut out = Vec::with_capacity(sources.len() * (t_max + 1));
    let mut next = vec![0.0; n];
    for &u in sources {
        let mut cur = vec![0.0; n];
        let mut absorbed = vec![0.0; n];
        cur[u] = 1.0;
        for t in 1..=t_max {
            for v in 0..n {
                absorbed[v] += cur[v] * chain.d[v];
            }
            chain.pt.left_mul(&cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
            let q: Vec<f64> = cur.iter().zip(&absorbed).map(|(a, b)| a + b).collect();
            out.push(SeriesPoint {
                node: u,
                horizon: Horizon::Finite(t),
                value: weighted_entropy(&q, &mu),
            });
        }
    }
    let pi = asymptotic_rows(&chain.pt, &chain.d, solver, sources)?;
    for (k, &u) in sources.iter().enumerate() {
        out.push(SeriesPoint {
            node: u,
            horizon: Horizon::Infinite,
            value: weighted_entropy(pi.row(k), &mu),
        });
    }
    Ok(out)
}

/// `0.53074 + (1−a)·log₂((n−1)/(1−a))`: ceiling on asymptotic centrality
/// under constant absorption `a` (μ = 1).
pub fn constant_absorption_bound(n: usize, a: f64) -> f64 {
    0.53074 + (1.0 - a) * (((n as f64) - 1.0) / (1.0 - a)).log2()
}

fn warn_if_not_degree(profile: &CentralityProfile) {
    if profile.config.absorption != AbsorptionModel::DegreeBased {
        log::warn!(
            "centralization normalisation assumes degree-based absorption, got {}",
            profile.config.absorption
        );
    }
}

/// `Σ_v (C_max − C(v)) / ((n−1)·log₂ n)`; exactly 1 on a star.
pub fn centralization(profile: &CentralityProfile) -> Result<f64> {
    let n = profile.n();
    if n < 2 {
        return Err(Error::InvalidParameter("centralization needs at least 2 nodes".into()));
    }
    warn_if_not_degree(profile);
    let top = profile.max();
    let gap: f64 = profile.values.iter().map(|c| top - c).sum();
    Ok(gap / ((n as f64 - 1.0) * (n as f64).log2()))
}

/// Per-node `Σ_v (C(v_i) − C(v)) / (n·log₂ n)` in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralizationSequence {
    /// Node of each entry, ascending by value.
    pub nodes: Vec<usize>,
    pub values: Vec<f64>,
}

impl CentralizationSequence {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::NAN)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(f64::NAN)
    }

    pub fn median(&self) -> f64 {
        let k = self.values.len();
        if k == 0 {
            return f64::NAN;
        }
        if k % 2 == 1 {
            self.values[k / 2]
        } else {
            0.5 * (self.values[k / 2 - 1] + self.values[k / 2])
        }
    }

    pub fn value_of(&self, node: usize) -> Option<f64> {
        self.nodes.iter().position(|&u| u == node).map(|i| self.values[i])
    }
}

pub fn centralization_sequence(profile: &CentralityProfile) -> Result<CentralizationSequence> {
    let n = profile.n();
    if n < 2 {
        return Err(Error::InvalidParameter("centralization needs at least 2 nodes".into()));
    }
    warn_if_not_degree(profile);
    let mean = profile.values.iter().sum::<f64>() / n as f64;
    let norm = (n as f64).log2();
    let nodes = profile.ascending();
    let values = nodes
        .iter()
        .map(|&u| (profile.values[u] - mean) / norm)
        .collect();
    Ok(CentralizationSequence { nodes, values })
}

/// Shape of one absorption row relative to the uniform level 1/n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowDistributionSummary {
    pub n: usize,
    /// Entries below the 1/n band.
    pub below: usize,
    /// Entries inside the band.
    pub at_uniform: usize,
    pub above: usize,
    pub low_tail: f64,
    pub band_sum: f64,
    pub high_tail: f64,
    pub max_prob: f64,
    pub entropy: f64,
    /// `log₂ n / entropy`; infinite for a deterministic row.
    pub gamma: f64,
}

impl RowDistributionSummary {
    /// Band count does not exceed `n / γ`.
    pub fn mass_bound_holds(&self) -> bool {
        self.at_uniform as f64 <= self.n as f64 / self.gamma + 1e-9
    }

    /// Both sides of the tail equivalence for a given τ > 1: whether the
    /// high tail exceeds `(τ−1)/τ·(γ−1)/γ`, and whether the low tail is
    /// below `1 − s/n − (τ−1)/τ·(γ−1)/γ`.
    pub fn tail_tension(&self, tau: f64) -> (bool, bool) {
        let k = (tau - 1.0) / tau * (self.gamma - 1.0) / self.gamma;
        let high = self.high_tail > k;
        let low = self.low_tail < 1.0 - self.at_uniform as f64 / self.n as f64 - k;
        (high, low)
    }
}

/// Summary of `row` with the uniform band `|p − 1/n| ≤ eps_rel/n`.
pub fn analyze_row(row: &[f64], eps_rel: f64) -> RowDistributionSummary {
    let n = row.len();
    let level = 1.0 / n as f64;
    let band = eps_rel * level;
    let mut s = RowDistributionSummary {
        n,
        below: 0,
        at_uniform: 0,
        above: 0,
        low_tail: 0.0,
        band_sum: 0.0,
        high_tail: 0.0,
        max_prob: row.iter().copied().fold(0.0, f64::max),
        entropy: entropy(row),
        gamma: f64::INFINITY,
    };
    for &p in row {
        if (p - level).abs() <= band {
            s.at_uniform += 1;
            s.band_sum += p;
        } else if p < level {
            s.below += 1;
            s.low_tail += p;
        } else {
            s.above += 1;
            s.high_tail += p;
        }
    }
    if s.entropy > 0.0 {
        s.gamma = (n as f64).log2() / s.entropy;
    }
    s
}

/// `(centrality, max row probability)` per node.
pub fn scatter_data(dist: &AbsorptionDistribution, profile: &CentralityProfile) -> Vec<(f64, f64)> {
    (0..dist.n())
        .map(|u| {
            let m = dist.row(u).iter().copied().fold(0.0, f64::max);
            (profile.values[u], m)
        })
        .collect()
}

/// Counts of max-normalised centralities in `bins` uniform bins on [0,1].
pub fn histogram_data(profile: &CentralityProfile, bins: usize) -> Vec<(f64, f64, usize)> {
    let bins = bins.max(1);
    let top = profile.max();
    let mut counts = vec![0usize; bins];
    for &c in &profile.values {
        let x = if top > 0.0 { c / top } else { 0.0 };
        let k = ((x * bins as f64).floor() as usize).min(bins - 1);
        counts[k] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(k, c)| (k as f64 / bins as f64, (k + 1) as f64 / bins as f64, c))
        .collect()
}

/// `(d_out − 1)/(n − 1)`: out-neighbours excluding the self-loop.
pub fn out_degree_centrality(g: &Graph) -> Vec<f64> {
    let n = g.n();
    (0..n)
        .map(|u| {
            let d = g.out_edges(u).iter().filter(|e| e.0 != u).count();
            if n > 1 {
                d as f64 / (n - 1) as f64
            } else {
                0.0
            }
        })
        .collect()
}
