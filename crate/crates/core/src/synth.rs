//! Planted-partition benchmark graphs.

use std::collections::HashSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, GroundTruth};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n: usize,
    /// Community sizes. Empty means `k` near-equal communities.
    #[serde(default)]
    pub sizes: Vec<usize>,
    pub k: usize,
    /// Target mean (undirected) degree.
    pub avg_degree: f64,
    /// Probability that an edge leaves its source's community.
    pub mu: f64,
    /// Power-law exponent for expected degrees; `None` gives equal degrees.
    #[serde(default)]
    pub degree_exponent: Option<f64>,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(n: usize, k: usize, avg_degree: f64, mu: f64, seed: u64) -> Self {
        SyntheticSpec {
            n,
            sizes: Vec::new(),
            k,
            avg_degree,
            mu,
            degree_exponent: None,
            seed,
        }
    }

    pub fn community_sizes(&self) -> Vec<usize> {
        if !self.sizes.is_empty() {
            return self.sizes.clone();
        }
        let k = self.k.max(1);
        (0..k).map(|i| self.n / k + usize::from(i < self.n % k)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let sizes = self.community_sizes();
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if sizes.iter().sum::<usize>() != self.n {
            return bad(format!("community sizes do not sum to n={}", self.n));
        }
        if sizes.iter().any(|&s| s < 2) {
            return bad("every community needs at least 2 nodes".into());
        }
        if !(0.0..1.0).contains(&self.mu) {
            return bad(format!("mixing probability {} outside [0,1)", self.mu));
        }
        if !(self.avg_degree >= 1.0) {
            return bad(format!("average degree {} below 1", self.avg_degree));
        }
        let smallest = *sizes.iter().min().unwrap() as f64;
        if self.avg_degree * (1.0 - self.mu) > smallest - 1.0 {
            return bad(format!(
                "intra-community degree {:.2} exceeds community size {smallest}",
                self.avg_degree * (1.0 - self.mu)
            ));
        }
        if let Some(e) = self.degree_exponent {
            if !(e > 2.0) {
                return bad(format!("degree exponent {e} must exceed 2"));
            }
        }
        let outside = self.n as f64 - smallest;
        if self.mu > 0.0 && self.avg_degree * self.mu > outside {
            return bad("inter-community degree exceeds the rest of the graph".into());
        }
        Ok(())
    }
}

/// Undirected unweighted graph with labels `1..=n` and its planted partition.
///
/// `n·avg_degree/2` edges are drawn. The first `n` sources go round robin so
/// every node gets an edge; later sources, and all far ends, are drawn in
/// proportion to a per-node fitness. The far end lies inside the source's
/// community with probability `1−μ`, otherwise outside it; duplicate draws
/// are redrawn on the same side.
pub fn generate_planted_partition(spec: &SyntheticSpec) -> Result<(Graph, GroundTruth)> {
    spec.validate()?;
    let sizes = spec.community_sizes();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut community = Vec::with_capacity(spec.n);
    let mut members: Vec<Vec<usize>> = Vec::with_capacity(sizes.len());
    for (c, &s) in sizes.iter().enumerate() {
        members.push((community.len()..community.len() + s).collect());
        community.extend(std::iter::repeat(c).take(s));
    }
    // Shuffle so communities are not contiguous index ranges.
    let mut perm: Vec<usize> = (0..spec.n).collect();
    perm.shuffle(&mut rng);

    let target = (spec.n as f64 * spec.avg_degree / 2.0).round() as usize;
    let mut edges: HashSet<(usize, usize)> = HashSet::with_capacity(target);
    let mut b = GraphBuilder::new(false);
    for u in 0..spec.n {
        b.add_node(&(perm[u] + 1).to_string());
    }
    let fitness = degree_fitness(spec, &mut rng);
    let pick = |w: &[f64]| WeightedIndex::new(w).expect("positive fitness");
    let any_src = pick(&fitness);
    let inside: Vec<WeightedIndex<f64>> = members
        .iter()
        .map(|m| pick(&m.iter().map(|&v| fitness[v]).collect::<Vec<_>>()))
        .collect();
    let mut order: Vec<usize> = (0..spec.n).collect();
    order.shuffle(&mut rng);
    let mut i = 0usize;
    let mut failures = 0usize;
    while edges.len() < target {
        // One round robin pass so that no node is left isolated.
        let u = if i < spec.n { order[i] } else { any_src.sample(&mut rng) };
        i += 1;
        let intra = rng.gen::<f64>() >= spec.mu;
        let c = community[u];
        let mut placed = false;
        for _ in 0..64 {
            let v = if intra {
                members[c][inside[c].sample(&mut rng)]
            } else {
                let v = any_src.sample(&mut rng);
                if community[v] == c {
                    continue;
                }
                v
            };
            if v != u && edges.insert((u.min(v), u.max(v))) {
                b.add_edge_idx(u, v, 1.0);
                placed = true;
                break;
            }
        }
        if !placed {
            failures += 1;
            if failures > 16 * spec.n {
                return Err(Error::InvalidParameter(
                    "could not place the requested number of edges".into(),
                ));
            }
        }
    }
    let g = b.build();
    let mut truth = GroundTruth::default();
    for u in 0..spec.n {
        truth
            .assignment
            .insert(g.label(u).to_string(), community[u] as i64);
    }
    Ok((g, truth))
}

/// Relative expected degree per node: all ones, or Pareto draws with the
/// given exponent capped at the community size.
fn degree_fitness(spec: &SyntheticSpec, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let Some(e) = spec.degree_exponent else {
        return vec![1.0; spec.n];
    };
    let cap = *spec.community_sizes().iter().min().unwrap() as f64;
    (0..spec.n)
        .map(|_| {
            let u: f64 = rng.gen();
            (1.0 - u).powf(-1.0 / (e - 1.0)).min(cap)
        })
        .collect()
}

/// Fraction of non-loop edges joining nodes of the same community.
pub fn intra_fraction(g: &Graph, labels: &[Option<i64>]) -> f64 {
    let (mut intra, mut total) = (0usize, 0usize);
    for u in 0..g.n() {
        for &(v, _) in g.out_edges(u) {
            if v != u {
                total += 1;
                if labels[u] == labels[v] {
                    intra += 1;
                }
            }
        }
    }
    if total == 0 {
        0.0
    } else {
        intra as f64 / total as f64
    }
}
