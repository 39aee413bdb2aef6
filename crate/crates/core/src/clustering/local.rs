//! Query-node-centric local clusters and their pruning.
//!
//! The loop is written over abstract "items" so that the same code runs on
//! graph nodes and, during agglomeration, on supernodes.

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::row::{cluster_row_1d, RowClusterer};

/// A query item together with the band of destinations it picked.
#[derive(Debug, Clone, PartialEq)]
pub struct RawCluster {
    pub query: usize,
    pub members: BTreeSet<usize>,
    /// Smallest row value over the members.
    pub sigma: f64,
}

/// Record of a randomised tie break during pruning.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TieEvent {
    pub level: usize,
    pub query: usize,
    /// Positions in the current cluster list that tied.
    pub candidates: Vec<usize>,
    pub chosen: usize,
}

/// Number of hub items for a fraction of `m`: nearest integer, at least one.
pub fn hub_count(m: usize, fraction: f64) -> usize {
    if m == 0 {
        return 0;
    }
    ((fraction * m as f64).round() as usize).clamp(1, m)
}

/// The [`hub_count`] items of highest centrality, ties by lower index.
pub fn select_high_entropy_set(centrality: &[f64], fraction: f64) -> BTreeSet<usize> {
    let m = centrality.len();
    let take = hub_count(m, fraction);
    let mut idx: Vec<usize> = (0..m).collect();
    idx.sort_by(|&a, &b| centrality[b].total_cmp(&centrality[a]).then(a.cmp(&b)));
    idx.into_iter().take(take).collect()
}

/// Bands `row` (ignoring the query's own entry), keeps the positive entries
/// of the band with the highest mean and adds the query.
pub fn pick_raw_cluster(row: &[f64], query: usize, method: RowClusterer) -> RawCluster {
    let others: Vec<usize> = (0..row.len()).filter(|&i| i != query).collect();
    let values: Vec<f64> = others.iter().map(|&i| row[i]).collect();
    let bands = cluster_row_1d(&values, method);
    let mut members = BTreeSet::new();
    // Bands come ordered by value, so the last one has the highest mean.
    if let Some(top) = bands.iter().max_by(|a, b| a.mean.total_cmp(&b.mean)) {
        // Unreachable items never join, so σ stays positive.
        members.extend(top.members.iter().map(|&k| others[k]).filter(|&v| row[v] > 0.0));
    }
    members.insert(query);
    let sigma = members
        .iter()
        .map(|&v| row[v])
        .fold(f64::INFINITY, f64::min);
    RawCluster {
        query,
        members,
        sigma,
    }
}

/// Pruning of a raw cluster against the hub set and the clusters built so
/// far.
///
/// (i) A hub query keeps only members that are unowned or owned by the
/// existing cluster it overlaps most (ties drawn at random).
/// (ii) Among hub members other than the query, only those with the
/// largest row value stay.
pub fn process_raw_cluster(
    raw: &RawCluster,
    hubs: &BTreeSet<usize>,
    clusters: &[BTreeSet<usize>],
    row: &[f64],
    rng: &mut ChaCha8Rng,
    level: usize,
    ties: &mut Vec<TieEvent>,
) -> BTreeSet<usize> {
    let q = raw.query;
    let mut s = raw.members.clone();
    if hubs.contains(&q) {
        let overlap: Vec<usize> = clusters.iter().map(|c| c.intersection(&s).count()).collect();
        let best = overlap.iter().copied().max().unwrap_or(0);
        if best > 0 {
            let cands: Vec<usize> = (0..clusters.len()).filter(|&i| overlap[i] == best).collect();
            let keep = if cands.len() > 1 {
                let chosen = cands[rng.gen_range(0..cands.len())];
                log::debug!("level {level}: query {q} ties over clusters {cands:?}, chose {chosen}");
                ties.push(TieEvent {
                    level,
                    query: q,
                    candidates: cands.clone(),
                    chosen,
                });
                chosen
            } else {
                cands[0]
            };
            for (i, c) in clusters.iter().enumerate() {
                if i != keep {
                    s.retain(|v| !c.contains(v));
                }
            }
            s.insert(q);
        }
    }
    let hub_members: Vec<usize> = s.iter().copied().filter(|v| *v != q && hubs.contains(v)).collect();
    if hub_members.len() > 1 {
        let top = hub_members
            .iter()
            .map(|&v| row[v])
            .fold(f64::NEG_INFINITY, f64::max);
        for v in hub_members {
            if row[v] < top {
                s.remove(&v);
            }
        }
    }
    s
}

/// Inputs for one pass of the local-cluster loop.
pub struct LocalPass<'a> {
    pub centrality: &'a [f64],
    pub she_fraction: f64,
    pub method: RowClusterer,
    /// Acceptance test for a pruned member set; rejected sets shrink to the
    /// query alone.
    pub admissible: Option<&'a dyn Fn(&BTreeSet<usize>) -> bool>,
    pub level: usize,
}

/// Runs the queue of items in ascending centrality, growing and merging
/// local clusters until every item is covered. `row(q)` yields the value of
/// every item as seen from `q`.
pub fn run_local_pass(
    pass: &LocalPass<'_>,
    row: &dyn Fn(usize) -> Vec<f64>,
    rng: &mut ChaCha8Rng,
    ties: &mut Vec<TieEvent>,
) -> Vec<BTreeSet<usize>> {
    let m = pass.centrality.len();
    let hubs = select_high_entropy_set(pass.centrality, pass.she_fraction);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        pass.centrality[a]
            .total_cmp(&pass.centrality[b])
            .then(a.cmp(&b))
    });
    let mut queued = vec![true; m];
    let mut clusters: Vec<BTreeSet<usize>> = Vec::new();
    for q in order {
        if !queued[q] {
            continue;
        }
        queued[q] = false;
        let r = row(q);
        let raw = pick_raw_cluster(&r, q, pass.method);
        let mut s = process_raw_cluster(&raw, &hubs, &clusters, &r, rng, pass.level, ties);
        if let Some(ok) = pass.admissible {
            if !ok(&s) {
                s = BTreeSet::from([q]);
            }
        }
        for &v in &s {
            queued[v] = false;
        }
        let (hit, rest): (Vec<_>, Vec<_>) = clusters
            .into_iter()
            .partition(|c| c.intersection(&s).next().is_some());
        clusters = rest;
        for c in hit {
            s.extend(c);
        }
        clusters.push(s);
    }
    clusters
}
