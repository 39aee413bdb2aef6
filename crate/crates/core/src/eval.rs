//! Clustering and ranking comparison.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pair-counting agreement between a predicted and a reference partition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FScoreReport {
    /// Nodes present in both inputs.
    pub nodes: usize,
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

fn pairs(c: u64) -> u64 {
    c * c.saturating_sub(1) / 2
}

/// Pairwise co-membership F1 of `predicted` against `truth`. Entries are
/// cluster ids per node; nodes that are `None` on either side are dropped.
///
/// Two all-singleton partitions agree on every pair and score 1.
pub fn pairwise_f_score<A, B>(predicted: &[Option<A>], truth: &[Option<B>]) -> Result<FScoreReport>
where
    A: Eq + Hash + Copy,
    B: Eq + Hash + Copy,
{
    if predicted.len() != truth.len() {
        return Err(Error::Evaluation(format!(
            "label vectors differ in length ({} vs {})",
            predicted.len(),
            truth.len()
        )));
    }
    let mut joint: HashMap<(A, B), u64> = HashMap::new();
    let mut pa: HashMap<A, u64> = HashMap::new();
    let mut pb: HashMap<B, u64> = HashMap::new();
    let mut nodes = 0u64;
    let mut dropped = 0usize;
    for (a, b) in predicted.iter().zip(truth) {
        match (a, b) {
            (Some(a), Some(b)) => {
                nodes += 1;
                *joint.entry((*a, *b)).or_default() += 1;
                *pa.entry(*a).or_default() += 1;
                *pb.entry(*b).or_default() += 1;
            }
            _ => dropped += 1,
        }
    }
    if dropped > 0 {
        log::warn!("{dropped} node(s) missing from one partition were ignored");
    }
    if nodes == 0 {
        return Err(Error::Evaluation("partitions share no nodes".into()));
    }
    let tp: u64 = joint.values().map(|&c| pairs(c)).sum();
    let same_a: u64 = pa.values().map(|&c| pairs(c)).sum();
    let same_b: u64 = pb.values().map(|&c| pairs(c)).sum();
    let fp = same_a - tp;
    let fn_ = same_b - tp;
    let tn = pairs(nodes) - tp - fp - fn_;
    let (precision, recall, f1) = if same_a == 0 && same_b == 0 {
        (1.0, 1.0, 1.0)
    } else {
        let p = ratio(tp, same_a);
        let r = ratio(tp, same_b);
        let f = if p + r > 0.0 { 2.0 * p * r / (p + r) } else { 0.0 };
        (p, r, f)
    };
    Ok(FScoreReport {
        nodes: nodes as usize,
        tp,
        fp,
        fn_,
        tn,
        precision,
        recall,
        f1,
    })
}

/// Fraction of discordant pairs between two score vectors, over pairs that
/// are strictly ordered in both. `restrict` limits the pairs to a node subset.
pub fn kendall_tau_distance(a: &[f64], b: &[f64], restrict: Option<&[usize]>) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Evaluation(format!(
            "rankings differ in length ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    let all: Vec<usize>;
    let nodes = match restrict {
        Some(r) => {
            if let Some(&bad) = r.iter().find(|&&u| u >= a.len()) {
                return Err(Error::NodeIndex(bad));
            }
            r
        }
        None => {
            all = (0..a.len()).collect();
            &all
        }
    };
    let mut comparable = 0u64;
    let mut discordant = 0u64;
    for (i, &u) in nodes.iter().enumerate() {
        for &v in &nodes[i + 1..] {
            let da = a[u].partial_cmp(&a[v]);
            let db = b[u].partial_cmp(&b[v]);
            match (da, db) {
                (Some(x), Some(y)) if x.is_ne() && y.is_ne() => {
                    comparable += 1;
                    if x != y {
                        discordant += 1;
                    }
                }
                _ => {}
            }
        }
    }
    if comparable < 2 {
        return Err(Error::Evaluation(format!(
            "{comparable} comparable pair(s); need at least 2"
        )));
    }
    Ok(discordant as f64 / comparable as f64)
}
