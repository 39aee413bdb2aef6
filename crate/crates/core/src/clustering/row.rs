//! Grouping of one probability row into at most three value bands.

use serde::{Deserialize, Serialize};

/// How scalar row values are split into bands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowClusterer {
    /// Least within-band squared deviation (exact 1-D k-means).
    Kmeans,
    /// Greedy Ward agglomeration of adjacent groups.
    #[default]
    Ward,
    /// Single linkage: cut at the largest gaps.
    Gaps,
}

impl std::str::FromStr for RowClusterer {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "kmeans" => Ok(RowClusterer::Kmeans),
            "ward" => Ok(RowClusterer::Ward),
            "gaps" => Ok(RowClusterer::Gaps),
            _ => Err(crate::Error::InvalidParameter(format!(
                "row clusterer `{s}` (expected kmeans | ward | gaps)"
            ))),
        }
    }
}

impl std::fmt::Display for RowClusterer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RowClusterer::Kmeans => "kmeans",
            RowClusterer::Ward => "ward",
            RowClusterer::Gaps => "gaps",
        })
    }
}

/// One band: member positions and their mean value.
#[derive(Debug, Clone, PartialEq)]
pub struct Band {
    pub members: Vec<usize>,
    pub mean: f64,
}

const MAX_BANDS: usize = 3;

/// Splits `values` into `min(3, #distinct)` bands, ordered by value.
/// Returned members index into `values`.
pub fn cluster_row_1d(values: &[f64], method: RowClusterer) -> Vec<Band> {
    if values.is_empty() {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let distinct = 1 + sorted.windows(2).filter(|w| w[1] != w[0]).count();
    let k = distinct.min(MAX_BANDS);
    let bounds = match (k, method) {
        (1, _) => vec![(0, sorted.len())],
        (_, RowClusterer::Gaps) => gap_cuts(&sorted, k),
        (_, RowClusterer::Kmeans) => kmeans_cuts(&sorted, k),
        (_, RowClusterer::Ward) => ward_cuts(&sorted, k),
    };
    bounds
        .into_iter()
        .map(|(lo, hi)| {
            let members: Vec<usize> = order[lo..hi].to_vec();
            let mean = sorted[lo..hi].iter().sum::<f64>() / (hi - lo) as f64;
            Band { members, mean }
        })
        .collect()
}

fn gap_cuts(sorted: &[f64], k: usize) -> Vec<(usize, usize)> {
    let mut gaps: Vec<(f64, usize)> = sorted
        .windows(2)
        .enumerate()
        .map(|(i, w)| (w[1] - w[0], i + 1))
        .collect();
    // Largest gaps first; equal gaps resolved towards lower positions.
    gaps.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut cuts: Vec<usize> = gaps[..k - 1].iter().map(|g| g.1).collect();
    cuts.sort_unstable();
    spans(&cuts, sorted.len())
}

fn spans(cuts: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(cuts.len() + 1);
    let mut lo = 0;
    for &c in cuts {
        out.push((lo, c));
        lo = c;
    }
    out.push((lo, n));
    out
}

/// Bottom-up Ward merging on sorted values: repeatedly joins the adjacent
/// pair of groups whose union raises the squared deviation least, until `k`
/// groups remain. Ties go to the lower position.
fn ward_cuts(sorted: &[f64], k: usize) -> Vec<(usize, usize)> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    #[derive(Clone, Copy)]
    struct Group {
        lo: usize,
        len: usize,
        mean: f64,
        next: Option<usize>,
        prev: Option<usize>,
        version: u64,
    }
    let cost = |a: &Group, b: &Group| {
        let (na, nb) = (a.len as f64, b.len as f64);
        na * nb / (na + nb) * (a.mean - b.mean).powi(2)
    };
    let n = sorted.len();
    let mut g: Vec<Group> = (0..n)
        .map(|i| Group {
            lo: i,
            len: 1,
            mean: sorted[i],
            next: (i + 1 < n).then_some(i + 1),
            prev: i.checked_sub(1),
            version: 0,
        })
        .collect();
    let mut alive = vec![true; n];
    // Keyed by (cost bits, left position, left version, right version).
    let mut heap = BinaryHeap::new();
    let key = |c: f64| c.max(0.0).to_bits();
    for i in 0..n.saturating_sub(1) {
        heap.push(Reverse((key(cost(&g[i], &g[i + 1])), i, 0u64, 0u64)));
    }
    let mut groups = n;
    while groups > k {
        let Some(Reverse((_, a, va, vb))) = heap.pop() else { break };
        let Some(b) = g[a].next else { continue };
        if !alive[a] || g[a].version != va || g[b].version != vb {
            continue;
        }
        let (na, nb) = (g[a].len as f64, g[b].len as f64);
        g[a].mean = (na * g[a].mean + nb * g[b].mean) / (na + nb);
        g[a].len += g[b].len;
        g[a].next = g[b].next;
        g[a].version += 1;
        alive[b] = false;
        if let Some(c) = g[a].next {
            g[c].prev = Some(a);
            heap.push(Reverse((key(cost(&g[a], &g[c])), a, g[a].version, g[c].version)));
        }
        if let Some(p) = g[a].prev {
            heap.push(Reverse((key(cost(&g[p], &g[a])), p, g[p].version, g[a].version)));
        }
        groups -= 1;
    }
    let cuts: Vec<usize> = (1..n).filter(|&i| alive[i]).map(|i| g[i].lo).collect();
    spans(&cuts, n)
}

/// Exact 1-D k-means by dynamic programming over prefix sums. Optimal split
/// points are monotone in the prefix length, so each layer is filled by
/// divide and conquer in O(n log n).
fn kmeans_cuts(sorted: &[f64], k: usize) -> Vec<(usize, usize)> {
    let n = sorted.len();
    // Shift by the mean for numerical stability of the prefix sums.
    let shift = sorted.iter().sum::<f64>() / n as f64;
    let mut s1 = vec![0.0; n + 1];
    let mut s2 = vec![0.0; n + 1];
    for (i, &x) in sorted.iter().enumerate() {
        let y = x - shift;
        s1[i + 1] = s1[i] + y;
        s2[i + 1] = s2[i] + y * y;
    }
    let cost = |i: usize, j: usize| {
        let s = s1[j] - s1[i];
        (s2[j] - s2[i] - s * s / (j - i) as f64).max(0.0)
    };
    let mut prev: Vec<f64> = (0..=n)
        .map(|j| if j == 0 { f64::INFINITY } else { cost(0, j) })
        .collect();
    let mut args: Vec<Vec<usize>> = Vec::with_capacity(k);
    for c in 2..=k {
        let mut cur = vec![f64::INFINITY; n + 1];
        let mut arg = vec![0usize; n + 1];
        fill_layer(&prev, &cost, c, n, c - 1, n - 1, &mut cur, &mut arg);
        prev = cur;
        args.push(arg);
    }
    let mut cuts = Vec::with_capacity(k - 1);
    let mut j = n;
    for arg in args.iter().rev() {
        j = arg[j];
        cuts.push(j);
    }
    cuts.reverse();
    spans(&cuts, n)
}

/// `cur[j] = min_{i<j} prev[i] + cost(i, j)` for `j` in `lo..=hi`, with the
/// minimiser searched in `[opt_lo, opt_hi]`.
#[allow(clippy::too_many_arguments)]
fn fill_layer(
    prev: &[f64],
    cost: &dyn Fn(usize, usize) -> f64,
    lo: usize,
    hi: usize,
    opt_lo: usize,
    opt_hi: usize,
    cur: &mut [f64],
    arg: &mut [usize],
) {
    if lo > hi {
        return;
    }
    let mid = (lo + hi) / 2;
    let mut best = f64::INFINITY;
    let mut at = opt_lo;
    for i in opt_lo..=opt_hi.min(mid - 1) {
        let v = prev[i] + cost(i, mid);
        if v < best {
            best = v;
            at = i;
        }
    }
    cur[mid] = best;
    arg[mid] = at;
    if mid > lo {
        fill_layer(prev, cost, lo, mid - 1, opt_lo, at, cur, arg);
    }
    fill_layer(prev, cost, mid + 1, hi, at, opt_hi, cur, arg);
}
