//! Directed weighted graph with mandatory self-loops, plus edge-list and
//! ground-truth ingestion.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::weights::WeightTransform;

/// Node-indexed out-adjacency. Labels are external, indices dense.
///
/// Each adjacency list is sorted by target index and holds at most one entry
/// per target. Graphs built through [`parse_edge_list`] or
/// [`GraphBuilder::build`] carry exactly one self-loop per node.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<Vec<(usize, f64)>>,
    directed: bool,
}

impl Graph {
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, u: usize) -> &str {
        &self.labels[u]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownNode(label.to_string()))
    }

    /// Out-edges of `u` as `(target, weight)`, sorted by target.
    pub fn out_edges(&self, u: usize) -> &[(usize, f64)] {
        &self.adj[u]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        let row = &self.adj[u];
        row.binary_search_by_key(&v, |e| e.0).ok().map(|i| row[i].1)
    }

    pub fn has_self_loop(&self, u: usize) -> bool {
        self.weight(u, u).is_some()
    }

    pub fn is_augmented(&self) -> bool {
        (0..self.n()).all(|u| self.has_self_loop(u))
    }

    fn check(&self, u: usize) -> Result<()> {
        if u < self.n() {
            Ok(())
        } else {
            Err(Error::NodeIndex(u))
        }
    }

    /// Number of out-neighbours, self-loop included.
    pub fn out_degree(&self, u: usize) -> Result<usize> {
        self.check(u)?;
        Ok(self.adj[u].len())
    }

    /// Sum of α-transformed out-weights, self-loop included.
    pub fn weighted_out_degree(&self, u: usize, alpha: WeightTransform) -> Result<f64> {
        self.check(u)?;
        Ok(self.adj[u].iter().map(|&(_, w)| alpha.apply(w)).sum())
    }

    /// Smallest positive edge weight, if any.
    pub fn min_positive_weight(&self) -> Option<f64> {
        self.adj
            .iter()
            .flatten()
            .map(|e| e.1)
            .filter(|&w| w > 0.0)
            .min_by(|a, b| a.total_cmp(b))
    }

    /// Copy with every weight divided by `s`.
    pub fn scaled(&self, s: f64) -> Graph {
        let mut g = self.clone();
        for row in &mut g.adj {
            for e in row {
                e.1 /= s;
            }
        }
        g
    }

    /// Same nodes and edges, every weight replaced by 1.
    pub fn unweighted(&self) -> Graph {
        let mut g = self.clone();
        for row in &mut g.adj {
            for e in row {
                e.1 = 1.0;
            }
        }
        g
    }

    /// Subgraph induced by `nodes` (in the given order). Self-loops come along.
    pub fn induced(&self, nodes: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.n()];
        for (i, &u) in nodes.iter().enumerate() {
            pos[u] = i;
        }
        let mut b = GraphBuilder::new(self.directed);
        for &u in nodes {
            b.add_node(&self.labels[u]);
        }
        for (i, &u) in nodes.iter().enumerate() {
            for &(v, w) in &self.adj[u] {
                if pos[v] != usize::MAX {
                    b.push(i, pos[v], w);
                }
            }
        }
        b.finish()
    }

    /// Whether `nodes` induce a weakly connected subgraph.
    pub fn is_weakly_connected(&self, nodes: &[usize]) -> bool {
        if nodes.len() <= 1 {
            return true;
        }
        let mut inside = vec![false; self.n()];
        for &u in nodes {
            inside[u] = true;
        }
        // Undirected view restricted to the node set.
        let mut nbrs: HashMap<usize, Vec<usize>> = HashMap::new();
        for &u in nodes {
            for &(v, _) in &self.adj[u] {
                if v != u && inside[v] {
                    nbrs.entry(u).or_default().push(v);
                    nbrs.entry(v).or_default().push(u);
                }
            }
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![nodes[0]];
        seen[nodes[0]] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            if let Some(vs) = nbrs.get(&u) {
                for &v in vs {
                    if !seen[v] {
                        seen[v] = true;
                        count += 1;
                        stack.push(v);
                    }
                }
            }
        }
        count == nodes.len()
    }

    /// Edge list in the ingestion format. Undirected graphs list each pair
    /// once; self-loops are written so that re-ingestion is lossless.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for u in 0..self.n() {
            for &(v, w) in &self.adj[u] {
                if !self.directed && v < u {
                    continue;
                }
                let _ = writeln!(out, "{} {} {}", self.labels[u], self.labels[v], w);
            }
        }
        out
    }
}

/// Incremental graph construction with merge-by-sum on duplicate edges.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<BTreeMap<usize, f64>>,
    directed: bool,
}

impl GraphBuilder {
    pub fn new(directed: bool) -> Self {
        GraphBuilder {
            directed,
            ..Default::default()
        }
    }

    /// Index of `label`, creating the node if needed.
    pub fn add_node(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), i);
        self.adj.push(BTreeMap::new());
        i
    }

    fn push(&mut self, u: usize, v: usize, w: f64) {
        *self.adj[u].entry(v).or_insert(0.0) += w;
    }

    /// Adds `u→v` (and `v→u` when undirected). Weights must be non-negative.
    pub fn add_edge(&mut self, u: &str, v: &str, w: f64) -> Result<()> {
        if !(w >= 0.0) || !w.is_finite() {
            return Err(Error::InvalidParameter(format!("edge weight {w}")));
        }
        let (a, b) = (self.add_node(u), self.add_node(v));
        self.push(a, b, w);
        if !self.directed && a != b {
            self.push(b, a, w);
        }
        Ok(())
    }

    pub fn add_edge_idx(&mut self, u: usize, v: usize, w: f64) {
        self.push(u, v, w);
        if !self.directed && u != v {
            self.push(v, u, w);
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Graph without self-loop augmentation.
    pub fn finish(self) -> Graph {
        Graph {
            labels: self.labels,
            index: self.index,
            adj: self
                .adj
                .into_iter()
                .map(|m| m.into_iter().collect())
                .collect(),
            directed: self.directed,
        }
    }

    /// Graph with a unit self-loop on every node that lacks one.
    pub fn build(self) -> Graph {
        augment_self_loops(self.finish(), 1.0)
    }
}

/// Adds a self-loop of `loop_weight` to every node lacking one.
pub fn augment_self_loops(mut g: Graph, loop_weight: f64) -> Graph {
    for (u, row) in g.adj.iter_mut().enumerate() {
        if let Err(pos) = row.binary_search_by_key(&u, |e| e.0) {
            row.insert(pos, (u, loop_weight));
        }
    }
    g
}

fn fields(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
}

fn content(line: &str) -> Option<&str> {
    let t = line.trim();
    if t.is_empty() || t.starts_with('#') {
        None
    } else {
        Some(t)
    }
}

/// Parses `src dst [weight]` lines (whitespace or comma separated, `#`
/// comments; a lone label declares an isolated node) and augments
/// self-loops with `loop_weight`.
pub fn parse_edge_list(
    text: &str,
    directed: bool,
    default_weight: f64,
    loop_weight: f64,
) -> Result<Graph> {
    let mut b = GraphBuilder::new(directed);
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let Some(t) = content(raw) else { continue };
        let f: Vec<&str> = fields(t).collect();
        let w = match f.len() {
            1 => {
                b.add_node(f[0]);
                continue;
            }
            2 => default_weight,
            3 => f[2].parse::<f64>().map_err(|_| Error::Parse {
                line,
                msg: format!("bad weight `{}`", f[2]),
            })?,
            k => {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected `node` or `src dst [weight]`, found {k} fields"),
                })
            }
        };
        if !w.is_finite() {
            return Err(Error::Parse {
                line,
                msg: format!("non-finite weight `{}`", f[2]),
            });
        }
        if w < 0.0 {
            return Err(Error::NegativeWeight { line, weight: w });
        }
        b.add_edge(f[0], f[1], w)?;
    }
    if b.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(augment_self_loops(b.finish(), loop_weight))
}

/// Node label → cluster id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundTruth {
    pub assignment: BTreeMap<String, i64>,
}

impl GroundTruth {
    pub fn parse(text: &str) -> Result<Self> {
        let mut assignment = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let Some(t) = content(raw) else { continue };
            let f: Vec<&str> = fields(t).collect();
            if f.len() != 2 {
                return Err(Error::Parse {
                    line,
                    msg: "expected `node_label cluster_id`".into(),
                });
            }
            let id = f[1].parse::<i64>().map_err(|_| Error::Parse {
                line,
                msg: format!("bad cluster id `{}`", f[1]),
            })?;
            assignment.insert(f[0].to_string(), id);
        }
        Ok(GroundTruth { assignment })
    }

    pub fn to_text(&self, order: &[String]) -> String {
        let mut out = String::new();
        for l in order {
            if let Some(c) = self.assignment.get(l) {
                let _ = writeln!(out, "{l} {c}");
            }
        }
        out
    }

    /// Cluster ids indexed by node, `None` where the label is absent.
    pub fn per_node(&self, g: &Graph) -> Vec<Option<i64>> {
        g.labels()
            .iter()
            .map(|l| self.assignment.get(l).copied())
            .collect()
    }
}
