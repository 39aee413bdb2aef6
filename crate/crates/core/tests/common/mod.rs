#![allow(dead_code)]

use std::path::PathBuf;

use entcent::graph::augment_self_loops;
use entcent::{parse_edge_list, AbsorptionModel, Graph, GraphBuilder, GroundTruth};
use rand::Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Bundled graph and labels, or `None` when the files are absent.
pub fn dataset(name: &str) -> Option<(Graph, GroundTruth)> {
    let edges = std::fs::read_to_string(data_dir().join(format!("{name}.edges"))).ok()?;
    let truth = std::fs::read_to_string(data_dir().join(format!("{name}.truth"))).ok()?;
    let g = parse_edge_list(&edges, false, 1.0, 1.0).expect("bundled edge list parses");
    Some((g, GroundTruth::parse(&truth).expect("bundled truth parses")))
}

pub fn karate() -> (Graph, GroundTruth) {
    dataset("karate").expect("data/karate.edges and data/karate.truth")
}

/// Erdős–Rényi style graph with mean out-degree near `deg`, weights in
/// [0.5, 5) when `weighted`, augmented with unit self-loops.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, deg: f64, directed: bool, weighted: bool) -> Graph {
    augment_self_loops(random_plain(rng, n, deg, directed, weighted), 1.0)
}

/// As [`random_graph`] but without self-loops.
pub fn random_plain<R: Rng>(rng: &mut R, n: usize, deg: f64, directed: bool, weighted: bool) -> Graph {
    let mut b = GraphBuilder::new(directed);
    for u in 0..n {
        b.add_node(&u.to_string());
    }
    let p = (deg / (n as f64 - 1.0)).min(1.0);
    for u in 0..n {
        let start = if directed { 0 } else { u + 1 };
        for v in start..n {
            if v != u && rng.gen::<f64>() < p {
                let w = if weighted { rng.gen_range(0.5..5.0) } else { 1.0 };
                b.add_edge_idx(u, v, w);
            }
        }
    }
    b.finish()
}

pub fn random_model<R: Rng>(rng: &mut R) -> AbsorptionModel {
    match rng.gen_range(0..3) {
        0 => AbsorptionModel::Constant(rng.gen_range(0.05..0.6)),
        1 => AbsorptionModel::DegreeBased,
        _ => AbsorptionModel::WeightedDegreeBased,
    }
}

/// Star with edges from node 0 to `n − 1` leaves, plus self-loops.
pub fn star(n: usize) -> Graph {
    let mut b = GraphBuilder::new(true);
    b.add_node("0");
    for v in 1..n {
        b.add_edge("0", &v.to_string(), 1.0).unwrap();
    }
    b.build()
}
