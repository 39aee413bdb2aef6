//! Workloads shared by the criterion benches.

use std::path::PathBuf;

use entcent::{parse_edge_list, Graph};

/// Bundled dataset directory at the workspace root.
pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn bundled(name: &str) -> Graph {
    let text = std::fs::read_to_string(data_dir().join(format!("{name}.edges")))
        .unwrap_or_else(|e| panic!("reading {name}.edges: {e}"));
    parse_edge_list(&text, false, 1.0, 1.0).expect("bundled edge list parses")
}
