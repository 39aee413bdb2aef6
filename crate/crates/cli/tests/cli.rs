use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_entcent"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(p: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn centrality_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["centrality", s(&data("karate.edges")), "--out", s(dir.path())]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["centrality.csv", "scatter.csv", "histogram.csv", "centralization.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let csv = std::fs::read_to_string(dir.path().join("centrality.csv")).unwrap();
    let one: f64 = csv
        .lines()
        .find_map(|l| l.strip_prefix("1,"))
        .unwrap()
        .parse()
        .unwrap();
    assert!((one - 4.81999).abs() < 1e-3);
    assert_eq!(csv.lines().count(), 35);
}

#[test]
fn series_lists_each_horizon() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "series",
        s(&data("karate.edges")),
        "--nodes",
        "1,34",
        "--t-max",
        "3",
        "--out",
        s(dir.path()),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("series.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 4);
    assert!(csv.contains("34,inf,"));
}

#[test]
fn cluster_output_is_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = run(&["cluster", s(&data("karate.edges")), "--seed", "7", "--out", s(d.path())]);
        assert!(out.status.success());
    }
    let ra = std::fs::read(a.path().join("clusters.json")).unwrap();
    let rb = std::fs::read(b.path().join("clusters.json")).unwrap();
    assert_eq!(ra, rb);
    let v = json(&a.path().join("clusters.json"));
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(v["levels"].as_array().unwrap().len(), 2);
    assert!(std::fs::read_to_string(a.path().join("clusters.dot")).unwrap().starts_with("graph"));
}

#[test]
fn zero_iterations_stop_after_first_stage() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["cluster", s(&data("karate.edges")), "--iterations", "0", "--out", s(dir.path())]);
    assert!(out.status.success());
    let v = json(&dir.path().join("clusters.json"));
    assert_eq!(v["levels"].as_array().unwrap().len(), 1);
}

#[test]
fn recluster_appends_a_level() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["cluster", s(&data("karate.edges")), "--recluster", "1", "--out", s(dir.path())]);
    assert!(out.status.success());
    let v = json(&dir.path().join("clusters.json"));
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 3);
    let last = levels[2]["clusters"].as_array().unwrap().len();
    assert!(last > levels[1]["clusters"].as_array().unwrap().len());
}

#[test]
fn cluster_then_eval_matches_bench() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert!(run(&["cluster", s(&data("karate.edges")), "--out", s(p)]).status.success());
    let out = run(&[
        "eval",
        "--clusters",
        s(&p.join("clusters.json")),
        "--truth",
        s(&data("karate.truth")),
        "--out",
        s(p),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let f_eval = json(&p.join("report.json"))["f1"].as_f64().unwrap();
    let bench = tempfile::tempdir().unwrap();
    let out = run(&[
        "bench",
        s(&data("karate.edges")),
        "--truth",
        s(&data("karate.truth")),
        "--out",
        s(bench.path()),
    ]);
    assert!(out.status.success());
    let r = json(&bench.path().join("report.json"));
    assert_eq!(r["dataset"], "karate");
    assert!((r["f_score"].as_f64().unwrap() - f_eval).abs() < 1e-12);
    assert!(f_eval >= 0.85);
}

#[test]
fn synth_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let out = run(&[
        "synth", "--n", "60", "--k", "3", "--avg-degree", "6", "--mu", "0.1", "--seed", "2", "--out",
        s(p), "--name", "g",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["bench", s(&p.join("g.edges")), "--truth", s(&p.join("g.truth")), "--out", s(p)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&p.join("report.json"));
    assert_eq!(r["dataset"], "g");
    assert!(r["n_clusters"].as_u64().unwrap() >= 1);
}

#[test]
fn directed_header_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    std::fs::write(p.join("d.edges"), "# directed\na b\n").unwrap();
    assert!(run(&["centrality", s(&p.join("d.edges")), "--out", s(p)]).status.success());
    let csv = std::fs::read_to_string(p.join("centrality.csv")).unwrap();
    // b has only its self-loop when edges are directed.
    assert!(csv.lines().any(|l| l == "b,0"));
    assert!(run(&["centrality", s(&p.join("d.edges")), "--undirected", "--out", s(p)]).status.success());
    let csv = std::fs::read_to_string(p.join("centrality.csv")).unwrap();
    assert!(!csv.lines().any(|l| l == "b,0"));
}

#[test]
fn bad_input_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    std::fs::write(p.join("empty.edges"), "# nothing\n").unwrap();
    std::fs::write(p.join("neg.edges"), "a b -2\n").unwrap();
    let (karate, empty, neg, missing) = (
        data("karate.edges"),
        p.join("empty.edges"),
        p.join("neg.edges"),
        p.join("missing.edges"),
    );
    let cases: Vec<Vec<&str>> = vec![
        vec!["centrality", s(&empty), "--out", s(p)],
        vec!["centrality", s(&neg), "--out", s(p)],
        vec!["centrality", s(&missing), "--out", s(p)],
        vec!["series", s(&karate), "--nodes", "99", "--out", s(p)],
        vec!["centrality", s(&karate), "--absorption", "const:1.5"],
        vec!["cluster", s(&karate), "--she", "0", "--out", s(p)],
        vec!["cluster", s(&karate), "--linkage", "median"],
        vec!["synth", "--n", "10", "--k", "5", "--mu", "0.1", "--out", s(p)],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}
