//! One PASS/FAIL line per acceptance criterion, followed by `info` lines.
//!
//! Failing criteria are reported, not hidden. The process exits non-zero on
//! any FAIL only when `ENTCENT_ACCEPTANCE_STRICT` is set, so the remaining
//! test binaries still run under a plain `cargo test`.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use entcent::bounds::{
    absorption_bounds, first_passage_transitivity_bound, verify_transitivity_bound, walk_bounds,
};
use entcent::centrality::{constant_absorption_bound, entropy};
use entcent::clustering::{process_raw_cluster, RawCluster};
use entcent::graph::augment_self_loops;
use entcent::linalg::DenseMatrix;
use entcent::markov::{asymptotic_absorption, build_transition, propagate_finite};
use entcent::report::ClusterJson;
use entcent::{
    benchmark_run, centralization, centralization_sequence, cluster_graph, compute_profile,
    generate_planted_partition, AbsorbingChain, AbsorptionModel, ClusteringConfig, GraphBuilder,
    Horizon, ModelConfig, NodeWeight, SolverConfig, SyntheticSpec, WeightTransform,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Ledger {
    pass: usize,
    fail: usize,
}

impl Ledger {
    fn check(&mut self, name: &str, ok: bool, detail: String) {
        if ok {
            self.pass += 1;
        } else {
            self.fail += 1;
        }
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn info(msg: String) {
    println!("     info: {msg}");
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn default_solver() -> SolverConfig {
    SolverConfig::default()
}

fn degree_model() -> ModelConfig {
    ModelConfig::default()
}

fn karate_values(l: &mut Ledger) {
    let (g, _) = common::karate();
    let start = Instant::now();
    let (_, prof) = compute_profile(&g, degree_model(), Horizon::Infinite, default_solver()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let expect = [
        ("34", 4.82504),
        ("1", 4.81999),
        ("33", 4.72539),
        ("29", 4.34323),
        ("5", 3.90674),
        ("12", 3.26763),
    ];
    let mut worst = 0.0f64;
    for (label, want) in expect {
        let got = prof.values[g.index_of(label).unwrap()];
        worst = worst.max((got - want).abs());
    }
    l.check(
        "karate centrality values",
        worst <= 1e-3 && secs < 1.0,
        format!("max |err| {worst:.2e} over 6 nodes (tol 1e-3), {:.1} ms", secs * 1e3),
    );
}

fn constant_maxima(l: &mut Ledger) {
    let (g, _) = common::karate();
    let n = g.n();
    let one = g.index_of("1").unwrap();
    let mut all_ok = true;
    let mut bound_ok = true;
    let mut parts = Vec::new();
    for (a, want) in [(0.001, 4.8232), (0.2, 4.1319), (0.5, 2.9475)] {
        let model = ModelConfig {
            absorption: AbsorptionModel::Constant(a),
            ..ModelConfig::default()
        };
        let (_, prof) = compute_profile(&g, model, Horizon::Infinite, default_solver()).unwrap();
        let max = prof.max();
        all_ok &= close(max, want, 1e-3);
        let cap = constant_absorption_bound(n, a);
        bound_ok &= prof.values.iter().all(|&c| c <= cap);
        parts.push(format!("a={a}: max {max:.4} want {want}"));
        info(format!(
            "a={a}: node 1 {:.4}, bound {cap:.4}",
            prof.values[one]
        ));
    }
    l.check(
        "constant-absorption maxima",
        all_ok && bound_ok,
        format!("{} (tol 1e-3); bound holds on every node: {bound_ok}", parts.join(", ")),
    );
}

fn centralization_suite(l: &mut Ledger) {
    let (g, _) = common::karate();
    let (_, prof) = compute_profile(&g, degree_model(), Horizon::Finite(7), default_solver()).unwrap();
    let seq = centralization_sequence(&prof).unwrap();
    let twelve = seq.value_of(g.index_of("12").unwrap()).unwrap();
    let karate_ok = close(seq.min(), -0.19467, 1e-3)
        && close(seq.median(), -0.03248, 1e-3)
        && close(seq.max(), 0.12682, 1e-3)
        && close(twelve, -0.17471, 1e-3);

    let s = common::star(10);
    let (_, sp) = compute_profile(&s, degree_model(), Horizon::Infinite, default_solver()).unwrap();
    let c = centralization(&sp).unwrap();
    let centre = sp.values[s.index_of("0").unwrap()];
    let star_ok = close(c, 1.0, 1e-10) && close(centre, 10f64.log2(), 1e-10);
    l.check(
        "centralization",
        karate_ok && star_ok,
        format!(
            "karate t=7 (min, median, max) = ({:.5}, {:.5}, {:.5}), node 12 {twelve:.5}; \
             star n=10 centralization {c:.12}, centre {centre:.12}",
            seq.min(),
            seq.median(),
            seq.max()
        ),
    );
    let (_, inf) = compute_profile(&g, degree_model(), Horizon::Infinite, default_solver()).unwrap();
    let si = centralization_sequence(&inf).unwrap();
    info(format!(
        "karate t=inf sequence (min, median, max) = ({:.5}, {:.5}, {:.5})",
        si.min(),
        si.median(),
        si.max()
    ));
}

/// Absorption counts from `walks` simulated walkers started at `u`.
fn simulate(chain: &AbsorbingChain, cum: &[Vec<(usize, f64)>], u: usize, walks: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let mut hits = vec![0u64; chain.n()];
    for _ in 0..walks {
        let mut v = u;
        loop {
            if rng.gen::<f64>() < chain.d[v] {
                hits[v] += 1;
                break;
            }
            let x: f64 = rng.gen();
            let row = &cum[v];
            v = row.iter().find(|e| x < e.1).unwrap_or(row.last().unwrap()).0;
        }
    }
    hits
}

fn cumulative(chain: &AbsorbingChain) -> Vec<Vec<(usize, f64)>> {
    (0..chain.n())
        .map(|v| {
            let mut acc = 0.0;
            chain
                .p
                .row(v)
                .map(|(w, p)| {
                    acc += p;
                    (w, acc)
                })
                .collect()
        })
        .collect()
}

fn oracle_equivalence(l: &mut Ledger) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut series_err = 0.0f64;
    let (mut entries, mut beyond, mut worst_z) = (0usize, 0usize, 0.0f64);
    let mut mc_graphs = 0;
    const WALKS: usize = 1_000_000;
    let start = Instant::now();
    for i in 0..20 {
        let n = rng.gen_range(5..=60);
        let directed = rng.gen_bool(0.5);
        let weighted = rng.gen_bool(0.5);
        let g = common::random_graph(&mut rng, n, 3.0, directed, weighted);
        let model = common::random_model(&mut rng);
        let chain = AbsorbingChain::new(&g, WeightTransform::Identity, model).unwrap();
        // Alternate solvers so both paths meet the oracle.
        let solver = SolverConfig {
            dense_threshold: if i % 2 == 0 { 512 } else { 0 },
        };
        let pi = asymptotic_absorption(&chain.pt, &chain.d, solver).unwrap();
        let series = propagate_finite(&chain.pt, &chain.d, 10_000).unwrap().absorbed;
        series_err = series_err.max(pi.max_abs_diff(&series));
        if n <= 30 {
            mc_graphs += 1;
            let cum = cumulative(&chain);
            for u in 0..n {
                let hits = simulate(&chain, &cum, u, WALKS, &mut rng);
                for w in 0..n {
                    let p = pi[(u, w)];
                    let freq = hits[w] as f64 / WALKS as f64;
                    let se = (p * (1.0 - p) / WALKS as f64).sqrt();
                    entries += 1;
                    let z = if se > 0.0 {
                        (freq - p).abs() / se
                    } else if freq == p {
                        0.0
                    } else {
                        f64::INFINITY
                    };
                    worst_z = worst_z.max(z);
                    if z > 3.0 {
                        beyond += 1;
                    }
                }
            }
        }
    }
    // Under the null about 0.27% of entries land beyond 3 SE.
    let rate = beyond as f64 / entries.max(1) as f64;
    l.check(
        "absorption oracle",
        series_err <= 1e-8 && mc_graphs > 0 && rate <= 0.01 && worst_z < 5.0,
        format!(
            "series T=10000 max-abs {series_err:.2e} (tol 1e-8); Monte Carlo on {mc_graphs} graphs: \
             {beyond}/{entries} entries beyond 3 SE ({:.3}%, nominal 0.27%), max |z| {worst_z:.2}; {:.1} s",
            rate * 100.0,
            start.elapsed().as_secs_f64()
        ),
    );
}

fn constant_walk_identity(l: &mut Ledger) {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let n = rng.gen_range(5..=40);
        let directed = rng.gen_bool(0.5);
        let g = common::random_graph(&mut rng, n, 3.0, directed, true);
        let a = rng.gen_range(0.01..0.9);
        let chain = AbsorbingChain::new(&g, WeightTransform::Identity, AbsorptionModel::Constant(a)).unwrap();
        let p = chain.p.to_dense();
        let mut pow = DenseMatrix::identity(n);
        for t in 1..=6 {
            pow = pow.matmul(&p);
            let mut scaled = pow.clone();
            let f = (1.0 - a).powi(t as i32);
            scaled.as_mut_slice().iter_mut().for_each(|x| *x *= f);
            let ptt = propagate_finite(&chain.pt, &chain.d, t).unwrap().transient;
            worst = worst.max(ptt.max_abs_diff(&scaled));
        }
    }
    l.check(
        "constant-absorption walk identity",
        worst <= 1e-12,
        format!("max |p~^(t) - (1-a)^t p^(t)| = {worst:.2e} over 10 graphs, t <= 6 (tol 1e-12)"),
    );
}

fn bound_suites(l: &mut Ledger) {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (mut l2, mut l3, mut p2, mut fp) = (f64::INFINITY, f64::INFINITY, f64::INFINITY, f64::INFINITY);
    let mut p2_bad = 0;
    let mut probes = 0;
    for _ in 0..10 {
        let n = rng.gen_range(6..=40);
        let directed = rng.gen_bool(0.5);
        let weighted = rng.gen_bool(0.5);
        let g = common::random_graph(&mut rng, n, 3.0, directed, weighted);
        let model = common::random_model(&mut rng);
        let chain = AbsorbingChain::new(&g, WeightTransform::Identity, model).unwrap();
        let pi = asymptotic_absorption(&chain.pt, &chain.d, default_solver()).unwrap();
        for _ in 0..100 {
            probes += 1;
            let u = rng.gen_range(0..n);
            let mut v = rng.gen_range(0..n);
            while v == u {
                v = rng.gen_range(0..n);
            }
            let mut w = rng.gen_range(0..n);
            while w == u || w == v {
                w = rng.gen_range(0..n);
            }
            let t = rng.gen_range(1..=8);
            l2 = l2.min(walk_bounds(&chain, u, v, t).unwrap().slack());
            l3 = l3.min(absorption_bounds(&chain, &pi, u, w, 1000).unwrap().slack());
            let (_, s) = verify_transitivity_bound(&pi, &chain.pt, &chain.d, u, v, w).unwrap();
            if s < -1e-10 {
                p2_bad += 1;
            }
            p2 = p2.min(s);
            fp = fp.min(first_passage_transitivity_bound(&pi, &chain.pt, &chain.d, u, v, w).unwrap().1);
        }
    }
    let ok = l2 >= -1e-10 && l3 >= -1e-10 && p2 >= -1e-10;
    l.check(
        "bound suites",
        ok,
        format!(
            "{probes} probes on 10 graphs: walk sandwich min slack {l2:.2e}, absorption sandwich \
             {l3:.2e}, transitivity lower bound {p2:.3e} ({p2_bad} probes below -1e-10)"
        ),
    );
    info(format!(
        "first-passage form pi_uw >= p~_uw D_ww + pi_uv pi_vw / pi_vv: min slack {fp:.2e}"
    ));
}

fn weighted_semantics(l: &mut Ledger) {
    let mut b = GraphBuilder::new(true);
    b.add_edge("a", "b", 2.0).unwrap();
    b.add_edge("a", "c", 3.0).unwrap();
    b.add_edge("b", "b", 1.0).unwrap();
    b.add_edge("c", "c", 1.0).unwrap();
    let g = b.finish();
    let p = build_transition(&g, WeightTransform::Identity).unwrap();
    let row: Vec<f64> = p.to_dense().row(g.index_of("a").unwrap()).to_vec();
    let h = entropy(&row);
    let h_ok = close(h, 0.9710, 1e-3);

    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut unit_diff = 0.0f64;
    let mut min_gain = f64::INFINITY;
    for _ in 0..10 {
        let n = rng.gen_range(5..=50);
        let directed = rng.gen_bool(0.5);
        let g = common::random_graph(&mut rng, n, 3.0, directed, false);
        let plain = ModelConfig::default();
        let weighted = ModelConfig {
            alpha: WeightTransform::Identity,
            mu: NodeWeight::DegreeRatio(1.0),
            absorption: AbsorptionModel::WeightedDegreeBased,
        };
        for h in [Horizon::Finite(3), Horizon::Infinite] {
            let (da, pa) = compute_profile(&g, plain, h, default_solver()).unwrap();
            let (db, pb) = compute_profile(&g, weighted, h, default_solver()).unwrap();
            unit_diff = unit_diff.max(da.q.max_abs_diff(&db.q));
            for (x, y) in pa.values.iter().zip(&pb.values) {
                unit_diff = unit_diff.max((x - y).abs());
            }
        }

        let raw = common::random_plain(&mut rng, n, 3.0, directed, true);
        let wmin = raw.min_positive_weight().unwrap_or(1.0);
        let g = augment_self_loops(raw.scaled(1.0 / wmin), 1.0);
        let gamma = rng.gen_range(0.0..2.0);
        let base = ModelConfig {
            alpha: WeightTransform::Identity,
            mu: NodeWeight::Unit,
            absorption: AbsorptionModel::WeightedDegreeBased,
        };
        let with_mu = ModelConfig {
            mu: NodeWeight::DegreeRatio(gamma),
            ..base
        };
        let (_, a) = compute_profile(&g, base, Horizon::Infinite, default_solver()).unwrap();
        let (_, b) = compute_profile(&g, with_mu, Horizon::Infinite, default_solver()).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            min_gain = min_gain.min(y - x);
        }
    }
    l.check(
        "weighted semantics",
        h_ok && unit_diff <= 1e-12 && min_gain >= 0.0,
        format!(
            "H(2,3) = {h:.4} (want 0.9710); unit-weight pipeline max diff {unit_diff:.2e} (tol 1e-12); \
             min centrality change under mu=ratio {min_gain:.2e} (must be >= 0)"
        ),
    );
}

fn benchmark(
    l: &mut Ledger,
    name: &str,
    cfg: ClusteringConfig,
    recluster: usize,
    target: f64,
    reference: f64,
) {
    let Some((g, truth)) = common::dataset(name) else {
        l.check(
            &format!("cluster benchmark {name}"),
            false,
            format!("data/{name}.edges or data/{name}.truth not available"),
        );
        return;
    };
    let (r, _) = benchmark_run(name, &g, &truth, degree_model(), &cfg, recluster, default_solver()).unwrap();
    let want_two = name == "karate";
    let shape_ok = !want_two || r.n_clusters == 2;
    l.check(
        &format!("cluster benchmark {name}"),
        r.f_score >= target && r.wall_ms < 5000.0 && shape_ok,
        format!(
            "F = {:.3} with {} clusters (need >= {target}, reference {reference}), {:.1} ms",
            r.f_score, r.n_clusters, r.wall_ms
        ),
    );
}

fn karate_seed_spread() {
    let (g, truth) = common::karate();
    let mut fs = Vec::new();
    for seed in 0..10 {
        let cfg = ClusteringConfig {
            rng_seed: seed,
            ..ClusteringConfig::default()
        };
        let (r, _) = benchmark_run("karate", &g, &truth, degree_model(), &cfg, 0, default_solver()).unwrap();
        fs.push(format!("{:.3}", r.f_score));
    }
    info(format!("karate F over seeds 0..9: [{}]", fs.join(", ")));
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

fn synthetic_sweep(l: &mut Ledger) {
    let start = Instant::now();
    let (mut mus, mut fs) = (Vec::new(), Vec::new());
    let mut low_ok = true;
    let mut means = Vec::new();
    for step in 1..=10 {
        let mu = step as f64 * 0.05;
        let mut sum = 0.0;
        for seed in 0..5 {
            let spec = SyntheticSpec::new(1000, 20, 10.0, mu, seed);
            let (g, truth) = generate_planted_partition(&spec).unwrap();
            let cfg = ClusteringConfig {
                rng_seed: seed,
                ..ClusteringConfig::default()
            };
            let (r, _) = benchmark_run("synth", &g, &truth, degree_model(), &cfg, 0, default_solver()).unwrap();
            mus.push(mu);
            fs.push(r.f_score);
            sum += r.f_score;
        }
        let mean = sum / 5.0;
        if mu < 0.3 {
            low_ok &= mean >= 0.8;
        }
        means.push(format!("{mu:.2}:{mean:.3}"));
    }
    let r = pearson(&mus, &fs);
    let secs = start.elapsed().as_secs_f64();
    l.check(
        "synthetic sweep",
        low_ok && r <= -0.7 && secs < 600.0,
        format!(
            "n=1000, k=20, mean degree 10, 5 seeds per mu; mean F for mu < 0.3 >= 0.8: {low_ok}; \
             Pearson(F, mu) = {r:.3} (need <= -0.7); {secs:.0} s"
        ),
    );
    info(format!("mean F by mu: {}", means.join(" ")));
}

fn determinism(l: &mut Ledger) {
    let (g, _) = common::karate();
    let model = degree_model();
    let cfg = ClusteringConfig::default();
    let render = || {
        let out = cluster_graph(&g, model, &cfg, default_solver()).unwrap();
        let json = serde_json::to_string_pretty(&ClusterJson::new(&g, &model, &cfg, &out)).unwrap();
        (json, out.ties.len())
    };
    let (a, karate_ties) = render();
    let (b, _) = render();

    // Query 0 is a hub whose raw cluster meets clusters {1} and {2} equally.
    let set = |v: &[usize]| v.iter().copied().collect::<BTreeSet<usize>>();
    let raw = RawCluster {
        query: 0,
        members: set(&[0, 1, 2]),
        sigma: 0.0,
    };
    let existing = [set(&[1]), set(&[2])];
    let mut chosen = BTreeSet::new();
    let mut logged = 0;
    for seed in 0..16 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ties = Vec::new();
        process_raw_cluster(&raw, &set(&[0]), &existing, &[0.0; 3], &mut rng, 0, &mut ties);
        logged += ties.len();
        chosen.extend(ties.iter().map(|t| t.chosen));
    }
    l.check(
        "determinism",
        a == b && logged == 16 && chosen.len() == 2,
        format!(
            "repeat karate JSON identical: {}; tie fixture logged {logged}/16 draws covering {} \
             candidates; karate run records {karate_ties} tie-breaks",
            a == b,
            chosen.len()
        ),
    );
}

fn main() {
    let mut l = Ledger { pass: 0, fail: 0 };
    karate_values(&mut l);
    constant_maxima(&mut l);
    centralization_suite(&mut l);
    oracle_equivalence(&mut l);
    constant_walk_identity(&mut l);
    bound_suites(&mut l);
    weighted_semantics(&mut l);
    benchmark(&mut l, "karate", ClusteringConfig::default(), 0, 0.85, 0.884);
    karate_seed_spread();
    benchmark(
        &mut l,
        "dolphin",
        ClusteringConfig {
            she_fraction: 0.6,
            iterations: 2,
            ..ClusteringConfig::default()
        },
        0,
        0.80,
        0.858,
    );
    benchmark(
        &mut l,
        "football",
        ClusteringConfig {
            she_fraction: 0.8,
            iterations: 1,
            ..ClusteringConfig::default()
        },
        3,
        0.75,
        0.811,
    );
    synthetic_sweep(&mut l);
    determinism(&mut l);
    println!("acceptance: {} passed, {} failed", l.pass, l.fail);
    if l.fail > 0 && std::env::var_os("ENTCENT_ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
