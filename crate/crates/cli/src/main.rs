use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use entcent::centrality::centrality_series;
use entcent::clustering::{
    cluster_graph, subgraph_recluster, AgglomerationTrace, ClusterSet, ClusteringConfig, Level,
    Linkage, RowClusterer,
};
use entcent::report::{self, ClusterJson};
use entcent::synth::generate_planted_partition;
use entcent::{
    centralization, centralization_sequence, compute_profile, pairwise_f_score, parse_edge_list,
    AbsorptionModel, Error, Graph, GroundTruth, Horizon, ModelConfig, NodeWeight, SolverConfig,
    SyntheticSpec, WeightTransform,
};

#[derive(Parser)]
#[command(name = "entcent", version, about = "Markov entropic centrality and entropy-guided clustering")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-node centrality, plot data and centralization.
    Centrality(RunArgs),
    /// Centrality of chosen nodes for t = 1..t_max and t = ∞.
    Series {
        #[command(flatten)]
        run: RunArgs,
        /// Comma separated node labels.
        #[arg(long, value_delimiter = ',', required = true)]
        nodes: Vec<String>,
        #[arg(long, default_value_t = 6)]
        t_max: usize,
    },
    /// Two-stage clustering.
    Cluster {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        clustering: ClusterArgs,
    },
    /// Scores a cluster file against ground truth.
    Eval {
        /// clusters.json written by `cluster`.
        #[arg(long)]
        clusters: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Timed end-to-end run scored against ground truth.
    Bench {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        clustering: ClusterArgs,
        #[arg(long)]
        truth: PathBuf,
        /// Name recorded in the report; defaults to the input file stem.
        #[arg(long)]
        name: Option<String>,
    },
    /// Planted-partition graph with its labels.
    Synth {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 10.0)]
        avg_degree: f64,
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        degree_exponent: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Basename of the emitted `.edges` and `.truth` files.
        #[arg(long, default_value = "synth")]
        name: String,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Edge list: `src dst [weight]` per line.
    input: PathBuf,
    /// Treat edges as directed (default: `# directed` header, else undirected).
    #[arg(long, conflicts_with = "undirected")]
    directed: bool,
    #[arg(long)]
    undirected: bool,
    /// unit | weight | pow:<β>
    #[arg(long, default_value = "unit")]
    alpha: WeightTransform,
    /// unit | ratio:<γ>
    #[arg(long, default_value = "unit")]
    mu: NodeWeight,
    /// const:<a> | degree | wdegree
    #[arg(long, default_value = "degree")]
    absorption: AbsorptionModel,
    /// t:<int> | inf
    #[arg(long, default_value = "inf")]
    horizon: Horizon,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Dense solver below this many nodes.
    #[arg(long, default_value_t = SolverConfig::default().dense_threshold)]
    dense_threshold: usize,
}

#[derive(Args, Clone)]
struct ClusterArgs {
    #[arg(long = "she", default_value_t = 0.3)]
    she_fraction: f64,
    #[arg(long, default_value_t = 2)]
    iterations: usize,
    /// min | mean | max
    #[arg(long, default_value = "min")]
    linkage: Linkage,
    /// ward | kmeans | gaps
    #[arg(long, default_value = "ward")]
    row_clusterer: RowClusterer,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Recluster this many of the largest clusters.
    #[arg(long, default_value_t = 0)]
    recluster: usize,
}

impl RunArgs {
    fn model(&self) -> ModelConfig {
        ModelConfig {
            alpha: self.alpha,
            mu: self.mu,
            absorption: self.absorption,
        }
    }

    fn solver(&self) -> SolverConfig {
        SolverConfig {
            dense_threshold: self.dense_threshold,
        }
    }

    fn load(&self) -> Result<Graph, Error> {
        let text = fs::read_to_string(&self.input)?;
        let directed = if self.directed {
            true
        } else if self.undirected {
            false
        } else {
            header_says_directed(&text)
        };
        parse_edge_list(&text, directed, 1.0, 1.0)
    }
}

impl ClusterArgs {
    fn config(&self, horizon: Horizon) -> ClusteringConfig {
        ClusteringConfig {
            she_fraction: self.she_fraction,
            linkage: self.linkage,
            iterations: self.iterations,
            rng_seed: self.seed,
            row_clusterer: self.row_clusterer,
            horizon,
        }
    }
}

fn header_says_directed(text: &str) -> bool {
    text.lines()
        .map(str::trim)
        .take_while(|l| l.is_empty() || l.starts_with('#'))
        .any(|l| l.trim_start_matches('#').trim().eq_ignore_ascii_case("directed"))
}

fn write(dir: &Path, name: &str, body: &str) -> Result<(), Error> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), body)?;
    log::info!("wrote {}", dir.join(name).display());
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.cmd {
        Command::Centrality(run) => {
            let g = run.load()?;
            let (dist, profile) = compute_profile(&g, run.model(), run.horizon, run.solver())?;
            write(&run.out, "centrality.csv", &report::profile_csv(&g, &profile))?;
            write(&run.out, "scatter.csv", &report::scatter_csv(&g, &dist, &profile))?;
            write(&run.out, "histogram.csv", &report::histogram_csv(&profile, 10))?;
            let c = centralization(&profile)?;
            let seq = centralization_sequence(&profile)?;
            write(
                &run.out,
                "centralization.json",
                &report::centralization_json(&g, &profile, c, &seq)?,
            )?;
        }
        Command::Series { run, nodes, t_max } => {
            let g = run.load()?;
            let idx = nodes
                .iter()
                .map(|l| g.index_of(l))
                .collect::<Result<Vec<_>, _>>()?;
            let points = centrality_series(&g, run.model(), &idx, t_max, run.solver())?;
            write(&run.out, "series.csv", &report::series_csv(&g, &points))?;
        }
        Command::Cluster { run, clustering } => {
            let g = run.load()?;
            let cfg = clustering.config(run.horizon);
            let model = run.model();
            let mut out = cluster_graph(&g, model, &cfg, run.solver())?;
            if clustering.recluster > 0 {
                let refined =
                    subgraph_recluster(&g, out.clusters(), clustering.recluster, model, &cfg, run.solver())?;
                push_refined(&mut out.trace, refined, g.n());
            }
            let json = ClusterJson::new(&g, &model, &cfg, &out);
            write(&run.out, "clusters.json", &serde_json::to_string_pretty(&json)?)?;
            write(&run.out, "clusters.dot", &report::clusters_dot(&g, out.clusters()))?;
        }
        Command::Eval { clusters, truth, out } => {
            let json: ClusterJson = serde_json::from_str(&fs::read_to_string(&clusters)?)?;
            let predicted = json.assignment()?;
            let truth = GroundTruth::parse(&fs::read_to_string(&truth)?)?;
            let labels: Vec<&String> = predicted
                .assignment
                .keys()
                .chain(truth.assignment.keys())
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            let a: Vec<Option<i64>> = labels.iter().map(|l| predicted.assignment.get(*l).copied()).collect();
            let b: Vec<Option<i64>> = labels.iter().map(|l| truth.assignment.get(*l).copied()).collect();
            let r = pairwise_f_score(&a, &b)?;
            write(&out, "report.json", &serde_json::to_string_pretty(&r)?)?;
        }
        Command::Bench {
            run,
            clustering,
            truth,
            name,
        } => {
            let g = run.load()?;
            let truth = GroundTruth::parse(&fs::read_to_string(&truth)?)?;
            let name = name.unwrap_or_else(|| {
                run.input
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default()
            });
            let cfg = clustering.config(run.horizon);
            let (r, _) = report::benchmark_run(
                &name,
                &g,
                &truth,
                run.model(),
                &cfg,
                clustering.recluster,
                run.solver(),
            )?;
            write(&run.out, "report.json", &serde_json::to_string_pretty(&r)?)?;
        }
        Command::Synth {
            n,
            k,
            avg_degree,
            mu,
            degree_exponent,
            seed,
            out,
            name,
        } => {
            let mut spec = SyntheticSpec::new(n, k, avg_degree, mu, seed);
            spec.degree_exponent = degree_exponent;
            let (g, truth) = generate_planted_partition(&spec)?;
            write(&out, &format!("{name}.edges"), &g.to_edge_list())?;
            write(&out, &format!("{name}.truth"), &truth.to_text(g.labels()))?;
        }
    }
    Ok(())
}

/// Appends a reclustered partition as a final level; its `merges` list the
/// parent cluster of each refined cluster.
fn push_refined(trace: &mut AgglomerationTrace, refined: ClusterSet, n: usize) {
    let assign = trace.last().assignment(n);
    let merges = refined
        .clusters()
        .iter()
        .map(|c| {
            let mut parents: Vec<usize> = c.iter().filter_map(|&u| assign[u]).collect();
            parents.dedup();
            parents
        })
        .collect();
    trace.levels.push(Level {
        clusters: refined,
        merges,
        transitions: None,
    });
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
