mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fuzznet::fuzzy::FuzzyGraph;
use fuzznet::ingest::{filter_degree_range, giant_component, parse_edge_list, write_edge_list};
use fuzznet::metrics::{clustering_vs_outdegree, degree_distribution, fit_power_law, metrics_report};
use fuzznet::percolation::{sweep, PercolationMode, SweepMetadata};
use fuzznet::synth::{generate, SynthModel, SynthSpec};
use fuzznet::CrispDigraph;
use serde::Serialize;
use serde_json::json;

use output::{prepare_dir, write_atomic, write_json, RunManifest};

#[derive(Parser)]
#[command(name = "fuzznet", version, about = "Fuzzy-graph percolation and network metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an edge list, optionally filter by degree and keep the giant component
    Ingest(IngestArgs),
    /// Compute the metric report, degree distribution and clustering series
    Metrics(MetricsArgs),
    /// Random node percolation sweep over removal fractions
    Sweep(SweepArgs),
    /// Generate a synthetic topology
    Synth(SynthArgs),
}

#[derive(Args, Serialize)]
struct IngestArgs {
    /// Edge-list CSV (source,destination)
    #[arg(long)]
    input: PathBuf,
    /// Output directory, created if missing
    #[arg(long)]
    out: PathBuf,
    /// Drop vertices with total degree below N (applied once, before --giant)
    #[arg(long, value_name = "N")]
    min_degree: Option<usize>,
    /// Drop vertices with total degree above N
    #[arg(long, value_name = "N")]
    max_degree: Option<usize>,
    /// Keep only the largest weakly connected component
    #[arg(long)]
    giant: bool,
}

#[derive(Args, Serialize)]
struct MetricsArgs {
    /// Edge-list CSV (source,destination)
    #[arg(long)]
    input: PathBuf,
    /// Output directory, created if missing
    #[arg(long)]
    out: PathBuf,
    /// Smallest degree included in the power-law fit
    #[arg(long, default_value_t = 1)]
    k_min: usize,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Uniform,
    /// Removal weighted by 1 - σ (extension; needs --sigma)
    Membership,
}

#[derive(Args, Serialize)]
struct SweepArgs {
    /// Edge-list CSV (source,destination)
    #[arg(long)]
    input: PathBuf,
    /// Output directory, created if missing
    #[arg(long)]
    out: PathBuf,
    /// Base seed; every trial seed is derived from it
    #[arg(long)]
    seed: u64,
    /// Comma-separated, strictly increasing removal fractions in [0, 1]
    #[arg(long, value_delimiter = ',', default_value = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")]
    fractions: Vec<f64>,
    /// Independent removals per fraction
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = Mode::Uniform)]
    mode: Mode,
    /// Fuzzy-graph text file supplying σ for every vertex (membership mode)
    #[arg(long)]
    sigma: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[command(subcommand)]
    model: SynthCommand,
}

#[derive(Args, Serialize)]
struct SynthCommon {
    /// Output directory, created if missing
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
enum SynthCommand {
    /// Preferential attachment: clique on m+1 vertices, m links per new vertex
    Pa {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        #[serde(flatten)]
        common: SynthCommon,
    },
    /// Complete core with bridged clique clusters
    Core {
        #[arg(long = "core")]
        core_size: usize,
        #[arg(long)]
        clusters: usize,
        #[arg(long)]
        size: usize,
        #[command(flatten)]
        #[serde(flatten)]
        common: SynthCommon,
    },
}

fn read_graph(path: &Path) -> Result<CrispDigraph> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    parse_edge_list(file).with_context(|| format!("parsing {}", path.display()))
}

fn run_ingest(args: IngestArgs) -> Result<()> {
    let mut graph = read_graph(&args.input)?;
    let parsed = (graph.vertex_count(), graph.arc_count());
    if args.min_degree.is_some() || args.max_degree.is_some() {
        graph = filter_degree_range(&graph, args.min_degree.unwrap_or(0), args.max_degree)?;
    }
    if args.giant {
        graph = giant_component(&graph);
    }
    prepare_dir(&args.out)?;
    let mut manifest = RunManifest::new("ingest", serde_json::to_value(&args)?);
    manifest.inputs.push(args.input.display().to_string());
    manifest.record(write_atomic(&args.out, "graph.csv", write_edge_list(&graph).as_bytes())?);
    manifest.details = json!({
        "pipeline": "parse -> degree filter -> giant component",
        "input_vertices": parsed.0,
        "input_arcs": parsed.1,
        "output_vertices": graph.vertex_count(),
        "output_arcs": graph.arc_count(),
    });
    manifest.finish(&args.out)
}

fn run_metrics(args: MetricsArgs) -> Result<()> {
    let digraph = read_graph(&args.input)?;
    let graph = digraph.undirected_projection();
    if graph.is_empty() {
        bail!("{} contains no vertices", args.input.display());
    }
    let report = metrics_report(&graph)?;
    let distribution = degree_distribution(&graph)?;

    prepare_dir(&args.out)?;
    let mut manifest = RunManifest::new("metrics", serde_json::to_value(&args)?);
    manifest.inputs.push(args.input.display().to_string());
    manifest.record(write_json(&args.out, "report.json", &report)?);

    let mut csv = String::from("degree,p_k\n");
    for (k, p) in distribution.entries() {
        csv.push_str(&format!("{k},{p:.6}\n"));
    }
    manifest.record(write_atomic(&args.out, "degree_distribution.csv", csv.as_bytes())?);

    let mut csv = String::from("out_degree,clustering\n");
    for row in clustering_vs_outdegree(&digraph) {
        csv.push_str(&format!("{},{:.6}\n", row.out_degree, row.clustering));
    }
    manifest.record(write_atomic(&args.out, "clustering_vs_outdegree.csv", csv.as_bytes())?);

    let fit = match fit_power_law(&distribution, args.k_min) {
        Ok(fit) => json!({ "fit": fit, "error": null }),
        Err(e) => json!({ "fit": null, "error": e.to_string() }),
    };
    manifest.record(write_json(&args.out, "power_law.json", &fit)?);

    manifest.details = json!({
        "arc_count": digraph.arc_count(),
        "directed_average_degree": digraph.arc_count() as f64 / digraph.vertex_count() as f64,
    });
    manifest.finish(&args.out)
}

fn run_sweep(args: SweepArgs) -> Result<()> {
    let graph = read_graph(&args.input)?.undirected_projection();
    let mode = match (args.mode, &args.sigma) {
        (Mode::Uniform, None) => PercolationMode::Uniform,
        (Mode::Uniform, Some(_)) => bail!("--sigma only applies to --mode membership"),
        (Mode::Membership, None) => bail!("--mode membership requires --sigma"),
        (Mode::Membership, Some(path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let fuzzy = FuzzyGraph::parse_text(&text).with_context(|| format!("parsing {}", path.display()))?;
            PercolationMode::MembershipWeighted(fuzzy.sigma().clone())
        }
    };
    let series = sweep(&graph, &args.fractions, args.trials, args.seed, &mode)?;

    prepare_dir(&args.out)?;
    let mut manifest = RunManifest::new("sweep", serde_json::to_value(&args)?);
    manifest.inputs.push(args.input.display().to_string());
    if let Some(path) = &args.sigma {
        manifest.inputs.push(path.display().to_string());
    }
    manifest.seed = Some(args.seed);
    manifest.record(write_atomic(&args.out, "sweep.csv", series.to_csv().as_bytes())?);
    let sidecar = json!({
        "metadata": SweepMetadata::new(args.seed, args.trials, &mode),
        "points": series.points,
    });
    manifest.record(write_json(&args.out, "sweep.json", &sidecar)?);
    manifest.finish(&args.out)
}

fn run_synth(args: SynthArgs) -> Result<()> {
    let flags = serde_json::to_value(&args.model)?;
    let (model, common) = match &args.model {
        SynthCommand::Pa { n, m, common } => (SynthModel::PreferentialAttachment { n: *n, m: *m }, common),
        SynthCommand::Core { core_size, clusters, size, common } => (
            SynthModel::CorePeriphery {
                core_size: *core_size,
                cluster_count: *clusters,
                cluster_size: *size,
            },
            common,
        ),
    };
    let graph = generate(&SynthSpec { model, seed: common.seed })?;
    prepare_dir(&common.out)?;
    let mut manifest = RunManifest::new("synth", flags);
    manifest.seed = Some(common.seed);
    let csv = write_edge_list(&graph.to_digraph_once());
    manifest.record(write_atomic(&common.out, "graph.csv", csv.as_bytes())?);
    manifest.details = json!({
        "vertices": graph.vertex_count(),
        "edges": graph.edge_count(),
    });
    manifest.finish(&common.out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ingest(args) => run_ingest(args),
        Command::Metrics(args) => run_metrics(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Synth(args) => run_synth(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
