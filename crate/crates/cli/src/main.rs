//! `scholargraph` — build, generate, and search an embedded academic
//! knowledge graph from the command line.
//!
//! Exit codes: 0 success (including empty result sets), 1 usage or
//! configuration error, 2 corpus/data error, 3 provider error.

use std::path::{Path, PathBuf};

use clap::{ArgAction, Parser, Subcommand};

use scholargraph_core::config::OutputFormat;
use scholargraph_core::graph::{EdgeKind, NodeKind};
use scholargraph_core::ingest::{self, LoadReport};
use scholargraph_core::output::{self, SCHEMA_VERSION};
use scholargraph_core::query::{QueryInput, QueryKind};
use scholargraph_core::synth;
use scholargraph_core::{Error, PropertyGraph, Result, RunConfig, SearchContext, SearchMode};

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_DATA: i32 = 2;
const EXIT_PROVIDER: i32 = 3;

#[derive(Parser)]
#[command(
    name = "scholargraph",
    version,
    about = "Embedded academic knowledge-graph retrieval",
    propagate_version = true
)]
struct Cli {
    /// TOML config file (defaults apply for everything it omits).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Override one config value by dotted path, e.g. `--set propagation.alpha=0.3`.
    /// Repeatable; overrides beat the config file, flags beat overrides.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE", action = ArgAction::Append)]
    set: Vec<String>,

    /// Increase log verbosity (-v info, -vv debug, -vvv trace).
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a corpus directory into the graph and print build counts.
    Ingest {
        /// Corpus directory (defaults to `corpus_dir` from the config).
        #[arg(long, value_name = "DIR")]
        corpus: Option<PathBuf>,
        /// Write a JSON build summary to this path on a clean build.
        #[arg(long, value_name = "PATH")]
        snapshot: Option<PathBuf>,
    },
    /// Generate a deterministic synthetic corpus.
    Synth {
        /// Output directory (defaults to `corpus_dir` from the config).
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        /// Paper count (overrides `synth.paper_count`).
        #[arg(long, value_name = "N")]
        papers: Option<usize>,
        /// RNG seed (overrides `synth.rng_seed`).
        #[arg(long, value_name = "SEED")]
        seed: Option<u64>,
    },
    /// Search the corpus and print ranked results with score breakdowns.
    Search {
        /// Query text (or use --file).
        #[arg(value_name = "QUERY", required_unless_present = "file")]
        query: Option<String>,
        /// Read the query text from a file instead.
        #[arg(long, value_name = "PATH", conflicts_with = "query")]
        file: Option<PathBuf>,
        /// Query shape: keywords, question, abstract, idea or full_paper.
        #[arg(long, value_name = "KIND", default_value = "idea")]
        kind: String,
        /// Result type: paper or author.
        #[arg(long, value_name = "MODE", default_value = "paper")]
        mode: String,
        /// Number of results (overrides `ranking.top_k`).
        #[arg(short, long, value_name = "N")]
        k: Option<usize>,
        /// Output format: human or machine (overrides `output.format`).
        #[arg(long, value_name = "FORMAT")]
        format: Option<String>,
        /// Corpus directory (defaults to `corpus_dir` from the config).
        #[arg(long, value_name = "DIR")]
        corpus: Option<PathBuf>,
    },
    /// Print the effective configuration after file and overrides.
    PrintConfig,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 0 for --help/--version; everything else is usage.
            let code = if e.exit_code() == 0 {
                EXIT_OK
            } else {
                EXIT_USAGE
            };
            let _ = e.print();
            return code;
        }
    };
    init_logging(cli.verbose);

    let config = match load_config(&cli) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };

    let outcome = match cli.command {
        Command::Ingest { corpus, snapshot } => cmd_ingest(config, corpus, snapshot),
        Command::Synth { out, papers, seed } => cmd_synth(config, out, papers, seed),
        Command::Search {
            query,
            file,
            kind,
            mode,
            k,
            format,
            corpus,
        } => cmd_search(config, query, file, &kind, &mode, k, format, corpus),
        Command::PrintConfig => {
            print!("{}", config.to_toml_string());
            Ok(EXIT_OK)
        }
    };

    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Verbosity comes from the flag alone so runs stay reproducible regardless
/// of the caller's environment.
fn init_logging(verbosity: u8) {
    let level = match verbosity {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .init();
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut overrides = Vec::with_capacity(cli.set.len());
    for entry in &cli.set {
        let (key, value) = entry.split_once('=').ok_or_else(|| {
            Error::InvalidParameter(format!("--set expects KEY=VALUE, got `{entry}`"))
        })?;
        overrides.push((key.to_string(), value.to_string()));
    }
    RunConfig::load(cli.config.as_deref(), &overrides)
}

fn exit_code_for(error: &Error) -> i32 {
    match error {
        Error::InvalidParameter(_) | Error::Config(_) | Error::EmptyText => EXIT_USAGE,
        Error::Provider { .. } => EXIT_PROVIDER,
        _ => EXIT_DATA,
    }
}

fn cmd_ingest(
    mut config: RunConfig,
    corpus: Option<PathBuf>,
    snapshot: Option<PathBuf>,
) -> Result<i32> {
    if let Some(dir) = corpus {
        config.corpus_dir = dir.display().to_string();
    }
    let dir = PathBuf::from(&config.corpus_dir);
    let (graph, report) = ingest::prepare_graph(&dir, &config)?;
    print_build_summary(&dir, &graph, &report);

    for issue in &report.issues {
        eprintln!("corpus issue: {issue}");
    }
    if report.malformed_lines > 0 || report.dropped_invalid > 0 {
        eprintln!(
            "error: corpus contains {} malformed line(s) and {} invalid record(s)",
            report.malformed_lines, report.dropped_invalid
        );
        return Ok(EXIT_DATA);
    }
    if let Some(path) = snapshot {
        write_snapshot(&path, &config, &graph, &report)?;
        println!("snapshot written to {}", path.display());
    }
    Ok(EXIT_OK)
}

fn print_build_summary(dir: &Path, graph: &PropertyGraph, report: &LoadReport) {
    println!(
        "ingested {}: {} nodes, {} edges",
        dir.display(),
        graph.node_count(),
        graph.edge_count()
    );
    let nodes: Vec<String> = NodeKind::ALL
        .iter()
        .map(|&kind| format!("{} {}", kind.as_str(), graph.node_count_of_kind(kind)))
        .collect();
    println!("nodes: {}", nodes.join(", "));
    println!(
        "derived {} co-occurrence edge(s)",
        report.cooccur_edges_built
    );
    println!(
        "merged: {} paper(s), {} keyword(s); dropped: {} short-abstract, {} invalid, \
         {} malformed line(s), {} dangling edge(s), {} duplicate edge(s)",
        report.papers_merged,
        report.keywords_merged,
        report.dropped_short_abstract,
        report.dropped_invalid,
        report.malformed_lines,
        report.dangling_edges_dropped,
        report.duplicate_edges_dropped,
    );
}

/// A diffable JSON record of what the build produced: per-kind node and edge
/// counts plus the full load report. Two ingests of the same corpus write
/// byte-identical snapshots.
fn write_snapshot(
    path: &Path,
    config: &RunConfig,
    graph: &PropertyGraph,
    report: &LoadReport,
) -> Result<()> {
    let mut nodes = serde_json::Map::new();
    for kind in NodeKind::ALL {
        nodes.insert(
            kind.as_str().to_string(),
            graph.node_count_of_kind(kind).into(),
        );
    }
    let mut edges = serde_json::Map::new();
    for kind in EdgeKind::ALL {
        let count = graph.edges().filter(|e| e.kind == kind).count();
        edges.insert(kind.as_str().to_string(), count.into());
    }
    let doc = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "corpus_dir": config.corpus_dir,
        "node_count": graph.node_count(),
        "edge_count": graph.edge_count(),
        "nodes": nodes,
        "edges": edges,
        "report": report,
    });
    let text = serde_json::to_string_pretty(&doc).expect("snapshot serializes");
    std::fs::write(path, text).map_err(|e| Error::io(path, e))?;
    Ok(())
}

fn cmd_synth(
    mut config: RunConfig,
    out: Option<PathBuf>,
    papers: Option<usize>,
    seed: Option<u64>,
) -> Result<i32> {
    if let Some(dir) = out {
        config.corpus_dir = dir.display().to_string();
    }
    if let Some(n) = papers {
        config.synth.paper_count = n;
    }
    if let Some(s) = seed {
        config.synth.rng_seed = s;
    }
    config.validate()?;
    let dir = PathBuf::from(&config.corpus_dir);
    let stats = synth::generate_synthetic(&dir, &config)?;
    println!(
        "wrote synthetic corpus to {} (seed {})",
        dir.display(),
        config.synth.rng_seed
    );
    println!(
        "papers {}, authors {}, keywords {}, institutions {}, sources {}, topics {}, \
         subfields {}, fields {}, domains {}, edges {}, vector rows {}",
        stats.papers,
        stats.authors,
        stats.keywords,
        stats.institutions,
        stats.sources,
        stats.topics,
        stats.subfields,
        stats.fields,
        stats.domains,
        stats.edges,
        stats.vector_rows,
    );
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    mut config: RunConfig,
    query: Option<String>,
    file: Option<PathBuf>,
    kind: &str,
    mode: &str,
    k: Option<usize>,
    format: Option<String>,
    corpus: Option<PathBuf>,
) -> Result<i32> {
    let kind: QueryKind = kind.parse()?;
    let mode: SearchMode = mode.parse()?;
    if let Some(dir) = corpus {
        config.corpus_dir = dir.display().to_string();
    }
    if let Some(n) = k {
        config.ranking.top_k = n;
    }
    if let Some(name) = format {
        config.output.format = name.parse()?;
    }
    config.validate()?;

    let text = match (query, file) {
        (Some(q), None) => q,
        (None, Some(path)) => std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?,
        // clap enforces exactly one of the two.
        _ => unreachable!("query text and file are mutually exclusive"),
    };
    let input = QueryInput::new(kind, text)?;

    let dir = PathBuf::from(&config.corpus_dir);
    let (graph, report) = ingest::prepare_graph(&dir, &config)?;
    if report.total_dropped() > 0 {
        log::info!(
            "corpus loaded with {} dropped/merged record(s); run `ingest` for details",
            report.total_dropped()
        );
    }

    let format = config.output.format;
    let context = SearchContext::new(graph, config)?;
    let outcome = context.search(&input, mode)?;
    match format {
        OutputFormat::Human => print!("{}", output::render_human(&outcome)),
        OutputFormat::Machine => print!("{}", output::render_machine(&outcome, kind.as_str())),
    }
    Ok(EXIT_OK)
}
