//! `parlouvain`: run community detection on a graph file or a generated
//! fixture and report modularity, the dendrogram and per-process timings.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use parlouvain::{
    emit_timing, format_real, generate_ring_of_cliques, read_graph, run, write_dendrogram,
    write_partition, Engine, Format, LouvainConfig, ParsedGraph,
};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InputFormat {
    Edgelist,
    Matrixmarket,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EngineArg {
    Parallel,
    Sequential,
}

#[derive(Debug, Parser)]
#[command(
    name = "parlouvain",
    version,
    about = "Parallel Louvain community detection"
)]
struct Args {
    /// Graph file to read.
    #[arg(
        long,
        conflicts_with = "generate",
        required_unless_present = "generate"
    )]
    input: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "edgelist")]
    format: InputFormat,

    /// Generate a synthetic graph instead of reading one, e.g. `ring:10,6`.
    #[arg(long, value_name = "ring:K,C")]
    generate: Option<String>,

    /// Relative modularity change that ends a level.
    #[arg(long, default_value_t = 1e-6)]
    theta: f64,

    /// Minimum modularity gain for an extra level.
    #[arg(long = "big-theta", default_value_t = 1e-6)]
    big_theta: f64,

    #[arg(long = "max-iters", default_value_t = 100)]
    max_iters: usize,

    #[arg(long, default_value_t = 1)]
    threads: usize,

    #[arg(long, value_enum, default_value = "parallel")]
    engine: EngineArg,

    /// Write the dendrogram here.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Write the final `vertex community` assignment here.
    #[arg(long)]
    partition: Option<PathBuf>,

    /// Write the timing report here.
    #[arg(long)]
    timing: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    /// Bad input or arguments; exit code 2.
    Input(String),
    /// Failure writing results; exit code 1.
    Output(String),
}

impl From<parlouvain::Error> for CliError {
    fn from(e: parlouvain::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

fn parse_generator(spec: &str) -> Result<ParsedGraph, CliError> {
    let bad = || CliError::Input(format!("expected --generate ring:K,C, got `{spec}`"));
    let params = spec.strip_prefix("ring:").ok_or_else(bad)?;
    let (k, c) = params.split_once(',').ok_or_else(bad)?;
    let k: usize = k.trim().parse().map_err(|_| bad())?;
    let c: usize = c.trim().parse().map_err(|_| bad())?;
    Ok(ParsedGraph::identity(generate_ring_of_cliques(k, c)?))
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Output(format!("cannot write {}: {e}", path.display())))
}

fn execute(args: &Args) -> Result<(), CliError> {
    let input = match (&args.generate, &args.input) {
        (Some(spec), _) => parse_generator(spec)?,
        (None, Some(path)) => {
            let format = match args.format {
                InputFormat::Edgelist => Format::EdgeList,
                InputFormat::Matrixmarket => Format::MatrixMarket,
            };
            read_graph(path, format)?
        }
        (None, None) => {
            return Err(CliError::Input(
                "either --input or --generate is required".into(),
            ))
        }
    };

    let config = LouvainConfig {
        inner_threshold: args.theta,
        outer_threshold: args.big_theta,
        max_inner_iterations: args.max_iters,
        worker_count: args.threads,
        engine: match args.engine {
            EngineArg::Parallel => Engine::Parallel,
            EngineArg::Sequential => Engine::Sequential,
        },
    };
    let outcome = run(&input.graph, &config)?;
    let modularity = outcome
        .dendrogram
        .final_modularity()
        .expect("a run records at least one level");

    if let Some(path) = &args.output {
        write_file(
            path,
            &write_dendrogram(&outcome.dendrogram, &input.original_ids)?,
        )?;
    }
    if let Some(path) = &args.partition {
        let labels = outcome.dendrogram.final_partition()?;
        write_file(path, &write_partition(&labels, &input.original_ids))?;
    }
    if let Some(path) = &args.timing {
        write_file(path, &emit_timing(&outcome.timing))?;
    }
    println!("modularity={}", format_real(modularity));
    Ok(())
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors.
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Output(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
