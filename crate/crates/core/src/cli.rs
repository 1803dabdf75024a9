//! Command-line front end: `static`, `track` and `bench` subcommands.
//!
//! Results go to standard output, one record per line; diagnostics go to
//! standard error. Exit status is 0 on success and 2 on any usage or input
//! error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::bench::{self, BenchConfig};
use crate::connectivity::{residual_connectivity, Score};
use crate::dynamic::SpannerState;
use crate::greedy::{top_k_greedy, SpannerSet};
use crate::io::{parse_updates, read_graph, read_text, GraphFormat, LabeledGraph};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "shspan", version, about = "Top-k structural hole spanners by pairwise connectivity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct GraphArgs {
    /// Graph file (edge list, or GML when the extension is .gml)
    #[arg(long)]
    pub graph: PathBuf,
    /// Number of spanners
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
    /// Override format detection
    #[arg(long)]
    pub format: Option<GraphFormat>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Identify Top-k with the static greedy
    Static {
        #[command(flatten)]
        graph: GraphArgs,
        /// Emit JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// Track Top-k across an update stream of `d <u> <v>` lines
    Track {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        updates: PathBuf,
        /// Print the set after every update
        #[arg(long)]
        emit_each: bool,
        #[arg(long)]
        json: bool,
    },
    /// Time tracked updates against recomputation on a random deletion stream
    Bench {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = bench::DEFAULT_DELETIONS)]
        deletions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-trial CSV; the summary goes to the sibling `.summary.csv`
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Serialize)]
struct SpannerJson<'a> {
    label: &'a str,
    score: Score,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    spanners: Vec<SpannerJson<'a>>,
    residual_connectivity: Score,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn load(args: &GraphArgs) -> Result<(LabeledGraph, usize), Failure> {
    let data = read_graph(&args.graph, args.format)?;
    let k = usize::try_from(args.k).map_err(|_| Failure("k too large".into()))?;
    if k > data.graph.node_count() {
        return Err(Failure(format!(
            "k={k} exceeds the {} nodes of {}",
            data.graph.node_count(),
            args.graph.display()
        )));
    }
    Ok((data, k))
}

fn report(
    out: &mut dyn Write,
    data: &LabeledGraph,
    graph: &crate::graph::UndirectedGraph,
    set: &SpannerSet,
    json: bool,
) -> Result<(), Failure> {
    let residual = residual_connectivity(graph, &set.removal_mask(graph.node_count()));
    if json {
        let doc = ReportJson {
            spanners: set
                .entries()
                .iter()
                .map(|e| SpannerJson {
                    label: data.label(e.node),
                    score: e.score,
                })
                .collect(),
            residual_connectivity: residual,
        };
        writeln!(out, "{}", serde_json::to_string(&doc)?)?;
    } else {
        for e in set.entries() {
            writeln!(out, "spanner {} {}", data.label(e.node), e.score)?;
        }
        writeln!(out, "residual {residual}")?;
    }
    Ok(())
}

fn one_line(data: &LabeledGraph, set: &SpannerSet) -> String {
    set.entries()
        .iter()
        .map(|e| format!("{}:{}", data.label(e.node), e.score))
        .collect::<Vec<_>>()
        .join(" ")
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Static { graph, json } => {
            let (data, k) = load(&graph)?;
            let (set, _) = top_k_greedy(&data.graph, k)?;
            report(out, &data, &data.graph, &set, json)
        }
        Command::Track {
            graph,
            updates,
            emit_each,
            json,
        } => {
            let (data, k) = load(&graph)?;
            let events = parse_updates(&read_text(&updates)?, &data)
                .map_err(|e| Failure(format!("{}: {e}", updates.display())))?;
            let mut state = SpannerState::init(data.graph.clone(), k)?;
            let mut set = state.spanners();
            for (i, event) in events.into_iter().enumerate() {
                set = state
                    .handle_update(event)
                    .map_err(|e| Failure(format!("{}: update {}: {e}", updates.display(), i + 1)))?;
                if emit_each {
                    writeln!(out, "update {} {}", i + 1, one_line(&data, &set))?;
                }
            }
            report(out, &data, state.graph(), &set, json)
        }
        Command::Bench {
            graph,
            deletions,
            seed,
            out: csv_path,
        } => {
            let (data, k) = load(&graph)?;
            let config = BenchConfig {
                dataset: graph.graph.clone(),
                format: graph.format,
                k,
                deletions,
                seed,
                output: csv_path,
            };
            let results = bench::run_stream_on(&data.graph, config.k, config.deletions, config.seed)?;
            bench::emit_csv(&results, &data.labels, &config.output)?;
            match bench::aggregate(&results) {
                Ok(s) => {
                    let q = bench::quality(&results);
                    writeln!(out, "trials {}", results.len())?;
                    writeln!(out, "gmean {}", bench::format_ratio(s.gmean))?;
                    writeln!(out, "min {}", bench::format_ratio(s.min))?;
                    writeln!(out, "max {}", bench::format_ratio(s.max))?;
                    writeln!(out, "max_quality_ratio {}", bench::format_ratio(q.max_ratio))?;
                    writeln!(out, "quality_regressions {}", q.regressions)?;
                }
                Err(_) => writeln!(out, "trials 0")?,
            }
            Ok(())
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => EXIT_OK,
        Err(Failure(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_USAGE
        }
    }
}
