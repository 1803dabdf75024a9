//! Dynamic-versus-static benchmark over random edge-deletion streams.
//!
//! Each trial deletes one uniformly chosen live edge, times the tracked
//! update on the persistent state, then times a from-scratch greedy run on
//! the same post-deletion graph. Calls shorter than [`MIN_TIMED`] are
//! repeated until the cumulative time reaches it and averaged.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::connectivity::{residual_connectivity, Score};
use crate::dynamic::{SpannerState, TrackError, UpdateEvent};
use crate::graph::{NodeId, UndirectedGraph};
use crate::greedy::{check_budget, SpannerError, SpannerSet};
use crate::io::{read_graph, GraphFormat, IoError, LabeledGraph};
use crate::oracle::static_recompute;

/// Cumulative time each measured call is repeated up to.
pub const MIN_TIMED: Duration = Duration::from_millis(10);

pub const DEFAULT_DELETIONS: usize = 50;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("{deletions} deletions requested but the graph has only {edges} edges")]
    TooManyDeletions { deletions: usize, edges: usize },
    #[error(transparent)]
    Spanner(#[from] SpannerError),
    #[error(transparent)]
    Track(#[from] TrackError),
    #[error("no trials to aggregate")]
    Empty,
    #[error("cannot write {path}: {message}")]
    Write { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub dataset: PathBuf,
    pub format: Option<GraphFormat>,
    pub k: usize,
    pub deletions: usize,
    pub seed: u64,
    pub output: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub trial: usize,
    pub edge: (NodeId, NodeId),
    pub static_time: Duration,
    pub dynamic_time: Duration,
    pub speedup: f64,
    pub static_objective: Score,
    pub dynamic_objective: Score,
    pub static_set: Vec<NodeId>,
    pub dynamic_set: Vec<NodeId>,
}

impl TrialResult {
    /// `dynamic_objective / static_objective`; above 1.0 means the tracked
    /// set leaves more connectivity than recomputation would.
    pub fn quality_ratio(&self) -> f64 {
        match (self.dynamic_objective, self.static_objective) {
            (0, 0) => 1.0,
            (d, 0) if d > 0 => f64::INFINITY,
            (d, s) => d as f64 / s as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedupSummary {
    pub gmean: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualitySummary {
    pub max_ratio: f64,
    pub regressions: usize,
}

/// Times `f`, repeating until [`MIN_TIMED`] has elapsed in total. `setup`
/// runs before every repetition, outside the timed region.
fn time_repeated<S, T>(mut setup: impl FnMut() -> S, mut f: impl FnMut(S) -> T) -> (Duration, T) {
    let mut total = Duration::ZERO;
    let mut reps = 0u32;
    loop {
        let input = setup();
        let start = Instant::now();
        let out = f(input);
        total += start.elapsed();
        reps += 1;
        if total >= MIN_TIMED {
            return (total / reps, out);
        }
    }
}

pub fn run_deletion_stream(config: &BenchConfig) -> Result<Vec<TrialResult>, BenchError> {
    let data = read_graph(&config.dataset, config.format)?;
    run_stream_on(&data.graph, config.k, config.deletions, config.seed)
}

/// Runs the protocol on an in-memory graph.
pub fn run_stream_on(
    graph: &UndirectedGraph,
    k: usize,
    deletions: usize,
    seed: u64,
) -> Result<Vec<TrialResult>, BenchError> {
    check_budget(k, graph.node_count())?;
    if deletions > graph.edge_count() {
        return Err(BenchError::TooManyDeletions {
            deletions,
            edges: graph.edge_count(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut live: Vec<(NodeId, NodeId)> = graph.edges().collect();
    let mut state = SpannerState::init(graph.clone(), k)?;
    let mut current = graph.clone();
    let mut results = Vec::with_capacity(deletions);

    for trial in 0..deletions {
        let edge = live.swap_remove(rng.gen_range(0..live.len()));
        let event = UpdateEvent::DeleteEdge(edge.0, edge.1);

        let (dynamic_time, (next_state, dynamic_set)) = time_repeated(
            || state.clone(),
            |mut s| {
                let set = s.handle_update(event);
                (s, set)
            },
        );
        state = next_state;
        let dynamic_set = dynamic_set?;

        current.delete_edge(edge.0, edge.1).expect("edge is live");
        let (static_time, static_set) =
            time_repeated(|| (), |_| static_recompute(&current, k));
        let static_set = static_set?;

        let objective = |set: &SpannerSet| {
            residual_connectivity(&current, &set.removal_mask(current.node_count()))
        };
        results.push(TrialResult {
            trial,
            edge,
            static_time,
            dynamic_time,
            speedup: static_time.as_secs_f64() / dynamic_time.as_secs_f64(),
            static_objective: objective(&static_set),
            dynamic_objective: objective(&dynamic_set),
            static_set: static_set.sorted_nodes(),
            dynamic_set: dynamic_set.sorted_nodes(),
        });
    }
    Ok(results)
}

/// Geometric mean, minimum and maximum of the per-trial speedups.
pub fn aggregate(results: &[TrialResult]) -> Result<SpeedupSummary, BenchError> {
    aggregate_speedups(results.iter().map(|r| r.speedup))
}

pub fn aggregate_speedups(
    speedups: impl IntoIterator<Item = f64>,
) -> Result<SpeedupSummary, BenchError> {
    let mut count = 0usize;
    let mut log_sum = 0.0;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for s in speedups {
        count += 1;
        log_sum += s.ln();
        min = min.min(s);
        max = max.max(s);
    }
    if count == 0 {
        return Err(BenchError::Empty);
    }
    Ok(SpeedupSummary {
        gmean: (log_sum / count as f64).exp(),
        min,
        max,
    })
}

pub fn quality(results: &[TrialResult]) -> QualitySummary {
    let ratios = results.iter().map(TrialResult::quality_ratio);
    QualitySummary {
        max_ratio: ratios.clone().fold(1.0, f64::max),
        regressions: ratios.filter(|&r| r > 1.0).count(),
    }
}

/// Fixed six-decimal rendering with trailing zeros trimmed (`4.0`, `2.35`).
pub fn format_ratio(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{x:.6}");
    let trimmed = s.trim_end_matches('0');
    if trimmed.ends_with('.') {
        format!("{trimmed}0")
    } else {
        trimmed.to_owned()
    }
}

pub const CSV_HEADER: [&str; 8] = [
    "trial",
    "edge_u",
    "edge_v",
    "static_ms",
    "dynamic_ms",
    "speedup",
    "static_objective",
    "dynamic_objective",
];

/// `results.csv` next to which `results.summary.csv` is written.
pub fn summary_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}.summary.csv"))
}

fn write_err(path: &Path, e: impl std::fmt::Display) -> BenchError {
    BenchError::Write {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Writes one row per trial to `path` and the aggregate rows to the
/// sibling summary file (header only on both when `results` is empty).
pub fn emit_csv(results: &[TrialResult], labels: &[String], path: &Path) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| write_err(path, e))?;
    w.write_record(CSV_HEADER).map_err(|e| write_err(path, e))?;
    for r in results {
        let ms = |d: Duration| format!("{:.6}", d.as_secs_f64() * 1e3);
        w.write_record([
            r.trial.to_string(),
            labels[r.edge.0].clone(),
            labels[r.edge.1].clone(),
            ms(r.static_time),
            ms(r.dynamic_time),
            format_ratio(r.speedup),
            r.static_objective.to_string(),
            r.dynamic_objective.to_string(),
        ])
        .map_err(|e| write_err(path, e))?;
    }
    w.flush().map_err(|e| write_err(path, e))?;

    let summary = summary_path(path);
    let mut w = csv::Writer::from_path(&summary).map_err(|e| write_err(&summary, e))?;
    w.write_record(["metric", "value"])
        .map_err(|e| write_err(&summary, e))?;
    if let Ok(s) = aggregate(results) {
        let q = quality(results);
        let rows = [
            ("trials", results.len().to_string()),
            ("gmean", format_ratio(s.gmean)),
            ("min", format_ratio(s.min)),
            ("max", format_ratio(s.max)),
            ("max_quality_ratio", format_ratio(q.max_ratio)),
            ("quality_regressions", q.regressions.to_string()),
        ];
        for (k, v) in rows {
            w.write_record([k, &v]).map_err(|e| write_err(&summary, e))?;
        }
    }
    w.flush().map_err(|e| write_err(&summary, e))
}

/// Seeded synthetic graphs for datasets that are not shipped.
pub mod synthetic {
    use super::*;

    /// G(n, p) random graph.
    pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> UndirectedGraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        UndirectedGraph::from_edges(n, edges).expect("valid endpoints")
    }

    /// Uniform random graph with exactly `m` edges.
    pub fn gnm(n: usize, m: usize, seed: u64) -> UndirectedGraph {
        assert!(m <= n * n.saturating_sub(1) / 2, "too many edges for n");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = UndirectedGraph::new(n);
        while g.edge_count() < m {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b {
                g.insert_edge(a, b).expect("valid endpoints");
            }
        }
        g
    }

    /// Heavy-tailed random graph with exactly `m` edges: endpoints are drawn
    /// with probability proportional to `(i + 1)^(-1 / (exponent - 1))`
    /// (Chung–Lu weights), rejecting self-loops and repeats.
    pub fn chung_lu(n: usize, m: usize, exponent: f64, seed: u64) -> UndirectedGraph {
        assert!(exponent > 2.0, "degree exponent must exceed 2");
        assert!(m <= n * n.saturating_sub(1) / 4, "too dense for rejection sampling");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha = 1.0 / (exponent - 1.0);
        let mut cumulative = Vec::with_capacity(n);
        let mut total = 0.0;
        for i in 0..n {
            total += ((i + 1) as f64).powf(-alpha);
            cumulative.push(total);
        }
        let draw = |rng: &mut ChaCha8Rng| {
            let x = rng.gen_range(0.0..total);
            cumulative.partition_point(|&c| c <= x).min(n - 1)
        };
        let mut g = UndirectedGraph::new(n);
        while g.edge_count() < m {
            let (a, b) = (draw(&mut rng), draw(&mut rng));
            if a != b {
                g.insert_edge(a, b).expect("valid endpoints");
            }
        }
        g
    }

    pub fn labeled(g: UndirectedGraph) -> LabeledGraph {
        LabeledGraph::unlabeled(g)
    }
}
