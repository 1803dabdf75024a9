//! Static greedy spanner identification: repeatedly remove the node with
//! the highest connectivity score from a working copy of the graph.

use std::cmp::Reverse;

use serde::Serialize;
use thiserror::Error;

use crate::connectivity::{ComponentScorer, Score, ScoreTable};
use crate::graph::{NodeId, UndirectedGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpannerError {
    #[error("spanner budget k={k} must lie in [1, {node_count}]")]
    InvalidBudget { k: usize, node_count: usize },
}

pub(crate) fn check_budget(k: usize, node_count: usize) -> Result<(), SpannerError> {
    if k == 0 || k > node_count {
        Err(SpannerError::InvalidBudget { k, node_count })
    } else {
        Ok(())
    }
}

/// Total order used for every "highest score" decision: larger score wins,
/// equal scores go to the lower node id.
#[inline]
pub fn rank(score: Score, node: NodeId) -> (Score, Reverse<NodeId>) {
    (score, Reverse(node))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Selection {
    pub node: NodeId,
    pub score: Score,
}

/// Up to `capacity` distinct spanners with the score they carried when
/// selected, in selection order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpannerSet {
    entries: Vec<Selection>,
    capacity: usize,
}

impl SpannerSet {
    pub fn new(capacity: usize) -> Self {
        Self {
            entries: Vec::with_capacity(capacity),
            capacity,
        }
    }

    /// Appends a selection. Panics on a duplicate node or when full.
    pub fn push(&mut self, node: NodeId, score: Score) {
        assert!(self.entries.len() < self.capacity, "spanner set is full");
        assert!(!self.contains(node), "node {node} already selected");
        self.entries.push(Selection { node, score });
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.entries.iter().any(|e| e.node == node)
    }

    pub fn entries(&self) -> &[Selection] {
        &self.entries
    }

    pub fn nodes(&self) -> Vec<NodeId> {
        self.entries.iter().map(|e| e.node).collect()
    }

    /// Node ids in ascending order, for set comparisons.
    pub fn sorted_nodes(&self) -> Vec<NodeId> {
        let mut nodes = self.nodes();
        nodes.sort_unstable();
        nodes
    }

    /// Removal mask over `node_count` nodes with the spanners flagged.
    pub fn removal_mask(&self, node_count: usize) -> Vec<bool> {
        let mut mask = vec![false; node_count];
        for e in &self.entries {
            mask[e.node] = true;
        }
        mask
    }
}

pub(crate) struct GreedyRun {
    pub spanners: SpannerSet,
    pub initial: Option<ScoreTable>,
    pub residual: ScoreTable,
}

pub(crate) fn run_greedy(
    g: &UndirectedGraph,
    k: usize,
    scorer: &mut ComponentScorer,
    keep_initial: bool,
) -> Result<GreedyRun, SpannerError> {
    let n = g.node_count();
    check_budget(k, n)?;
    let mut removed = vec![false; n];
    let mut scores = ScoreTable::zeros(n);
    scorer.sweep(g, None, &mut scores);
    let initial = keep_initial.then(|| scores.clone());

    let mut spanners = SpannerSet::new(k);
    while spanners.len() < k {
        let pick = (0..n)
            .filter(|&v| !removed[v])
            .max_by_key(|&v| rank(scores[v], v))
            .expect("budget checked against node count");
        spanners.push(pick, scores[pick]);
        removed[pick] = true;
        scores.set(pick, 0);

        // Only the component that lost `pick` changes; its fragments are
        // rooted at the surviving neighbors.
        scorer.begin();
        for &u in g.neighbors(pick) {
            if removed[u] || scorer.visited(u) {
                continue;
            }
            for &(v, s) in scorer.score_from(g, u, Some(&removed)) {
                scores.set(v, s);
            }
        }
    }

    Ok(GreedyRun {
        spanners,
        initial,
        residual: scores,
    })
}

/// Greedy top-k spanners of `g` and the score table of the residual graph
/// `g \ Top-k` (removed nodes score 0). `g` itself is not modified.
pub fn top_k_greedy(
    g: &UndirectedGraph,
    k: usize,
) -> Result<(SpannerSet, ScoreTable), SpannerError> {
    let mut scorer = ComponentScorer::new(g.node_count());
    let run = run_greedy(g, k, &mut scorer, false)?;
    Ok((run.spanners, run.residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectivity::{residual_connectivity, total_pairwise_connectivity};

    fn graph(n: usize, edges: &[(NodeId, NodeId)]) -> UndirectedGraph {
        UndirectedGraph::from_edges(n, edges.iter().copied()).unwrap()
    }

    #[test]
    fn path_of_five_picks_center() {
        let g = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let (set, residual) = top_k_greedy(&g, 1).unwrap();
        assert_eq!(set.entries(), &[Selection { node: 2, score: 8 }]);
        assert_eq!(residual.as_slice(), &[1, 1, 0, 1, 1]);
    }

    #[test]
    fn joined_triangles_pick_cut_vertex() {
        let g = graph(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]);
        let (set, _) = top_k_greedy(&g, 1).unwrap();
        assert_eq!(set.nodes(), vec![2]);
    }

    #[test]
    fn clique_ties_break_by_lowest_id() {
        let g = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let (set, residual) = top_k_greedy(&g, 2).unwrap();
        assert_eq!(
            set.entries(),
            &[Selection { node: 0, score: 3 }, Selection { node: 1, score: 2 }]
        );
        assert_eq!(residual_connectivity(&g, &set.removal_mask(4)), 1);
        assert_eq!(residual.as_slice(), &[0, 0, 1, 1]);
    }

    #[test]
    fn selection_scores_telescope() {
        let g = graph(
            8,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6), (6, 7)],
        );
        let (set, _) = top_k_greedy(&g, 3).unwrap();
        let removed: Score = set.entries().iter().map(|e| e.score).sum();
        assert_eq!(
            residual_connectivity(&g, &set.removal_mask(8)),
            total_pairwise_connectivity(&g) - removed
        );
    }

    #[test]
    fn budget_is_checked() {
        let g = graph(3, &[(0, 1)]);
        assert!(top_k_greedy(&g, 0).is_err());
        assert!(top_k_greedy(&g, 4).is_err());
        assert!(top_k_greedy(&g, 3).is_ok());
    }

    #[test]
    fn edgeless_graph_selects_lowest_ids() {
        let (set, _) = top_k_greedy(&UndirectedGraph::new(3), 2).unwrap();
        assert_eq!(set.nodes(), vec![0, 1]);
    }
}
