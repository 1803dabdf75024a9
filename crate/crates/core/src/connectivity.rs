//! Pairwise connectivity and per-node connectivity scores.
//!
//! `P(G)` is stored as a count of *unordered* connected pairs, i.e. half of
//! the ordered-pair sum. Every selection made on top of these numbers is
//! invariant to that factor.
//!
//! The score of a node is how much `P` drops when the node is removed:
//! the node's own `s - 1` pairs plus every pair its removal disconnects.
//! [`ComponentScorer`] computes this for a whole component with a single
//! articulation-point DFS; [`node_score`] and [`node_score_component`] are
//! the per-node traversals it is checked against.

use std::collections::VecDeque;
use std::ops::Index;

use thiserror::Error;

use crate::graph::{ComponentIndex, NodeId, UndirectedGraph};

/// Count of unordered connected node pairs.
pub type Score = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConnectivityError {
    #[error("component index is stale at node {0}")]
    StaleComponents(NodeId),
    #[error("members span more than one component ({0} and {1})")]
    MixedComponents(NodeId, NodeId),
}

/// `s * (s - 1) / 2`.
#[inline]
pub fn pairs(size: usize) -> Score {
    let s = size as Score;
    s * s.saturating_sub(1) / 2
}

/// Per-node scores indexed by [`NodeId`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ScoreTable {
    scores: Vec<Score>,
}

impl ScoreTable {
    pub fn zeros(node_count: usize) -> Self {
        Self {
            scores: vec![0; node_count],
        }
    }

    pub fn get(&self, v: NodeId) -> Score {
        self.scores[v]
    }

    pub fn set(&mut self, v: NodeId, score: Score) {
        self.scores[v] = score;
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn as_slice(&self) -> &[Score] {
        &self.scores
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, Score)> + '_ {
        self.scores.iter().copied().enumerate()
    }
}

impl From<Vec<Score>> for ScoreTable {
    fn from(scores: Vec<Score>) -> Self {
        Self { scores }
    }
}

impl Index<NodeId> for ScoreTable {
    type Output = Score;

    fn index(&self, v: NodeId) -> &Score {
        &self.scores[v]
    }
}

/// Total pairwise connectivity `P(G)`.
pub fn total_pairwise_connectivity(g: &UndirectedGraph) -> Score {
    g.components().sizes().iter().map(|&s| pairs(s)).sum()
}

/// `P(G \ removed)` where `removed[v]` marks deleted nodes.
pub fn residual_connectivity(g: &UndirectedGraph, removed: &[bool]) -> Score {
    let mut seen = removed.to_vec();
    let mut queue = VecDeque::new();
    let mut total = 0;
    for s in 0..g.node_count() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        queue.push_back(s);
        let mut size = 0;
        while let Some(v) = queue.pop_front() {
            size += 1;
            for &u in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        total += pairs(size);
    }
    total
}

/// `c(i) = P(G) - P(G \ {i})`, computed over the whole graph.
pub fn node_score(g: &UndirectedGraph, i: NodeId) -> Score {
    let mut removed = vec![false; g.node_count()];
    let before = residual_connectivity(g, &removed);
    removed[i] = true;
    before - residual_connectivity(g, &removed)
}

/// `c(i) = P(C(i)) - P(C(i) \ {i})`: only `i`'s component is traversed.
///
/// Returns [`ConnectivityError::StaleComponents`] if the fragments found do
/// not add up to the component recorded in `comp`.
pub fn node_score_component(
    g: &UndirectedGraph,
    comp: &ComponentIndex,
    i: NodeId,
) -> Result<Score, ConnectivityError> {
    let label = comp.label(i);
    let mut seen = vec![false; g.node_count()];
    seen[i] = true;
    let mut queue = VecDeque::new();
    let mut lost = 0;
    let mut reached = 1;
    for &start in g.neighbors(i) {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut fragment = 0;
        while let Some(v) = queue.pop_front() {
            if comp.label(v) != label {
                return Err(ConnectivityError::StaleComponents(v));
            }
            fragment += 1;
            for &u in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        lost += pairs(fragment);
        reached += fragment;
    }
    let size = comp.size(label);
    if reached != size {
        return Err(ConnectivityError::StaleComponents(i));
    }
    Ok(pairs(size) - lost)
}

/// Scores for `members`, all of which must lie in one component, via a
/// single articulation-point DFS over that component.
pub fn batch_component_scores(
    g: &UndirectedGraph,
    comp: &ComponentIndex,
    members: &[NodeId],
) -> Result<Vec<(NodeId, Score)>, ConnectivityError> {
    let Some(&root) = members.first() else {
        return Ok(Vec::new());
    };
    let label = comp.label(root);
    if let Some(&other) = members.iter().find(|&&v| comp.label(v) != label) {
        return Err(ConnectivityError::MixedComponents(root, other));
    }
    let mut scorer = ComponentScorer::new(g.node_count());
    scorer.begin();
    let scored = scorer.score_from(g, root, None);
    if scored.len() != comp.size(label) {
        return Err(ConnectivityError::StaleComponents(root));
    }
    if let Some(&(v, _)) = scored.iter().find(|&&(v, _)| comp.label(v) != label) {
        return Err(ConnectivityError::StaleComponents(v));
    }
    let mut by_node = vec![0; g.node_count()];
    for &(v, s) in scored {
        by_node[v] = s;
    }
    Ok(members.iter().map(|&v| (v, by_node[v])).collect())
}

/// Scores every node of `g`.
pub fn score_all(g: &UndirectedGraph) -> ScoreTable {
    let mut table = ScoreTable::zeros(g.node_count());
    let mut scorer = ComponentScorer::new(g.node_count());
    scorer.sweep(g, None, &mut table);
    table
}

const NO_PARENT: u32 = u32::MAX;

/// Reusable articulation-point scorer.
///
/// One DFS over a component of size `s` yields, for every node `v`, the
/// sizes of the child subtrees that become detached when `v` is removed
/// (children `c` with `low[c] >= disc[v]`). Whatever remains forms one more
/// fragment of size `s - 1 - detached`. The score is then
/// `pairs(s) - sum(pairs(fragment))`.
///
/// Visited marks are epoch-stamped, so [`begin`](Self::begin) is O(1) and
/// several components can be scored within one epoch without re-visiting.
#[derive(Debug, Clone)]
pub struct ComponentScorer {
    epoch: u32,
    stamp: Vec<u32>,
    disc: Vec<u32>,
    low: Vec<u32>,
    subtree: Vec<u32>,
    detached: Vec<u32>,
    detached_pairs: Vec<Score>,
    stack: Vec<(NodeId, u32, u32)>,
    visited: Vec<NodeId>,
    scored: Vec<(NodeId, Score)>,
}

impl ComponentScorer {
    pub fn new(node_count: usize) -> Self {
        Self {
            epoch: 0,
            stamp: vec![0; node_count],
            disc: vec![0; node_count],
            low: vec![0; node_count],
            subtree: vec![0; node_count],
            detached: vec![0; node_count],
            detached_pairs: vec![0; node_count],
            stack: Vec::new(),
            visited: Vec::new(),
            scored: Vec::new(),
        }
    }

    /// Starts a new epoch: every node counts as unvisited again.
    pub fn begin(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
    }

    /// Whether `v` was reached by a `score_from` call in this epoch.
    #[inline]
    pub fn visited(&self, v: NodeId) -> bool {
        self.stamp[v] == self.epoch
    }

    /// Scores the component of `root` in `g` minus the nodes flagged in
    /// `removed`. Returns `(node, score)` for every node of that component;
    /// the root comes first.
    pub fn score_from(
        &mut self,
        g: &UndirectedGraph,
        root: NodeId,
        removed: Option<&[bool]>,
    ) -> &[(NodeId, Score)] {
        debug_assert!(removed.is_none_or(|m| !m[root]));
        self.visited.clear();
        self.scored.clear();
        let mut timer = 0u32;
        self.enter(root, &mut timer);
        self.stack.push((root, NO_PARENT, 0));

        while let Some(top) = self.stack.last_mut() {
            let (v, parent, next) = *top;
            let neighbors = g.neighbors(v);
            if (next as usize) < neighbors.len() {
                top.2 += 1;
                let u = neighbors[next as usize];
                if u as u32 == parent || removed.is_some_and(|m| m[u]) {
                    continue;
                }
                if self.stamp[u] == self.epoch {
                    self.low[v] = self.low[v].min(self.disc[u]);
                } else {
                    self.enter(u, &mut timer);
                    self.stack.push((u, v as u32, 0));
                }
            } else {
                self.stack.pop();
                if parent != NO_PARENT {
                    let p = parent as usize;
                    self.subtree[p] += self.subtree[v];
                    self.low[p] = self.low[p].min(self.low[v]);
                    if self.low[v] >= self.disc[p] {
                        self.detached[p] += self.subtree[v];
                        self.detached_pairs[p] += pairs(self.subtree[v] as usize);
                    }
                }
            }
        }

        let size = self.visited.len();
        let whole = pairs(size);
        for &v in &self.visited {
            let rest = size - 1 - self.detached[v] as usize;
            self.scored
                .push((v, whole - self.detached_pairs[v] - pairs(rest)));
        }
        &self.scored
    }

    /// Scores every non-removed node of `g` into `table`, starting a fresh
    /// epoch. Removed nodes are left untouched.
    pub fn sweep(&mut self, g: &UndirectedGraph, removed: Option<&[bool]>, table: &mut ScoreTable) {
        self.begin();
        for root in 0..g.node_count() {
            if self.visited(root) || removed.is_some_and(|m| m[root]) {
                continue;
            }
            for &(v, s) in self.score_from(g, root, removed) {
                table.set(v, s);
            }
        }
    }

    #[inline]
    fn enter(&mut self, v: NodeId, timer: &mut u32) {
        self.stamp[v] = self.epoch;
        self.disc[v] = *timer;
        self.low[v] = *timer;
        *timer += 1;
        self.subtree[v] = 1;
        self.detached[v] = 0;
        self.detached_pairs[v] = 0;
        self.visited.push(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(NodeId, NodeId)]) -> UndirectedGraph {
        UndirectedGraph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn clique(n: usize) -> UndirectedGraph {
        let edges: Vec<_> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        graph(n, &edges)
    }

    #[test]
    fn totals() {
        assert_eq!(total_pairwise_connectivity(&UndirectedGraph::new(4)), 0);
        let g = graph(5, &[(0, 1), (2, 3), (3, 4)]);
        assert_eq!(total_pairwise_connectivity(&g), 4);
    }

    #[test]
    fn per_node_scores() {
        let p3 = graph(3, &[(0, 1), (1, 2)]);
        assert_eq!(node_score(&p3, 0), 2);
        assert_eq!(node_score(&p3, 1), 3);
        let star = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(node_score(&star, 0), 10);
        assert_eq!(node_score(&star, 3), 4);
        assert_eq!(node_score(&UndirectedGraph::new(2), 1), 0);
    }

    #[test]
    fn component_scoped_matches_global() {
        let g = graph(7, &[(0, 1), (1, 2), (2, 0), (2, 3), (4, 5)]);
        let comp = g.components();
        for v in 0..7 {
            assert_eq!(node_score_component(&g, &comp, v).unwrap(), node_score(&g, v));
        }
    }

    #[test]
    fn stale_index_detected() {
        let mut g = graph(3, &[(0, 1), (1, 2)]);
        let comp = g.components();
        g.delete_edge(1, 2).unwrap();
        assert!(matches!(
            node_score_component(&g, &comp, 0),
            Err(ConnectivityError::StaleComponents(_))
        ));
        assert!(batch_component_scores(&g, &comp, &[0, 1]).is_err());
    }

    #[test]
    fn batch_path_and_clique() {
        let p3 = graph(3, &[(0, 1), (1, 2)]);
        let comp = p3.components();
        assert_eq!(
            batch_component_scores(&p3, &comp, &[0, 1, 2]).unwrap(),
            vec![(0, 2), (1, 3), (2, 2)]
        );
        let k4 = clique(4);
        let comp = k4.components();
        let scores = batch_component_scores(&k4, &comp, &[0, 1, 2, 3]).unwrap();
        assert!(scores.iter().all(|&(_, s)| s == 3));
    }

    #[test]
    fn batch_rejects_mixed_members() {
        let g = graph(4, &[(0, 1), (2, 3)]);
        let comp = g.components();
        assert_eq!(
            batch_component_scores(&g, &comp, &[0, 2]),
            Err(ConnectivityError::MixedComponents(0, 2))
        );
    }

    #[test]
    fn scorer_respects_removed_mask() {
        // 0-1-2-3-4 with 2 removed leaves two K2 fragments
        let g = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let mut removed = vec![false; 5];
        removed[2] = true;
        let mut table = ScoreTable::zeros(5);
        ComponentScorer::new(5).sweep(&g, Some(&removed), &mut table);
        assert_eq!(table.as_slice(), &[1, 1, 0, 1, 1]);
        assert_eq!(residual_connectivity(&g, &removed), 2);
    }

    #[test]
    fn two_triangles_sharing_a_cut_vertex() {
        let g = graph(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]);
        let table = score_all(&g);
        // P = 10; removing 2 leaves two K2s (2 pairs)
        assert_eq!(table[2], 8);
        assert_eq!(table[0], 4);
    }
}
