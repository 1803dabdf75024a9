//! Top-k spanner maintenance under single-edge deletions.
//!
//! A deletion only changes the scores of nodes that were connected to one
//! of its endpoints. Those nodes are rescored (one articulation DFS per
//! resulting component) and their keys refreshed in the score queue. The
//! spanner set is then repaired by a bounded exchange pass that replays the
//! greedy selection on a masked view of the graph until the best remaining
//! candidate no longer beats the weakest spanner.
//!
//! During a pass the working scores live in an overlay rather than in the
//! queue itself. Once a node of some component has been masked out, the rest
//! of that component is covered exactly by the fragments rescored so far,
//! so the working maximum is the best of the live fragment maxima and the
//! best node of any untouched component. The latter comes from a per-label
//! heap kept in step with the queue.

use std::cmp::Reverse;

use thiserror::Error;

use crate::connectivity::{residual_connectivity, ComponentScorer, Score, ScoreTable};
use crate::graph::{ComponentIndex, GraphError, NodeId, UndirectedGraph};
use crate::greedy::{rank, run_greedy, SpannerError, SpannerSet};
use crate::heap::IndexedHeap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrackError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spanner(#[from] SpannerError),
    #[error("update endpoints must be distinct, got ({0}, {0})")]
    LoopUpdate(NodeId),
}

/// A single decremental update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpdateEvent {
    DeleteEdge(NodeId, NodeId),
}

impl UpdateEvent {
    pub fn endpoints(&self) -> (NodeId, NodeId) {
        match *self {
            UpdateEvent::DeleteEdge(a, b) => (a, b),
        }
    }
}

/// Nodes whose scores can change under one edge deletion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AffectedSet {
    /// The endpoints stay connected; `nodes` is their shared component.
    NonBridge { nodes: Vec<NodeId> },
    /// The component split; each side is what its endpoint still reaches.
    Bridge {
        side_a: Vec<NodeId>,
        side_b: Vec<NodeId>,
    },
}

impl AffectedSet {
    pub fn is_bridge(&self) -> bool {
        matches!(self, AffectedSet::Bridge { .. })
    }

    pub fn len(&self) -> usize {
        match self {
            AffectedSet::NonBridge { nodes } => nodes.len(),
            AffectedSet::Bridge { side_a, side_b } => side_a.len() + side_b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        let (first, second): (&[NodeId], &[NodeId]) = match self {
            AffectedSet::NonBridge { nodes } => (nodes, &[]),
            AffectedSet::Bridge { side_a, side_b } => (side_a, side_b),
        };
        first.iter().chain(second).copied()
    }

    /// All affected node ids in ascending order.
    pub fn sorted_nodes(&self) -> Vec<NodeId> {
        let mut nodes: Vec<_> = self.nodes().collect();
        nodes.sort_unstable();
        nodes
    }
}

/// Queue key. The flag is always `true` between calls; it lets a masked
/// entry sort below every live one.
type QueueKey = (bool, Score, Reverse<NodeId>);

const NO_FRAGMENT: usize = usize::MAX;
/// Min-heap key over the spanner set, using the shared tie order.
type TopKey = Reverse<(Score, Reverse<NodeId>)>;

#[inline]
fn live(score: Score, v: NodeId) -> QueueKey {
    (true, score, Reverse(v))
}

#[inline]
fn top_key(score: Score, v: NodeId) -> TopKey {
    Reverse(rank(score, v))
}

/// Live tracking state for one graph and budget `k`.
#[derive(Debug, Clone)]
pub struct SpannerState {
    graph: UndirectedGraph,
    queue: IndexedHeap<QueueKey>,
    topk: IndexedHeap<TopKey>,
    scores: ScoreTable,
    comp: ComponentIndex,
    k: usize,
    // spanners in selection order; evicted entries leave, newcomers append
    order: Vec<NodeId>,
    // best queue key per component label
    comp_best: IndexedHeap<QueueKey>,
    scorer: ComponentScorer,
    batch: Vec<(NodeId, QueueKey)>,
    // exchange-pass overlay, always clear between calls
    removed: Vec<bool>,
    placed: Vec<NodeId>,
    frag: Vec<usize>,
    fragments: Vec<Option<QueueKey>>,
    touched: Vec<NodeId>,
    label_touched: Vec<bool>,
    touched_labels: Vec<usize>,
    last_steps: usize,
}

impl SpannerState {
    /// Seeds the state from a static greedy run over `graph`.
    pub fn init(graph: UndirectedGraph, k: usize) -> Result<Self, TrackError> {
        let n = graph.node_count();
        let mut scorer = ComponentScorer::new(n);
        let run = run_greedy(&graph, k, &mut scorer, true)?;
        let scores = run.initial.expect("initial table requested");

        let mut queue = IndexedHeap::with_capacity(n);
        for (v, s) in scores.iter() {
            queue.push(v, live(s, v));
        }
        let mut topk = IndexedHeap::with_capacity(n);
        for e in run.spanners.entries() {
            topk.push(e.node, top_key(e.score, e.node));
        }
        let comp = graph.components();
        let mut comp_best = IndexedHeap::with_capacity(n);
        for (v, s) in scores.iter() {
            let key = live(s, v);
            let label = comp.label(v);
            if comp_best.key(label).is_none_or(|best| key > best) {
                comp_best.push(label, key);
            }
        }
        Ok(Self {
            graph,
            queue,
            topk,
            scores,
            comp,
            k,
            order: run.spanners.nodes(),
            comp_best,
            scorer,
            batch: Vec::new(),
            removed: vec![false; n],
            placed: Vec::new(),
            frag: vec![NO_FRAGMENT; n],
            fragments: Vec::new(),
            touched: Vec::new(),
            label_touched: vec![false; n],
            touched_labels: Vec::new(),
            last_steps: 0,
        })
    }

    pub fn graph(&self) -> &UndirectedGraph {
        &self.graph
    }

    /// Scores of every node in the current (full) graph.
    pub fn scores(&self) -> &ScoreTable {
        &self.scores
    }

    pub fn components(&self) -> &ComponentIndex {
        &self.comp
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Confirm/swap steps taken by the most recent exchange pass.
    pub fn last_exchange_steps(&self) -> usize {
        self.last_steps
    }

    pub fn queue_len(&self) -> usize {
        self.queue.len()
    }

    /// Key of `v` in the score queue, if present.
    pub fn queue_score(&self, v: NodeId) -> Option<Score> {
        self.queue.key(v).map(|(_, s, _)| s)
    }

    /// Key of `v` in the spanner heap, if `v` is a spanner.
    pub fn spanner_score(&self, v: NodeId) -> Option<Score> {
        self.topk.key(v).map(|Reverse((s, _))| s)
    }

    /// Current spanners with their heap keys, in the order they entered
    /// the set.
    pub fn spanners(&self) -> SpannerSet {
        let mut set = SpannerSet::new(self.k);
        for &v in &self.order {
            set.push(v, self.spanner_score(v).expect("order mirrors the heap"));
        }
        set
    }

    /// `P(G \ Top-k)` for the current graph and spanner set.
    pub fn objective(&self) -> Score {
        let mask = self.spanners().removal_mask(self.graph.node_count());
        residual_connectivity(&self.graph, &mask)
    }

    /// Affected nodes of the already-applied deletion of `(a, b)`, found by
    /// plain reachability from each endpoint.
    pub fn find_affected(&self, a: NodeId, b: NodeId) -> AffectedSet {
        let side_a = self.graph.reachable_from(a);
        if side_a.contains(&b) {
            AffectedSet::NonBridge { nodes: side_a }
        } else {
            AffectedSet::Bridge {
                side_a,
                side_b: self.graph.reachable_from(b),
            }
        }
    }

    /// Deletes the event's edge and rescores the affected nodes.
    ///
    /// The rescoring DFS from `a` doubles as the bridge probe: if it reaches
    /// `b` the component is intact, otherwise a second DFS from `b` scores
    /// the split-off side and the component index is split.
    pub fn apply_deletion(&mut self, event: UpdateEvent) -> Result<AffectedSet, TrackError> {
        let (a, b) = event.endpoints();
        if a == b {
            return Err(TrackError::LoopUpdate(a));
        }
        self.graph.delete_edge(a, b)?;

        let Self {
            graph,
            queue,
            topk,
            scores,
            comp,
            comp_best,
            scorer,
            batch,
            ..
        } = self;
        batch.clear();
        let mut commit = |scored: &[(NodeId, Score)]| {
            let mut best = live(0, NodeId::MAX);
            for &(v, s) in scored {
                if scores[v] != s {
                    scores.set(v, s);
                    batch.push((v, live(s, v)));
                }
                if topk.contains(v) {
                    topk.update(v, top_key(s, v));
                }
                best = best.max(live(s, v));
            }
            best
        };

        scorer.begin();
        let scored = scorer.score_from(graph, a, None);
        let side_a: Vec<NodeId> = scored.iter().map(|&(v, _)| v).collect();
        comp_best.push(comp.label(a), commit(scored));
        let affected = if scorer.visited(b) {
            AffectedSet::NonBridge { nodes: side_a }
        } else {
            let scored = scorer.score_from(graph, b, None);
            let side_b: Vec<NodeId> = scored.iter().map(|&(v, _)| v).collect();
            let best_b = commit(scored);
            comp.split_off(&side_b);
            comp_best.push(comp.label(b), best_b);
            AffectedSet::Bridge { side_a, side_b }
        };
        queue.update_many(batch);
        Ok(affected)
    }

    /// Repairs the spanner set with at most `k` exchange steps.
    ///
    /// Each step takes the best working candidate `w`. If it does not
    /// outrank the weakest spanner the pass stops. Otherwise `w` is
    /// confirmed (if already a spanner) or swapped in for the weakest one,
    /// masked out of the working view, and its working component rescored.
    /// The queue itself keeps full-graph scores throughout.
    pub fn exchange_topk(&mut self) -> SpannerSet {
        self.last_steps = 0;
        for step in 0..self.k {
            let Some((w, cw)) = self.best_working() else {
                break;
            };
            debug_assert!(step > 0 || self.queue.peek().map(|(v, _)| v) == Some(w));
            let (_, Reverse(weakest)) = self.topk.peek().expect("spanner set is never empty");
            if rank(cw, w) <= weakest {
                break;
            }
            if !self.topk.contains(w) {
                let (evicted, _) = self.topk.pop().expect("spanner set is never empty");
                self.order.retain(|&v| v != evicted);
                self.order.push(w);
            }
            self.topk.push(w, top_key(cw, w));

            self.last_steps += 1;
            self.removed[w] = true;
            self.placed.push(w);
            let label = self.comp.label(w);
            if self.label_touched[label] {
                self.fragments[self.frag[w]] = None;
            } else {
                self.label_touched[label] = true;
                self.touched_labels.push(label);
            }
            if step + 1 == self.k {
                // no later step reads the working scores
                break;
            }
            self.rescore_working(w);
        }

        for v in self.placed.drain(..) {
            self.removed[v] = false;
        }
        for v in self.touched.drain(..) {
            self.frag[v] = NO_FRAGMENT;
        }
        for label in self.touched_labels.drain(..) {
            self.label_touched[label] = false;
        }
        self.fragments.clear();
        self.spanners()
    }

    fn best_working(&self) -> Option<(NodeId, Score)> {
        let in_fragment = self.fragments.iter().flatten().max().copied();
        let untouched = self
            .comp_best
            .peek_excluding(|label| self.label_touched[label])
            .map(|(_, key)| key);
        let (_, score, Reverse(v)) = in_fragment.max(untouched)?;
        Some((v, score))
    }

    fn rescore_working(&mut self, w: NodeId) {
        self.scorer.begin();
        for &u in self.graph.neighbors(w) {
            if self.removed[u] || self.scorer.visited(u) {
                continue;
            }
            let id = self.fragments.len();
            let mut best = None;
            for &(v, s) in self.scorer.score_from(&self.graph, u, Some(&self.removed)) {
                if self.frag[v] == NO_FRAGMENT {
                    self.touched.push(v);
                }
                self.frag[v] = id;
                best = best.max(Some(live(s, v)));
            }
            self.fragments.push(best);
        }
    }

    /// Applies one update and repairs the spanner set.
    pub fn handle_update(&mut self, event: UpdateEvent) -> Result<SpannerSet, TrackError> {
        self.apply_deletion(event)?;
        Ok(self.exchange_topk())
    }

    /// Checks the structural invariants between updates.
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.graph.node_count();
        if self.queue.len() != n {
            return Err(format!("queue holds {} of {n} nodes", self.queue.len()));
        }
        for v in 0..n {
            match self.queue.key(v) {
                Some((true, s, _)) if s == self.scores[v] => {}
                other => return Err(format!("queue key of {v} is {other:?}")),
            }
        }
        if self.topk.len() != self.k {
            return Err(format!("{} spanners for k={}", self.topk.len(), self.k));
        }
        if self.removed.iter().any(|&r| r)
            || self.frag.iter().any(|&f| f != NO_FRAGMENT)
            || self.label_touched.iter().any(|&t| t)
            || !self.fragments.is_empty()
        {
            return Err("exchange overlay not cleared".into());
        }
        let fresh = self.graph.components();
        if fresh.component_count() != self.comp.component_count() {
            return Err("component count drifted".into());
        }
        let mut best: Vec<Option<QueueKey>> = vec![None; self.comp.component_count()];
        for v in 0..n {
            let slot = best.get_mut(self.comp.label(v)).ok_or("label out of range")?;
            *slot = (*slot).max(Some(live(self.scores[v], v)));
        }
        if self.comp_best.len() != best.len() {
            return Err("component heap size drifted".into());
        }
        for (label, key) in best.into_iter().enumerate() {
            if self.comp_best.key(label) != key {
                return Err(format!("best key of component {label} drifted"));
            }
        }
        for v in 0..n {
            for &u in self.graph.neighbors(v) {
                if !self.comp.same_component(u, v) {
                    return Err(format!("edge ({v}, {u}) crosses labels"));
                }
            }
            if self.comp.size_of(v) != fresh.size_of(v) {
                return Err(format!("component size of {v} drifted"));
            }
        }
        Ok(())
    }
}
