//! Slow reference implementations for tests and quality reporting.
//!
//! Connectivity here goes through a union-find over the edge list, a code
//! path independent of the traversal-based scorers it checks.

use thiserror::Error;

use crate::connectivity::{Score, ScoreTable};
use crate::graph::{NodeId, UndirectedGraph};
use crate::greedy::{top_k_greedy, SpannerError, SpannerSet};

/// Largest instance the exhaustive search accepts.
pub const BRUTE_FORCE_MAX_NODES: usize = 16;
pub const BRUTE_FORCE_MAX_K: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("brute force limited to n <= {BRUTE_FORCE_MAX_NODES} and k <= {BRUTE_FORCE_MAX_K}, got n={n}, k={k}")]
    TooLarge { n: usize, k: usize },
    #[error(transparent)]
    Spanner(#[from] SpannerError),
}

struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// Unordered connected pairs of `g` with the nodes in `excluded` deleted.
pub fn connectivity_without(g: &UndirectedGraph, excluded: &[NodeId]) -> Score {
    let n = g.node_count();
    let mut gone = vec![false; n];
    for &v in excluded {
        gone[v] = true;
    }
    let mut sets = DisjointSets::new(n);
    for (a, b) in g.edges() {
        if !gone[a] && !gone[b] {
            sets.union(a, b);
        }
    }
    let mut total = 0;
    for (v, &out) in gone.iter().enumerate() {
        if !out && sets.find(v) == v {
            let s = sets.size[v] as Score;
            total += s * (s - 1) / 2;
        }
    }
    total
}

/// Every node's score by literal whole-graph recomputation.
pub fn score_oracle(g: &UndirectedGraph) -> ScoreTable {
    let total = connectivity_without(g, &[]);
    (0..g.node_count())
        .map(|v| total - connectivity_without(g, &[v]))
        .collect::<Vec<_>>()
        .into()
}

/// Static recomputation baseline: run the greedy from scratch.
pub fn static_recompute(g: &UndirectedGraph, k: usize) -> Result<SpannerSet, SpannerError> {
    top_k_greedy(g, k).map(|(set, _)| set)
}

/// Exact minimizer of `P(G \ S)` over all `k`-subsets `S`. Ties go to the
/// lexicographically smallest subset.
pub fn brute_force_topk(
    g: &UndirectedGraph,
    k: usize,
) -> Result<(Vec<NodeId>, Score), OracleError> {
    let n = g.node_count();
    if n > BRUTE_FORCE_MAX_NODES || k > BRUTE_FORCE_MAX_K {
        return Err(OracleError::TooLarge { n, k });
    }
    crate::greedy::check_budget(k, n)?;

    let mut subset: Vec<NodeId> = (0..k).collect();
    let mut best = (subset.clone(), connectivity_without(g, &subset));
    // lexicographic successor of a k-combination of 0..n
    while let Some(i) = (0..k).rev().find(|&i| subset[i] < n - k + i) {
        subset[i] += 1;
        for j in i + 1..k {
            subset[j] = subset[j - 1] + 1;
        }
        let value = connectivity_without(g, &subset);
        if value < best.1 {
            best = (subset.clone(), value);
        }
    }
    Ok(best)
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
    fn oracle_scores() {
        assert_eq!(score_oracle(&UndirectedGraph::new(3)).as_slice(), &[0, 0, 0]);
        assert_eq!(score_oracle(&graph(3, &[(0, 1), (1, 2)])).as_slice(), &[2, 3, 2]);
        let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(score_oracle(&c4).as_slice(), &[3, 3, 3, 3]);
    }

    #[test]
    fn brute_force_small_cases() {
        let p5 = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        assert_eq!(brute_force_topk(&p5, 1).unwrap(), (vec![2], 2));
        // removing the shared vertex leaves two K2 remnants
        let bowtie = graph(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]);
        assert_eq!(brute_force_topk(&bowtie, 1).unwrap(), (vec![2], 2));
        assert_eq!(brute_force_topk(&clique(5), 2).unwrap(), (vec![0, 1], 3));
    }

    #[test]
    fn brute_force_guards() {
        assert_eq!(
            brute_force_topk(&UndirectedGraph::new(17), 1),
            Err(OracleError::TooLarge { n: 17, k: 1 })
        );
        assert!(matches!(
            brute_force_topk(&UndirectedGraph::new(5), 4),
            Err(OracleError::TooLarge { .. })
        ));
        assert!(matches!(
            brute_force_topk(&UndirectedGraph::new(2), 3),
            Err(OracleError::Spanner(_))
        ));
    }

    #[test]
    fn static_recompute_delegates() {
        let g = graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (1, 4)]);
        for k in 1..=3 {
            assert_eq!(static_recompute(&g, k).unwrap(), top_k_greedy(&g, k).unwrap().0);
        }
    }
}
