//! Undirected simple graphs over dense node ids, with traversal, component
//! labeling and post-deletion bridge probing.

use std::collections::VecDeque;

use thiserror::Error;

/// Dense node index in `[0, n)`.
pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("endpoint {node} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { node: NodeId, node_count: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("edge ({0}, {1}) is not present")]
    MissingEdge(NodeId, NodeId),
}

/// Mutable undirected graph without self-loops or parallel edges.
///
/// Neighbor lists are kept sorted so iteration order is deterministic and
/// membership tests are binary searches.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UndirectedGraph {
    adj: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl UndirectedGraph {
    /// Edgeless graph on `node_count` nodes.
    pub fn new(node_count: usize) -> Self {
        Self {
            adj: vec![Vec::new(); node_count],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) are collapsed.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut adj = vec![Vec::new(); node_count];
        for (a, b) in edges {
            for node in [a, b] {
                if node >= node_count {
                    return Err(GraphError::NodeOutOfRange { node, node_count });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut twice = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            twice += list.len();
        }
        Ok(Self {
            adj,
            edge_count: twice / 2,
        })
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        a < self.adj.len() && b < self.adj.len() && self.adj[a].binary_search(&b).is_ok()
    }

    /// All edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let start = list.partition_point(|&v| v <= u);
            list[start..].iter().map(move |&v| (u, v))
        })
    }

    fn check_node(&self, node: NodeId) -> Result<(), GraphError> {
        if node < self.adj.len() {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange {
                node,
                node_count: self.adj.len(),
            })
        }
    }

    /// Removes edge `(a, b)`. Deleting an absent edge is an error: update
    /// streams are expected to reference live edges only.
    pub fn delete_edge(&mut self, a: NodeId, b: NodeId) -> Result<(), GraphError> {
        self.check_node(a)?;
        self.check_node(b)?;
        let pos_b = self.adj[a]
            .binary_search(&b)
            .map_err(|_| GraphError::MissingEdge(a, b))?;
        let pos_a = self.adj[b]
            .binary_search(&a)
            .map_err(|_| GraphError::MissingEdge(a, b))?;
        self.adj[a].remove(pos_b);
        self.adj[b].remove(pos_a);
        self.edge_count -= 1;
        Ok(())
    }

    /// Inserts edge `(a, b)`; returns `false` if it was already present.
    ///
    /// Edge insertion is not part of the tracked update model. This exists
    /// so tests can undo a deletion.
    pub fn insert_edge(&mut self, a: NodeId, b: NodeId) -> Result<bool, GraphError> {
        self.check_node(a)?;
        self.check_node(b)?;
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        match self.adj[a].binary_search(&b) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[a].insert(pos, b);
                let pos = self.adj[b].binary_search(&a).unwrap_err();
                self.adj[b].insert(pos, a);
                self.edge_count += 1;
                Ok(true)
            }
        }
    }

    /// Nodes connected to `s` (including `s`) in BFS order.
    pub fn reachable_from(&self, s: NodeId) -> Vec<NodeId> {
        let mut seen = vec![false; self.node_count()];
        self.bfs(s, &mut seen)
    }

    fn bfs(&self, s: NodeId, seen: &mut [bool]) -> Vec<NodeId> {
        let mut order = vec![s];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &u in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    order.push(u);
                    queue.push_back(u);
                }
            }
        }
        order
    }

    /// Labels every node with its connected component.
    pub fn components(&self) -> ComponentIndex {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut label = vec![0; n];
        let mut sizes = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let members = self.bfs(s, &mut seen);
            for &v in &members {
                label[v] = sizes.len();
            }
            sizes.push(members.len());
        }
        ComponentIndex { label, sizes }
    }

    /// Whether the just-deleted edge `(a, b)` was a bridge, i.e. `b` is no
    /// longer reachable from `a`.
    pub fn is_bridge_after_delete(&self, a: NodeId, b: NodeId) -> bool {
        let mut seen = vec![false; self.node_count()];
        seen[a] = true;
        let mut stack = vec![a];
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                if u == b {
                    return false;
                }
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        a != b
    }
}

/// Component labeling: `label[v]` is the component id of `v` and
/// `sizes[c]` the number of nodes carrying label `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentIndex {
    label: Vec<usize>,
    sizes: Vec<usize>,
}

impl ComponentIndex {
    pub fn label(&self, v: NodeId) -> usize {
        self.label[v]
    }

    pub fn size(&self, component: usize) -> usize {
        self.sizes[component]
    }

    /// Size of the component containing `v`.
    pub fn size_of(&self, v: NodeId) -> usize {
        self.sizes[self.label[v]]
    }

    pub fn component_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn labels(&self) -> &[usize] {
        &self.label
    }

    pub fn same_component(&self, a: NodeId, b: NodeId) -> bool {
        self.label[a] == self.label[b]
    }

    /// Moves `side` (a proper, non-empty subset of one component) into a
    /// fresh component. Used when a bridge deletion splits a component.
    pub fn split_off(&mut self, side: &[NodeId]) {
        let Some(&first) = side.first() else {
            return;
        };
        let old = self.label[first];
        let fresh = self.sizes.len();
        for &v in side {
            debug_assert_eq!(self.label[v], old);
            self.label[v] = fresh;
        }
        self.sizes[old] -= side.len();
        self.sizes.push(side.len());
    }

    /// Groups node ids by component label.
    pub fn members(&self) -> Vec<Vec<NodeId>> {
        let mut groups = vec![Vec::new(); self.sizes.len()];
        for (v, &c) in self.label.iter().enumerate() {
            groups[c].push(v);
        }
        groups
    }
}
