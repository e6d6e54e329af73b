//! Mutable simple undirected graph over a fixed vertex universe, plus the
//! multigraph variant used by the feedback vertex set reduction.

use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Vertices are dense ids `0..n`.
pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("vertex {0} out of range (universe size {1})")]
    OutOfRange(Vertex, usize),
    #[error("edge {{{0},{1}}} already present")]
    DuplicateEdge(Vertex, Vertex),
    #[error("edge {{{0},{1}}} not present")]
    MissingEdge(Vertex, Vertex),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeOpKind {
    Insert,
    Delete,
}

/// One update of the edge set; the alphabet every dynamic structure consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeOp {
    pub kind: EdgeOpKind,
    pub u: Vertex,
    pub v: Vertex,
}

impl EdgeOp {
    pub fn insert(u: Vertex, v: Vertex) -> Self {
        EdgeOp {
            kind: EdgeOpKind::Insert,
            u,
            v,
        }
    }

    pub fn delete(u: Vertex, v: Vertex) -> Self {
        EdgeOp {
            kind: EdgeOpKind::Delete,
            u,
            v,
        }
    }
}

/// Simple undirected graph with a fixed vertex universe `0..n`.
///
/// Adjacency is kept in ordered sets so neighbor iteration (and everything
/// derived from it downstream) is deterministic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BTreeSet<Vertex>>,
    m: usize,
}

impl Graph {
    /// Graph with `n` isolated vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![BTreeSet::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list; panics on invalid edges (test helper).
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.insert_edge(u, v).expect("valid edge list");
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.adj.len() && self.adj[u].contains(&v)
    }

    /// Neighbors of `v` in increasing id order.
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj[v].iter().copied()
    }

    /// All edges as `(u, v)` pairs with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    fn check_pair(&self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        let n = self.adj.len();
        if u >= n {
            return Err(GraphError::OutOfRange(u, n));
        }
        if v >= n {
            return Err(GraphError::OutOfRange(v, n));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        Ok(())
    }

    pub fn insert_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        self.check_pair(u, v)?;
        if self.adj[u].contains(&v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        self.m += 1;
        Ok(())
    }

    pub fn delete_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        self.check_pair(u, v)?;
        if !self.adj[u].contains(&v) {
            return Err(GraphError::MissingEdge(u.min(v), u.max(v)));
        }
        self.adj[u].remove(&v);
        self.adj[v].remove(&u);
        self.m -= 1;
        Ok(())
    }

    /// Applies one edge update, preserving the symmetry invariant.
    pub fn apply(&mut self, op: EdgeOp) -> Result<(), GraphError> {
        match op.kind {
            EdgeOpKind::Insert => self.insert_edge(op.u, op.v),
            EdgeOpKind::Delete => self.delete_edge(op.u, op.v),
        }
    }

    /// Returns whether `op` would succeed, without mutating.
    pub fn validate(&self, op: EdgeOp) -> Result<(), GraphError> {
        self.check_pair(op.u, op.v)?;
        let present = self.adj[op.u].contains(&op.v);
        match op.kind {
            EdgeOpKind::Insert if present => {
                Err(GraphError::DuplicateEdge(op.u.min(op.v), op.u.max(op.v)))
            }
            EdgeOpKind::Delete if !present => {
                Err(GraphError::MissingEdge(op.u.min(op.v), op.u.max(op.v)))
            }
            _ => Ok(()),
        }
    }

    /// Induced subgraph `G[S]`. The returned table maps new ids back to the
    /// ids of `self` (`table[new] == old`, ascending).
    pub fn induced_subgraph<I: IntoIterator<Item = Vertex>>(
        &self,
        s: I,
    ) -> Result<(Graph, Vec<Vertex>), GraphError> {
        let set: BTreeSet<Vertex> = s.into_iter().collect();
        if let Some(&v) = set.iter().find(|&&v| v >= self.adj.len()) {
            return Err(GraphError::OutOfRange(v, self.adj.len()));
        }
        let table: Vec<Vertex> = set.iter().copied().collect();
        let index: BTreeMap<Vertex, usize> =
            table.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut sub = Graph::new(table.len());
        for (&old, &new) in &index {
            for w in self.neighbors(old) {
                if w > old {
                    if let Some(&nw) = index.get(&w) {
                        sub.insert_edge(new, nw).expect("remapped edge is valid");
                    }
                }
            }
        }
        Ok((sub, table))
    }

    /// First induced path `a-b-c` in id order (`b` ascending, then the pair
    /// `(a, c)` of non-adjacent neighbors of `b`), or `None` iff every
    /// component is a clique.
    pub fn find_induced_p3(&self) -> Option<(Vertex, Vertex, Vertex)> {
        for b in 0..self.adj.len() {
            let nbrs: Vec<Vertex> = self.adj[b].iter().copied().collect();
            for (i, &a) in nbrs.iter().enumerate() {
                for &c in &nbrs[i + 1..] {
                    if !self.adj[a].contains(&c) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }
}

/// Undirected multigraph with edge multiplicities and self loops; the shape
/// produced by the feedback vertex set reduction rules.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MultiGraph {
    adj: Vec<BTreeMap<Vertex, u32>>,
    loops: Vec<u32>,
}

impl MultiGraph {
    pub fn new(n: usize) -> Self {
        MultiGraph {
            adj: vec![BTreeMap::new(); n],
            loops: vec![0; n],
        }
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut mg = MultiGraph::new(g.vertex_count());
        for (u, v) in g.edges() {
            mg.add_edge(u, v);
        }
        mg
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Adds one parallel edge; `u == v` adds a self loop.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        if u == v {
            self.loops[u] += 1;
        } else {
            *self.adj[u].entry(v).or_insert(0) += 1;
            *self.adj[v].entry(u).or_insert(0) += 1;
        }
    }

    pub fn multiplicity(&self, u: Vertex, v: Vertex) -> u32 {
        if u == v {
            self.loops[u]
        } else {
            self.adj[u].get(&v).copied().unwrap_or(0)
        }
    }

    pub fn loops_at(&self, v: Vertex) -> u32 {
        self.loops[v]
    }

    /// Degree counting multiplicities; a self loop contributes two.
    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].values().map(|&m| m as usize).sum::<usize>() + 2 * self.loops[v] as usize
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = (Vertex, u32)> + '_ {
        self.adj[v].iter().map(|(&w, &m)| (w, m))
    }

    /// Removes all edges (and loops) incident to `v`, leaving it isolated.
    pub fn isolate(&mut self, v: Vertex) {
        let nbrs: Vec<Vertex> = self.adj[v].keys().copied().collect();
        for w in nbrs {
            self.adj[w].remove(&v);
        }
        self.adj[v].clear();
        self.loops[v] = 0;
    }

    /// Some cycle as a vertex list: `[v]` for a self loop, `[u, v]` for a
    /// parallel pair, otherwise a simple cycle found by DFS; `None` iff the
    /// multigraph is a forest.
    pub fn find_cycle(&self) -> Option<Vec<Vertex>> {
        for v in 0..self.adj.len() {
            if self.loops[v] > 0 {
                return Some(vec![v]);
            }
        }
        for u in 0..self.adj.len() {
            for (&v, &m) in &self.adj[u] {
                if m >= 2 && u < v {
                    return Some(vec![u, v]);
                }
            }
        }
        // All multiplicities are one now; ordinary DFS on the skeleton.
        let n = self.adj.len();
        let mut color = vec![0u8; n]; // 0 unvisited, 1 on stack, 2 done
        let mut parent = vec![usize::MAX; n];
        for start in 0..n {
            if color[start] != 0 {
                continue;
            }
            let mut stack = vec![(start, usize::MAX)];
            while let Some(&(v, from)) = stack.last() {
                if color[v] == 0 {
                    color[v] = 1;
                    parent[v] = from;
                    for (w, _) in self.neighbors(v) {
                        if w == from {
                            continue;
                        }
                        if color[w] == 1 {
                            // Back edge v-w closes a cycle.
                            let mut cycle = vec![v];
                            let mut cur = v;
                            while cur != w {
                                cur = parent[cur];
                                cycle.push(cur);
                            }
                            return Some(cycle);
                        }
                        if color[w] == 0 {
                            stack.push((w, v));
                        }
                    }
                } else {
                    color[v] = 2;
                    stack.pop();
                }
            }
        }
        None
    }

    pub fn is_forest(&self) -> bool {
        self.find_cycle().is_none()
    }
}
