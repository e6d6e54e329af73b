//! Fully dynamic feedback vertex set for bounded-degree graphs.
//!
//! Maintains an exact minimum solution `X` with the residual forest
//! `G[V \ X]` mirrored in a link-cut tree. Each update grows `X` by one
//! endpoint, then compresses by trying every retained intersection
//! `R ⊆ X`: the graph outside `R` is reduced against the protected set
//! `S = X \ R` entirely through link-cut probes (no rule-by-rule rewriting),
//! oversized reductions are rejected outright, and the surviving instances
//! go to the disjoint solver. The best candidate replaces `X` in an
//! add-then-remove exchange that relinks freed vertices into the forest.

use crate::graph::{EdgeOp, EdgeOpKind, Graph, GraphError, MultiGraph, Vertex};
use crate::lct::LinkCutForest;
use crate::solvers;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FvsError {
    #[error("insert would push vertex {0} above the degree bound {1}")]
    DegreeBoundExceeded(Vertex, usize),
    #[error("residual graph has a cycle through {0} and {1}")]
    ResidualCycle(Vertex, Vertex),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// How a reduced edge came to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeTrace {
    /// Present in the input graph.
    Direct,
    /// Stands for a contracted path of former degree-2 vertices.
    Contracted,
}

/// Multigraph produced by the degree-1/degree-2 reduction: the protected
/// vertices `S` plus the surviving core, with edge multiplicities, self
/// loops, and per-edge provenance.
#[derive(Debug, Clone)]
pub struct ReducedGraph {
    vertices: BTreeSet<Vertex>,
    protected: BTreeSet<Vertex>,
    edges: BTreeMap<(Vertex, Vertex), u32>,
    provenance: BTreeMap<(Vertex, Vertex), Vec<EdgeTrace>>,
}

impl ReducedGraph {
    pub fn new(vertices: BTreeSet<Vertex>, protected: BTreeSet<Vertex>) -> Self {
        ReducedGraph {
            vertices,
            protected,
            edges: BTreeMap::new(),
            provenance: BTreeMap::new(),
        }
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex, trace: EdgeTrace) {
        let key = (u.min(v), u.max(v));
        *self.edges.entry(key).or_insert(0) += 1;
        self.provenance.entry(key).or_default().push(trace);
    }

    pub fn vertices(&self) -> &BTreeSet<Vertex> {
        &self.vertices
    }

    /// The protected set S; never removed by the reduction rules.
    pub fn protected(&self) -> &BTreeSet<Vertex> {
        &self.protected
    }

    /// Surviving non-protected vertices.
    pub fn core(&self) -> BTreeSet<Vertex> {
        self.vertices.difference(&self.protected).copied().collect()
    }

    pub fn multiplicity(&self, u: Vertex, v: Vertex) -> u32 {
        self.edges.get(&(u.min(v), u.max(v))).copied().unwrap_or(0)
    }

    pub fn edge_multiplicities(&self) -> impl Iterator<Item = ((Vertex, Vertex), u32)> + '_ {
        self.edges.iter().map(|(&k, &m)| (k, m))
    }

    pub fn provenance(&self, u: Vertex, v: Vertex) -> &[EdgeTrace] {
        self.provenance
            .get(&(u.min(v), u.max(v)))
            .map_or(&[], |t| t.as_slice())
    }

    /// Same vertices and edge multiset, ignoring provenance.
    pub fn same_shape(&self, other: &ReducedGraph) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }

    /// Compact multigraph plus the table mapping its ids back to original
    /// vertex ids.
    pub fn to_multigraph(&self) -> (MultiGraph, Vec<Vertex>) {
        let table: Vec<Vertex> = self.vertices.iter().copied().collect();
        let index: BTreeMap<Vertex, usize> =
            table.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut mg = MultiGraph::new(table.len());
        for (&(u, v), &m) in &self.edges {
            for _ in 0..m {
                mg.add_edge(index[&u], index[&v]);
            }
        }
        (mg, table)
    }
}

/// Outcome of the reduction: the reduced graph, or a sound rejection when
/// it grew past 14|S| vertices (only possible when R was not the retained
/// intersection of a maximum overlap solution).
#[derive(Debug, Clone)]
pub enum ReduceResult {
    Reduced(ReducedGraph),
    No,
}

#[derive(Debug, Clone)]
pub struct DynFvs {
    g: Graph,
    degree_bound: usize,
    x: BTreeSet<Vertex>,
    forest: LinkCutForest,
}

impl DynFvs {
    pub fn new(n: usize, degree_bound: usize) -> Self {
        DynFvs {
            g: Graph::new(n),
            degree_bound,
            x: BTreeSet::new(),
            forest: LinkCutForest::new(n),
        }
    }

    /// Builds the structure around an existing graph and feedback vertex
    /// set (not necessarily minimum; test and bootstrap entry).
    pub fn from_parts(
        g: Graph,
        degree_bound: usize,
        x: BTreeSet<Vertex>,
    ) -> Result<Self, FvsError> {
        let n = g.vertex_count();
        if let Some(&v) = x.iter().find(|&&v| v >= n) {
            return Err(GraphError::OutOfRange(v, n).into());
        }
        if let Some(v) = (0..n).find(|&v| g.degree(v) > degree_bound) {
            return Err(FvsError::DegreeBoundExceeded(v, degree_bound));
        }
        let mut forest = LinkCutForest::new(n);
        for (u, v) in g.edges() {
            if !x.contains(&u) && !x.contains(&v) {
                if forest.connected(u, v) {
                    return Err(FvsError::ResidualCycle(u, v));
                }
                forest.evert(u);
                forest.link(u, v).expect("u everted, different trees");
            }
        }
        Ok(DynFvs {
            g,
            degree_bound,
            x,
            forest,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    /// Current minimum feedback vertex set (O(1) query).
    pub fn solution(&self) -> &BTreeSet<Vertex> {
        &self.x
    }

    fn move_into_x(&mut self, w: Vertex) {
        let nbrs: Vec<Vertex> = self
            .g
            .neighbors(w)
            .filter(|v| !self.x.contains(v))
            .collect();
        for v in nbrs {
            self.forest
                .cut(w, v)
                .expect("forest mirrors the residual graph");
        }
        self.x.insert(w);
    }

    fn move_out_of_x(&mut self, w: Vertex) {
        self.x.remove(&w);
        let nbrs: Vec<Vertex> = self
            .g
            .neighbors(w)
            .filter(|v| !self.x.contains(v))
            .collect();
        for v in nbrs {
            self.forest.evert(w);
            self.forest.link(w, v).expect("relink stays acyclic");
        }
    }

    /// Applies one edge update and restores minimality of `X`.
    pub fn update(&mut self, op: EdgeOp) -> Result<(), FvsError> {
        self.g.validate(op)?;
        match op.kind {
            EdgeOpKind::Insert => {
                for w in [op.u, op.v] {
                    if self.g.degree(w) + 1 > self.degree_bound {
                        return Err(FvsError::DegreeBoundExceeded(w, self.degree_bound));
                    }
                }
                if !self.x.contains(&op.u) && !self.x.contains(&op.v) {
                    self.move_into_x(op.u.min(op.v));
                }
                self.g.apply(op).expect("validated above");
            }
            EdgeOpKind::Delete => {
                if !self.x.contains(&op.u) && !self.x.contains(&op.v) {
                    self.forest
                        .cut(op.u, op.v)
                        .expect("deleting a residual edge");
                }
                self.g.apply(op).expect("validated above");
            }
        }
        self.compress();
        Ok(())
    }

    /// Tries every retained intersection `R ⊆ X` (small ones first) and
    /// swaps in the best candidate solution.
    fn compress(&mut self) {
        let x_vec: Vec<Vertex> = self.x.iter().copied().collect();
        let k = x_vec.len();
        assert!(k < 64, "solution too large for subset enumeration");
        let mut best = self.x.clone();
        let mut masks: Vec<u64> = (0..1u64 << k).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        for mask in masks {
            let r_size = mask.count_ones() as usize;
            if r_size >= best.len() {
                continue; // cannot strictly improve even with an empty S'
            }
            let r: BTreeSet<Vertex> = (0..k)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| x_vec[i])
                .collect();
            let budget = best.len() - r_size - 1;
            if let Some(sp) = self.solve_disjoint(&r, budget) {
                if r_size + sp.len() < best.len() {
                    let mut candidate = r;
                    candidate.extend(sp);
                    best = candidate;
                }
            }
        }
        if best != self.x {
            let adds: Vec<Vertex> = best.difference(&self.x).copied().collect();
            let removes: Vec<Vertex> = self.x.difference(&best).copied().collect();
            for w in adds {
                self.move_into_x(w);
            }
            for w in removes {
                self.move_out_of_x(w);
            }
        }
    }

    /// True iff some probe vertex of `core` other than the endpoints lies on
    /// the forest path between `u` and `v`. Each probe cuts the candidate
    /// from its parent, tests connectivity, and restores the edge before
    /// anything can return.
    fn path_has_internal(&mut self, u: Vertex, v: Vertex, core: &BTreeSet<Vertex>) -> bool {
        for &w in core {
            if w == u || w == v || !self.forest.connected(u, w) {
                continue;
            }
            self.forest.evert(u);
            let p = self.forest.parent_of(w).expect("u is the root, w is not");
            self.forest.cut(w, p).expect("parent edge exists");
            let separated = !self.forest.connected(u, v);
            self.forest.link(w, p).expect("cut just everted w");
            if separated {
                return true;
            }
        }
        false
    }

    /// Reduction of `G[V \ r]` with `S = X \ r` protected, built from
    /// link-cut probes without materializing the degree rules. Returns
    /// `No` once `|core ∪ S| >= 14|S|`.
    pub fn reduce(&mut self, r: &BTreeSet<Vertex>) -> ReduceResult {
        debug_assert!(r.is_subset(&self.x));
        let s: BTreeSet<Vertex> = self.x.difference(r).copied().collect();
        if s.is_empty() {
            // G[V \ X] is a forest by invariant; everything dissolves.
            return ReduceResult::Reduced(ReducedGraph::new(BTreeSet::new(), s));
        }

        // Attachment edges delta(S, V \ X), endpoints in the forest.
        let delta: Vec<(Vertex, Vertex)> = s
            .iter()
            .flat_map(|&sv| {
                self.g
                    .neighbors(sv)
                    .filter(|nb| !self.x.contains(nb))
                    .map(move |nb| (sv, nb))
                    .collect::<Vec<_>>()
            })
            .collect();

        // Core generation: the meet of every same-tree triple of
        // attachment endpoints survives the reduction.
        let mut core: BTreeSet<Vertex> = BTreeSet::new();
        for i in 0..delta.len() {
            for j in i + 1..delta.len() {
                if !self.forest.connected(delta[i].1, delta[j].1) {
                    continue;
                }
                for e3 in delta.iter().skip(j + 1) {
                    if self.forest.connected(delta[i].1, e3.1) {
                        let m = self
                            .forest
                            .meet(delta[i].1, delta[j].1, e3.1)
                            .expect("pairwise connected");
                        core.insert(m);
                    }
                }
            }
        }

        if core.len() + s.len() >= 14 * s.len() {
            return ReduceResult::No;
        }

        let mut vertices = core.clone();
        vertices.extend(s.iter().copied());
        let mut out = ReducedGraph::new(vertices, s.clone());

        // Core-core edges: unique forest path free of other core vertices.
        let core_vec: Vec<Vertex> = core.iter().copied().collect();
        for (i, &u) in core_vec.iter().enumerate() {
            for &v in &core_vec[i + 1..] {
                if !self.forest.connected(u, v) || self.path_has_internal(u, v, &core) {
                    continue;
                }
                let trace = if self.g.has_edge(u, v) {
                    EdgeTrace::Direct
                } else {
                    EdgeTrace::Contracted
                };
                out.add_edge(u, v, trace);
            }
        }

        // S-core edges: one per attachment edge whose forest path reaches
        // the core vertex without passing another one.
        for &(sv, u) in &delta {
            for &v in &core_vec {
                if u == v {
                    out.add_edge(sv, v, EdgeTrace::Direct);
                    continue;
                }
                if core.contains(&u)
                    || !self.forest.connected(u, v)
                    || self.path_has_internal(u, v, &core)
                {
                    continue;
                }
                out.add_edge(sv, v, EdgeTrace::Contracted);
            }
        }

        // S-S edges: direct ones, plus one per attachment pair whose
        // connecting path avoids the core entirely (a pair at a single S
        // vertex contracts to a self loop).
        for &sv in &s {
            for w in self.g.neighbors(sv) {
                if w > sv && s.contains(&w) {
                    out.add_edge(sv, w, EdgeTrace::Direct);
                }
            }
        }
        for i in 0..delta.len() {
            for j in i + 1..delta.len() {
                let (s1, v1) = delta[i];
                let (s2, v2) = delta[j];
                if !self.forest.connected(v1, v2) {
                    continue;
                }
                let third = delta
                    .iter()
                    .enumerate()
                    .any(|(t, e3)| t != i && t != j && self.forest.connected(v1, e3.1));
                if !third {
                    out.add_edge(s1, s2, EdgeTrace::Contracted);
                }
            }
        }
        ReduceResult::Reduced(out)
    }

    /// Task: minimum feedback vertex set of `G[V \ r]` disjoint from
    /// `S = X \ r`, of size at most `budget`. `None` may be spuriously
    /// conservative when `r` is not the retained intersection of a maximum
    /// overlap solution; the compression loop's minimum is still exact.
    pub fn solve_disjoint(
        &mut self,
        r: &BTreeSet<Vertex>,
        budget: usize,
    ) -> Option<BTreeSet<Vertex>> {
        if self.x.difference(r).next().is_none() {
            return Some(BTreeSet::new());
        }
        match self.reduce(r) {
            ReduceResult::No => None,
            ReduceResult::Reduced(rg) => {
                let (mg, table) = rg.to_multigraph();
                let s_mapped: BTreeSet<Vertex> = rg
                    .protected()
                    .iter()
                    .map(|v| table.binary_search(v).expect("protected survives"))
                    .collect();
                solvers::disjoint_fvs(&mg, &s_mapped, budget)
                    .map(|sol| sol.into_iter().map(|i| table[i]).collect())
            }
        }
    }

    /// Forest mirror and degree invariants; test support.
    pub fn validate(&mut self) -> Result<(), String> {
        for v in 0..self.g.vertex_count() {
            if self.g.degree(v) > self.degree_bound {
                return Err(format!("degree of {v} exceeds the bound"));
            }
        }
        let residual: BTreeSet<(Vertex, Vertex)> = self
            .g
            .edges()
            .filter(|(u, v)| !self.x.contains(u) && !self.x.contains(v))
            .collect();
        let represented = self.forest.represented_edges();
        if represented != residual {
            return Err(format!(
                "forest holds {represented:?} but the residual graph has {residual:?}"
            ));
        }
        Ok(())
    }
}
