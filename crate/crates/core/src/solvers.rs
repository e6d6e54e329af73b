//! Static solvers plugged into the dynamic structures: approximation
//! routines, bounded-search-tree exact solvers (they only ever run on
//! poly(k)-size kernels), and the augmenting-path max flow used by the
//! chromatic tables.

use crate::graph::{Graph, MultiGraph, Vertex};
use std::collections::BTreeSet;

/// Graph with positive integer vertex weights.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    pub graph: Graph,
    pub weights: Vec<u64>,
}

impl WeightedGraph {
    pub fn new(graph: Graph, weights: Vec<u64>) -> Self {
        assert_eq!(graph.vertex_count(), weights.len());
        assert!(weights.iter().all(|&w| w >= 1), "weights must be positive");
        WeightedGraph { graph, weights }
    }

    pub fn unit(graph: Graph) -> Self {
        let n = graph.vertex_count();
        WeightedGraph {
            graph,
            weights: vec![1; n],
        }
    }
}

/// Directed flow network with integer arc capacities.
#[derive(Debug, Clone)]
pub struct FlowNet {
    node_count: usize,
    source: usize,
    sink: usize,
    arcs: Vec<(usize, usize, u64)>,
}

impl FlowNet {
    pub fn new(node_count: usize, source: usize, sink: usize) -> Self {
        assert!(source < node_count && sink < node_count && source != sink);
        FlowNet {
            node_count,
            source,
            sink,
            arcs: Vec::new(),
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: u64) {
        assert!(from < self.node_count && to < self.node_count);
        self.arcs.push((from, to, cap));
    }

    pub fn arcs(&self) -> &[(usize, usize, u64)] {
        &self.arcs
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }
}

/// Maximum s-t flow by breadth-first augmenting paths. Capacities in the
/// nets we build are tiny, so this is plenty.
pub fn max_flow(net: &FlowNet) -> u64 {
    let n = net.node_count;
    // Adjacency over residual arc ids; even ids forward, odd ids backward.
    let mut cap: Vec<u64> = Vec::with_capacity(net.arcs.len() * 2);
    let mut to: Vec<usize> = Vec::with_capacity(net.arcs.len() * 2);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v, c) in &net.arcs {
        adj[u].push(to.len());
        to.push(v);
        cap.push(c);
        adj[v].push(to.len());
        to.push(u);
        cap.push(0);
    }
    let mut flow = 0u64;
    loop {
        let mut pred: Vec<Option<usize>> = vec![None; n]; // arc id used to reach node
        let mut queue = std::collections::VecDeque::from([net.source]);
        let mut seen = vec![false; n];
        seen[net.source] = true;
        while let Some(u) = queue.pop_front() {
            for &a in &adj[u] {
                let v = to[a];
                if !seen[v] && cap[a] > 0 {
                    seen[v] = true;
                    pred[v] = Some(a);
                    queue.push_back(v);
                }
            }
        }
        if !seen[net.sink] {
            return flow;
        }
        let mut bottleneck = u64::MAX;
        let mut v = net.sink;
        while v != net.source {
            let a = pred[v].unwrap();
            bottleneck = bottleneck.min(cap[a]);
            v = to[a ^ 1];
        }
        let mut v = net.sink;
        while v != net.source {
            let a = pred[v].unwrap();
            cap[a] -= bottleneck;
            cap[a ^ 1] += bottleneck;
            v = to[a ^ 1];
        }
        flow += bottleneck;
    }
}

/// 2-approximate vertex cover: both endpoints of a greedily built maximal
/// matching, edges scanned in ascending order.
pub fn vc_2approx(g: &Graph) -> BTreeSet<Vertex> {
    let mut cover = BTreeSet::new();
    for (u, v) in g.edges() {
        if !cover.contains(&u) && !cover.contains(&v) {
            cover.insert(u);
            cover.insert(v);
        }
    }
    cover
}

type Adj = Vec<BTreeSet<Vertex>>;

fn adjacency(g: &Graph) -> Adj {
    (0..g.vertex_count())
        .map(|v| g.neighbors(v).collect())
        .collect()
}

fn isolate(adj: &mut Adj, v: Vertex) {
    let nbrs: Vec<Vertex> = adj[v].iter().copied().collect();
    for w in nbrs {
        adj[w].remove(&v);
    }
    adj[v].clear();
}

/// Search-tree decision procedure: some vertex cover of size <= k, if any.
fn vc_decide(adj: &Adj, k: usize) -> Option<Vec<Vertex>> {
    // Degree-1 simplification: taking the neighbor is always safe.
    if let Some(v) = (0..adj.len()).find(|&v| adj[v].len() == 1) {
        if k == 0 {
            return None;
        }
        let u = *adj[v].iter().next().unwrap();
        let mut next = adj.clone();
        isolate(&mut next, u);
        return vc_decide(&next, k - 1).map(|mut s| {
            s.push(u);
            s
        });
    }
    let Some(v) = (0..adj.len())
        .filter(|&v| !adj[v].is_empty())
        .max_by_key(|&v| adj[v].len())
    else {
        return Some(Vec::new());
    };
    // Prefer the smallest id among maximum-degree vertices.
    let dmax = adj[v].len();
    let v = (0..adj.len()).find(|&u| adj[u].len() == dmax).unwrap();
    if k == 0 {
        return None;
    }
    // Either v is in the cover, or all of N(v) is.
    let mut next = adj.clone();
    isolate(&mut next, v);
    if let Some(mut s) = vc_decide(&next, k - 1) {
        s.push(v);
        return Some(s);
    }
    let nbrs: Vec<Vertex> = adj[v].iter().copied().collect();
    if nbrs.len() > k {
        return None;
    }
    let mut next = adj.clone();
    for &u in &nbrs {
        isolate(&mut next, u);
    }
    vc_decide(&next, k - nbrs.len()).map(|mut s| {
        s.extend(nbrs);
        s
    })
}

/// Minimum vertex cover by iterative deepening on the solution size, or
/// `None` if the minimum exceeds `budget`.
pub fn vc_exact(g: &Graph, budget: Option<usize>) -> Option<BTreeSet<Vertex>> {
    let adj = adjacency(g);
    let limit = budget.unwrap_or(g.vertex_count()).min(g.vertex_count());
    (0..=limit).find_map(|k| vc_decide(&adj, k).map(|s| s.into_iter().collect()))
}

fn find_p3(adj: &Adj) -> Option<(Vertex, Vertex, Vertex)> {
    for b in 0..adj.len() {
        let nbrs: Vec<Vertex> = adj[b].iter().copied().collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &c in &nbrs[i + 1..] {
                if !adj[a].contains(&c) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// 3-approximate cluster vertex deletion: repeatedly delete all three
/// vertices of the first induced path.
pub fn cvd_3approx(g: &Graph) -> BTreeSet<Vertex> {
    let mut adj = adjacency(g);
    let mut sol = BTreeSet::new();
    while let Some((a, b, c)) = find_p3(&adj) {
        for v in [a, b, c] {
            isolate(&mut adj, v);
            sol.insert(v);
        }
    }
    sol
}

struct CvdSearch<'a> {
    weights: &'a [u64],
    budget: Option<u64>,
    best: Option<(u64, BTreeSet<Vertex>)>,
}

impl CvdSearch<'_> {
    fn go(&mut self, adj: &Adj, chosen: &mut BTreeSet<Vertex>, weight: u64) {
        if let Some(b) = self.budget {
            if weight > b {
                return;
            }
        }
        if let Some((bw, _)) = &self.best {
            if weight > *bw {
                return;
            }
        }
        match find_p3(adj) {
            None => {
                let better = match &self.best {
                    None => true,
                    Some((bw, bs)) => weight < *bw || (weight == *bw && (*chosen).lt(bs)),
                };
                if better {
                    self.best = Some((weight, chosen.clone()));
                }
            }
            Some((a, b, c)) => {
                for v in [a, b, c] {
                    let mut next = adj.clone();
                    isolate(&mut next, v);
                    chosen.insert(v);
                    self.go(&next, chosen, weight + self.weights[v]);
                    chosen.remove(&v);
                }
            }
        }
    }
}

/// Minimum-weight cluster vertex deletion by branching three ways on an
/// induced path; ties broken toward the lexicographically smallest vertex
/// set. `None` if the minimum weight exceeds `budget`.
pub fn cvd_exact_weighted(g: &WeightedGraph, budget: Option<u64>) -> Option<BTreeSet<Vertex>> {
    let adj = adjacency(&g.graph);
    let mut search = CvdSearch {
        weights: &g.weights,
        budget,
        best: None,
    };
    // Seed with the approximation to bound the search depth.
    let seed = cvd_3approx(&g.graph);
    let seed_w: u64 = seed.iter().map(|&v| g.weights[v]).sum();
    search.best = Some((seed_w, seed));
    search.go(&adj, &mut BTreeSet::new(), 0);
    let (w, set) = search.best.expect("search always yields a candidate");
    match budget {
        Some(b) if w > b => None,
        _ => Some(set),
    }
}

fn disjoint_fvs_decide(g: &MultiGraph, s: &BTreeSet<Vertex>, k: usize) -> Option<BTreeSet<Vertex>> {
    let Some(cycle) = g.find_cycle() else {
        return Some(BTreeSet::new());
    };
    let mut candidates: Vec<Vertex> = cycle.into_iter().filter(|v| !s.contains(v)).collect();
    candidates.sort_unstable();
    candidates.dedup();
    if candidates.is_empty() || k == 0 {
        return None;
    }
    for v in candidates {
        let mut next = g.clone();
        next.isolate(v);
        if let Some(mut sol) = disjoint_fvs_decide(&next, s, k - 1) {
            sol.insert(v);
            return Some(sol);
        }
    }
    None
}

/// Minimum feedback vertex set of the multigraph avoiding `s`, of size at
/// most `budget`; `None` if infeasible (a cycle inside `s`) or over budget.
/// A parallel pair or a self loop counts as a cycle.
pub fn disjoint_fvs(
    g: &MultiGraph,
    s: &BTreeSet<Vertex>,
    budget: usize,
) -> Option<BTreeSet<Vertex>> {
    (0..=budget).find_map(|k| disjoint_fvs_decide(g, s, k))
}

fn colorable_with(adj: &Adj, order: &[Vertex], colors: usize) -> bool {
    fn rec(
        adj: &Adj,
        order: &[Vertex],
        colors: usize,
        used: usize,
        assign: &mut Vec<usize>,
        i: usize,
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        for c in 0..colors.min(used + 1) {
            if adj[v].iter().all(|&w| assign[w] != c) {
                assign[v] = c;
                if rec(adj, order, colors, used.max(c + 1), assign, i + 1) {
                    return true;
                }
                assign[v] = usize::MAX;
            }
        }
        false
    }
    let mut assign = vec![usize::MAX; adj.len()];
    rec(adj, order, colors, 0, &mut assign, 0)
}

/// Exact chromatic number by backtracking with first-fit symmetry breaking.
/// Static reference used by the benchmark harness.
pub fn chromatic_exact(g: &Graph) -> usize {
    let n = g.vertex_count();
    if n == 0 {
        return 0;
    }
    let adj = adjacency(g);
    // High-degree-first order keeps the search shallow.
    let mut order: Vec<Vertex> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(adj[v].len()));
    (1..=n).find(|&k| colorable_with(&adj, &order, k)).unwrap()
}
