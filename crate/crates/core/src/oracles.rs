//! Brute-force reference solvers and the naive reduction, used by property
//! tests and nowhere else. Everything here is deliberately dumb: subset or
//! assignment enumeration with hard budgets on instance size.

use crate::dyn_fvs::{EdgeTrace, ReducedGraph};
use crate::graph::{Graph, MultiGraph, Vertex};
use std::collections::BTreeSet;
use thiserror::Error;

/// Enumeration refuses anything larger than these.
pub const VC_CVD_BUDGET: usize = 12;
pub const CHROMATIC_FVS_BUDGET: usize = 10;
pub const REDUCE_BUDGET: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance size {0} exceeds oracle budget {1}")]
    BudgetExceeded(usize, usize),
}

fn check_budget(n: usize, budget: usize) -> Result<(), OracleError> {
    if n > budget {
        Err(OracleError::BudgetExceeded(n, budget))
    } else {
        Ok(())
    }
}

/// Minimum vertex cover size by subset enumeration.
pub fn brute_vc(g: &Graph) -> Result<usize, OracleError> {
    let n = g.vertex_count();
    check_budget(n, VC_CVD_BUDGET)?;
    let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    let mut best = n;
    for mask in 0u32..1 << n {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        if edges
            .iter()
            .all(|&(u, v)| mask >> u & 1 == 1 || mask >> v & 1 == 1)
        {
            best = size;
        }
    }
    Ok(best)
}

fn is_cluster_without(g: &Graph, removed: u32) -> bool {
    // Every component of the surviving graph must be a clique; equivalently
    // there is no surviving induced path on three vertices.
    let n = g.vertex_count();
    for b in 0..n {
        if removed >> b & 1 == 1 {
            continue;
        }
        let nbrs: Vec<Vertex> = g.neighbors(b).filter(|&v| removed >> v & 1 == 0).collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &c in &nbrs[i + 1..] {
                if !g.has_edge(a, c) {
                    return false;
                }
            }
        }
    }
    true
}

/// Minimum cluster vertex deletion size by subset enumeration.
pub fn brute_cvd(g: &Graph) -> Result<usize, OracleError> {
    let n = g.vertex_count();
    check_budget(n, VC_CVD_BUDGET)?;
    let mut best = n;
    for mask in 0u32..1 << n {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        if is_cluster_without(g, mask) {
            best = size;
        }
    }
    Ok(best)
}

fn multigraph_acyclic_without(mg: &MultiGraph, removed: u32) -> bool {
    let n = mg.vertex_count();
    for v in 0..n {
        if removed >> v & 1 == 0 && mg.loops_at(v) > 0 {
            return false;
        }
    }
    for u in 0..n {
        if removed >> u & 1 == 1 {
            continue;
        }
        for (v, m) in mg.neighbors(u) {
            if removed >> v & 1 == 0 && m >= 2 {
                return false;
            }
        }
    }
    // Simple-skeleton DFS.
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] || removed >> start & 1 == 1 {
            continue;
        }
        let mut stack = vec![(start, usize::MAX)];
        seen[start] = true;
        while let Some((v, from)) = stack.pop() {
            for (w, _) in mg.neighbors(v) {
                if removed >> w & 1 == 1 || w == from {
                    continue;
                }
                if seen[w] {
                    return false;
                }
                seen[w] = true;
                stack.push((w, v));
            }
        }
    }
    true
}

/// Minimum feedback vertex set size restricted to subsets of `allow`, or
/// `None` when even removing all of `allow` leaves a cycle.
pub fn brute_fvs(mg: &MultiGraph, allow: &BTreeSet<Vertex>) -> Result<Option<usize>, OracleError> {
    let n = mg.vertex_count();
    check_budget(n, CHROMATIC_FVS_BUDGET)?;
    let allow_mask: u32 = allow.iter().fold(0, |m, &v| m | 1 << v);
    let mut best: Option<usize> = None;
    for mask in 0u32..1 << n {
        if mask & !allow_mask != 0 {
            continue;
        }
        let size = mask.count_ones() as usize;
        if best.is_some_and(|b| size >= b) {
            continue;
        }
        if multigraph_acyclic_without(mg, mask) {
            best = Some(size);
        }
    }
    Ok(best)
}

/// Chromatic number by pruned enumeration of block assignments
/// (restricted-growth strings filtered to proper colorings).
pub fn brute_chromatic(g: &Graph) -> Result<usize, OracleError> {
    let n = g.vertex_count();
    check_budget(n, CHROMATIC_FVS_BUDGET)?;
    if n == 0 {
        return Ok(0);
    }
    fn rec(g: &Graph, assign: &mut Vec<usize>, v: usize, used: usize, best: &mut usize) {
        if used >= *best {
            return;
        }
        if v == g.vertex_count() {
            *best = used;
            return;
        }
        // Canonical block assignment: a new block index is exactly `used`.
        for c in 0..=used.min(*best - 1) {
            if g.neighbors(v).filter(|&w| w < v).all(|w| assign[w] != c) {
                assign[v] = c;
                rec(g, assign, v + 1, used.max(c + 1), best);
            }
        }
    }
    let mut best = n;
    let mut assign = vec![usize::MAX; n];
    rec(g, &mut assign, 0, 0, &mut best);
    Ok(best)
}

/// Minimum color count extending a fixed coloring of the cluster's
/// X-neighborhood over the cluster, by direct injective assignment
/// enumeration. `p_block[x]` is the block of the x-th neighborhood vertex;
/// `member_keys[m]` lists neighborhood indices adjacent to cluster member m.
pub fn brute_extension_colors(p_block: &[usize], member_keys: &[BTreeSet<usize>]) -> usize {
    let blocks = p_block.iter().map(|&b| b + 1).max().unwrap_or(0);
    let members = member_keys.len();
    let forbidden: Vec<BTreeSet<usize>> = member_keys
        .iter()
        .map(|key| key.iter().map(|&x| p_block[x]).collect())
        .collect();
    // Colors 0..blocks are the blocks of p; higher colors are fresh (used in
    // order). Cluster members form a clique, so colors are pairwise distinct.
    fn rec(
        m: usize,
        members: usize,
        blocks: usize,
        forbidden: &[BTreeSet<usize>],
        taken: &mut Vec<usize>,
        fresh: usize,
        best: &mut usize,
    ) {
        if fresh >= *best {
            return;
        }
        if m == members {
            *best = fresh;
            return;
        }
        for c in 0..blocks + fresh + 1 {
            if taken.contains(&c) || (c < blocks && forbidden[m].contains(&c)) {
                continue;
            }
            let nf = if c >= blocks + fresh {
                fresh + 1
            } else {
                fresh
            };
            taken.push(c);
            rec(m + 1, members, blocks, forbidden, taken, nf, best);
            taken.pop();
        }
    }
    let mut best = members + 1;
    rec(
        0,
        members,
        blocks,
        &forbidden,
        &mut Vec::new(),
        0,
        &mut best,
    );
    blocks + best
}

/// Applies the two degree reduction rules to a fixpoint, protecting `s`:
/// free vertices of degree at most one vanish, free vertices of degree two
/// are contracted (possibly creating parallel edges or self loops). The
/// differential oracle for the link-cut-based reduction.
pub fn naive_reduce(g: &Graph, s: &BTreeSet<Vertex>) -> Result<ReducedGraph, OracleError> {
    let n = g.vertex_count();
    check_budget(n, REDUCE_BUDGET)?;
    let mut mg = MultiGraph::from_graph(g);
    let mut alive: Vec<bool> = (0..n).map(|v| s.contains(&v) || mg.degree(v) > 0).collect();
    // Isolated free vertices are gone already (degree-zero case of rule 1).
    loop {
        let mut changed = false;
        for v in 0..n {
            if !alive[v] || s.contains(&v) || mg.loops_at(v) > 0 {
                continue;
            }
            let deg = mg.degree(v);
            if deg <= 1 {
                mg.isolate(v);
                alive[v] = false;
                changed = true;
            } else if deg == 2 {
                let slots: Vec<Vertex> = mg
                    .neighbors(v)
                    .flat_map(|(w, m)| std::iter::repeat_n(w, m as usize))
                    .collect();
                debug_assert_eq!(slots.len(), 2);
                mg.isolate(v);
                mg.add_edge(slots[0], slots[1]);
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let vertices: BTreeSet<Vertex> = (0..n).filter(|&v| alive[v]).collect();
    let mut out = ReducedGraph::new(vertices, s.clone());
    for u in 0..n {
        if !alive[u] {
            continue;
        }
        for _ in 0..mg.loops_at(u) {
            out.add_edge(u, u, EdgeTrace::Contracted);
        }
        for (v, m) in mg.neighbors(u) {
            if u < v {
                let trace = if g.has_edge(u, v) && m == 1 {
                    EdgeTrace::Direct
                } else {
                    EdgeTrace::Contracted
                };
                for _ in 0..m {
                    out.add_edge(u, v, trace);
                }
            }
        }
    }
    Ok(out)
}
