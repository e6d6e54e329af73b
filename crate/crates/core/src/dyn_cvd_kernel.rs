//! Fully dynamic cluster vertex deletion around a 3-approximate solution.
//!
//! Maintains `X` plus per-cluster bookkeeping: cluster member sets `C_l`,
//! the cluster label of every free vertex, the labels `L_x` each `x` in `X`
//! is incident to, and the persistent split of each incident cluster into
//! neighbors `P+` and non-neighbors `P-` of `x`. The persistent sets make
//! "copy a cluster" O(1), which is what keeps vertex moves at O(|X| log n).

use crate::graph::{EdgeOp, Graph, GraphError, Vertex};
use crate::pset::{PSet, PStore};
use crate::solvers::{cvd_3approx, cvd_exact_weighted, WeightedGraph};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub type ClusterLabel = u64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CvdKernelError {
    #[error("vertex {0} is not free (already in X)")]
    NotFree(Vertex),
    #[error("vertex {0} is not in X")]
    NotInX(Vertex),
    #[error("removing {0} from X would not leave a cluster graph")]
    AssumptionViolated(Vertex),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone)]
pub struct DynCvdKernel {
    g: Graph,
    x: BTreeSet<Vertex>,
    store: PStore,
    next_label: ClusterLabel,
    /// C_l: members of the cluster labeled l. Labels are never reused.
    clusters: BTreeMap<ClusterLabel, PSet>,
    /// l_u for free vertices; None exactly on members of X.
    label_of: Vec<Option<ClusterLabel>>,
    /// L_x: labels of clusters x has a neighbor in.
    incident: BTreeMap<Vertex, BTreeSet<ClusterLabel>>,
    /// P+_{x,l} = C_l ∩ N(x); entries exist iff l ∈ L_x.
    p_plus: BTreeMap<(Vertex, ClusterLabel), PSet>,
    /// P-_{x,l} = C_l \ N(x); entries exist iff l ∈ L_x.
    p_minus: BTreeMap<(Vertex, ClusterLabel), PSet>,
    peak_x: usize,
}

impl DynCvdKernel {
    /// Empty graph: every vertex is its own singleton cluster.
    pub fn new(n: usize) -> Self {
        let mut store = PStore::new();
        let mut clusters = BTreeMap::new();
        let mut label_of = Vec::with_capacity(n);
        for v in 0..n {
            let c = store.insert(PSet::empty(), v).expect("fresh set");
            clusters.insert(v as ClusterLabel, c);
            label_of.push(Some(v as ClusterLabel));
        }
        DynCvdKernel {
            g: Graph::new(n),
            x: BTreeSet::new(),
            store,
            next_label: n as ClusterLabel,
            clusters,
            label_of,
            incident: BTreeMap::new(),
            p_plus: BTreeMap::new(),
            p_minus: BTreeMap::new(),
            peak_x: 0,
        }
    }

    /// Builds the bookkeeping for a given graph and cluster vertex deletion.
    pub fn from_parts(g: Graph, x: BTreeSet<Vertex>) -> Result<Self, CvdKernelError> {
        let n = g.vertex_count();
        if let Some(&v) = x.iter().find(|&&v| v >= n) {
            return Err(GraphError::OutOfRange(v, n).into());
        }
        let free: Vec<Vertex> = (0..n).filter(|v| !x.contains(v)).collect();
        let (residual, _) = g
            .induced_subgraph(free.iter().copied())
            .expect("free within range");
        if residual.find_induced_p3().is_some() {
            return Err(CvdKernelError::AssumptionViolated(
                *x.iter().next().unwrap_or(&0),
            ));
        }

        let mut st = DynCvdKernel {
            g,
            x: x.clone(),
            store: PStore::new(),
            next_label: 0,
            clusters: BTreeMap::new(),
            label_of: vec![None; n],
            incident: x.iter().map(|&v| (v, BTreeSet::new())).collect(),
            p_plus: BTreeMap::new(),
            p_minus: BTreeMap::new(),
            peak_x: x.len(),
        };
        // Clusters are the components of the residual graph, labeled in
        // order of their smallest member.
        let mut seen = vec![false; n];
        for &start in &free {
            if seen[start] {
                continue;
            }
            let mut members = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                for w in st.g.neighbors(v) {
                    if !x.contains(&w) && !seen[w] {
                        seen[w] = true;
                        members.push(w);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            let l = st.next_label;
            st.next_label += 1;
            let mut c = PSet::empty();
            for &v in &members {
                c = st.store.insert(c, v).expect("distinct members");
                st.label_of[v] = Some(l);
            }
            st.clusters.insert(l, c);
            for &xv in &x {
                let mut plus = PSet::empty();
                let mut minus = PSet::empty();
                for &v in &members {
                    if st.g.has_edge(xv, v) {
                        plus = st.store.insert(plus, v).expect("distinct");
                    } else {
                        minus = st.store.insert(minus, v).expect("distinct");
                    }
                }
                if !plus.is_empty() {
                    st.incident.get_mut(&xv).unwrap().insert(l);
                    st.p_plus.insert((xv, l), plus);
                    st.p_minus.insert((xv, l), minus);
                }
            }
        }
        Ok(st)
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    /// Current 3-approximate solution.
    pub fn solution(&self) -> &BTreeSet<Vertex> {
        &self.x
    }

    /// Largest |X| observed during the most recent update.
    pub fn last_update_peak(&self) -> usize {
        self.peak_x
    }

    /// Moves a free vertex `u` into X, updating all cluster bookkeeping.
    pub fn add_to_x(&mut self, u: Vertex) -> Result<(), CvdKernelError> {
        let Some(l) = self.label_of.get(u).copied().flatten() else {
            return Err(CvdKernelError::NotFree(u));
        };
        let c = self
            .store
            .remove(self.clusters[&l], u)
            .expect("u is a member");
        self.clusters.insert(l, c);

        let affected: Vec<Vertex> = self
            .x
            .iter()
            .copied()
            .filter(|x| self.incident[x].contains(&l))
            .collect();
        for xv in affected {
            if self.g.has_edge(xv, u) {
                let p = self
                    .store
                    .remove(self.p_plus[&(xv, l)], u)
                    .expect("u in P+");
                if p.is_empty() {
                    self.incident.get_mut(&xv).unwrap().remove(&l);
                    self.p_plus.remove(&(xv, l));
                    self.p_minus.remove(&(xv, l));
                } else {
                    self.p_plus.insert((xv, l), p);
                }
            } else {
                let p = self
                    .store
                    .remove(self.p_minus[&(xv, l)], u)
                    .expect("u in P-");
                self.p_minus.insert((xv, l), p);
            }
        }

        self.x.insert(u);
        self.label_of[u] = None;
        self.peak_x = self.peak_x.max(self.x.len());

        let c = self.clusters[&l];
        if !c.is_empty() {
            // u was in the cluster, hence adjacent to all remaining members.
            self.incident.insert(u, BTreeSet::from([l]));
            self.p_plus.insert((u, l), c); // O(1) persistent copy
            self.p_minus.insert((u, l), PSet::empty());
        } else {
            self.incident.insert(u, BTreeSet::new());
            self.clusters.remove(&l);
        }
        Ok(())
    }

    /// Moves `y` out of X; requires that X minus `y` is still a cluster
    /// vertex deletion (then `y` is incident to at most one cluster and
    /// adjacent to all of it).
    pub fn remove_from_x(&mut self, y: Vertex) -> Result<(), CvdKernelError> {
        if !self.x.contains(&y) {
            return Err(CvdKernelError::NotInX(y));
        }
        let labels = &self.incident[&y];
        if labels.len() >= 2 {
            return Err(CvdKernelError::AssumptionViolated(y));
        }
        let joined = labels.iter().next().copied();
        if let Some(l) = joined {
            if !self.p_minus[&(y, l)].is_empty() {
                // y misses some member of the cluster: residual P3.
                return Err(CvdKernelError::AssumptionViolated(y));
            }
        }

        self.x.remove(&y);
        self.incident.remove(&y);
        let l = match joined {
            Some(l) => {
                self.p_plus.remove(&(y, l));
                self.p_minus.remove(&(y, l));
                let c = self
                    .store
                    .insert(self.clusters[&l], y)
                    .expect("y was outside");
                self.clusters.insert(l, c);
                l
            }
            None => {
                let l = self.next_label;
                self.next_label += 1;
                let c = self.store.insert(PSet::empty(), y).expect("fresh set");
                self.clusters.insert(l, c);
                l
            }
        };
        self.label_of[y] = Some(l);

        let xs: Vec<Vertex> = self.x.iter().copied().collect();
        for xv in xs {
            if self.incident[&xv].contains(&l) {
                if self.g.has_edge(xv, y) {
                    let p = self
                        .store
                        .insert(self.p_plus[&(xv, l)], y)
                        .expect("y was outside");
                    self.p_plus.insert((xv, l), p);
                } else {
                    let p = self
                        .store
                        .insert(self.p_minus[&(xv, l)], y)
                        .expect("y was outside");
                    self.p_minus.insert((xv, l), p);
                }
            } else if self.g.has_edge(xv, y) {
                // x becomes incident to the cluster through y.
                self.incident.get_mut(&xv).unwrap().insert(l);
                let single = self.store.insert(PSet::empty(), y).expect("fresh set");
                self.p_plus.insert((xv, l), single);
                let rest = self
                    .store
                    .remove(self.clusters[&l], y)
                    .expect("y joined above");
                self.p_minus.insert((xv, l), rest);
            }
        }
        Ok(())
    }

    /// Kernel construction: forced vertices `X0` (incident to more than
    /// |X|+1 clusters) and the sampled vertex set `V'`.
    pub fn kernel(&self) -> (BTreeSet<Vertex>, BTreeSet<Vertex>) {
        let mut x0 = BTreeSet::new();
        let mut vp = BTreeSet::new();
        let cap = self.x.len() + 1;
        for &xv in &self.x {
            let labels = &self.incident[&xv];
            if labels.len() > cap {
                x0.insert(xv);
            } else {
                vp.insert(xv);
                for &l in labels {
                    vp.extend(self.store.take_smallest(self.p_plus[&(xv, l)], cap));
                    vp.extend(self.store.take_smallest(self.p_minus[&(xv, l)], cap));
                }
            }
        }
        (x0, vp)
    }

    /// Recomputes a 3-approximate solution from the kernel and installs it
    /// through the add/remove primitives.
    pub fn compress(&mut self) -> Result<(), CvdKernelError> {
        let (x0, vp) = self.kernel();
        let (sub, table) = self.g.induced_subgraph(vp).expect("kernel within universe");
        let y = cvd_3approx(&sub);
        let kept = self.x.len() - x0.len();
        let x_new: BTreeSet<Vertex> = if y.len() > kept {
            self.x.clone()
        } else {
            let mut out = x0;
            out.extend(y.into_iter().map(|i| table[i]));
            out
        };
        self.replace_solution(x_new)
    }

    fn replace_solution(&mut self, x_new: BTreeSet<Vertex>) -> Result<(), CvdKernelError> {
        let adds: Vec<Vertex> = x_new.difference(&self.x).copied().collect();
        let removes: Vec<Vertex> = self.x.difference(&x_new).copied().collect();
        for u in adds {
            self.add_to_x(u)?;
        }
        for y in removes {
            self.remove_from_x(y)?;
        }
        Ok(())
    }

    /// Applies one edge update: endpoints move into X, the edge lands inside
    /// X (no bookkeeping change), then the solution is recompressed.
    pub fn update(&mut self, op: EdgeOp) -> Result<(), CvdKernelError> {
        self.g.validate(op)?;
        self.peak_x = self.x.len();
        for w in [op.u.min(op.v), op.u.max(op.v)] {
            if !self.x.contains(&w) {
                self.add_to_x(w)?;
            }
        }
        self.g.apply(op).expect("validated above");
        self.compress()
    }

    /// Minimum cluster vertex deletion, from the kernel with the exact
    /// solver plugged in. Read-only.
    pub fn query(&self) -> BTreeSet<Vertex> {
        let (x0, vp) = self.kernel();
        let (sub, table) = self.g.induced_subgraph(vp).expect("kernel within universe");
        let y = cvd_exact_weighted(&WeightedGraph::unit(sub), None)
            .expect("unbounded search always succeeds");
        let mut out = x0;
        out.extend(y.into_iter().map(|i| table[i]));
        out
    }

    /// Full consistency check against a recomputation from `g` and `X`;
    /// test support.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.g.vertex_count();
        for v in 0..n {
            match self.label_of[v] {
                None if !self.x.contains(&v) => {
                    return Err(format!("free vertex {v} has no cluster label"));
                }
                Some(_) if self.x.contains(&v) => {
                    return Err(format!("X member {v} still has a cluster label"));
                }
                _ => {}
            }
        }
        // Recompute components of G[V \ X].
        let mut seen = vec![false; n];
        let mut expected: Vec<BTreeSet<Vertex>> = Vec::new();
        for start in 0..n {
            if seen[start] || self.x.contains(&start) {
                continue;
            }
            let mut comp = BTreeSet::from([start]);
            seen[start] = true;
            let mut queue = vec![start];
            while let Some(v) = queue.pop() {
                for w in self.g.neighbors(v) {
                    if !self.x.contains(&w) && !seen[w] {
                        seen[w] = true;
                        comp.insert(w);
                        queue.push(w);
                    }
                }
            }
            for &a in &comp {
                for &b in &comp {
                    if a < b && !self.g.has_edge(a, b) {
                        return Err(format!("component with {a},{b} is not a clique"));
                    }
                }
            }
            expected.push(comp);
        }
        let maintained: Vec<BTreeSet<Vertex>> = self
            .clusters
            .values()
            .map(|&c| self.store.to_vec(c).into_iter().collect())
            .collect();
        let mut a = expected.clone();
        let mut b = maintained.clone();
        a.sort();
        b.sort();
        if a != b {
            return Err(format!("cluster partition mismatch: {a:?} vs {b:?}"));
        }
        for (&l, &c) in &self.clusters {
            if c.is_empty() {
                return Err(format!("empty cluster {l} retained"));
            }
            for v in self.store.iter(c) {
                if self.label_of[v] != Some(l) {
                    return Err(format!(
                        "vertex {v} labeled {:?}, expected {l}",
                        self.label_of[v]
                    ));
                }
            }
        }
        for &xv in &self.x {
            let want: BTreeSet<ClusterLabel> = self
                .clusters
                .iter()
                .filter(|(_, &c)| self.store.iter(c).any(|v| self.g.has_edge(xv, v)))
                .map(|(&l, _)| l)
                .collect();
            if self.incident[&xv] != want {
                return Err(format!(
                    "L_{xv} = {:?}, expected {want:?}",
                    self.incident[&xv]
                ));
            }
            for &l in &want {
                let members = self.store.to_vec(self.clusters[&l]);
                let plus: Vec<Vertex> = members
                    .iter()
                    .copied()
                    .filter(|&v| self.g.has_edge(xv, v))
                    .collect();
                let minus: Vec<Vertex> = members
                    .iter()
                    .copied()
                    .filter(|&v| !self.g.has_edge(xv, v))
                    .collect();
                if self.store.to_vec(self.p_plus[&(xv, l)]) != plus {
                    return Err(format!("P+[{xv},{l}] mismatch"));
                }
                if self.store.to_vec(self.p_minus[&(xv, l)]) != minus {
                    return Err(format!("P-[{xv},{l}] mismatch"));
                }
            }
        }
        let live: usize = self.x.iter().map(|xv| self.incident[xv].len()).sum();
        if self.p_plus.len() != live || self.p_minus.len() != live {
            return Err("stale P entries".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::brute_cvd;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// The worked example: X = {x=0, y=1}, cluster C1 = {a=2, b=3, c=4, d=5}
    /// (a 4-clique), cluster C2 = {e=6, f=7}, x adjacent to a, c and y
    /// adjacent to c, e, f.
    fn worked_state() -> DynCvdKernel {
        let g = Graph::from_edges(
            8,
            &[
                (2, 3),
                (2, 4),
                (2, 5),
                (3, 4),
                (3, 5),
                (4, 5),
                (6, 7),
                (0, 2),
                (0, 4),
                (1, 4),
                (1, 6),
                (1, 7),
            ],
        );
        DynCvdKernel::from_parts(g, BTreeSet::from([0, 1])).unwrap()
    }

    fn pset_of(st: &DynCvdKernel, x: Vertex, l: ClusterLabel, plus: bool) -> Vec<Vertex> {
        let map = if plus { &st.p_plus } else { &st.p_minus };
        st.store.to_vec(map[&(x, l)])
    }

    #[test]
    fn worked_state_tables() {
        let st = worked_state();
        st.validate().unwrap();
        assert_eq!(st.incident[&0], BTreeSet::from([0]));
        assert_eq!(st.incident[&1], BTreeSet::from([0, 1]));
        assert_eq!(pset_of(&st, 0, 0, true), vec![2, 4]);
        assert_eq!(pset_of(&st, 0, 0, false), vec![3, 5]);
        assert_eq!(pset_of(&st, 1, 0, true), vec![4]);
        assert_eq!(pset_of(&st, 1, 0, false), vec![2, 3, 5]);
        assert_eq!(pset_of(&st, 1, 1, true), vec![6, 7]);
        assert_eq!(pset_of(&st, 1, 1, false), Vec::<Vertex>::new());
    }

    #[test]
    fn add_then_remove_restores_worked_state() {
        let mut st = worked_state();
        st.add_to_x(2).unwrap();
        st.validate().unwrap();
        assert_eq!(st.store.to_vec(st.clusters[&0]), vec![3, 4, 5]);
        assert_eq!(pset_of(&st, 0, 0, true), vec![4]);
        assert_eq!(pset_of(&st, 2, 0, true), vec![3, 4, 5]);
        assert_eq!(pset_of(&st, 2, 0, false), Vec::<Vertex>::new());

        st.remove_from_x(2).unwrap();
        st.validate().unwrap();
        assert_eq!(st.store.to_vec(st.clusters[&0]), vec![2, 3, 4, 5]);
        assert_eq!(pset_of(&st, 0, 0, true), vec![2, 4]);
        assert_eq!(pset_of(&st, 1, 0, false), vec![2, 3, 5]);
        assert_eq!(pset_of(&st, 1, 1, true), vec![6, 7]);
    }

    #[test]
    fn add_singleton_retires_label() {
        let mut st = DynCvdKernel::new(1);
        st.add_to_x(0).unwrap();
        assert!(st.x.contains(&0));
        assert!(st.incident[&0].is_empty());
        assert!(st.clusters.is_empty());
        st.validate().unwrap();
        assert_eq!(st.add_to_x(0), Err(CvdKernelError::NotFree(0)));
    }

    #[test]
    fn add_drops_emptied_incidence() {
        // x = 0 adjacent only to u = 1 inside the cluster {1, 2}.
        let g = Graph::from_edges(3, &[(1, 2), (0, 1)]);
        let mut st = DynCvdKernel::from_parts(g, BTreeSet::from([0])).unwrap();
        assert_eq!(st.incident[&0].len(), 1);
        st.add_to_x(1).unwrap();
        assert!(st.incident[&0].is_empty());
        st.validate().unwrap();
    }

    #[test]
    fn remove_into_fresh_cluster() {
        let st = DynCvdKernel::from_parts(Graph::new(1), BTreeSet::from([0])).unwrap();
        let mut st = st;
        st.remove_from_x(0).unwrap();
        assert!(st.x.is_empty());
        assert_eq!(st.clusters.len(), 1);
        st.validate().unwrap();
        assert_eq!(st.remove_from_x(0), Err(CvdKernelError::NotInX(0)));
    }

    #[test]
    fn remove_with_two_clusters_rejected() {
        let g = Graph::from_edges(3, &[(0, 1), (0, 2)]);
        let mut st = DynCvdKernel::from_parts(g, BTreeSet::from([0])).unwrap();
        assert_eq!(
            st.remove_from_x(0),
            Err(CvdKernelError::AssumptionViolated(0))
        );
    }

    #[test]
    fn compress_clears_clique_solution() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let mut st = DynCvdKernel::from_parts(g, BTreeSet::from([0])).unwrap();
        st.compress().unwrap();
        assert!(st.solution().is_empty());
        st.validate().unwrap();
    }

    /// Clusters large enough that the kernel really truncates the P+ and P-
    /// samples to |X|+1 vertices each, checked against the exact solver.
    #[test]
    fn big_cluster_streams_truncate_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4242);
        for _ in 0..8 {
            let n = 30usize;
            let mut st = DynCvdKernel::new(n);
            // Three 9-cliques over 3..30, grown edge by edge.
            let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
            for c in 0..3 {
                let base = 3 + 9 * c;
                for a in base..base + 9 {
                    for b in a + 1..base + 9 {
                        edges.push((a, b));
                    }
                }
            }
            // Spoilers 0..3 attach to random clique vertices.
            for s in 0..3 {
                for _ in 0..6 {
                    let t = rng.gen_range(3..n);
                    if !edges.contains(&(s, t)) {
                        edges.push((s, t));
                    }
                }
            }
            for &(u, v) in &edges {
                st.update(EdgeOp::insert(u, v)).unwrap();
            }
            st.validate().unwrap();
            let xs = st.solution().len();
            let (x0, vp) = st.kernel();
            assert!(vp.len() <= xs + 2 * xs * (xs + 1) * (xs + 1));
            // Sampling must not lose the optimum.
            let opt =
                cvd_exact_weighted(&WeightedGraph::unit(st.graph().clone()), None).unwrap().len();
            assert!(xs <= 3 * opt);
            let (sub, _) = st.graph().induced_subgraph(vp).unwrap();
            let sub_opt = cvd_exact_weighted(&WeightedGraph::unit(sub), None).unwrap().len();
            assert_eq!(x0.len() + sub_opt, opt);
            assert_eq!(st.query().len(), opt);

            // Tear a clique down again; bounds keep holding.
            for a in 3..12 {
                for b in a + 1..12 {
                    st.update(EdgeOp::delete(a, b)).unwrap();
                }
            }
            st.validate().unwrap();
            let opt =
                cvd_exact_weighted(&WeightedGraph::unit(st.graph().clone()), None).unwrap().len();
            assert_eq!(st.query().len(), opt);
        }
    }

    #[test]
    fn forced_vertex_survives_compression() {
        // 0 adjacent to |X|+2 = 3 singleton clusters.
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        let mut st = DynCvdKernel::from_parts(g, BTreeSet::from([0])).unwrap();
        let (x0, vp) = st.kernel();
        assert_eq!(x0, BTreeSet::from([0]));
        assert!(vp.is_empty());
        st.compress().unwrap();
        assert_eq!(st.solution(), &BTreeSet::from([0]));
        st.validate().unwrap();
    }

    #[test]
    fn p3_stream_examples() {
        let mut st = DynCvdKernel::new(3);
        st.update(EdgeOp::insert(0, 1)).unwrap();
        st.update(EdgeOp::insert(1, 2)).unwrap();
        assert!(st.solution().len() <= 3);
        st.validate().unwrap();

        st.update(EdgeOp::delete(0, 1)).unwrap();
        st.update(EdgeOp::delete(1, 2)).unwrap();
        assert!(st.solution().is_empty());

        // Rebuild the path and delete the middle edge two ways.
        st.update(EdgeOp::insert(0, 1)).unwrap();
        st.update(EdgeOp::insert(1, 2)).unwrap();
        st.update(EdgeOp::delete(0, 1)).unwrap();
        assert!(
            st.solution().is_empty(),
            "optimum is zero, 3*0 forces empty X"
        );
    }

    #[test]
    fn clique_stream_ratio() {
        let mut st = DynCvdKernel::new(5);
        for u in 0..5 {
            for v in u + 1..5 {
                st.update(EdgeOp::insert(u, v)).unwrap();
                let opt = brute_cvd(st.graph()).unwrap();
                assert!(st.solution().len() <= 3 * opt);
                st.validate().unwrap();
            }
        }
    }

    #[test]
    fn query_examples() {
        let mut st = DynCvdKernel::new(5);
        for (u, v) in [(0, 1), (2, 3), (3, 4), (2, 4)] {
            st.update(EdgeOp::insert(u, v)).unwrap();
        }
        assert!(st.query().is_empty());

        let mut st = DynCvdKernel::new(3);
        st.update(EdgeOp::insert(0, 1)).unwrap();
        st.update(EdgeOp::insert(1, 2)).unwrap();
        assert_eq!(st.query().len(), 1);

        let mut st = DynCvdKernel::new(5);
        for (u, v) in [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)] {
            st.update(EdgeOp::insert(u, v)).unwrap();
        }
        assert_eq!(st.query().len(), 1);
    }

    #[test]
    fn random_streams_hold_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..40 {
            let n = rng.gen_range(2..=12usize);
            let mut st = DynCvdKernel::new(n);
            for _ in 0..40 {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u == v {
                    continue;
                }
                let op = if st.graph().has_edge(u, v) {
                    EdgeOp::delete(u, v)
                } else {
                    EdgeOp::insert(u, v)
                };
                let opt_before = brute_cvd(st.graph()).unwrap();
                st.update(op).unwrap();
                st.validate().unwrap();

                let opt = brute_cvd(st.graph()).unwrap();
                let xs = st.solution().len();
                assert!(xs <= 3 * opt, "|X|={xs} opt={opt}");
                let k = opt.max(opt_before);
                assert!(
                    st.last_update_peak() <= 6 * k + 2,
                    "peak {} exceeds 6k+2 with k={k}",
                    st.last_update_peak()
                );

                // Kernel bound and soundness.
                let (x0, vp) = st.kernel();
                assert!(vp.len() <= xs + 2 * xs * (xs + 1) * (xs + 1));
                let (sub, _) = st.graph().induced_subgraph(vp.iter().copied()).unwrap();
                let sub_opt = cvd_exact_weighted(&WeightedGraph::unit(sub), None)
                    .unwrap()
                    .len();
                assert_eq!(x0.len() + sub_opt, opt);
                assert_eq!(st.query().len(), opt);
            }
        }
    }
}
