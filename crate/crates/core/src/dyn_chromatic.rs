//! Fully dynamic chromatic number, parameterized by the cluster vertex
//! deletion number.
//!
//! Rides on [`DynCvdExact`]: for every cluster `l` and every partition `p`
//! of the cluster's X-neighborhood `X_l`, the table holds the minimum
//! number of colors extending `p` over the cluster (computed by a small
//! max-flow over equivalence classes). Per neighborhood key `Y` the values
//! live in ordered multisets, so the cached answer is a minimum over proper
//! colorings of `G[X]` of a handful of multiset maxima. Queries return the
//! cache in O(1); updates pay for the table maintenance.

use crate::dyn_cvd_exact::{ClassKey, ClusterLabel, CvdExactError, DynCvdExact, MoveHooks};
use crate::graph::{EdgeOp, Graph, Vertex};
use crate::solvers::{max_flow, FlowNet};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Hard cap for the public partition enumeration.
pub const PARTITION_CAP: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChromaticError {
    #[error("partition domain of size {0} exceeds the cap {1}")]
    CapExceeded(usize, usize),
    #[error("cluster label {0} is stale")]
    StaleLabel(ClusterLabel),
    #[error(transparent)]
    Cvd(#[from] CvdExactError),
}

/// Canonical partition of a vertex subset: a restricted-growth string over
/// the sorted domain (first occurrence of each block index is increasing).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Partition {
    domain: Vec<Vertex>,
    rgs: Vec<u8>,
}

impl Partition {
    pub fn empty() -> Self {
        Partition {
            domain: Vec::new(),
            rgs: Vec::new(),
        }
    }

    /// Builds a partition from a sorted domain and a restricted-growth
    /// string; panics if the encoding is not canonical.
    pub fn new(domain: Vec<Vertex>, rgs: Vec<u8>) -> Self {
        assert_eq!(domain.len(), rgs.len());
        assert!(
            domain.windows(2).all(|w| w[0] < w[1]),
            "domain must be sorted"
        );
        let mut max = 0u8;
        for (i, &b) in rgs.iter().enumerate() {
            if i == 0 {
                assert_eq!(b, 0, "first block index must be 0");
            } else {
                assert!(b <= max + 1, "not a restricted-growth string");
            }
            max = max.max(b);
        }
        Partition { domain, rgs }
    }

    pub fn domain(&self) -> &[Vertex] {
        &self.domain
    }

    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    /// Number of blocks |p|.
    pub fn block_count(&self) -> usize {
        self.rgs.iter().map(|&b| b as usize + 1).max().unwrap_or(0)
    }

    pub fn block_of(&self, v: Vertex) -> Option<usize> {
        self.domain
            .binary_search(&v)
            .ok()
            .map(|i| self.rgs[i] as usize)
    }

    /// Restriction p|_{S'}: keep the sub-domain, renumber blocks in first
    /// occurrence order so the result is canonical again.
    pub fn restrict(&self, sub: &BTreeSet<Vertex>) -> Partition {
        let mut domain = Vec::with_capacity(sub.len());
        let mut raw = Vec::with_capacity(sub.len());
        for &v in sub {
            let i = self
                .domain
                .binary_search(&v)
                .expect("restriction within domain");
            domain.push(v);
            raw.push(self.rgs[i]);
        }
        let mut relabel: BTreeMap<u8, u8> = BTreeMap::new();
        let rgs = raw
            .into_iter()
            .map(|b| {
                let next = relabel.len() as u8;
                *relabel.entry(b).or_insert(next)
            })
            .collect();
        Partition { domain, rgs }
    }

    /// No two same-block vertices joined by an edge of `g`.
    pub fn is_proper_on(&self, g: &Graph) -> bool {
        for (i, &u) in self.domain.iter().enumerate() {
            for (j, &v) in self.domain.iter().enumerate().skip(i + 1) {
                if self.rgs[i] == self.rgs[j] && g.has_edge(u, v) {
                    return false;
                }
            }
        }
        true
    }
}

fn rgs_successor(rgs: &mut [u8]) -> bool {
    let n = rgs.len();
    for i in (1..n).rev() {
        let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
        if rgs[i] <= prefix_max {
            rgs[i] += 1;
            rgs[i + 1..].fill(0);
            return true;
        }
    }
    false
}

fn partitions_unbounded(domain: &[Vertex]) -> Vec<Partition> {
    let n = domain.len();
    if n == 0 {
        return vec![Partition::empty()];
    }
    let mut out = Vec::new();
    let mut rgs = vec![0u8; n];
    loop {
        out.push(Partition {
            domain: domain.to_vec(),
            rgs: rgs.clone(),
        });
        if !rgs_successor(&mut rgs) {
            return out;
        }
    }
}

/// All partitions of `s`, in restricted-growth lexicographic order; exactly
/// the Bell number of |s| many.
pub fn enumerate_partitions(s: &BTreeSet<Vertex>) -> Result<Vec<Partition>, ChromaticError> {
    if s.len() > PARTITION_CAP {
        return Err(ChromaticError::CapExceeded(s.len(), PARTITION_CAP));
    }
    let domain: Vec<Vertex> = s.iter().copied().collect();
    Ok(partitions_unbounded(&domain))
}

/// Minimum colors extending `p` over a cluster with the given classes
/// (class key -> member count). Flow construction: unit arcs from the
/// source to one node per block of `p`, arcs block -> class when no class
/// neighbor sits in that block, class arcs to the sink with the class size
/// as capacity. The reachable flow `r` is the number of cluster vertices
/// recoloring into blocks of `p`, so the answer is |p| + |C_l| - r.
pub fn chi_over_classes(p: &Partition, classes: &BTreeMap<ClassKey, usize>) -> usize {
    let blocks = p.block_count();
    let cluster_size: usize = classes.values().sum();
    if classes.is_empty() {
        return blocks;
    }
    let source = 0;
    let sink = 1 + blocks + classes.len();
    let mut net = FlowNet::new(sink + 1, source, sink);
    for i in 0..blocks {
        net.add_arc(source, 1 + i, 1);
    }
    for (ci, (key, &count)) in classes.iter().enumerate() {
        let node = 1 + blocks + ci;
        net.add_arc(node, sink, count as u64);
        let occupied: BTreeSet<usize> = key
            .iter()
            .map(|&x| p.block_of(x).expect("key within X_l"))
            .collect();
        for i in 0..blocks {
            if !occupied.contains(&i) {
                net.add_arc(1 + i, node, 1);
            }
        }
    }
    let r = max_flow(&net) as usize;
    blocks + cluster_size - r
}

/// Ordered multiset over color counts with O(log) insert/remove and O(1)
/// max, as a counted search tree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Multiset {
    counts: BTreeMap<usize, usize>,
    total: usize,
}

impl Multiset {
    fn insert(&mut self, v: usize) {
        *self.counts.entry(v).or_insert(0) += 1;
        self.total += 1;
    }

    fn remove_one(&mut self, v: usize) {
        let c = self.counts.get_mut(&v).expect("value present");
        *c -= 1;
        if *c == 0 {
            self.counts.remove(&v);
        }
        self.total -= 1;
    }

    fn max(&self) -> Option<usize> {
        self.counts.keys().next_back().copied()
    }

    fn is_empty(&self) -> bool {
        self.total == 0
    }
}

type LambdaKey = (Vec<Vertex>, Vec<u8>);

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct ChiEntry {
    xl: Vec<Vertex>,
    by_partition: BTreeMap<Vec<u8>, usize>,
}

#[derive(Debug, Clone, Default)]
struct Tables {
    chi: BTreeMap<ClusterLabel, ChiEntry>,
    lambda: BTreeMap<LambdaKey, Multiset>,
}

impl Tables {
    fn withdraw(&mut self, l: ClusterLabel) {
        if let Some(entry) = self.chi.remove(&l) {
            for (rgs, val) in entry.by_partition {
                let key = (entry.xl.clone(), rgs);
                let set = self.lambda.get_mut(&key).expect("deposited earlier");
                set.remove_one(val);
                if set.is_empty() {
                    self.lambda.remove(&key);
                }
            }
        }
    }

    fn deposit(&mut self, st: &DynCvdExact, l: ClusterLabel) {
        let xl: Vec<Vertex> = st
            .cluster_x_neighborhood(l)
            .expect("live cluster")
            .into_iter()
            .collect();
        let classes: BTreeMap<ClassKey, usize> = st
            .cluster_classes(l)
            .expect("live cluster")
            .iter()
            .map(|(k, m)| (k.clone(), m.len()))
            .collect();
        let mut entry = ChiEntry {
            xl: xl.clone(),
            by_partition: BTreeMap::new(),
        };
        for p in partitions_unbounded(&xl) {
            let val = chi_over_classes(&p, &classes);
            self.lambda
                .entry((xl.clone(), p.rgs.clone()))
                .or_default()
                .insert(val);
            entry.by_partition.insert(p.rgs, val);
        }
        self.chi.insert(l, entry);
    }

    fn full_build(st: &DynCvdExact) -> Tables {
        let mut t = Tables::default();
        for l in st.cluster_labels() {
            t.deposit(st, l);
        }
        t
    }

    /// Eq-style answer: minimum over proper colorings p of G[X] of the
    /// larger of |p| and the maxima of the matching multisets.
    fn answer(&self, g: &Graph, x: &BTreeSet<Vertex>) -> usize {
        if g.vertex_count() == 0 {
            return 0;
        }
        let domain: Vec<Vertex> = x.iter().copied().collect();
        let ys: BTreeSet<Vec<Vertex>> = self.lambda.keys().map(|(y, _)| y.clone()).collect();
        let mut best = usize::MAX;
        for p in partitions_unbounded(&domain) {
            if !p.is_proper_on(g) {
                continue;
            }
            let mut val = p.block_count();
            for y in &ys {
                let sub: BTreeSet<Vertex> = y.iter().copied().collect();
                let restricted = p.restrict(&sub);
                if let Some(set) = self.lambda.get(&(y.clone(), restricted.rgs)) {
                    val = val.max(set.max().expect("nonempty multisets only"));
                }
            }
            best = best.min(val);
        }
        best
    }
}

struct TableHooks<'a> {
    tables: &'a mut Tables,
    pending: Option<ClusterLabel>,
}

impl MoveHooks for TableHooks<'_> {
    fn before_move_to_x(&mut self, st: &DynCvdExact, v: Vertex) {
        let l = st.cluster_label_of(v).expect("moving a free vertex");
        self.tables.withdraw(l);
        self.pending = Some(l);
    }

    fn after_move_to_x(&mut self, st: &DynCvdExact, _v: Vertex) {
        let l = self.pending.take().expect("before hook ran");
        if st.has_cluster(l) {
            self.tables.deposit(st, l);
        }
    }

    fn before_remove_from_x(&mut self, st: &DynCvdExact, v: Vertex) {
        let adj = st.clusters_adjacent_to(v).expect("removing an X vertex");
        self.pending = adj.iter().next().copied();
        if let Some(l) = self.pending {
            self.tables.withdraw(l);
        }
    }

    fn after_remove_from_x(&mut self, st: &DynCvdExact, v: Vertex) {
        let l = st.cluster_label_of(v).expect("v rejoined a cluster");
        self.tables.deposit(st, l);
        self.pending = None;
    }
}

#[derive(Debug, Clone)]
pub struct DynChromatic {
    cvd: DynCvdExact,
    tables: Tables,
    cached: usize,
}

impl DynChromatic {
    pub fn new(n: usize) -> Self {
        let cvd = DynCvdExact::new(n);
        let tables = Tables::full_build(&cvd);
        let cached = tables.answer(cvd.graph(), cvd.solution());
        DynChromatic {
            cvd,
            tables,
            cached,
        }
    }

    pub fn graph(&self) -> &Graph {
        self.cvd.graph()
    }

    pub fn cvd(&self) -> &DynCvdExact {
        &self.cvd
    }

    /// Applies one edge update; all chi and lambda maintenance happens in
    /// hooks around the vertex moves of the underlying structure, then the
    /// cached answer is refreshed once.
    pub fn update(&mut self, op: EdgeOp) -> Result<(), ChromaticError> {
        let mut hooks = TableHooks {
            tables: &mut self.tables,
            pending: None,
        };
        self.cvd.update_with(op, &mut hooks)?;
        self.cached = self.tables.answer(self.cvd.graph(), self.cvd.solution());
        Ok(())
    }

    /// Chromatic number of the current graph, straight from the cache.
    pub fn chromatic_number(&self) -> usize {
        self.cached
    }

    /// Minimum colors extending `p` over cluster `l` in the current state.
    pub fn compute_chi(&self, l: ClusterLabel, p: &Partition) -> Result<usize, ChromaticError> {
        let Some(xl) = self.cvd.cluster_x_neighborhood(l) else {
            return Err(ChromaticError::StaleLabel(l));
        };
        let domain: Vec<Vertex> = xl.into_iter().collect();
        if p.domain() != domain {
            return Err(ChromaticError::StaleLabel(l));
        }
        let classes: BTreeMap<ClassKey, usize> = self
            .cvd
            .cluster_classes(l)
            .expect("live cluster")
            .iter()
            .map(|(k, m)| (k.clone(), m.len()))
            .collect();
        Ok(chi_over_classes(p, &classes))
    }

    /// Full consistency check: tables equal a from-scratch rebuild, every
    /// multiset's cardinality counts the clusters sharing its key, and the
    /// cache equals a fresh evaluation. Test support.
    pub fn validate(&self) -> Result<(), String> {
        self.cvd.validate()?;
        let fresh = Tables::full_build(&self.cvd);
        if fresh.chi != self.tables.chi {
            return Err("chi table differs from scratch rebuild".into());
        }
        if fresh.lambda != self.tables.lambda {
            return Err("lambda directory differs from scratch rebuild".into());
        }
        for ((y, _), set) in &self.tables.lambda {
            let live = self
                .cvd
                .cluster_labels()
                .filter(|&l| {
                    self.cvd
                        .cluster_x_neighborhood(l)
                        .is_some_and(|xl| xl.iter().copied().collect::<Vec<_>>() == *y)
                })
                .count();
            if set.total != live {
                return Err(format!(
                    "multiset for {y:?} holds {} values but {live} clusters share the key",
                    set.total
                ));
            }
        }
        let scratch = fresh.answer(self.cvd.graph(), self.cvd.solution());
        if scratch != self.cached {
            return Err(format!(
                "cached answer {} != scratch {scratch}",
                self.cached
            ));
        }
        Ok(())
    }
}
