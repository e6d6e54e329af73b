//! Fully dynamic cluster vertex deletion maintaining an exact minimum
//! solution, plus the class bookkeeping the chromatic structure builds on.
//!
//! Free vertices are grouped per cluster into equivalence classes by their
//! neighborhood inside `X`; classes are interchangeable, so the compression
//! step solves a weighted instance over class labels instead of vertices.
//! Updates run grow / compress / exchange and are exponential in the
//! solution size (the class directory itself can hold 2^|X| entries).

use crate::graph::{EdgeOp, Graph, GraphError, Vertex};
use crate::solvers::{cvd_exact_weighted, WeightedGraph};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub type ClusterLabel = u64;
/// Canonical class key: the sorted neighborhood inside X shared by the
/// class members.
pub type ClassKey = Vec<Vertex>;
/// One cluster in label-independent form: members plus the class partition.
pub type CanonicalCluster = (Vec<Vertex>, Vec<(ClassKey, Vec<Vertex>)>);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CvdExactError {
    #[error("vertex {0} is not free (already in X)")]
    NotFree(Vertex),
    #[error("vertex {0} is not in X")]
    NotInX(Vertex),
    #[error("removing {0} from X would not leave a cluster graph")]
    AssumptionViolated(Vertex),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Default)]
struct Cluster {
    members: BTreeSet<Vertex>,
    /// Nonempty equivalence classes, keyed by X-neighborhood.
    classes: BTreeMap<ClassKey, BTreeSet<Vertex>>,
}

/// Where a vertex of the compression instance came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BackRef {
    Real(Vertex),
    Class(ClusterLabel, ClassKey),
}

/// Observer for vertex moves; the chromatic layer hangs its table
/// maintenance off these.
pub trait MoveHooks {
    fn before_move_to_x(&mut self, _st: &DynCvdExact, _v: Vertex) {}
    fn after_move_to_x(&mut self, _st: &DynCvdExact, _v: Vertex) {}
    fn before_remove_from_x(&mut self, _st: &DynCvdExact, _v: Vertex) {}
    fn after_remove_from_x(&mut self, _st: &DynCvdExact, _v: Vertex) {}
}

pub struct NoHooks;

impl MoveHooks for NoHooks {}

#[derive(Debug, Clone)]
pub struct DynCvdExact {
    g: Graph,
    x: BTreeSet<Vertex>,
    next_label: ClusterLabel,
    clusters: BTreeMap<ClusterLabel, Cluster>,
    cluster_of: Vec<Option<ClusterLabel>>,
    /// Per x in X: the labels of clusters x has a neighbor in.
    adj_clusters: BTreeMap<Vertex, BTreeSet<ClusterLabel>>,
}

impl DynCvdExact {
    /// Empty graph: X is empty and every vertex forms a singleton cluster
    /// with the empty class key.
    pub fn new(n: usize) -> Self {
        let mut clusters = BTreeMap::new();
        let mut cluster_of = Vec::with_capacity(n);
        for v in 0..n {
            let mut cluster = Cluster::default();
            cluster.members.insert(v);
            cluster.classes.insert(Vec::new(), BTreeSet::from([v]));
            clusters.insert(v as ClusterLabel, cluster);
            cluster_of.push(Some(v as ClusterLabel));
        }
        DynCvdExact {
            g: Graph::new(n),
            x: BTreeSet::new(),
            next_label: n as ClusterLabel,
            clusters,
            cluster_of,
            adj_clusters: BTreeMap::new(),
        }
    }

    /// Builds the directory for a given graph and cluster vertex deletion
    /// (not necessarily minimum; test and bootstrap entry).
    pub fn from_parts(g: Graph, x: BTreeSet<Vertex>) -> Result<Self, CvdExactError> {
        let n = g.vertex_count();
        if let Some(&v) = x.iter().find(|&&v| v >= n) {
            return Err(GraphError::OutOfRange(v, n).into());
        }
        let mut st = DynCvdExact {
            g,
            x: x.clone(),
            next_label: 0,
            clusters: BTreeMap::new(),
            cluster_of: vec![None; n],
            adj_clusters: x.iter().map(|&v| (v, BTreeSet::new())).collect(),
        };
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] || x.contains(&start) {
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
            for (i, &a) in members.iter().enumerate() {
                for &b in &members[i + 1..] {
                    if !st.g.has_edge(a, b) {
                        return Err(CvdExactError::AssumptionViolated(a.min(b)));
                    }
                }
            }
            members.sort_unstable();
            let l = st.next_label;
            st.next_label += 1;
            let mut cluster = Cluster::default();
            for &v in &members {
                cluster.members.insert(v);
                let key: ClassKey = st.g.neighbors(v).filter(|w| x.contains(w)).collect();
                for &u in &key {
                    st.adj_clusters.get_mut(&u).unwrap().insert(l);
                }
                cluster.classes.entry(key).or_default().insert(v);
                st.cluster_of[v] = Some(l);
            }
            st.clusters.insert(l, cluster);
        }
        Ok(st)
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    /// Current exact minimum solution (O(1) query).
    pub fn solution(&self) -> &BTreeSet<Vertex> {
        &self.x
    }

    pub fn cluster_label_of(&self, v: Vertex) -> Option<ClusterLabel> {
        self.cluster_of.get(v).copied().flatten()
    }

    pub fn cluster_labels(&self) -> impl Iterator<Item = ClusterLabel> + '_ {
        self.clusters.keys().copied()
    }

    pub fn has_cluster(&self, l: ClusterLabel) -> bool {
        self.clusters.contains_key(&l)
    }

    pub fn cluster_members(&self, l: ClusterLabel) -> Option<&BTreeSet<Vertex>> {
        self.clusters.get(&l).map(|c| &c.members)
    }

    pub fn cluster_classes(
        &self,
        l: ClusterLabel,
    ) -> Option<&BTreeMap<ClassKey, BTreeSet<Vertex>>> {
        self.clusters.get(&l).map(|c| &c.classes)
    }

    /// X_l: the members of X with a neighbor in cluster `l` (the union of
    /// the cluster's class keys).
    pub fn cluster_x_neighborhood(&self, l: ClusterLabel) -> Option<BTreeSet<Vertex>> {
        self.clusters
            .get(&l)
            .map(|c| c.classes.keys().flat_map(|k| k.iter().copied()).collect())
    }

    /// Cluster labels adjacent to `x` (must be in X).
    pub fn clusters_adjacent_to(&self, x: Vertex) -> Option<&BTreeSet<ClusterLabel>> {
        self.adj_clusters.get(&x)
    }

    /// Moves a free vertex into X, rewriting its cluster's class directory.
    pub fn move_to_x(&mut self, v: Vertex) -> Result<(), CvdExactError> {
        let Some(l) = self.cluster_of.get(v).copied().flatten() else {
            return Err(CvdExactError::NotFree(v));
        };
        let key: ClassKey = self.g.neighbors(v).filter(|w| self.x.contains(w)).collect();
        let cluster = self.clusters.get_mut(&l).expect("label is live");
        let class = cluster.classes.get_mut(&key).expect("v sits in its class");
        class.remove(&v);
        if class.is_empty() {
            cluster.classes.remove(&key);
        }
        cluster.members.remove(&v);
        self.cluster_of[v] = None;
        self.x.insert(v);

        if cluster.members.is_empty() {
            self.clusters.remove(&l);
            for labels in self.adj_clusters.values_mut() {
                labels.remove(&l);
            }
            self.adj_clusters.insert(v, BTreeSet::new());
        } else {
            // Every surviving member was adjacent to v inside the clique, so
            // every class key gains v.
            let cluster = self.clusters.get_mut(&l).expect("nonempty");
            let old = std::mem::take(&mut cluster.classes);
            for (mut k, members) in old {
                let pos = k.binary_search(&v).unwrap_err();
                k.insert(pos, v);
                cluster.classes.insert(k, members);
            }
            self.adj_clusters.insert(v, BTreeSet::from([l]));
            // X-neighbors of v may have lost their last witness in l.
            for u in key {
                let cluster = &self.clusters[&l];
                if !cluster.classes.keys().any(|k| k.binary_search(&u).is_ok()) {
                    self.adj_clusters.get_mut(&u).unwrap().remove(&l);
                }
            }
        }
        Ok(())
    }

    /// Moves `v` out of X into its unique adjacent cluster (or a fresh
    /// singleton cluster); requires X minus `v` to be a cluster vertex
    /// deletion.
    pub fn remove_from_x(&mut self, v: Vertex) -> Result<(), CvdExactError> {
        if !self.x.contains(&v) {
            return Err(CvdExactError::NotInX(v));
        }
        let adj = &self.adj_clusters[&v];
        if adj.len() >= 2 {
            return Err(CvdExactError::AssumptionViolated(v));
        }
        let joined = adj.iter().next().copied();
        if let Some(l) = joined {
            // v must be adjacent to the whole cluster, i.e. sit in every
            // class key.
            let all = self.clusters[&l]
                .classes
                .keys()
                .all(|k| k.binary_search(&v).is_ok());
            if !all {
                return Err(CvdExactError::AssumptionViolated(v));
            }
        }

        self.x.remove(&v);
        self.adj_clusters.remove(&v);
        let key: ClassKey = self.g.neighbors(v).filter(|w| self.x.contains(w)).collect();
        let l = joined.unwrap_or_else(|| {
            let l = self.next_label;
            self.next_label += 1;
            self.clusters.insert(l, Cluster::default());
            l
        });
        let cluster = self.clusters.get_mut(&l).expect("live or fresh");
        let old = std::mem::take(&mut cluster.classes);
        for (mut k, members) in old {
            let pos = k.binary_search(&v).expect("v in every key");
            k.remove(pos);
            cluster.classes.insert(k, members);
        }
        cluster.members.insert(v);
        cluster.classes.entry(key.clone()).or_default().insert(v);
        self.cluster_of[v] = Some(l);
        for u in key {
            self.adj_clusters.get_mut(&u).unwrap().insert(l);
        }
        Ok(())
    }

    /// The weighted compression instance over removable X vertices and
    /// class labels, with the map back to real vertices / classes.
    pub fn build_compression_instance(&self) -> (WeightedGraph, Vec<BackRef>) {
        let k = self.x.len();
        let x0: Vec<Vertex> = self
            .x
            .iter()
            .copied()
            .filter(|x| self.adj_clusters[x].len() <= k)
            .collect();
        let x0_set: BTreeSet<Vertex> = x0.iter().copied().collect();
        let labels: BTreeSet<ClusterLabel> = x0
            .iter()
            .flat_map(|x| self.adj_clusters[x].iter().copied())
            .collect();

        let mut back: Vec<BackRef> = x0.iter().map(|&v| BackRef::Real(v)).collect();
        let mut weights: Vec<u64> = vec![1; x0.len()];
        let mut class_ids: BTreeMap<(ClusterLabel, &ClassKey), usize> = BTreeMap::new();
        for &l in &labels {
            for (key, members) in &self.clusters[&l].classes {
                class_ids.insert((l, key), back.len());
                back.push(BackRef::Class(l, key.clone()));
                weights.push(members.len() as u64);
            }
        }

        let mut g = Graph::new(back.len());
        let index: BTreeMap<Vertex, usize> = x0.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        for (i, &u) in x0.iter().enumerate() {
            for w in self.g.neighbors(u) {
                if x0_set.contains(&w) {
                    let j = index[&w];
                    if i < j {
                        g.insert_edge(i, j).expect("simple");
                    }
                }
            }
        }
        let mut per_label: BTreeMap<ClusterLabel, Vec<usize>> = BTreeMap::new();
        for (&(l, key), &id) in &class_ids {
            per_label.entry(l).or_default().push(id);
            for u in key {
                if let Some(&i) = index.get(u) {
                    g.insert_edge(i, id).expect("simple");
                }
            }
        }
        // Classes of one cluster form a clique.
        for ids in per_label.values() {
            for (i, &a) in ids.iter().enumerate() {
                for &b in &ids[i + 1..] {
                    g.insert_edge(a, b).expect("simple");
                }
            }
        }
        (WeightedGraph::new(g, weights), back)
    }

    /// Applies one edge update through grow / compress / exchange, firing
    /// `hooks` around every vertex move.
    pub fn update_with<H: MoveHooks>(
        &mut self,
        op: EdgeOp,
        hooks: &mut H,
    ) -> Result<(), CvdExactError> {
        self.g.validate(op)?;
        for w in [op.u.min(op.v), op.u.max(op.v)] {
            if !self.x.contains(&w) {
                hooks.before_move_to_x(self, w);
                self.move_to_x(w)?;
                hooks.after_move_to_x(self, w);
            }
        }
        self.g.apply(op).expect("validated above");

        let (instance, back) = self.build_compression_instance();
        let chosen = cvd_exact_weighted(&instance, None).expect("unbounded search succeeds");
        let mut x_new: BTreeSet<Vertex> = self
            .x
            .iter()
            .copied()
            .filter(|x| self.adj_clusters[x].len() > self.x.len())
            .collect();
        for id in chosen {
            match &back[id] {
                BackRef::Real(v) => {
                    x_new.insert(*v);
                }
                BackRef::Class(l, key) => {
                    x_new.extend(self.clusters[l].classes[key].iter().copied());
                }
            }
        }

        let adds: Vec<Vertex> = x_new.difference(&self.x).copied().collect();
        let removes: Vec<Vertex> = self.x.difference(&x_new).copied().collect();
        for u in adds {
            hooks.before_move_to_x(self, u);
            self.move_to_x(u)?;
            hooks.after_move_to_x(self, u);
        }
        for y in removes {
            hooks.before_remove_from_x(self, y);
            self.remove_from_x(y)?;
            hooks.after_remove_from_x(self, y);
        }
        Ok(())
    }

    pub fn update(&mut self, op: EdgeOp) -> Result<(), CvdExactError> {
        self.update_with(op, &mut NoHooks)
    }

    /// Full consistency check against a recomputation from `g` and `X`;
    /// test support.
    pub fn validate(&self) -> Result<(), String> {
        let rebuilt = DynCvdExact::from_parts(self.g.clone(), self.x.clone())
            .map_err(|e| format!("rebuild failed: {e}"))?;
        if self.canonical_form() != rebuilt.canonical_form() {
            return Err("class directory differs from rebuilt form".into());
        }
        for (x, labels) in &self.adj_clusters {
            let want: BTreeSet<ClusterLabel> = self
                .clusters
                .iter()
                .filter(|(_, c)| c.members.iter().any(|&m| self.g.has_edge(*x, m)))
                .map(|(&l, _)| l)
                .collect();
            if labels != &want {
                return Err(format!("adjacency of {x} stale: {labels:?} vs {want:?}"));
            }
        }
        for (l, cluster) in &self.clusters {
            if cluster.members.is_empty() {
                return Err(format!("empty cluster {l} retained"));
            }
            let from_classes: BTreeSet<Vertex> = cluster
                .classes
                .values()
                .flat_map(|m| m.iter().copied())
                .collect();
            if from_classes != cluster.members {
                return Err(format!("classes of {l} do not partition the members"));
            }
            for (key, members) in &cluster.classes {
                if members.is_empty() {
                    return Err("empty class retained".into());
                }
                for &m in members {
                    let want: ClassKey =
                        self.g.neighbors(m).filter(|w| self.x.contains(w)).collect();
                    if &want != key {
                        return Err(format!("member {m} keyed {key:?}, expected {want:?}"));
                    }
                }
            }
        }
        for (v, l) in self.cluster_of.iter().enumerate() {
            match l {
                Some(l) => {
                    if !self.clusters.get(l).is_some_and(|c| c.members.contains(&v)) {
                        return Err(format!("vertex {v} points at stale cluster {l}"));
                    }
                }
                None if !self.x.contains(&v) => {
                    return Err(format!("free vertex {v} has no cluster"));
                }
                None => {}
            }
        }
        Ok(())
    }

    /// Label-independent snapshot: clusters as (members, class partition).
    pub fn canonical_form(&self) -> BTreeSet<CanonicalCluster> {
        self.clusters
            .values()
            .map(|c| {
                let members: Vec<Vertex> = c.members.iter().copied().collect();
                let classes: Vec<(ClassKey, Vec<Vertex>)> = c
                    .classes
                    .iter()
                    .map(|(k, m)| (k.clone(), m.iter().copied().collect()))
                    .collect();
                (members, classes)
            })
            .collect()
    }
}
