//! Link-cut forest over a fixed vertex universe.
//!
//! Splay-based auxiliary trees with lazy path reversal. Supports `link`,
//! `cut`, `evert`, `root`, `parent`, `nca` and the derived `meet` in
//! amortized logarithmic time. Even queries restructure the auxiliary
//! trees, so the structure is strictly single-threaded.

use crate::graph::Vertex;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LctError {
    #[error("vertex {0} is not a tree root")]
    NotARoot(Vertex),
    #[error("vertices {0} and {1} are already in the same tree")]
    SameTree(Vertex, Vertex),
    #[error("no forest edge between {0} and {1}")]
    NoSuchForestEdge(Vertex, Vertex),
    #[error("vertices are in different trees")]
    DifferentTrees,
}

const NIL: usize = usize::MAX;

#[derive(Debug, Clone)]
pub struct LinkCutForest {
    parent: Vec<usize>,
    child: Vec<[usize; 2]>,
    flip: Vec<bool>,
}

impl LinkCutForest {
    /// Forest of `n` singleton trees.
    pub fn new(n: usize) -> Self {
        LinkCutForest {
            parent: vec![NIL; n],
            child: vec![[NIL, NIL]; n],
            flip: vec![false; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    fn is_splay_root(&self, x: usize) -> bool {
        let p = self.parent[x];
        p == NIL || (self.child[p][0] != x && self.child[p][1] != x)
    }

    fn push(&mut self, x: usize) {
        if self.flip[x] {
            self.child[x].swap(0, 1);
            for c in self.child[x] {
                if c != NIL {
                    self.flip[c] ^= true;
                }
            }
            self.flip[x] = false;
        }
    }

    fn dir(&self, x: usize) -> usize {
        usize::from(self.child[self.parent[x]][1] == x)
    }

    fn rotate(&mut self, x: usize) {
        let p = self.parent[x];
        let g = self.parent[p];
        let dx = self.dir(x);
        let b = self.child[x][1 - dx];
        if !self.is_splay_root(p) {
            let dp = self.dir(p);
            self.child[g][dp] = x;
        }
        self.parent[x] = g;
        self.child[x][1 - dx] = p;
        self.parent[p] = x;
        self.child[p][dx] = b;
        if b != NIL {
            self.parent[b] = p;
        }
    }

    fn splay(&mut self, x: usize) {
        // Resolve pending reversals top-down before rotating.
        let mut path = vec![x];
        let mut t = x;
        while !self.is_splay_root(t) {
            t = self.parent[t];
            path.push(t);
        }
        for &n in path.iter().rev() {
            self.push(n);
        }
        while !self.is_splay_root(x) {
            let p = self.parent[x];
            if !self.is_splay_root(p) {
                if self.dir(x) == self.dir(p) {
                    self.rotate(p);
                } else {
                    self.rotate(x);
                }
            }
            self.rotate(x);
        }
    }

    /// Makes the root-to-x path preferred; returns the top of the last
    /// preferred path merged in (the nca trick).
    fn access(&mut self, x: usize) -> usize {
        self.splay(x);
        self.child[x][1] = NIL; // old right subtree keeps its parent pointer
        let mut last = x;
        while self.parent[x] != NIL {
            let y = self.parent[x];
            self.splay(y);
            self.child[y][1] = x;
            last = y;
            self.splay(x);
        }
        last
    }

    /// Makes `v` the root of its tree.
    pub fn evert(&mut self, v: Vertex) {
        self.access(v);
        self.flip[v] ^= true;
    }

    /// Root of the tree containing `v`.
    pub fn root(&mut self, v: Vertex) -> Vertex {
        self.access(v);
        let mut t = v;
        loop {
            self.push(t);
            if self.child[t][0] == NIL {
                break;
            }
            t = self.child[t][0];
        }
        self.splay(t);
        t
    }

    /// Parent of `v` under the current rooting, or `None` for roots.
    pub fn parent_of(&mut self, v: Vertex) -> Option<Vertex> {
        self.access(v);
        let mut t = self.child[v][0];
        if t == NIL {
            return None;
        }
        loop {
            self.push(t);
            if self.child[t][1] == NIL {
                break;
            }
            t = self.child[t][1];
        }
        self.splay(t);
        Some(t)
    }

    pub fn connected(&mut self, u: Vertex, v: Vertex) -> bool {
        u == v || self.root(u) == self.root(v)
    }

    /// Adds the forest edge `{r, v}`; `r` must be the root of a tree other
    /// than `v`'s.
    pub fn link(&mut self, r: Vertex, v: Vertex) -> Result<(), LctError> {
        if self.root(r) != r {
            return Err(LctError::NotARoot(r));
        }
        if self.connected(r, v) {
            return Err(LctError::SameTree(r, v));
        }
        self.access(r);
        self.access(v);
        self.parent[r] = v;
        Ok(())
    }

    /// Removes the forest edge `{u, v}`. Symmetric: `u` is everted
    /// internally, so afterwards `root(u) == u` and `root(v) == v`. A failed
    /// cut leaves the edge set unchanged but `u` everted.
    pub fn cut(&mut self, u: Vertex, v: Vertex) -> Result<(), LctError> {
        if u == v || !self.connected(u, v) {
            return Err(LctError::NoSuchForestEdge(u, v));
        }
        self.evert(u);
        self.access(v);
        let l = self.child[v][0];
        if l != NIL {
            self.push(l);
        }
        if l != u || self.child[u][0] != NIL || self.child[u][1] != NIL {
            // u is not the represented parent of v: not a forest edge. The
            // probe only restructured auxiliary trees, nothing to undo.
            return Err(LctError::NoSuchForestEdge(u, v));
        }
        self.child[v][0] = NIL;
        self.parent[u] = NIL;
        Ok(())
    }

    /// Nearest common ancestor of `u` and `v` under the current rooting.
    pub fn nca(&mut self, u: Vertex, v: Vertex) -> Result<Vertex, LctError> {
        if !self.connected(u, v) {
            return Err(LctError::DifferentTrees);
        }
        self.access(u);
        Ok(self.access(v))
    }

    /// The vertex where the paths from `v` to `u` and from `w` to `u` first
    /// meet; exactly `nca(v, w)` after `evert(u)`.
    pub fn meet(&mut self, u: Vertex, v: Vertex, w: Vertex) -> Result<Vertex, LctError> {
        if !self.connected(u, v) || !self.connected(u, w) {
            return Err(LctError::DifferentTrees);
        }
        self.evert(u);
        self.nca(v, w)
    }

    /// The represented edge set, as `{v, parent(v)}` over all non-roots.
    pub fn represented_edges(&mut self) -> BTreeSet<(Vertex, Vertex)> {
        let mut edges = BTreeSet::new();
        for v in 0..self.parent.len() {
            if let Some(p) = self.parent_of(v) {
                edges.insert((v.min(p), v.max(p)));
            }
        }
        edges
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn link_cut_basics() {
        let mut f = LinkCutForest::new(3);
        f.link(0, 1).unwrap();
        assert!(f.connected(0, 1));

        // 0 is no longer a root, and 0/1 share a tree.
        assert_eq!(f.link(0, 2), Err(LctError::NotARoot(0)));
        assert_eq!(f.link(2, 0).err(), None);
        assert_eq!(f.link(2, 0), Err(LctError::NotARoot(2)));

        f.cut(0, 1).unwrap();
        assert!(!f.connected(0, 1));
        assert_eq!(f.cut(0, 1), Err(LctError::NoSuchForestEdge(0, 1)));
    }

    #[test]
    fn evert_root_parent() {
        // Path 0-1-2.
        let mut f = LinkCutForest::new(3);
        f.link(0, 1).unwrap();
        f.link(2, 1).unwrap();
        f.evert(0);
        assert_eq!(f.root(2), 0);
        assert_eq!(f.parent_of(1), Some(0));
        assert_eq!(f.parent_of(0), None);

        f.evert(2);
        assert_eq!(f.root(0), 2);
    }

    #[test]
    fn nca_on_branching_tree() {
        // Path 0-1-2 with branch 1-3, rooted at 0.
        let mut f = LinkCutForest::new(4);
        f.link(0, 1).unwrap();
        f.link(2, 1).unwrap();
        f.link(3, 1).unwrap();
        f.evert(0);
        assert_eq!(f.nca(2, 3), Ok(1));
        assert_eq!(f.nca(0, 3), Ok(0));
        let mut g = LinkCutForest::new(5);
        assert_eq!(g.nca(0, 4), Err(LctError::DifferentTrees));
    }

    #[test]
    fn meet_examples() {
        // Star with center 1 and leaves 0, 2, 3.
        let mut f = LinkCutForest::new(4);
        for leaf in [0, 2, 3] {
            f.link(leaf, 1).unwrap();
        }
        assert_eq!(f.meet(0, 2, 3), Ok(1));

        // Path 0-1-2-3.
        let mut f = LinkCutForest::new(4);
        f.link(0, 1).unwrap();
        f.link(2, 1).unwrap();
        f.evert(2);
        f.link(3, 2).unwrap();
        assert_eq!(f.meet(0, 2, 3), Ok(2));
        assert_eq!(f.meet(0, 3, 3), Ok(3));
        assert_eq!(f.meet(3, 3, 0), Ok(3));
    }

    /// Naive forest with explicit parent pointers; recomputes everything by
    /// walking adjacency.
    struct NaiveForest {
        adj: Vec<BTreeSet<usize>>,
        parent: Vec<usize>,
    }

    impl NaiveForest {
        fn new(n: usize) -> Self {
            NaiveForest {
                adj: vec![BTreeSet::new(); n],
                parent: vec![NIL; n],
            }
        }

        fn reroot(&mut self, r: usize) {
            let mut stack = vec![(r, NIL)];
            while let Some((v, p)) = stack.pop() {
                self.parent[v] = p;
                for &w in &self.adj[v] {
                    if w != p {
                        stack.push((w, v));
                    }
                }
            }
        }

        fn root(&self, mut v: usize) -> usize {
            while self.parent[v] != NIL {
                v = self.parent[v];
            }
            v
        }

        fn evert(&mut self, v: usize) {
            self.reroot(v);
        }

        fn link(&mut self, r: usize, v: usize) {
            self.adj[r].insert(v);
            self.adj[v].insert(r);
            self.parent[r] = v;
        }

        fn cut(&mut self, u: usize, v: usize) {
            self.adj[u].remove(&v);
            self.adj[v].remove(&u);
            self.reroot(u);
            self.reroot(v);
        }

        fn nca(&self, u: usize, v: usize) -> usize {
            let mut anc = BTreeSet::new();
            let mut t = u;
            loop {
                anc.insert(t);
                if self.parent[t] == NIL {
                    break;
                }
                t = self.parent[t];
            }
            let mut t = v;
            while !anc.contains(&t) {
                t = self.parent[t];
            }
            t
        }

        fn meet(&mut self, u: usize, v: usize, w: usize) -> usize {
            self.evert(u);
            self.nca(v, w)
        }

        fn edges(&self) -> BTreeSet<(usize, usize)> {
            let mut out = BTreeSet::new();
            for v in 0..self.adj.len() {
                for &w in &self.adj[v] {
                    out.insert((v.min(w), v.max(w)));
                }
            }
            out
        }
    }

    #[test]
    fn differential_against_naive_forest() {
        const N: usize = 64;
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut lct = LinkCutForest::new(N);
        let mut naive = NaiveForest::new(N);

        for step in 0..10_000 {
            match rng.gen_range(0..7) {
                0 => {
                    // link: r a random root, v in a different tree
                    let r0 = rng.gen_range(0..N);
                    let r = naive.root(r0);
                    let v = rng.gen_range(0..N);
                    if naive.root(v) != r {
                        lct.link(r, v).unwrap();
                        naive.link(r, v);
                    } else {
                        assert!(lct.link(r, v).is_err());
                    }
                }
                1 => {
                    let edges: Vec<_> = naive.edges().into_iter().collect();
                    if let Some(&(u, v)) = edges.get(rng.gen_range(0..edges.len().max(1))) {
                        let (u, v) = if rng.gen_bool(0.5) { (u, v) } else { (v, u) };
                        lct.cut(u, v).unwrap();
                        naive.cut(u, v);
                    }
                }
                2 => {
                    let v = rng.gen_range(0..N);
                    lct.evert(v);
                    naive.evert(v);
                }
                3 => {
                    let v = rng.gen_range(0..N);
                    assert_eq!(lct.root(v), naive.root(v));
                }
                4 => {
                    let v = rng.gen_range(0..N);
                    let p = naive.parent[v];
                    assert_eq!(lct.parent_of(v), (p != NIL).then_some(p));
                }
                5 => {
                    let u = rng.gen_range(0..N);
                    let v = rng.gen_range(0..N);
                    if naive.root(u) == naive.root(v) {
                        assert_eq!(lct.nca(u, v), Ok(naive.nca(u, v)));
                    } else {
                        assert_eq!(lct.nca(u, v), Err(LctError::DifferentTrees));
                    }
                }
                _ => {
                    let u = rng.gen_range(0..N);
                    let v = rng.gen_range(0..N);
                    let w = rng.gen_range(0..N);
                    let same = naive.root(u) == naive.root(v) && naive.root(u) == naive.root(w);
                    if same {
                        assert_eq!(lct.meet(u, v, w), Ok(naive.meet(u, v, w)));
                    } else {
                        assert_eq!(lct.meet(u, v, w), Err(LctError::DifferentTrees));
                    }
                }
            }
            if step % 200 == 0 {
                assert_eq!(lct.represented_edges(), naive.edges());
                for v in 0..N {
                    let p = naive.parent[v];
                    assert_eq!(lct.parent_of(v), (p != NIL).then_some(p), "parent of {v}");
                }
            }
        }
        assert_eq!(lct.represented_edges(), naive.edges());
    }
}
