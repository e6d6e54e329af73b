//! Fully dynamic vertex cover.
//!
//! Keeps the graph together with a 2-approximate cover `X`. Every update
//! rebuilds `X` from the kernel `G[V']` around the low-degree part of `X`;
//! queries run the exact solver on the same kernel, so their cost depends on
//! the cover size only.

use crate::graph::{EdgeOp, EdgeOpKind, Graph, GraphError, Vertex};
use crate::solvers::{vc_2approx, vc_exact};
use std::collections::BTreeSet;

#[derive(Debug, Clone)]
pub struct DynVc {
    g: Graph,
    x: BTreeSet<Vertex>,
}

impl DynVc {
    pub fn new(n: usize) -> Self {
        DynVc {
            g: Graph::new(n),
            x: BTreeSet::new(),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    /// Current 2-approximate cover.
    pub fn cover(&self) -> &BTreeSet<Vertex> {
        &self.x
    }

    /// Applies one edge update and restores the cover invariants.
    pub fn update(&mut self, op: EdgeOp) -> Result<(), GraphError> {
        self.g.validate(op)?;
        if op.kind == EdgeOpKind::Insert && !self.x.contains(&op.u) && !self.x.contains(&op.v) {
            // Neither endpoint covered: the lower id joins X first.
            self.x.insert(op.u.min(op.v));
        }
        self.g.apply(op).expect("validated above");
        self.recompute_approx();
        Ok(())
    }

    /// The kernel around the current cover: forced vertices `X0` (degree
    /// above `|X|`) and the vertex set `V' = N[X \ X0] \ X0`.
    pub fn kernel(&self) -> (BTreeSet<Vertex>, BTreeSet<Vertex>) {
        let mut x0 = BTreeSet::new();
        let mut vp = BTreeSet::new();
        for &x in &self.x {
            if self.g.degree(x) > self.x.len() {
                x0.insert(x);
            } else {
                vp.insert(x);
                vp.extend(self.g.neighbors(x));
            }
        }
        for x in &x0 {
            vp.remove(x);
        }
        (x0, vp)
    }

    fn recompute_approx(&mut self) {
        let (x0, vp) = self.kernel();
        let (sub, table) = self.g.induced_subgraph(vp).expect("kernel within universe");
        let y = vc_2approx(&sub);
        self.x = x0;
        self.x.extend(y.into_iter().map(|i| table[i]));
        // Full cover scan is linear in m; only affordable on small graphs.
        debug_assert!(self.g.vertex_count() > 4096 || self.is_cover(&self.x));
    }

    /// Minimum vertex cover, from the kernel with the exact solver plugged
    /// in. Read-only: the maintained approximate cover is untouched.
    pub fn query(&self) -> BTreeSet<Vertex> {
        let (x0, vp) = self.kernel();
        let (sub, table) = self.g.induced_subgraph(vp).expect("kernel within universe");
        let y = vc_exact(&sub, None).expect("unbounded search always succeeds");
        let mut out = x0;
        out.extend(y.into_iter().map(|i| table[i]));
        out
    }

    fn is_cover(&self, x: &BTreeSet<Vertex>) -> bool {
        self.g
            .edges()
            .all(|(u, v)| x.contains(&u) || x.contains(&v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::brute_vc;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn first_insert() {
        let mut st = DynVc::new(3);
        st.update(EdgeOp::insert(0, 1)).unwrap();
        assert!(st.cover().len() <= 2);
        assert!(st
            .graph()
            .edges()
            .all(|(u, v)| st.cover().contains(&u) || st.cover().contains(&v)));
    }

    #[test]
    fn star_keeps_small_cover() {
        let mut st = DynVc::new(5);
        for leaf in 1..5 {
            st.update(EdgeOp::insert(0, leaf)).unwrap();
        }
        assert_eq!(brute_vc(st.graph()).unwrap(), 1);
        assert!(st.cover().len() <= 2);
    }

    #[test]
    fn triangle_minus_edge() {
        let mut st = DynVc::new(3);
        for (u, v) in [(0, 1), (1, 2), (0, 2)] {
            st.update(EdgeOp::insert(u, v)).unwrap();
        }
        st.update(EdgeOp::delete(0, 1)).unwrap();
        assert_eq!(brute_vc(st.graph()).unwrap(), 1);
        assert!(st.cover().len() <= 2);
    }

    #[test]
    fn query_examples() {
        let st = DynVc::new(4);
        assert!(st.query().is_empty());

        let mut st = DynVc::new(3);
        for (u, v) in [(0, 1), (1, 2), (0, 2)] {
            st.update(EdgeOp::insert(u, v)).unwrap();
        }
        assert_eq!(st.query().len(), 2);

        // C5 plus a disjoint edge: 3 + 1.
        let mut st = DynVc::new(7);
        for (u, v) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (5, 6)] {
            st.update(EdgeOp::insert(u, v)).unwrap();
        }
        assert_eq!(st.query().len(), 4);
    }

    #[test]
    fn random_streams_hold_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..60 {
            let n = rng.gen_range(2..=12usize);
            let mut st = DynVc::new(n);
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
                st.update(op).unwrap();

                let opt = brute_vc(st.graph()).unwrap();
                let x = st.cover();
                assert!(st
                    .graph()
                    .edges()
                    .all(|(a, b)| x.contains(&a) || x.contains(&b)));
                assert!(x.len() <= 2 * opt, "|X|={} opt={opt}", x.len());

                // Kernel shape and soundness.
                let (x0, vp) = st.kernel();
                assert!(vp.len() <= x.len() * (x.len() + 1));
                let (sub, _) = st.graph().induced_subgraph(vp.iter().copied()).unwrap();
                assert!(sub.edge_count() <= x.len() * x.len());
                let sub_opt = vc_exact(&sub, None).unwrap().len();
                assert_eq!(x0.len() + sub_opt, opt);

                assert_eq!(st.query().len(), opt);
            }
        }
    }
}
