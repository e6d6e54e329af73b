//! Dynamic graph structures for parameterized problems.
//!
//! The library maintains solutions to NP-hard graph problems across edge
//! insertions and deletions, with update costs governed by the solution
//! size rather than the graph size:
//!
//! - [`dyn_vc::DynVc`] keeps a 2-approximate vertex cover and answers exact
//!   queries from an O(k^2) kernel.
//! - [`dyn_cvd_kernel::DynCvdKernel`] keeps a 3-approximate cluster vertex
//!   deletion with persistent per-cluster bookkeeping and answers exact
//!   queries from an O(k^5) kernel.
//! - [`dyn_cvd_exact::DynCvdExact`] keeps an exact minimum cluster vertex
//!   deletion plus per-cluster equivalence classes.
//! - [`dyn_chromatic::DynChromatic`] layers chromatic-number tables over the
//!   exact structure and answers in O(1).
//! - [`dyn_fvs::DynFvs`] keeps an exact minimum feedback vertex set of a
//!   bounded-degree graph, holding the residual forest in a link-cut tree.
//!
//! Supporting modules: [`graph`] (simple graphs and multigraphs), [`pset`]
//! (persistent ordered sets), [`lct`] (link-cut forest), [`solvers`] (static
//! approximate/exact solvers and max flow), and [`oracles`] (brute-force
//! reference implementations for tests).

pub mod dyn_chromatic;
pub mod dyn_cvd_exact;
pub mod dyn_cvd_kernel;
pub mod dyn_vc;
pub mod graph;
pub mod lct;
pub mod oracles;
pub mod pset;
pub mod solvers;

pub mod dyn_fvs;
