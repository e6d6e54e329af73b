//! Persistent ordered vertex set with logarithmic updates and constant-time
//! logical copies.
//!
//! Versions are tiny `Copy` handles into an append-only node store; an update
//! path-copies `O(log n)` nodes and never touches older versions. The tree is
//! weight-balanced (sizes in nodes, delta 3 / ratio 2), so any version can be
//! read back in sorted order.

use crate::graph::Vertex;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PSetError {
    #[error("element {0} already present")]
    DuplicateElement(Vertex),
    #[error("element {0} not present")]
    MissingElement(Vertex),
}

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
struct Node {
    elem: u32,
    left: u32,
    right: u32,
    size: u32,
}

/// Append-only arena shared by every version created through it.
#[derive(Debug, Default, Clone)]
pub struct PStore {
    nodes: Vec<Node>,
    allocated: u64,
}

/// One immutable version. Plain assignment *is* the O(1) logical copy: the
/// handle is `Copy`, and updates on either copy diverge independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PSet {
    root: u32,
    len: u32,
}

impl PSet {
    pub fn empty() -> Self {
        PSet { root: NONE, len: 0 }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

impl Default for PSet {
    fn default() -> Self {
        PSet::empty()
    }
}

impl PStore {
    pub fn new() -> Self {
        PStore::default()
    }

    /// Total nodes ever allocated; updates in place never happen, so this
    /// measures structural sharing.
    pub fn allocations(&self) -> u64 {
        self.allocated
    }

    fn size(&self, t: u32) -> u32 {
        if t == NONE {
            0
        } else {
            self.nodes[t as usize].size
        }
    }

    fn mk(&mut self, elem: u32, left: u32, right: u32) -> u32 {
        let size = 1 + self.size(left) + self.size(right);
        self.nodes.push(Node {
            elem,
            left,
            right,
            size,
        });
        self.allocated += 1;
        (self.nodes.len() - 1) as u32
    }

    /// Rebuild a node from parts, restoring the weight balance. Only called
    /// when at most one child changed by a single element.
    fn balance(&mut self, left: u32, elem: u32, right: u32) -> u32 {
        let (sl, sr) = (self.size(left) as u64, self.size(right) as u64);
        if sl + sr <= 1 {
            return self.mk(elem, left, right);
        }
        if sr > 3 * sl {
            let r = self.nodes[right as usize];
            if (self.size(r.left) as u64) < 2 * self.size(r.right) as u64 {
                // single left rotation
                let l2 = self.mk(elem, left, r.left);
                return self.mk(r.elem, l2, r.right);
            }
            let rl = self.nodes[r.left as usize];
            let l2 = self.mk(elem, left, rl.left);
            let r2 = self.mk(r.elem, rl.right, r.right);
            return self.mk(rl.elem, l2, r2);
        }
        if sl > 3 * sr {
            let l = self.nodes[left as usize];
            if (self.size(l.right) as u64) < 2 * self.size(l.left) as u64 {
                let r2 = self.mk(elem, l.right, right);
                return self.mk(l.elem, l.left, r2);
            }
            let lr = self.nodes[l.right as usize];
            let l2 = self.mk(l.elem, l.left, lr.left);
            let r2 = self.mk(elem, lr.right, right);
            return self.mk(lr.elem, l2, r2);
        }
        self.mk(elem, left, right)
    }

    fn insert_at(&mut self, t: u32, x: u32) -> Result<u32, PSetError> {
        if t == NONE {
            return Ok(self.mk(x, NONE, NONE));
        }
        let n = self.nodes[t as usize];
        if x == n.elem {
            Err(PSetError::DuplicateElement(x as Vertex))
        } else if x < n.elem {
            let l = self.insert_at(n.left, x)?;
            Ok(self.balance(l, n.elem, n.right))
        } else {
            let r = self.insert_at(n.right, x)?;
            Ok(self.balance(n.left, n.elem, r))
        }
    }

    /// Detach the minimum of a nonempty subtree, returning (min, rest).
    fn split_min(&mut self, t: u32) -> (u32, u32) {
        let n = self.nodes[t as usize];
        if n.left == NONE {
            return (n.elem, n.right);
        }
        let (min, rest) = self.split_min(n.left);
        (min, self.balance(rest, n.elem, n.right))
    }

    fn remove_at(&mut self, t: u32, x: u32) -> Result<u32, PSetError> {
        if t == NONE {
            return Err(PSetError::MissingElement(x as Vertex));
        }
        let n = self.nodes[t as usize];
        if x < n.elem {
            let l = self.remove_at(n.left, x)?;
            Ok(self.balance(l, n.elem, n.right))
        } else if x > n.elem {
            let r = self.remove_at(n.right, x)?;
            Ok(self.balance(n.left, n.elem, r))
        } else if n.right == NONE {
            Ok(n.left)
        } else if n.left == NONE {
            Ok(n.right)
        } else {
            let (succ, rest) = self.split_min(n.right);
            Ok(self.balance(n.left, succ, rest))
        }
    }

    /// New version with `x` added; the old version is untouched.
    pub fn insert(&mut self, s: PSet, x: Vertex) -> Result<PSet, PSetError> {
        let root = self.insert_at(s.root, x as u32)?;
        Ok(PSet {
            root,
            len: s.len + 1,
        })
    }

    /// New version with `x` removed; the old version is untouched.
    pub fn remove(&mut self, s: PSet, x: Vertex) -> Result<PSet, PSetError> {
        let root = self.remove_at(s.root, x as u32)?;
        Ok(PSet {
            root,
            len: s.len - 1,
        })
    }

    pub fn contains(&self, s: PSet, x: Vertex) -> bool {
        let mut t = s.root;
        while t != NONE {
            let n = &self.nodes[t as usize];
            if (x as u32) == n.elem {
                return true;
            }
            t = if (x as u32) < n.elem { n.left } else { n.right };
        }
        false
    }

    /// The `min(k, |s|)` smallest elements in increasing order.
    pub fn take_smallest(&self, s: PSet, k: usize) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(k.min(s.len()));
        self.collect_prefix(s.root, k, &mut out);
        out
    }

    fn collect_prefix(&self, t: u32, k: usize, out: &mut Vec<Vertex>) {
        if t == NONE || out.len() >= k {
            return;
        }
        let n = &self.nodes[t as usize];
        self.collect_prefix(n.left, k, out);
        if out.len() < k {
            out.push(n.elem as Vertex);
            self.collect_prefix(n.right, k, out);
        }
    }

    /// All elements, ascending.
    pub fn to_vec(&self, s: PSet) -> Vec<Vertex> {
        self.take_smallest(s, s.len())
    }

    pub fn iter<'a>(&'a self, s: PSet) -> Iter<'a> {
        let mut it = Iter {
            store: self,
            stack: Vec::new(),
        };
        it.push_left(s.root);
        it
    }
}

pub struct Iter<'a> {
    store: &'a PStore,
    stack: Vec<u32>,
}

impl Iter<'_> {
    fn push_left(&mut self, mut t: u32) {
        while t != NONE {
            self.stack.push(t);
            t = self.store.nodes[t as usize].left;
        }
    }
}

impl Iterator for Iter<'_> {
    type Item = Vertex;

    fn next(&mut self) -> Option<Vertex> {
        let t = self.stack.pop()?;
        let n = self.store.nodes[t as usize];
        self.push_left(n.right);
        Some(n.elem as Vertex)
    }
}
