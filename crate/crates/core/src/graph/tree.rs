use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};

use smallvec::SmallVec;

use super::{vset, with_vertex, without_position, RGraph, VSet};
use crate::{Error, Result};

/// An edge of a rooted tree: its base set plus one new vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeEdge {
    /// Index of the base (r-1)-set.
    pub base: usize,
    /// The vertex this edge introduced.
    pub vertex: u32,
    /// The r-1 sets of the edge other than its base.
    pub children: SmallVec<[usize; 8]>,
    pub depth: usize,
}

/// A rooted r-uniform tree, grown one edge at a time.
///
/// Every edge is `sigma ∪ {v}` with `sigma` an existing (r-1)-set of the
/// tree and `v` a vertex not yet used, so the structure is acyclic by
/// construction. Sets are numbered in creation order with the root at 0;
/// a set is always created after its parent edge.
#[derive(Debug, Clone)]
pub struct RTree {
    r: usize,
    sets: Vec<VSet>,
    set_parent: Vec<Option<usize>>,
    set_depth: Vec<usize>,
    set_edges: Vec<SmallVec<[usize; 2]>>,
    edges: Vec<TreeEdge>,
    set_index: HashMap<VSet, usize>,
    used: HashSet<u32>,
    next_fresh: u32,
}

impl RTree {
    pub fn new(r: usize, root: &[u32]) -> Result<Self> {
        if r < 2 {
            return Err(Error::param("tree uniformity must be at least 2"));
        }
        let root = vset(root);
        if root.len() != r - 1 || root.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::WrongSetSize {
                set: root.to_vec(),
                got: root.len(),
                expected: r - 1,
            });
        }
        let next_fresh = root.last().map_or(0, |&m| m + 1);
        Ok(RTree {
            r,
            used: root.iter().copied().collect(),
            set_index: [(root.clone(), 0)].into_iter().collect(),
            sets: vec![root],
            set_parent: vec![None],
            set_depth: vec![0],
            set_edges: vec![SmallVec::new()],
            edges: Vec::new(),
            next_fresh,
        })
    }

    /// Standard root `{0, .., r-2}` with fresh labels issued upwards.
    pub fn with_standard_root(r: usize) -> Self {
        let root: Vec<u32> = (0..r as u32 - 1).collect();
        RTree::new(r, &root).expect("valid standard root")
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn root(&self) -> &VSet {
        &self.sets[0]
    }

    pub fn sets(&self) -> &[VSet] {
        &self.sets
    }

    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn set_depth(&self, set: usize) -> usize {
        self.set_depth[set]
    }

    /// Edge through which `set` entered the tree; `None` for the root.
    pub fn parent_edge(&self, set: usize) -> Option<usize> {
        self.set_parent[set]
    }

    /// Edges whose base is `set`.
    pub fn edges_on(&self, set: usize) -> &[usize] {
        &self.set_edges[set]
    }

    pub fn find_set(&self, sigma: &[u32]) -> Option<usize> {
        self.set_index.get(sigma).copied()
    }

    /// Vertex set of edge `e`.
    pub fn edge_vertices(&self, e: usize) -> VSet {
        let edge = &self.edges[e];
        with_vertex(&self.sets[edge.base], edge.vertex)
    }

    pub fn depth(&self) -> usize {
        self.edges.iter().map(|e| e.depth).max().unwrap_or(0)
    }

    pub fn vertex_count(&self) -> usize {
        self.used.len()
    }

    /// Adds the edge `sets[base] ∪ {v}`.
    pub fn push_on(&mut self, base: usize, v: u32) -> Result<usize> {
        if base >= self.sets.len() {
            return Err(Error::param(format!("no set with index {base}")));
        }
        if !self.used.insert(v) {
            return Err(Error::param(format!("vertex {v} already in the tree")));
        }
        self.next_fresh = self.next_fresh.max(v + 1);
        let edge_idx = self.edges.len();
        let depth = self.set_depth[base] + 1;
        let full = with_vertex(&self.sets[base], v);
        let mut children = SmallVec::new();
        for (pos, &u) in full.iter().enumerate() {
            if u == v {
                continue;
            }
            let child = without_position(&full, pos);
            let idx = self.sets.len();
            self.set_index.insert(child.clone(), idx);
            self.sets.push(child);
            self.set_parent.push(Some(edge_idx));
            self.set_depth.push(depth);
            self.set_edges.push(SmallVec::new());
            children.push(idx);
        }
        self.set_edges[base].push(edge_idx);
        self.edges.push(TreeEdge {
            base,
            vertex: v,
            children,
            depth,
        });
        Ok(edge_idx)
    }

    /// Adds `sigma ∪ {v}`; `sigma` must already be a set of the tree.
    pub fn push(&mut self, sigma: &[u32], v: u32) -> Result<usize> {
        let base = self
            .find_set(&vset(sigma))
            .ok_or_else(|| Error::param(format!("{sigma:?} is not a set of the tree")))?;
        self.push_on(base, v)
    }

    /// Adds an edge on `base` with a vertex label never used before.
    pub fn grow(&mut self, base: usize) -> usize {
        let v = self.next_fresh;
        self.push_on(base, v).expect("fresh label")
    }

    /// The tree as a plain r-graph on `0..=max label`.
    pub fn to_graph(&self) -> RGraph {
        let n = self.used.iter().max().map_or(0, |&m| m + 1);
        let mut edges: Vec<VSet> = (0..self.edges.len()).map(|e| self.edge_vertices(e)).collect();
        edges.sort_unstable();
        RGraph::from_canonical(n, self.r, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn growth_keeps_tree_relation() {
        let mut t = RTree::with_standard_root(3);
        let e0 = t.grow(0);
        let child = t.edges()[e0].children[0];
        t.grow(child);
        t.grow(0);
        assert_eq!(t.edge_count(), 3);
        assert_eq!(t.vertex_count(), (t.r() - 1) + t.edge_count());
        assert_eq!(t.depth(), 2);
        assert_eq!(t.set_count(), 1 + 2 * 3);
        let g = t.to_graph();
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn push_validates() {
        let mut t = RTree::new(3, &[4, 7]).unwrap();
        t.push(&[7, 4], 1).unwrap();
        assert!(t.push(&[4, 7], 1).is_err(), "vertex reuse");
        assert!(t.push(&[2, 9], 3).is_err(), "unknown base");
        assert!(t.push(&[1, 4], 9).is_ok());
        assert!(RTree::new(3, &[1]).is_err());
    }
}
