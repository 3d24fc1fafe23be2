//! r-uniform hypergraphs and the structures derived from them.

mod io;
mod partition;
mod sample;
mod structure;
mod tree;

use rustc_hash::FxHashMap as HashMap;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::{Error, Result};

pub use io::{GraphJson, ParseFormat};
pub use partition::{SetType, VertexPartition};
pub use sample::{sample_hypergraph, SamplingMethod};
pub use structure::{ball, breadth_first_tree, connected_components, is_tree, BfsTrace, SetOrder};
pub use tree::{RTree, TreeEdge};

/// A vertex set stored in ascending order.
pub type VSet = SmallVec<[u32; 8]>;

/// Sorted copy of `items` as a [`VSet`].
pub fn vset(items: &[u32]) -> VSet {
    let mut s: VSet = items.iter().copied().collect();
    s.sort_unstable();
    s
}

/// `set` with `v` inserted, keeping the order. `v` must not be present.
pub fn with_vertex(set: &[u32], v: u32) -> VSet {
    let mut out = VSet::with_capacity(set.len() + 1);
    let pos = set.partition_point(|&x| x < v);
    out.extend_from_slice(&set[..pos]);
    out.push(v);
    out.extend_from_slice(&set[pos..]);
    out
}

/// `set` with the element at position `pos` removed.
pub fn without_position(set: &[u32], pos: usize) -> VSet {
    let mut out = VSet::with_capacity(set.len().saturating_sub(1));
    out.extend_from_slice(&set[..pos]);
    out.extend_from_slice(&set[pos + 1..]);
    out
}

/// `set` with vertex `v` removed (no-op if absent).
pub fn without_vertex(set: &[u32], v: u32) -> VSet {
    set.iter().copied().filter(|&x| x != v).collect()
}

/// Calls `f` on every `k`-subset of the sorted slice `set`, in
/// lexicographic order.
pub fn for_each_subset<F: FnMut(&[u32])>(set: &[u32], k: usize, mut f: F) {
    let n = set.len();
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<u32> = idx.iter().map(|&i| set[i]).collect();
    loop {
        f(&buf);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..k {
            buf[j] = set[idx[j]];
        }
    }
}

/// All `k`-subsets of `set`.
pub fn subsets(set: &[u32], k: usize) -> Vec<VSet> {
    let mut out = Vec::new();
    for_each_subset(set, k, |s| out.push(VSet::from_slice(s)));
    out
}

/// Binomial coefficient; saturates at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// An r-uniform hypergraph on vertices `0..n`.
///
/// Edges are stored in canonical form: each edge ascending, the edge list
/// sorted and free of duplicates. Two graphs are equal iff their edge sets
/// are.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RGraph {
    n: u32,
    r: usize,
    edges: Vec<VSet>,
}

impl RGraph {
    pub fn empty(n: u32, r: usize) -> Self {
        RGraph {
            n,
            r,
            edges: Vec::new(),
        }
    }

    /// Builds a graph from arbitrary edge lists, canonicalising them.
    ///
    /// Fails if an edge has the wrong size, repeats a vertex or uses a
    /// vertex `>= n`. Duplicate edges collapse.
    pub fn new<I, E>(n: u32, r: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[u32]>,
    {
        if r < 1 {
            return Err(Error::param("uniformity must be at least 1"));
        }
        let mut out = Vec::new();
        for e in edges {
            let e = e.as_ref();
            let s = vset(e);
            if s.len() != r {
                return Err(Error::InvalidEdge {
                    edge: e.to_vec(),
                    reason: format!("expected {r} vertices"),
                });
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidEdge {
                    edge: e.to_vec(),
                    reason: "repeated vertex".into(),
                });
            }
            if s[r - 1] >= n {
                return Err(Error::InvalidEdge {
                    edge: e.to_vec(),
                    reason: format!("vertex out of range 0..{n}"),
                });
            }
            out.push(s);
        }
        out.sort_unstable();
        out.dedup();
        Ok(RGraph { n, r, edges: out })
    }

    /// Complete r-graph on `n` vertices.
    pub fn complete(n: u32, r: usize) -> Self {
        let all: Vec<u32> = (0..n).collect();
        RGraph {
            n,
            r,
            edges: subsets(&all, r),
        }
    }

    /// Caller guarantees the edges are canonical, in range and sorted.
    pub(crate) fn from_canonical(n: u32, r: usize, edges: Vec<VSet>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        RGraph { n, r, edges }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn edges(&self) -> &[VSet] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains_edge(&self, e: &[u32]) -> bool {
        let s = vset(e);
        self.edges.binary_search(&s).is_ok()
    }

    /// Vertices that lie in at least one edge.
    pub fn support(&self) -> Vec<u32> {
        let mut vs: Vec<u32> = self.edges.iter().flatten().copied().collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Same vertex count and uniformity, selected edges only.
    pub fn subgraph<I: IntoIterator<Item = VSet>>(&self, edges: I) -> RGraph {
        let mut es: Vec<VSet> = edges.into_iter().collect();
        es.sort_unstable();
        es.dedup();
        RGraph::from_canonical(self.n, self.r, es)
    }

    /// Relabels vertices through `perm` (a permutation of `0..n`).
    pub fn relabel(&self, perm: &[u32]) -> Result<RGraph> {
        if perm.len() != self.n as usize {
            return Err(Error::param("permutation length must equal n"));
        }
        RGraph::new(
            self.n,
            self.r,
            self.edges
                .iter()
                .map(|e| e.iter().map(|&v| perm[v as usize]).collect::<Vec<_>>()),
        )
    }

    pub fn codegree_index(&self) -> CodegreeIndex {
        CodegreeIndex::new(self)
    }

    /// The (r-1)-shadow `D(G)`.
    pub fn shadow(&self) -> Shadow {
        Shadow {
            sets: CodegreeIndex::new(self).sets,
        }
    }

    /// Co-degree and neighbourhood of an (r-1)-set.
    pub fn codegree(&self, sigma: &[u32]) -> Result<(usize, Vec<u32>)> {
        if sigma.len() + 1 != self.r {
            return Err(Error::WrongSetSize {
                set: sigma.to_vec(),
                got: sigma.len(),
                expected: self.r - 1,
            });
        }
        let s = vset(sigma);
        let mut nbrs = Vec::new();
        for e in &self.edges {
            if let Some(v) = extra_vertex(e, &s) {
                nbrs.push(v);
            }
        }
        nbrs.sort_unstable();
        Ok((nbrs.len(), nbrs))
    }
}

/// If `sub` is `edge` minus one vertex, returns that vertex.
pub(crate) fn extra_vertex(edge: &[u32], sub: &[u32]) -> Option<u32> {
    if edge.len() != sub.len() + 1 {
        return None;
    }
    let mut extra = None;
    let mut j = 0;
    for &v in edge {
        if j < sub.len() && sub[j] == v {
            j += 1;
        } else if extra.is_none() {
            extra = Some(v);
        } else {
            return None;
        }
    }
    if j == sub.len() {
        extra
    } else {
        None
    }
}

/// The (r-1)-sets of positive co-degree, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shadow {
    pub sets: Vec<VSet>,
}

impl Shadow {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, sigma: &[u32]) -> bool {
        self.sets.binary_search_by(|s| s.as_slice().cmp(sigma)).is_ok()
    }
}

/// Neighbourhood of every shadow set, for repeated co-degree queries.
///
/// Sets are stored in canonical order. When `(r-1) * ceil(log2 n)` fits
/// in 64 bits each set is also packed into an integer key, which makes
/// building and lookup much cheaper than hashing vertex lists.
#[derive(Debug, Clone)]
pub struct CodegreeIndex {
    r: usize,
    sets: Vec<VSet>,
    nbrs: Vec<SmallVec<[u32; 4]>>,
    lookup: Lookup,
}

#[derive(Debug, Clone)]
enum Lookup {
    Packed { n: u32, bits: u32, keys: Vec<u64> },
    Sets(HashMap<VSet, u32>),
}

fn pack_bits(n: u32, k: usize) -> Option<u32> {
    let bits = (32 - n.saturating_sub(1).leading_zeros()).max(1);
    (bits as usize * k <= 64).then_some(bits)
}

#[inline]
fn pack(set: impl Iterator<Item = u32>, bits: u32) -> u64 {
    set.fold(0u64, |k, v| k << bits | v as u64)
}

impl CodegreeIndex {
    pub fn new(g: &RGraph) -> Self {
        let k = g.r() - 1;
        match pack_bits(g.n(), k) {
            Some(bits) => Self::build_packed(g, bits),
            None => Self::build_hashed(g),
        }
    }

    fn build_packed(g: &RGraph, bits: u32) -> Self {
        let mut pairs: Vec<(u64, u32)> = Vec::with_capacity(g.edge_count() * g.r());
        for e in g.edges() {
            for (i, &v) in e.iter().enumerate() {
                let key = pack(e.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &u)| u), bits);
                pairs.push((key, v));
            }
        }
        pairs.sort_unstable();
        let mut sets = Vec::new();
        let mut nbrs: Vec<SmallVec<[u32; 4]>> = Vec::new();
        let mut keys = Vec::new();
        let mask = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
        let k = g.r() - 1;
        let mut i = 0;
        while i < pairs.len() {
            let key = pairs[i].0;
            let mut list = SmallVec::new();
            while i < pairs.len() && pairs[i].0 == key {
                list.push(pairs[i].1);
                i += 1;
            }
            let set: VSet = (0..k).rev().map(|p| ((key >> (p as u32 * bits)) & mask) as u32).collect();
            keys.push(key);
            sets.push(set);
            nbrs.push(list);
        }
        CodegreeIndex {
            r: g.r(),
            sets,
            nbrs,
            lookup: Lookup::Packed { n: g.n(), bits, keys },
        }
    }

    fn build_hashed(g: &RGraph) -> Self {
        let mut by_set: HashMap<VSet, SmallVec<[u32; 4]>> =
            HashMap::with_capacity_and_hasher(g.edge_count() * g.r(), Default::default());
        for e in g.edges() {
            for (i, &v) in e.iter().enumerate() {
                by_set.entry(without_position(e, i)).or_default().push(v);
            }
        }
        let mut entries: Vec<(VSet, SmallVec<[u32; 4]>)> = by_set.into_iter().collect();
        entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let mut sets = Vec::with_capacity(entries.len());
        let mut nbrs = Vec::with_capacity(entries.len());
        let mut map = HashMap::with_capacity_and_hasher(entries.len(), Default::default());
        for (i, (s, mut list)) in entries.into_iter().enumerate() {
            list.sort_unstable();
            map.insert(s.clone(), i as u32);
            sets.push(s);
            nbrs.push(list);
        }
        CodegreeIndex {
            r: g.r(),
            sets,
            nbrs,
            lookup: Lookup::Sets(map),
        }
    }

    fn position(&self, sigma: &[u32]) -> Option<usize> {
        match &self.lookup {
            Lookup::Packed { n, bits, keys } => {
                if sigma.len() + 1 != self.r || sigma.iter().any(|&v| v >= *n) {
                    return None;
                }
                keys.binary_search(&pack(sigma.iter().copied(), *bits)).ok()
            }
            Lookup::Sets(map) => map.get(sigma).map(|&i| i as usize),
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Neighbourhood `N(sigma)`; empty outside the shadow.
    pub fn neighbors(&self, sigma: &[u32]) -> &[u32] {
        self.position(sigma).map(|i| self.nbrs[i].as_slice()).unwrap_or(&[])
    }

    pub fn codegree(&self, sigma: &[u32]) -> usize {
        self.neighbors(sigma).len()
    }

    pub fn in_shadow(&self, sigma: &[u32]) -> bool {
        self.position(sigma).is_some()
    }

    /// Shadow sets with their neighbourhoods, in canonical order.
    pub fn sorted_entries(&self) -> Vec<(&VSet, &[u32])> {
        self.iter().collect()
    }

    pub fn shadow_len(&self) -> usize {
        self.sets.len()
    }

    /// Shadow sets with their neighbourhoods, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&VSet, &[u32])> {
        self.sets.iter().zip(self.nbrs.iter().map(|n| n.as_slice()))
    }
}
