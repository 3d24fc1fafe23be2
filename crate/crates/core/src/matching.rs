//! Greedy (r-1)-matchings, validators for matchings and covers, and the
//! heavy-set fractional matching value.

use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::graph::{for_each_subset, vset, RGraph, VSet};
use crate::rng::{rng_with_stream, unit_f64};
use crate::{Error, Result};

/// An r-graph with a weight in `[0, 1]` on every edge.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    graph: RGraph,
    weights: Vec<f64>,
}

impl WeightedGraph {
    /// `weights[i]` belongs to `graph.edges()[i]`.
    pub fn new(graph: RGraph, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != graph.edge_count() {
            return Err(Error::param(format!(
                "{} weights for {} edges",
                weights.len(),
                graph.edge_count()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(0.0..=1.0).contains(*w)) {
            return Err(Error::param(format!("weight {w} outside [0, 1]")));
        }
        Ok(WeightedGraph { graph, weights })
    }

    /// I.i.d. uniform weights drawn from `seed`, in canonical edge order.
    pub fn uniform(graph: RGraph, seed: u64) -> Self {
        let mut rng = rng_with_stream(seed, 3);
        let weights = (0..graph.edge_count()).map(|_| unit_f64(rng.next_u64())).collect();
        WeightedGraph { graph, weights }
    }

    pub fn graph(&self) -> &RGraph {
        &self.graph
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Edges of an m-matching: any two share fewer than `m` vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingResult {
    pub m: usize,
    pub edges: Vec<VSet>,
}

impl MatchingResult {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// JSON array of vertex arrays.
    pub fn to_json(&self) -> String {
        sets_to_json(&self.edges)
    }
}

/// A family of m-sets claimed to cover every edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverFamily {
    pub m: usize,
    pub sets: Vec<VSet>,
}

impl CoverFamily {
    pub fn new(m: usize, mut sets: Vec<VSet>) -> Self {
        sets.sort_unstable();
        sets.dedup();
        CoverFamily { m, sets }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        self.sets.binary_search_by(|x| x.as_slice().cmp(s)).is_ok()
    }

    pub fn to_json(&self) -> String {
        sets_to_json(&self.sets)
    }
}

pub(crate) fn sets_to_json(sets: &[VSet]) -> String {
    let v: Vec<&[u32]> = sets.iter().map(|s| s.as_slice()).collect();
    serde_json::to_string(&v).expect("serialisable")
}

/// Parses a JSON array of vertex arrays.
pub fn sets_from_json(text: &str) -> Result<Vec<VSet>> {
    let raw: Vec<Vec<u32>> = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    Ok(raw.iter().map(|s| vset(s)).collect())
}

/// Greedy (r-1)-matching: edges in increasing weight, each kept iff it
/// shares at most r-2 vertices with every edge kept so far. Ties are
/// broken by canonical edge order.
pub fn greedy_matching(w: &WeightedGraph) -> MatchingResult {
    let g = &w.graph;
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.sort_by(|&a, &b| w.weights[a].total_cmp(&w.weights[b]).then(a.cmp(&b)));
    greedy_in_order(g, g.r().saturating_sub(1), order)
}

pub(crate) fn greedy_in_order(
    g: &RGraph,
    m: usize,
    order: impl IntoIterator<Item = usize>,
) -> MatchingResult {
    let mut blocked: HashSet<VSet> = HashSet::default();
    let mut edges = Vec::new();
    for i in order {
        let e = &g.edges()[i];
        let mut free = true;
        for_each_subset(e, m, |s| {
            if free && blocked.contains(s) {
                free = false;
            }
        });
        if free {
            for_each_subset(e, m, |s| {
                blocked.insert(VSet::from_slice(s));
            });
            edges.push(e.clone());
        }
    }
    edges.sort_unstable();
    MatchingResult { m, edges }
}

/// Greedy (r-1)-matching under i.i.d. uniform weights drawn from `seed`.
pub fn random_greedy_matching(g: &RGraph, seed: u64) -> MatchingResult {
    greedy_matching(&WeightedGraph::uniform(g.clone(), seed))
}

/// First reason a matching or cover claim fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    NotAnEdge(VSet),
    WrongSize(VSet),
    TooClose(VSet, VSet),
    Uncovered(VSet),
}

/// Outcome of a validator: `ok` plus the first violation found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub ok: bool,
    pub witness: Option<Violation>,
}

impl Validation {
    fn pass() -> Self {
        Validation {
            ok: true,
            witness: None,
        }
    }

    fn fail(v: Violation) -> Self {
        Validation {
            ok: false,
            witness: Some(v),
        }
    }
}

/// Checks that `m` consists of edges of `g` pairwise sharing fewer than
/// `m.m` vertices.
pub fn validate_matching(g: &RGraph, m: &MatchingResult) -> Validation {
    let mut owner: HashMap<VSet, &VSet> = HashMap::default();
    for e in &m.edges {
        if !g.contains_edge(e) {
            return Validation::fail(Violation::NotAnEdge(e.clone()));
        }
        let mut clash = None;
        for_each_subset(e, m.m, |s| {
            if clash.is_some() {
                return;
            }
            match owner.get(s) {
                Some(&other) if other != e => clash = Some(other.clone()),
                Some(_) => {}
                None => {
                    owner.insert(VSet::from_slice(s), e);
                }
            }
        });
        if let Some(other) = clash {
            return Validation::fail(Violation::TooClose(other, e.clone()));
        }
    }
    Validation::pass()
}

/// Checks that every edge of `g` contains a member of `c`.
pub fn validate_cover(g: &RGraph, c: &CoverFamily) -> Validation {
    if let Some(s) = c.sets.iter().find(|s| s.len() != c.m) {
        return Validation::fail(Violation::WrongSize(s.clone()));
    }
    let members: HashSet<&[u32]> = c.sets.iter().map(|s| s.as_slice()).collect();
    for e in g.edges() {
        let mut hit = false;
        for_each_subset(e, c.m, |s| hit = hit || members.contains(s));
        if !hit {
            return Validation::fail(Violation::Uncovered(e.clone()));
        }
    }
    Validation::pass()
}

/// True iff no edge outside `m` could be added while keeping an m-matching.
pub fn is_maximal(g: &RGraph, m: &MatchingResult) -> bool {
    let mut blocked: HashSet<VSet> = HashSet::default();
    for e in &m.edges {
        for_each_subset(e, m.m, |s| {
            blocked.insert(VSet::from_slice(s));
        });
    }
    g.edges().iter().all(|e| {
        let mut hits = false;
        for_each_subset(e, m.m, |s| hits = hits || blocked.contains(s));
        hits
    })
}

/// Value of the heavy-set fractional matching on `G^{(r-1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FractionalMatching {
    /// `(#edges with no heavy (r-1)-subset) / D`.
    pub value: f64,
    /// Number of heavy (r-1)-sets.
    pub heavy: usize,
    /// Threshold `D = (1 + eps) d`.
    pub threshold: f64,
}

/// An (r-1)-set is heavy iff its co-degree is at least `D = (1 + eps) d`;
/// every edge free of heavy sets gets weight `1 / D`.
pub fn fractional_matching_value(g: &RGraph, eps: f64, d: f64) -> Result<FractionalMatching> {
    if !(eps > 0.0) {
        return Err(Error::param("eps must be positive"));
    }
    if !(d > 0.0) {
        return Err(Error::param("d must be positive"));
    }
    let threshold = (1.0 + eps) * d;
    let idx = g.codegree_index();
    let heavy: HashSet<&VSet> = idx
        .iter()
        .filter(|(_, n)| n.len() as f64 >= threshold)
        .map(|(s, _)| s)
        .collect();
    let light_edges = g
        .edges()
        .iter()
        .filter(|e| {
            let mut any = false;
            for_each_subset(e, g.r() - 1, |s| any = any || heavy.contains(&VSet::from_slice(s)));
            !any
        })
        .count();
    Ok(FractionalMatching {
        value: light_edges as f64 / threshold,
        heavy: heavy.len(),
        threshold,
    })
}
