//! Exact `nu^{(m)}` and `tau^{(m)}` for small instances.
//!
//! Both oracles work on bitmasks over the edge list, so instances are
//! limited to 128 edges; the configured cap is usually much lower.

use rustc_hash::FxHashMap as HashMap;

use serde::{Deserialize, Serialize};

use crate::graph::{connected_components, for_each_subset, RGraph, VSet};
use crate::matching::CoverFamily;
use crate::{Error, Result};

const MASK_BITS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Largest edge count accepted.
    pub max_edges: usize,
    /// Search-node budget; exceeding it is an error.
    pub node_budget: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_edges: 40,
            node_budget: 50_000_000,
        }
    }
}

impl OracleConfig {
    pub fn with_max_edges(max_edges: usize) -> Self {
        OracleConfig {
            max_edges,
            ..Self::default()
        }
    }

    fn check(&self, g: &RGraph, m: usize) -> Result<()> {
        let cap = self.max_edges.min(MASK_BITS);
        if g.edge_count() > cap {
            return Err(Error::InstanceTooLarge {
                edges: g.edge_count(),
                cap,
            });
        }
        if m == 0 || m > g.r() {
            return Err(Error::param(format!("m must lie in 1..={}", g.r())));
        }
        Ok(())
    }
}

#[inline]
fn bit(i: usize) -> u128 {
    1u128 << i
}

/// m-subsets of the edges, each with the mask of edges containing it.
fn candidate_sets(g: &RGraph, m: usize) -> Vec<(VSet, u128)> {
    let mut map: HashMap<VSet, u128> = HashMap::default();
    for (i, e) in g.edges().iter().enumerate() {
        for_each_subset(e, m, |s| *map.entry(VSet::from_slice(s)).or_insert(0) |= bit(i));
    }
    let mut v: Vec<(VSet, u128)> = map.into_iter().collect();
    v.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    v
}

/// `conflict[i]`: edges sharing at least `m` vertices with edge `i`.
fn conflict_masks(g: &RGraph, cands: &[(VSet, u128)]) -> Vec<u128> {
    let mut conflict = vec![0u128; g.edge_count()];
    for (_, mask) in cands {
        let mut rest = *mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            conflict[i] |= mask & !bit(i);
            rest &= rest - 1;
        }
    }
    conflict
}

struct Budget {
    nodes: u64,
    limit: u64,
}

impl Budget {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            Err(Error::BudgetExhausted(self.limit))
        } else {
            Ok(())
        }
    }
}

/// Maximum size of an m-matching.
pub fn exact_nu(g: &RGraph, m: usize, cfg: &OracleConfig) -> Result<usize> {
    cfg.check(g, m)?;
    let cands = candidate_sets(g, m);
    let conflict = conflict_masks(g, &cands);
    let all = if g.edge_count() == MASK_BITS {
        u128::MAX
    } else {
        bit(g.edge_count()) - 1
    };
    let mut best = 0;
    let mut budget = Budget {
        nodes: 0,
        limit: cfg.node_budget,
    };
    max_independent(&conflict, all, 0, &mut best, &mut budget)?;
    Ok(best)
}

fn max_independent(
    conflict: &[u128],
    cands: u128,
    size: usize,
    best: &mut usize,
    budget: &mut Budget,
) -> Result<()> {
    budget.tick()?;
    if cands == 0 {
        *best = (*best).max(size);
        return Ok(());
    }
    if size + (cands.count_ones() as usize) <= *best {
        return Ok(());
    }
    // Isolated candidates are always taken.
    let mut free = 0u128;
    let mut rest = cands;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        if conflict[i] & cands == 0 {
            free |= bit(i);
        }
        rest &= rest - 1;
    }
    if free != 0 {
        return max_independent(
            conflict,
            cands & !free,
            size + free.count_ones() as usize,
            best,
            budget,
        );
    }
    // Branch on the candidate with most conflicts.
    let mut pick = 0;
    let mut deg = 0;
    let mut rest = cands;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        let d = (conflict[i] & cands).count_ones();
        if d > deg {
            deg = d;
            pick = i;
        }
        rest &= rest - 1;
    }
    max_independent(
        conflict,
        cands & !conflict[pick] & !bit(pick),
        size + 1,
        best,
        budget,
    )?;
    max_independent(conflict, cands & !bit(pick), size, best, budget)
}

/// Minimum size of an m-cover.
pub fn exact_tau(g: &RGraph, m: usize, cfg: &OracleConfig) -> Result<usize> {
    exact_tau_with_cover(g, m, cfg).map(|c| c.len())
}

/// A minimum m-cover. Candidates are restricted to m-subsets of edges,
/// which loses nothing: a useful cover set lies inside some edge.
pub fn exact_tau_with_cover(g: &RGraph, m: usize, cfg: &OracleConfig) -> Result<CoverFamily> {
    cfg.check(g, m)?;
    let cands = candidate_sets(g, m);
    let conflict = conflict_masks(g, &cands);
    let edge_count = g.edge_count();
    let all = if edge_count == MASK_BITS {
        u128::MAX
    } else {
        bit(edge_count) - 1
    };
    let (forced, uncovered, alive) = reduce(&cands, edge_count, all);
    // cand_of[e]: live candidates contained in edge e, largest coverage first.
    let mut cand_of: Vec<Vec<usize>> = vec![Vec::new(); edge_count];
    for (ci, (_, mask)) in cands.iter().enumerate() {
        if !alive[ci] {
            continue;
        }
        let mut rest = *mask & uncovered;
        while rest != 0 {
            cand_of[rest.trailing_zeros() as usize].push(ci);
            rest &= rest - 1;
        }
    }
    for list in &mut cand_of {
        list.sort_by(|&a, &b| {
            cands[b].1.count_ones().cmp(&cands[a].1.count_ones()).then(a.cmp(&b))
        });
    }

    let mut best = greedy_cover(&cands, &alive, uncovered);
    let mut search = CoverSearch {
        cands: &cands,
        cand_of: &cand_of,
        conflict: &conflict,
        budget: Budget {
            nodes: 0,
            limit: cfg.node_budget,
        },
        chosen: Vec::new(),
    };
    search.run(uncovered, &mut best)?;
    Ok(CoverFamily::new(
        m,
        forced.into_iter().chain(best).map(|ci| cands[ci].0.clone()).collect(),
    ))
}

/// `(nu, tau)` for `m = r - 1`, solved per tight component.
///
/// Both quantities add over tight components, so the edge cap applies to
/// the largest component rather than to the whole graph.
pub fn exact_pair_by_components(g: &RGraph, cfg: &OracleConfig) -> Result<(usize, usize)> {
    let m = g.r() - 1;
    let mut nu = 0;
    let mut tau = 0;
    for comp in connected_components(g) {
        nu += exact_nu(&comp, m, cfg)?;
        tau += exact_tau(&comp, m, cfg)?;
    }
    Ok((nu, tau))
}

/// Safe reductions to a fixpoint: drop candidates whose uncovered edges
/// are a subset of another's, then take any candidate that is the last
/// one left for some edge. Returns the forced picks, the edges they leave
/// uncovered and the surviving candidates. On trees this alone finds an
/// optimum.
fn reduce(cands: &[(VSet, u128)], edge_count: usize, all: u128) -> (Vec<usize>, u128, Vec<bool>) {
    let mut alive = vec![true; cands.len()];
    let mut uncovered = all;
    let mut forced = Vec::new();
    loop {
        let mut changed = false;
        for i in 0..cands.len() {
            if !alive[i] {
                continue;
            }
            let mi = cands[i].1 & uncovered;
            let dominated = mi == 0
                || (0..cands.len()).any(|j| {
                    if j == i || !alive[j] {
                        return false;
                    }
                    let mj = cands[j].1 & uncovered;
                    mi & !mj == 0 && (mi != mj || j < i)
                });
            if dominated {
                alive[i] = false;
                changed = true;
            }
        }
        for e in 0..edge_count {
            if uncovered & bit(e) == 0 {
                continue;
            }
            let mut live = (0..cands.len()).filter(|&c| alive[c] && cands[c].1 & bit(e) != 0);
            if let (Some(only), None) = (live.next(), live.next()) {
                forced.push(only);
                alive[only] = false;
                uncovered &= !cands[only].1;
                changed = true;
            }
        }
        if !changed {
            return (forced, uncovered, alive);
        }
    }
}

fn greedy_cover(cands: &[(VSet, u128)], alive: &[bool], mut uncovered: u128) -> Vec<usize> {
    let mut picked = Vec::new();
    while uncovered != 0 {
        let (ci, _) = cands
            .iter()
            .enumerate()
            .filter(|(i, _)| alive[*i])
            .max_by_key(|(i, (_, mask))| ((mask & uncovered).count_ones(), std::cmp::Reverse(*i)))
            .expect("non-empty candidate list");
        picked.push(ci);
        uncovered &= !cands[ci].1;
    }
    picked
}

struct CoverSearch<'a> {
    cands: &'a [(VSet, u128)],
    cand_of: &'a [Vec<usize>],
    conflict: &'a [u128],
    budget: Budget,
    chosen: Vec<usize>,
}

impl CoverSearch<'_> {
    /// Greedy m-matching among uncovered edges: each needs its own set.
    fn lower_bound(&self, uncovered: u128) -> usize {
        let mut rest = uncovered;
        let mut count = 0;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            count += 1;
            rest &= !self.conflict[i] & !bit(i);
        }
        count
    }

    fn run(&mut self, uncovered: u128, best: &mut Vec<usize>) -> Result<()> {
        self.budget.tick()?;
        if uncovered == 0 {
            if self.chosen.len() < best.len() {
                *best = self.chosen.clone();
            }
            return Ok(());
        }
        if self.chosen.len() + self.lower_bound(uncovered) >= best.len() {
            return Ok(());
        }
        // Branch on the uncovered edge whose candidates cover the fewest
        // other uncovered edges.
        let mut pick = uncovered.trailing_zeros() as usize;
        let mut pick_score = u32::MAX;
        let mut rest = uncovered;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            let score = (self.conflict[i] & uncovered).count_ones();
            if score < pick_score {
                pick_score = score;
                pick = i;
            }
            rest &= rest - 1;
        }
        for k in 0..self.cand_of[pick].len() {
            let ci = self.cand_of[pick][k];
            self.chosen.push(ci);
            let next = uncovered & !self.cands[ci].1;
            let r = self.run(next, best);
            self.chosen.pop();
            r?;
        }
        Ok(())
    }
}
