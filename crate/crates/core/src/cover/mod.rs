//! Partition-based (r-1)-cover constructions.
//!
//! Every construction draws a vertex partition (and, where needed, a
//! parity function) and keeps a subfamily of the shadow. The small-r
//! covers live in [`small`], the modular-window families in [`window`].

mod parity;
mod small;
mod window;

use std::cmp::Ordering;
use rustc_hash::FxHashSet as HashSet;

use serde::{Deserialize, Serialize};

use crate::graph::{CodegreeIndex, RGraph, VSet, VertexPartition};
use crate::matching::CoverFamily;
use crate::rng::mix64;
use crate::{Error, Result};

pub use parity::{KeyedParity, Parity, TableParity};
pub use small::{cover_r3, cover_r4, cover_r5};
pub use window::{
    frankl_rodl_cover, frankl_rodl_family, improved_sidorenko_cover, improved_sidorenko_family,
    sidorenko_cover, sidorenko_family,
};

use parity::{q_odd, slice_sum, Pairs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    R3Basic,
    R3Improved,
    R4Basic,
    R4Improved,
    R5Basic,
    R5Improved,
    FranklRodl,
    Sidorenko,
    SidorenkoImproved,
}

impl Construction {
    pub const ALL: [Construction; 9] = [
        Construction::R3Basic,
        Construction::R3Improved,
        Construction::R4Basic,
        Construction::R4Improved,
        Construction::R5Basic,
        Construction::R5Improved,
        Construction::FranklRodl,
        Construction::Sidorenko,
        Construction::SidorenkoImproved,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Construction::R3Basic => "r3-basic",
            Construction::R3Improved => "r3-improved",
            Construction::R4Basic => "r4-basic",
            Construction::R4Improved => "r4-improved",
            Construction::R5Basic => "r5-basic",
            Construction::R5Improved => "r5-improved",
            Construction::FranklRodl => "frankl-rodl",
            Construction::Sidorenko => "sidorenko",
            Construction::SidorenkoImproved => "sidorenko-improved",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        Construction::ALL
            .into_iter()
            .find(|c| c.id() == id)
            .ok_or_else(|| Error::param(format!("unknown construction '{id}'")))
    }

    /// Uniformity the construction is tied to, if any.
    pub fn fixed_r(self) -> Option<usize> {
        match self {
            Construction::R3Basic | Construction::R3Improved => Some(3),
            Construction::R4Basic | Construction::R4Improved => Some(4),
            Construction::R5Basic | Construction::R5Improved => Some(5),
            _ => None,
        }
    }

    pub fn default_l(self) -> usize {
        match self {
            Construction::R4Basic | Construction::R4Improved => 3,
            _ => 2,
        }
    }

    /// Whether the construction is a family indexed by a shift `j`.
    pub fn has_shift(self) -> bool {
        self.fixed_r().is_none()
    }

    pub fn improved(self) -> bool {
        matches!(
            self,
            Construction::R3Improved
                | Construction::R4Improved
                | Construction::R5Improved
                | Construction::SidorenkoImproved
        )
    }
}

impl std::fmt::Display for Construction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

/// Linear order on vertices used to pick the two maximal elements per
/// block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VertexOrder {
    #[default]
    Index,
    Reversed,
    Keyed { seed: u64 },
}

impl VertexOrder {
    #[inline]
    fn key(&self, v: u32) -> (u64, u32) {
        match *self {
            VertexOrder::Index => (v as u64, v),
            VertexOrder::Reversed => ((u32::MAX - v) as u64, v),
            VertexOrder::Keyed { seed } => (mix64(seed ^ v as u64), v),
        }
    }

    pub fn cmp(&self, a: u32, b: u32) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }
}

/// Everything needed to rebuild a cover of a given graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverRecipe {
    pub construction: Construction,
    pub l: usize,
    pub partition_seed: u64,
    pub parity_seed: u64,
    /// Shift for the window families; `None` picks the smallest.
    pub j: Option<usize>,
    #[serde(default)]
    pub order: VertexOrder,
}

impl CoverRecipe {
    pub fn new(construction: Construction, seed: u64) -> Self {
        CoverRecipe {
            construction,
            l: construction.default_l(),
            partition_seed: seed,
            parity_seed: mix64(seed ^ 0xa076_1d64_78bd_642f),
            j: None,
            order: VertexOrder::Index,
        }
    }

    pub fn with_l(mut self, l: usize) -> Self {
        self.l = l;
        self
    }

    pub fn with_j(mut self, j: usize) -> Self {
        self.j = Some(j);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialisable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })
    }

    /// Checks the recipe against uniformity `r`.
    pub fn validate(&self, r: usize) -> Result<()> {
        check_construction(self.construction, r, self.l, self.j)
    }
}

/// A built cover with the data needed to report on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverOutcome {
    pub construction: Construction,
    pub cover: CoverFamily,
    /// Chosen shift for window families.
    pub j: Option<usize>,
    /// Sizes of all members of a window family, indexed by shift.
    pub family_sizes: Vec<usize>,
    pub shadow_len: usize,
}

/// Samples the partition and parity function of `recipe` and builds the
/// cover of `g`.
pub fn build_cover(g: &RGraph, recipe: &CoverRecipe) -> Result<CoverOutcome> {
    recipe.validate(g.r())?;
    let part = VertexPartition::random(g.n(), recipe.l, recipe.partition_seed)?;
    let f = KeyedParity::new(recipe.parity_seed);
    build_cover_with(g, recipe.construction, &part, &f, recipe.order, recipe.j)
}

/// Builds a cover from an explicit partition and parity function.
pub fn build_cover_with<P: Parity + ?Sized>(
    g: &RGraph,
    construction: Construction,
    part: &VertexPartition,
    f: &P,
    order: VertexOrder,
    j: Option<usize>,
) -> Result<CoverOutcome> {
    check_construction(construction, g.r(), part.blocks(), j)?;
    let ctx = Ctx::new(g, part)?;
    let single = |cover: CoverFamily| CoverOutcome {
        construction,
        family_sizes: vec![cover.len()],
        cover,
        j: None,
        shadow_len: ctx.idx.shadow_len(),
    };
    let family = match construction {
        Construction::R3Basic | Construction::R3Improved => {
            return Ok(single(small::r3(&ctx, construction.improved())));
        }
        Construction::R4Basic | Construction::R4Improved => {
            return Ok(single(small::r4(&ctx, construction.improved())));
        }
        Construction::R5Basic | Construction::R5Improved => {
            return Ok(single(small::r5(&ctx, f, construction.improved())));
        }
        Construction::FranklRodl => window::fr_family(&ctx),
        Construction::Sidorenko => window::sid_family(&ctx, f, order),
        Construction::SidorenkoImproved => window::improved_family(&ctx, f, order),
    };
    let family_sizes: Vec<usize> = family.iter().map(|c| c.len()).collect();
    let chosen = match j {
        Some(j) => j,
        None => (0..family.len())
            .min_by_key(|&j| (family_sizes[j], j))
            .expect("l >= 1"),
    };
    let cover = family.into_iter().nth(chosen).expect("shift in range");
    Ok(CoverOutcome {
        construction,
        cover,
        j: Some(chosen),
        family_sizes,
        shadow_len: ctx.idx.shadow_len(),
    })
}

fn check_construction(c: Construction, r: usize, l: usize, j: Option<usize>) -> Result<()> {
    if let Some(fixed) = c.fixed_r() {
        if r != fixed {
            return Err(Error::param(format!("{c} needs r = {fixed}, got r = {r}")));
        }
        if l != c.default_l() {
            return Err(Error::param(format!("{c} needs l = {}, got l = {l}", c.default_l())));
        }
        return Ok(());
    }
    if r < 2 {
        return Err(Error::param("r must be at least 2"));
    }
    if l == 0 {
        return Err(Error::param("l must be at least 1"));
    }
    if matches!(c, Construction::Sidorenko | Construction::SidorenkoImproved) && 2 * l > r {
        return Err(Error::param(format!("{c} needs l <= r/2, got l = {l}, r = {r}")));
    }
    if let Some(j) = j {
        if j >= l {
            return Err(Error::param(format!("shift j = {j} out of range 0..{l}")));
        }
    }
    Ok(())
}

/// `(d(A), w(A))`: blocks missed by `a` and `sum_i i*|a ∩ V_i|`.
pub fn block_stats(a: &[u32], part: &VertexPartition) -> (usize, u64) {
    part.block_stats(a)
}

pub(crate) struct Ctx<'a> {
    pub idx: CodegreeIndex,
    pub part: &'a VertexPartition,
    pub r: usize,
}

impl<'a> Ctx<'a> {
    fn new(g: &RGraph, part: &'a VertexPartition) -> Result<Self> {
        if part.n() < g.n() {
            return Err(Error::param(format!(
                "partition covers {} vertices, graph has {}",
                part.n(),
                g.n()
            )));
        }
        Ok(Ctx {
            idx: g.codegree_index(),
            part,
            r: g.r(),
        })
    }

    fn family(&self, sets: Vec<VSet>) -> CoverFamily {
        CoverFamily::new(self.r - 1, sets)
    }

    /// Monochromatic shadow sets; improved: `(C0 \ C1) ∪ C2` where `C1`
    /// holds those whose edges all stay in their block and `C2` those in
    /// `C1` lying in an edge with every (r-1)-subset in `C1`.
    fn mono_sets(&self, improved: bool) -> Vec<VSet> {
        let c0: Vec<&VSet> = self
            .idx
            .iter()
            .filter(|(s, _)| self.part.monochromatic(s))
            .map(|(s, _)| s)
            .collect();
        if !improved {
            return c0.into_iter().cloned().collect();
        }
        let c1: HashSet<&VSet> = c0
            .iter()
            .copied()
            .filter(|s| {
                let b = self.part.block(s[0]);
                self.idx.neighbors(s).iter().all(|&v| self.part.block(v) == b)
            })
            .collect();
        c0.into_iter()
            .filter(|s| {
                !c1.contains(s)
                    || self.idx.neighbors(s).iter().any(|&v| {
                        let e = crate::graph::with_vertex(s, v);
                        (0..e.len()).all(|k| c1.contains(&crate::graph::without_position(&e, k)))
                    })
            })
            .cloned()
            .collect()
    }
}

/// Parity bookkeeping for sets meeting every block at least twice.
pub(crate) struct ParityView<'a, 'b, P: Parity + ?Sized> {
    pub ctx: &'b Ctx<'a>,
    pub f: &'b P,
    pub order: VertexOrder,
}

impl<P: Parity + ?Sized> ParityView<'_, '_, P> {
    /// The two maximal elements of every block; `None` if some block
    /// meets `s` fewer than twice.
    pub fn pi(&self, s: &[u32]) -> Option<Pairs> {
        let l = self.ctx.part.blocks();
        let mut top: Vec<[Option<u32>; 2]> = vec![[None, None]; l];
        for &v in s {
            let slot = &mut top[self.ctx.part.block(v)];
            match slot {
                [None, _] => slot[0] = Some(v),
                [Some(a), None] => {
                    if self.order.cmp(v, *a) == Ordering::Greater {
                        *slot = [Some(v), Some(*a)];
                    } else {
                        slot[1] = Some(v);
                    }
                }
                [Some(a), Some(b)] => {
                    if self.order.cmp(v, *a) == Ordering::Greater {
                        *slot = [Some(v), Some(*a)];
                    } else if self.order.cmp(v, *b) == Ordering::Greater {
                        slot[1] = Some(v);
                    }
                }
            }
        }
        top.into_iter()
            .map(|t| match t {
                [Some(a), Some(b)] => Some([a, b]),
                _ => None,
            })
            .collect()
    }

    pub fn even(&self, pairs: &Pairs) -> bool {
        !q_odd(self.f, pairs)
    }

    /// `C0` (even sets) for the basic variant; `(C0 \ C1) ∪ C2` for the
    /// improved one.
    pub fn even_sets(&self, improved: bool) -> Vec<VSet> {
        let c0: Vec<(&VSet, Pairs)> = self
            .ctx
            .idx
            .iter()
            .filter_map(|(s, _)| self.pi(s).filter(|p| self.even(p)).map(|p| (s, p)))
            .collect();
        if !improved {
            return c0.into_iter().map(|(s, _)| s.clone()).collect();
        }
        let part = self.ctx.part;
        let c1: HashSet<&VSet> = c0
            .iter()
            .filter(|(s, pairs)| {
                self.ctx.idx.neighbors(s).iter().all(|&v| {
                    let i = part.block(v);
                    slice_sum(self.f, pairs, i, v) == slice_sum(self.f, pairs, i, pairs[i][0])
                })
            })
            .map(|(s, _)| *s)
            .collect();
        c0.iter()
            .filter(|(s, pairs)| {
                !c1.contains(s)
                    || self.ctx.idx.neighbors(s).iter().any(|&v| {
                        let [x, y] = pairs[part.block(v)];
                        c1.contains(&swap(s, x, v)) && c1.contains(&swap(s, y, v))
                    })
            })
            .map(|(s, _)| (*s).clone())
            .collect()
    }
}

/// `(s \ {out}) ∪ {into}`, sorted.
fn swap(s: &[u32], out: u32, into: u32) -> VSet {
    let mut t: VSet = s.iter().copied().filter(|&x| x != out).collect();
    let pos = t.partition_point(|&x| x < into);
    t.insert(pos, into);
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for c in Construction::ALL {
            assert_eq!(Construction::from_id(c.id()).unwrap(), c);
            let json = serde_json::to_string(&c).unwrap();
            assert_eq!(json, format!("\"{}\"", c.id()));
        }
        assert!(Construction::from_id("r6-basic").is_err());
    }

    #[test]
    fn recipe_json_round_trip() {
        let recipe = CoverRecipe::new(Construction::SidorenkoImproved, 5)
            .with_j(1)
            .with_l(2);
        let back = CoverRecipe::from_json(&recipe.to_json()).unwrap();
        assert_eq!(back, recipe);
        let keyed = CoverRecipe {
            order: VertexOrder::Keyed { seed: 3 },
            ..recipe
        };
        assert_eq!(CoverRecipe::from_json(&keyed.to_json()).unwrap(), keyed);
    }

    #[test]
    fn recipes_are_checked() {
        assert!(CoverRecipe::new(Construction::R3Basic, 0).validate(4).is_err());
        assert!(CoverRecipe::new(Construction::R4Basic, 0).with_l(2).validate(4).is_err());
        assert!(CoverRecipe::new(Construction::FranklRodl, 0).with_j(2).validate(6).is_err());
        assert!(CoverRecipe::new(Construction::Sidorenko, 0).with_l(4).validate(7).is_err());
        assert!(CoverRecipe::new(Construction::Sidorenko, 0).with_l(3).validate(6).is_ok());
    }

    #[test]
    fn block_stats_examples() {
        let p = VertexPartition::new(3, vec![0, 1, 2, 2]).unwrap();
        assert_eq!(block_stats(&[], &p), (3, 0));
        assert_eq!(block_stats(&[2], &p), (2, 2));
        let p = VertexPartition::new(4, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(block_stats(&[0, 1, 2, 3], &p), (0, 6));
    }

    #[test]
    fn pi_takes_two_largest_per_block() {
        let g = RGraph::empty(10, 6);
        let p = VertexPartition::new(2, vec![0, 0, 0, 1, 1, 1, 0, 1, 0, 1]).unwrap();
        let ctx = Ctx::new(&g, &p).unwrap();
        let f = KeyedParity::new(0);
        let view = ParityView { ctx: &ctx, f: &f, order: VertexOrder::Index };
        assert_eq!(view.pi(&[0, 1, 2, 3, 4]), Some(vec![[2, 1], [4, 3]]));
        assert_eq!(view.pi(&[0, 1, 2, 3, 5]), Some(vec![[2, 1], [5, 3]]));
        assert_eq!(view.pi(&[0, 1, 2, 6, 3]), None);
        let rev = ParityView { ctx: &ctx, f: &f, order: VertexOrder::Reversed };
        assert_eq!(rev.pi(&[0, 1, 2, 3, 4]), Some(vec![[0, 1], [3, 4]]));
    }

    #[test]
    fn swap_keeps_order() {
        assert_eq!(swap(&[1, 4, 7], 4, 9).as_slice(), &[1, 7, 9]);
        assert_eq!(swap(&[1, 4, 7], 7, 0).as_slice(), &[0, 1, 4]);
    }
}
