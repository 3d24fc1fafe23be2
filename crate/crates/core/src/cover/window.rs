//! Families selected by the modular window `(w(s) + j) mod l <= d(s)`.

use crate::graph::{RGraph, VSet, VertexPartition};
use crate::matching::CoverFamily;
use crate::Result;

use super::{build_cover_with, Construction, Ctx, Parity, ParityView, VertexOrder};

fn in_window(part: &VertexPartition, s: &[u32], j: usize) -> bool {
    let l = part.blocks() as u64;
    let (empty, w) = part.block_stats(s);
    (w + j as u64) % l <= empty as u64
}

/// Splits `base` into the `l` window families.
fn split(ctx: &Ctx, base: impl Iterator<Item = VSet>) -> Vec<CoverFamily> {
    let l = ctx.part.blocks();
    let mut out: Vec<Vec<VSet>> = vec![Vec::new(); l];
    for s in base {
        for (j, fam) in out.iter_mut().enumerate() {
            if in_window(ctx.part, &s, j) {
                fam.push(s.clone());
            }
        }
    }
    out.into_iter().map(|sets| ctx.family(sets)).collect()
}

pub(super) fn fr_family(ctx: &Ctx) -> Vec<CoverFamily> {
    split(ctx, ctx.idx.iter().map(|(s, _)| s.clone()))
}

pub(super) fn sid_family<P: Parity + ?Sized>(ctx: &Ctx, f: &P, order: VertexOrder) -> Vec<CoverFamily> {
    let view = ParityView { ctx, f, order };
    let kept = ctx.idx.iter().filter_map(|(s, _)| match view.pi(s) {
        Some(pairs) if !view.even(&pairs) => None,
        _ => Some(s.clone()),
    });
    split(ctx, kept)
}

pub(super) fn improved_family<P: Parity + ?Sized>(
    ctx: &Ctx,
    f: &P,
    order: VertexOrder,
) -> Vec<CoverFamily> {
    let view = ParityView { ctx, f, order };
    let outside = ctx
        .idx
        .iter()
        .filter(|(s, _)| view.pi(s).is_none())
        .map(|(s, _)| s.clone());
    let base: Vec<VSet> = outside.chain(view.even_sets(true)).collect();
    split(ctx, base.into_iter())
}

fn one(
    g: &RGraph,
    c: Construction,
    part: &VertexPartition,
    f: &dyn Parity,
    order: VertexOrder,
    j: usize,
) -> Result<CoverFamily> {
    Ok(build_cover_with(g, c, part, f, order, Some(j))?.cover)
}

fn all(
    g: &RGraph,
    c: Construction,
    part: &VertexPartition,
    f: &dyn Parity,
    order: VertexOrder,
) -> Result<Vec<CoverFamily>> {
    super::check_construction(c, g.r(), part.blocks(), None)?;
    let ctx = Ctx::new(g, part)?;
    Ok(match c {
        Construction::FranklRodl => fr_family(&ctx),
        Construction::Sidorenko => sid_family(&ctx, f, order),
        _ => improved_family(&ctx, f, order),
    })
}

/// `C_j`: shadow sets inside the window for shift `j`.
pub fn frankl_rodl_cover(g: &RGraph, part: &VertexPartition, j: usize) -> Result<CoverFamily> {
    let f = super::KeyedParity::new(0);
    one(g, Construction::FranklRodl, part, &f, VertexOrder::Index, j)
}

/// `C_0, .., C_{l-1}`.
pub fn frankl_rodl_family(g: &RGraph, part: &VertexPartition) -> Result<Vec<CoverFamily>> {
    let f = super::KeyedParity::new(0);
    all(g, Construction::FranklRodl, part, &f, VertexOrder::Index)
}

/// `C'_j`: `C_j` without the odd sets meeting every block twice.
pub fn sidorenko_cover(
    g: &RGraph,
    part: &VertexPartition,
    f: &dyn Parity,
    order: VertexOrder,
    j: usize,
) -> Result<CoverFamily> {
    one(g, Construction::Sidorenko, part, f, order, j)
}

pub fn sidorenko_family(
    g: &RGraph,
    part: &VertexPartition,
    f: &dyn Parity,
    order: VertexOrder,
) -> Result<Vec<CoverFamily>> {
    all(g, Construction::Sidorenko, part, f, order)
}

/// `D_j`: the window applied to the sets missing some block twice,
/// together with the repaired even family `(C0 \ C1) ∪ C2`.
pub fn improved_sidorenko_cover(
    g: &RGraph,
    part: &VertexPartition,
    f: &dyn Parity,
    order: VertexOrder,
    j: usize,
) -> Result<CoverFamily> {
    one(g, Construction::SidorenkoImproved, part, f, order, j)
}

pub fn improved_sidorenko_family(
    g: &RGraph,
    part: &VertexPartition,
    f: &dyn Parity,
    order: VertexOrder,
) -> Result<Vec<CoverFamily>> {
    all(g, Construction::SidorenkoImproved, part, f, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{KeyedParity, TableParity};
    use crate::graph::{sample_hypergraph, SamplingMethod};
    use crate::matching::validate_cover;

    fn sample(n: u32, r: usize, d: f64, seed: u64) -> RGraph {
        let p = d / (n - (r as u32 - 1)) as f64;
        sample_hypergraph(n, r, p, seed, SamplingMethod::Direct).unwrap()
    }

    #[test]
    fn single_block_gives_whole_shadow() {
        let g = sample(12, 4, 2.0, 3);
        let p = VertexPartition::new(1, vec![0; 12]).unwrap();
        let c = frankl_rodl_cover(&g, &p, 0).unwrap();
        assert_eq!(c.len(), g.shadow().len());
    }

    #[test]
    fn shift_out_of_range() {
        let g = sample(12, 4, 2.0, 3);
        let p = VertexPartition::random(12, 2, 0).unwrap();
        assert!(frankl_rodl_cover(&g, &p, 2).is_err());
    }

    #[test]
    fn frankl_rodl_identity() {
        for seed in 0..30u64 {
            let r = 4 + (seed as usize % 3);
            let l = 2 + (seed as usize % 3);
            let g = sample(16, r, 1.5, seed);
            let p = VertexPartition::random(16, l, seed + 100).unwrap();
            let fam = frankl_rodl_family(&g, &p).unwrap();
            let total: usize = fam.iter().map(|c| c.len()).sum();
            let shadow = g.shadow();
            let missing: usize = (0..l)
                .map(|i| shadow.sets.iter().filter(|s| s.iter().all(|&v| p.block(v) != i)).count())
                .sum();
            assert_eq!(total, shadow.len() + missing);
            for c in &fam {
                assert!(validate_cover(&g, c).ok);
            }
        }
    }

    /// At l = 2 the 2l-set has four tuples; every parity table makes the
    /// three sums of the critical edge even in total.
    #[test]
    fn parity_sum_is_even_for_every_table() {
        // r = 6, l = 2: V0 = {0, 1, 2}, V1 = {3, 4, 5}.
        let g = RGraph::new(6, 6, [[0, 1, 2, 3, 4, 5]]).unwrap();
        let p = VertexPartition::new(2, vec![0, 0, 0, 1, 1, 1]).unwrap();
        let tuples: Vec<[u32; 2]> = (0..3).flat_map(|x| (3..6).map(move |y| [x, y])).collect();
        for mask in 0u32..(1 << tuples.len()) {
            let mut f = TableParity::new();
            for (k, t) in tuples.iter().enumerate() {
                f.set(t, mask >> k & 1 == 1);
            }
            for j in 0..2 {
                let c = sidorenko_cover(&g, &p, &f, VertexOrder::Index, j).unwrap();
                assert!(validate_cover(&g, &c).ok, "mask {mask} j {j}");
                let d = improved_sidorenko_cover(&g, &p, &f, VertexOrder::Index, j).unwrap();
                assert!(validate_cover(&g, &d).ok, "mask {mask} j {j}");
            }
        }
    }

    #[test]
    fn three_sums_are_even_for_every_table() {
        // V0 = {0, 1, 2}, V1 = {3, 4}. Dropping x from V0 leaves a 2l-set
        // whose four tuples pair the other two V0 vertices with {3, 4};
        // every tuple of {0,1,2} x {3,4} appears in exactly two of them.
        let g = RGraph::new(5, 5, [[0, 1, 2, 3, 4]]).unwrap();
        let p = VertexPartition::new(2, vec![0, 0, 0, 1, 1]).unwrap();
        let tuples: Vec<[u32; 2]> = (0..3).flat_map(|x| (3..5).map(move |y| [x, y])).collect();
        for mask in 0u32..(1 << tuples.len()) {
            let mut f = TableParity::new();
            for (k, t) in tuples.iter().enumerate() {
                f.set(t, mask >> k & 1 == 1);
            }
            let q = |a: u32, b: u32| crate::cover::parity::q_odd(&f, &vec![[a, b], [3, 4]]);
            assert!(!(q(1, 2) ^ q(0, 2) ^ q(0, 1)), "mask {mask}");
            for j in 0..2 {
                let c = sidorenko_cover(&g, &p, &f, VertexOrder::Index, j).unwrap();
                assert!(validate_cover(&g, &c).ok);
                let c = improved_sidorenko_cover(&g, &p, &f, VertexOrder::Index, j).unwrap();
                assert!(validate_cover(&g, &c).ok);
            }
        }
    }

    #[test]
    fn random_instances_are_valid() {
        for seed in 0..40u64 {
            let r = 6;
            let d = [0.5, 1.0, 2.0, 4.0][seed as usize % 4];
            let g = sample(14, r, d, seed);
            let p = VertexPartition::random(14, 2, seed ^ 3).unwrap();
            let f = KeyedParity::new(seed);
            let order = if seed % 2 == 0 {
                VertexOrder::Index
            } else {
                VertexOrder::Keyed { seed }
            };
            let sid = sidorenko_family(&g, &p, &f, order).unwrap();
            let imp = improved_sidorenko_family(&g, &p, &f, order).unwrap();
            let fr = frankl_rodl_family(&g, &p).unwrap();
            for j in 0..2 {
                assert!(validate_cover(&g, &sid[j]).ok, "sid seed {seed}");
                assert!(validate_cover(&g, &imp[j]).ok, "imp seed {seed}");
                assert!(sid[j].sets.iter().all(|s| fr[j].contains(s)));
                assert!(imp[j].sets.iter().all(|s| sid[j].contains(s)));
            }
        }
    }
}
