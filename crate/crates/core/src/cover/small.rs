//! Covers for r = 3, 4, 5 built from two- and three-block partitions.

use crate::graph::{RGraph, VSet, VertexPartition};
use crate::matching::CoverFamily;
use crate::Result;

use super::{build_cover_with, Construction, Ctx, Parity, ParityView, VertexOrder};

/// Monochromatic pairs of the shadow; improved: `(C0 \ C1) ∪ C2`.
pub fn cover_r3(g: &RGraph, part: &VertexPartition, improved: bool) -> Result<CoverFamily> {
    let c = if improved { Construction::R3Improved } else { Construction::R3Basic };
    Ok(build_cover_with(g, c, part, &super::KeyedParity::new(0), VertexOrder::Index, None)?.cover)
}

/// Type-300 sets plus ordered types 210, 021, 102; improved removes the
/// sets whose edges all stay inside (type 300) or all have type 310.
pub fn cover_r4(g: &RGraph, part: &VertexPartition, improved: bool) -> Result<CoverFamily> {
    let c = if improved { Construction::R4Improved } else { Construction::R4Basic };
    Ok(build_cover_with(g, c, part, &super::KeyedParity::new(0), VertexOrder::Index, None)?.cover)
}

/// Type-40 sets plus even type-22 sets; improved applies the same
/// removal-and-repair to both parts.
pub fn cover_r5<P: Parity + ?Sized>(
    g: &RGraph,
    part: &VertexPartition,
    f: &P,
    improved: bool,
) -> Result<CoverFamily> {
    let c = if improved { Construction::R5Improved } else { Construction::R5Basic };
    Ok(build_cover_with(g, c, part, f, VertexOrder::Index, None)?.cover)
}

pub(super) fn r3(ctx: &Ctx, improved: bool) -> CoverFamily {
    ctx.family(ctx.mono_sets(improved))
}

pub(super) fn r4(ctx: &Ctx, improved: bool) -> CoverFamily {
    let mut sets = ctx.mono_sets(improved);
    let part = ctx.part;
    let rotated = |s: &[u32]| {
        let c = part.counts(s);
        (0..3).any(|k| c[k] == 2 && c[(k + 1) % 3] == 1)
    };
    sets.extend(ctx.idx.iter().filter_map(|(s, nbrs)| {
        if !rotated(s) {
            return None;
        }
        let all_310 = nbrs.iter().all(|&v| {
            part.set_type(&crate::graph::with_vertex(s, v)).unordered == [3, 1, 0]
        });
        (!improved || !all_310).then(|| s.clone())
    }));
    ctx.family(sets)
}

pub(super) fn r5<P: Parity + ?Sized>(ctx: &Ctx, f: &P, improved: bool) -> CoverFamily {
    let mut sets: Vec<VSet> = ctx.mono_sets(improved);
    let view = ParityView { ctx, f, order: VertexOrder::Index };
    sets.extend(view.even_sets(improved));
    ctx.family(sets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{KeyedParity, TableParity};
    use crate::graph::{sample_hypergraph, SamplingMethod};
    use crate::matching::validate_cover;

    fn part(l: usize, blocks: &[u32]) -> VertexPartition {
        VertexPartition::new(l, blocks.to_vec()).unwrap()
    }

    #[test]
    fn empty_graphs_give_empty_covers() {
        let p = part(2, &[0, 1, 0, 1, 0]);
        let p3 = part(3, &[0, 1, 2, 0, 1]);
        for improved in [false, true] {
            assert!(cover_r3(&RGraph::empty(5, 3), &p, improved).unwrap().is_empty());
            assert!(cover_r4(&RGraph::empty(5, 4), &p3, improved).unwrap().is_empty());
            let f = KeyedParity::new(1);
            assert!(cover_r5(&RGraph::empty(5, 5), &p, &f, improved).unwrap().is_empty());
        }
    }

    #[test]
    fn wrong_uniformity_is_rejected() {
        let p = part(2, &[0, 1, 0, 1, 0]);
        assert!(cover_r3(&RGraph::empty(5, 4), &p, false).is_err());
        assert!(cover_r4(&RGraph::empty(5, 4), &p, false).is_err());
    }

    #[test]
    fn r3_single_block_edge_is_repaired() {
        // Every pair of the edge is in C1, so C0 \ C1 alone would miss it.
        let g = RGraph::new(6, 3, [[0, 1, 2]]).unwrap();
        let p = part(2, &[0, 0, 0, 1, 1, 1]);
        let basic = cover_r3(&g, &p, false).unwrap();
        let improved = cover_r3(&g, &p, true).unwrap();
        assert_eq!(basic.len(), 3);
        assert_eq!(improved.len(), 3);
        assert!(validate_cover(&g, &improved).ok);
    }

    #[test]
    fn r3_removal_happens() {
        // {0,1} is monochromatic with its only edge leaving the block.
        let g = RGraph::new(6, 3, [[0, 1, 3]]).unwrap();
        let p = part(2, &[0, 0, 0, 1, 1, 1]);
        let improved = cover_r3(&g, &p, true).unwrap();
        assert_eq!(improved.sets, vec![VSet::from_slice(&[0, 1])]);
        // Now with a second edge inside the block on {0,1}: both edges
        // together keep {0,1} since it has an outside edge.
        let g = RGraph::new(6, 3, [[0, 1, 2], [0, 1, 3]]).unwrap();
        let improved = cover_r3(&g, &p, true).unwrap();
        assert!(validate_cover(&g, &improved).ok);
    }

    /// All ordered types of a single edge over three blocks.
    #[test]
    fn r4_every_edge_type_is_covered() {
        let mut checked = 0;
        for a in 0..=4u32 {
            for b in 0..=(4 - a) {
                let c = 4 - a - b;
                let mut blocks = Vec::new();
                blocks.extend(std::iter::repeat_n(0, a as usize));
                blocks.extend(std::iter::repeat_n(1, b as usize));
                blocks.extend(std::iter::repeat_n(2, c as usize));
                let p = part(3, &blocks);
                let g = RGraph::new(4, 4, [[0, 1, 2, 3]]).unwrap();
                for improved in [false, true] {
                    let cover = cover_r4(&g, &p, improved).unwrap();
                    assert!(validate_cover(&g, &cover).ok, "type {a}{b}{c} improved={improved}");
                }
                checked += 1;
            }
        }
        assert_eq!(checked, 15);
    }

    #[test]
    fn r4_type_211_uses_a_rotated_set() {
        let g = RGraph::new(4, 4, [[0, 1, 2, 3]]).unwrap();
        let p = part(3, &[0, 0, 1, 2]);
        let cover = cover_r4(&g, &p, false).unwrap();
        let rotated = |s: &VSet| {
            let c = p.counts(s);
            (0..3).any(|k| c[k] == 2 && c[(k + 1) % 3] == 1)
        };
        assert!(cover.sets.iter().any(rotated));
    }

    #[test]
    fn r5_type_23_edge_covered_for_every_parity() {
        // V0 = {0, 1}, V1 = {2, 3, 4}: six tuples, all 64 parity tables.
        let g = RGraph::new(5, 5, [[0, 1, 2, 3, 4]]).unwrap();
        let p = part(2, &[0, 0, 1, 1, 1]);
        let tuples: Vec<[u32; 2]> = (0..2).flat_map(|x| (2..5).map(move |y| [x, y])).collect();
        for mask in 0u32..64 {
            let mut f = TableParity::new();
            for (k, t) in tuples.iter().enumerate() {
                f.set(t, mask >> k & 1 == 1);
            }
            for improved in [false, true] {
                let cover = cover_r5(&g, &p, &f, improved).unwrap();
                assert!(validate_cover(&g, &cover).ok, "mask {mask}");
                assert!(!cover.is_empty());
            }
        }
    }

    #[test]
    fn random_instances_are_valid_and_improved_is_smaller() {
        for seed in 0..40u64 {
            for (r, l) in [(3usize, 2usize), (4, 3), (5, 2)] {
                let n = 14;
                let d = [0.5, 1.0, 2.0, 6.0][seed as usize % 4];
                let p = d / (n - (r as u32 - 1)) as f64;
                let g = sample_hypergraph(n, r, p, seed, SamplingMethod::Direct).unwrap();
                let part = VertexPartition::random(n, l, seed ^ 7).unwrap();
                let f = KeyedParity::new(seed);
                let (basic, improved) = match r {
                    3 => (cover_r3(&g, &part, false), cover_r3(&g, &part, true)),
                    4 => (cover_r4(&g, &part, false), cover_r4(&g, &part, true)),
                    _ => (cover_r5(&g, &part, &f, false), cover_r5(&g, &part, &f, true)),
                };
                let (basic, improved) = (basic.unwrap(), improved.unwrap());
                assert!(validate_cover(&g, &basic).ok, "r={r} seed={seed}");
                assert!(validate_cover(&g, &improved).ok, "r={r} seed={seed}");
                assert!(improved.len() <= basic.len());
                assert!(improved.sets.iter().all(|s| basic.contains(s)));
            }
        }
    }
}
