use rand::RngCore;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use super::{binomial, RGraph, VSet};
use crate::rng::{rng_from_seed, rng_with_stream, unit_f64};
use crate::{Error, Result};

/// How `sample_hypergraph` visits the `C(n, r)` candidate edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingMethod {
    /// Inclusion of the r-set with lexicographic rank `i` is decided by
    /// the `i`-th word of the counter stream for the seed.
    Direct,
    /// Jumps between included ranks with geometric gaps.
    Skip,
    /// `Skip` for `p < 0.1`, `Direct` otherwise.
    #[default]
    Auto,
}

const SKIP_THRESHOLD: f64 = 0.1;

/// Samples `H_r(n, p)`: every r-subset of `0..n` is an edge independently
/// with probability `p`. Deterministic in `(n, r, p, seed, method)`.
pub fn sample_hypergraph(
    n: u32,
    r: usize,
    p: f64,
    seed: u64,
    method: SamplingMethod,
) -> Result<RGraph> {
    if r < 2 || r as u64 > n as u64 {
        return Err(Error::param(format!("need 2 <= r <= n, got r={r}, n={n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("p must lie in [0, 1], got {p}")));
    }
    let total = binomial(n as u64, r as u64);
    if total == u64::MAX {
        return Err(Error::param("C(n, r) overflows"));
    }
    let method = match method {
        SamplingMethod::Auto if p < SKIP_THRESHOLD => SamplingMethod::Skip,
        SamplingMethod::Auto => SamplingMethod::Direct,
        m => m,
    };
    let edges = match method {
        _ if p == 0.0 => Vec::new(),
        SamplingMethod::Skip if p < 1.0 => sample_skip(n, r, p, seed, total),
        _ => sample_direct(n, r, p, seed),
    };
    Ok(RGraph::from_canonical(n, r, edges))
}

fn sample_direct(n: u32, r: usize, p: f64, seed: u64) -> Vec<VSet> {
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::new();
    let mut comb: Vec<u32> = (0..r as u32).collect();
    loop {
        if unit_f64(rng.next_u64()) < p {
            out.push(VSet::from_slice(&comb));
        }
        if !next_combination(&mut comb, n) {
            break;
        }
    }
    out
}

fn sample_skip(n: u32, r: usize, p: f64, seed: u64, total: u64) -> Vec<VSet> {
    let mut rng = rng_with_stream(seed, 1);
    let geo = Geometric::new(p).expect("0 < p < 1");
    let mut out = Vec::with_capacity((total as f64 * p * 1.1) as usize + 8);
    let mut idx: u64 = 0;
    loop {
        let gap = geo.sample(&mut rng);
        idx = match idx.checked_add(gap) {
            Some(i) if i < total => i,
            _ => break,
        };
        out.push(unrank_combination(idx, n, r));
        idx += 1;
        if idx >= total {
            break;
        }
    }
    out
}

/// Advances to the next r-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(comb: &mut [u32], n: u32) -> bool {
    let k = comb.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < n - (k - i) as u32 {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The r-subset of `0..n` with lexicographic rank `idx`.
pub(crate) fn unrank_combination(mut idx: u64, n: u32, r: usize) -> VSet {
    let mut out = VSet::with_capacity(r);
    let mut x = 0u32;
    for pos in 0..r {
        loop {
            let rest = binomial((n - x - 1) as u64, (r - pos - 1) as u64);
            if idx < rest {
                break;
            }
            idx -= rest;
            x += 1;
        }
        out.push(x);
        x += 1;
    }
    out
}

/// Lexicographic rank of a sorted r-subset of `0..n`.
#[cfg(test)]
pub(crate) fn rank_combination(comb: &[u32], n: u32) -> u64 {
    let r = comb.len();
    let mut rank = 0u64;
    let mut start = 0u32;
    for (pos, &c) in comb.iter().enumerate() {
        for x in start..c {
            rank += binomial((n - x - 1) as u64, (r - pos - 1) as u64);
        }
        start = c + 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::counter_uniform;

    #[test]
    fn extremes() {
        for method in [SamplingMethod::Direct, SamplingMethod::Skip, SamplingMethod::Auto] {
            let full = sample_hypergraph(5, 3, 1.0, 9, method).unwrap();
            assert_eq!(full.edge_count(), 10);
            assert_eq!(full, RGraph::complete(5, 3));
            assert!(sample_hypergraph(5, 3, 0.0, 9, method).unwrap().is_empty());
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(sample_hypergraph(3, 4, 0.5, 0, SamplingMethod::Auto).is_err());
        assert!(sample_hypergraph(5, 3, 1.5, 0, SamplingMethod::Auto).is_err());
        assert!(sample_hypergraph(5, 3, -0.1, 0, SamplingMethod::Auto).is_err());
        assert!(sample_hypergraph(5, 1, 0.5, 0, SamplingMethod::Auto).is_err());
    }

    #[test]
    fn deterministic_under_seed() {
        let a = sample_hypergraph(20, 3, 0.05, 42, SamplingMethod::Auto).unwrap();
        let b = sample_hypergraph(20, 3, 0.05, 42, SamplingMethod::Auto).unwrap();
        let c = sample_hypergraph(20, 3, 0.05, 43, SamplingMethod::Auto).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn direct_bits_are_counter_based() {
        let n = 9;
        let g = sample_hypergraph(n, 3, 0.4, 77, SamplingMethod::Direct).unwrap();
        let mut comb = vec![0u32, 1, 2];
        let mut i = 0u64;
        loop {
            let expected = counter_uniform(77, i) < 0.4;
            assert_eq!(g.contains_edge(&comb), expected);
            i += 1;
            if !next_combination(&mut comb, n) {
                break;
            }
        }
    }

    #[test]
    fn rank_unrank_roundtrip() {
        let n = 10;
        let mut comb = vec![0u32, 1, 2, 3];
        let mut i = 0;
        loop {
            assert_eq!(rank_combination(&comb, n), i);
            assert_eq!(unrank_combination(i, n, 4).as_slice(), comb.as_slice());
            i += 1;
            if !next_combination(&mut comb, n) {
                break;
            }
        }
        assert_eq!(i, binomial(10, 4));
    }

    #[test]
    fn skip_and_direct_agree_in_distribution() {
        // Per-slot inclusion frequencies for both samplers at small n.
        let (n, r, p, trials) = (7u32, 3usize, 0.3, 6000u64);
        let total = binomial(n as u64, r as u64) as usize;
        let mut freq = [vec![0u32; total], vec![0u32; total]];
        for (m, method) in [SamplingMethod::Direct, SamplingMethod::Skip].iter().enumerate() {
            for s in 0..trials {
                let g = sample_hypergraph(n, r, p, s, *method).unwrap();
                for e in g.edges() {
                    freq[m][rank_combination(e, n) as usize] += 1;
                }
            }
        }
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        for slot in 0..total {
            for f in &freq {
                let phat = f[slot] as f64 / trials as f64;
                assert!((phat - p).abs() < 4.5 * se, "slot {slot}: {phat}");
            }
        }
    }
}
