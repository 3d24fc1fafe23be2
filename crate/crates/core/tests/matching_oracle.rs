//! Exact oracles against brute force, plus matching statistics.

use hyperlab::graph::{binomial, sample_hypergraph, subsets, SamplingMethod};
use hyperlab::matching::{
    fractional_matching_value, greedy_matching, is_maximal, random_greedy_matching,
    validate_cover, validate_matching, WeightedGraph,
};
use hyperlab::oracle::{exact_nu, exact_tau, exact_tau_with_cover, OracleConfig};
use hyperlab::{RGraph, VSet};
use proptest::prelude::*;

fn brute_nu(g: &RGraph, m: usize) -> usize {
    let e = g.edges();
    let mut best = 0;
    for mask in 0u32..(1 << e.len()) {
        let chosen: Vec<&VSet> = (0..e.len()).filter(|&i| mask >> i & 1 == 1).map(|i| &e[i]).collect();
        let ok = chosen.iter().enumerate().all(|(i, a)| {
            chosen[i + 1..]
                .iter()
                .all(|b| a.iter().filter(|v| b.contains(v)).count() < m)
        });
        if ok {
            best = best.max(chosen.len());
        }
    }
    best
}

fn brute_tau(g: &RGraph, m: usize) -> usize {
    let mut cands: Vec<VSet> = g.edges().iter().flat_map(|e| subsets(e, m)).collect();
    cands.sort();
    cands.dedup();
    let covers = |chosen: &[usize]| {
        g.edges()
            .iter()
            .all(|e| chosen.iter().any(|&c| cands[c].iter().all(|v| e.contains(v))))
    };
    for k in 0..=cands.len() {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            if covers(&idx) {
                return k;
            }
            // next k-combination of 0..cands.len()
            let mut i = k;
            while i > 0 && idx[i - 1] == cands.len() - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    unreachable!("the full candidate set covers")
}

fn small_graph(seed: u64, r: usize, n: u32, max_edges: usize) -> RGraph {
    let p = 0.35;
    let g = sample_hypergraph(n, r, p, seed, SamplingMethod::Direct).unwrap();
    let keep: Vec<VSet> = g.edges().iter().take(max_edges).cloned().collect();
    g.subgraph(keep)
}

#[test]
fn branch_and_bound_matches_brute_force() {
    let cfg = OracleConfig::default();
    for seed in 0..60u64 {
        let r = 3 + (seed % 2) as usize;
        let g = small_graph(seed, r, 7, 11);
        let m = r - 1;
        assert_eq!(exact_nu(&g, m, &cfg).unwrap(), brute_nu(&g, m), "nu seed {seed}");
        assert_eq!(exact_tau(&g, m, &cfg).unwrap(), brute_tau(&g, m), "tau seed {seed}");
    }
}

#[test]
fn spec_examples() {
    let cfg = OracleConfig::default();
    let k4 = RGraph::complete(4, 3);
    assert_eq!(exact_nu(&k4, 2, &cfg).unwrap(), 1);
    assert_eq!(exact_tau(&k4, 2, &cfg).unwrap(), 2);
    let k6 = RGraph::complete(6, 5);
    assert_eq!(exact_nu(&k6, 4, &cfg).unwrap(), 1);
    assert_eq!(exact_tau(&k6, 4, &cfg).unwrap(), 3);
    let two = RGraph::new(6, 3, [[0, 1, 2], [3, 4, 5]]).unwrap();
    assert_eq!(exact_nu(&two, 2, &cfg).unwrap(), 2);
    let one = RGraph::new(3, 3, [[0, 1, 2]]).unwrap();
    assert_eq!(exact_tau(&one, 2, &cfg).unwrap(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_chain_and_relabel_invariance(seed in 0u64..10_000, perm_seed in 0u64..1000) {
        let cfg = OracleConfig::default();
        let g = small_graph(seed, 3, 8, 18);
        let nu = exact_nu(&g, 2, &cfg).unwrap();
        let tau = exact_tau(&g, 2, &cfg).unwrap();
        prop_assert!(nu <= tau && tau <= 3 * nu);
        let cover = exact_tau_with_cover(&g, 2, &cfg).unwrap();
        prop_assert!(validate_cover(&g, &cover).ok);
        prop_assert_eq!(cover.len(), tau);

        let mut perm: Vec<u32> = (0..g.n()).collect();
        let mut s = perm_seed;
        for i in (1..perm.len()).rev() {
            s = hyperlab::rng::mix64(s);
            perm.swap(i, (s % (i as u64 + 1)) as usize);
        }
        let h = g.relabel(&perm).unwrap();
        prop_assert_eq!(exact_nu(&h, 2, &cfg).unwrap(), nu);
        prop_assert_eq!(exact_tau(&h, 2, &cfg).unwrap(), tau);
    }

    #[test]
    fn greedy_is_valid_maximal_and_order_only(seed in 0u64..10_000) {
        let g = sample_hypergraph(12, 3, 0.2, seed, SamplingMethod::Direct).unwrap();
        let w = WeightedGraph::uniform(g.clone(), seed);
        let m = greedy_matching(&w);
        prop_assert!(validate_matching(&g, &m).ok);
        prop_assert!(is_maximal(&g, &m));
        let squashed: Vec<f64> = w.weights().iter().map(|x| x * x * 0.5 + 0.1).collect();
        let w2 = WeightedGraph::new(g.clone(), squashed).unwrap();
        prop_assert_eq!(greedy_matching(&w2), m);
    }
}

#[test]
fn greedy_density_near_alpha() {
    // r = 3, n = 60, d = 1: alpha_3(1) = 1 - 3^{-1/2}.
    let (n, r, d) = (60u32, 3usize, 1.0);
    let p = d / (n - 2) as f64;
    let trials = 200;
    let norm = binomial(n as u64, 2) as f64;
    let xs: Vec<f64> = (0..trials)
        .map(|t| {
            let g = sample_hypergraph(n, r, p, 1000 + t, SamplingMethod::Auto).unwrap();
            r as f64 * random_greedy_matching(&g, t).len() as f64 / norm
        })
        .collect();
    let mean = xs.iter().sum::<f64>() / trials as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
    let se = (var / trials as f64).sqrt();
    let target = 1.0 - 3f64.powf(-0.5);
    assert!((mean - target).abs() <= 3.0 * se + 5.0 / n as f64, "mean {mean} target {target}");
}

/// Given an edge, the co-degrees of its three pairs are independent
/// `1 + Bin(n-3, p)`, so the expected number of light edges is explicit.
#[test]
fn fractional_value_matches_closed_expectation() {
    let (n, p, eps) = (200u32, 0.1f64, 0.5);
    let d = (n - 2) as f64 * p;
    let threshold = (1.0 + eps) * d;
    // P(1 + Bin(n-3, p) < D) by direct pmf summation.
    let k_max = (threshold - 1.0).ceil() as i64 - 1;
    let trials_bin = (n - 3) as i64;
    let mut pmf = (1.0 - p).powi(trials_bin as i32);
    let mut light = 0.0;
    for k in 0..=k_max {
        light += pmf;
        pmf *= (trials_bin - k) as f64 / (k + 1) as f64 * p / (1.0 - p);
    }
    let expected = binomial(n as u64, 3) as f64 * p * light.powi(3) / threshold;
    let samples = 24;
    let vals: Vec<f64> = (0..samples)
        .map(|s| {
            let g = sample_hypergraph(n, 3, p, 77 + s, SamplingMethod::Auto).unwrap();
            fractional_matching_value(&g, eps, d).unwrap().value
        })
        .collect();
    let mean = vals.iter().sum::<f64>() / samples as f64;
    let var = vals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
    let se = (var / samples as f64).sqrt();
    assert!((mean - expected).abs() <= 3.0 * se + 1e-9, "mean {mean} expected {expected} se {se}");
}

#[test]
fn fractional_value_trivial_cases() {
    let g = RGraph::new(6, 3, [[0, 1, 2], [3, 4, 5]]).unwrap();
    let f = fractional_matching_value(&g, 0.5, 2.0).unwrap();
    assert_eq!(f.heavy, 0);
    assert!((f.value - 2.0 / 3.0).abs() < 1e-15);
    let k5 = RGraph::complete(5, 3);
    let f = fractional_matching_value(&k5, 0.5, 1.0).unwrap();
    assert_eq!(f.heavy, 10);
    assert_eq!(f.value, 0.0);
}
