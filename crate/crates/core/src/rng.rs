//! Seed derivation and the small samplers shared by the simulators.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;

/// SplitMix64 finaliser.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Sub-seed for trial `index` of a run with master seed `master`.
///
/// Pure function of its inputs, so trials can run in any order.
#[inline]
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(mix64(master) ^ index.wrapping_mul(0xd1b5_4a32_d192_ed03))
}

/// Seeded generator used everywhere in the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator on an independent ChaCha stream for the same seed.
pub fn rng_with_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Maps 64 random bits to a uniform double in `[0, 1)`.
#[inline]
pub fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// The `index`-th uniform of the counter-based stream for `seed`.
///
/// Equal to the `index`-th call of `next_u64` on `rng_from_seed(seed)`,
/// which is what the sequential sampler consumes.
pub fn counter_uniform(seed: u64, index: u64) -> f64 {
    let mut rng = rng_from_seed(seed);
    rng.set_word_pos(2 * index as u128);
    unit_f64(rng.next_u64())
}

const INVERSION_LIMIT: f64 = 30.0;

/// Poisson variate. Sequential inversion up to mean 30, otherwise the
/// `rand_distr` sampler.
pub fn poisson<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    if mean > INVERSION_LIMIT {
        let dist = rand_distr::Poisson::new(mean).expect("finite positive mean");
        return dist.sample(rng) as u64;
    }
    let u: f64 = rng.random();
    let mut k = 0u64;
    let mut p = (-mean).exp();
    let mut cdf = p;
    while u > cdf {
        k += 1;
        p *= mean / k as f64;
        cdf += p;
        if p == 0.0 {
            break;
        }
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counter_stream_matches_sequential_stream() {
        let mut rng = rng_from_seed(17);
        for i in 0..50 {
            let seq = unit_f64(rng.next_u64());
            assert_eq!(seq, counter_uniform(17, i));
        }
    }

    #[test]
    fn derived_seeds_differ() {
        let a: Vec<u64> = (0..1000).map(|i| derive_seed(5, i)).collect();
        let mut b = a.clone();
        b.sort_unstable();
        b.dedup();
        assert_eq!(a.len(), b.len());
        assert_ne!(derive_seed(5, 0), derive_seed(6, 0));
    }

    #[test]
    fn poisson_moments() {
        let mut rng = rng_from_seed(3);
        for &mean in &[0.3, 2.0, 12.0, 45.0] {
            let n = 40_000;
            let xs: Vec<f64> = (0..n).map(|_| poisson(&mut rng, mean) as f64).collect();
            let m = xs.iter().sum::<f64>() / n as f64;
            let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
            let se = (mean / n as f64).sqrt();
            assert!((m - mean).abs() < 4.0 * se, "mean {m} vs {mean}");
            assert!((v / mean - 1.0).abs() < 0.05, "var {v} vs {mean}");
        }
        assert_eq!(poisson(&mut rng, 0.0), 0);
    }
}
