use rustc_hash::FxHashMap as HashMap;

use serde::{Deserialize, Serialize};

use crate::rng::mix64;

/// A bit-valued function on block tuples `(x_0, .., x_{l-1})`,
/// `x_i` taken from block `i`.
pub trait Parity: Sync {
    fn bit(&self, tuple: &[u32]) -> bool;
}

/// Pseudo-random bit keyed by a seed: stateless and deterministic, so the
/// function never has to be stored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyedParity {
    pub seed: u64,
}

impl KeyedParity {
    pub fn new(seed: u64) -> Self {
        KeyedParity { seed }
    }
}

impl Parity for KeyedParity {
    #[inline]
    fn bit(&self, tuple: &[u32]) -> bool {
        let mut h = mix64(self.seed ^ 0x5bd1_e995_7f4a_7c15);
        for &x in tuple {
            h = mix64(h ^ x as u64);
        }
        h & 1 == 1
    }
}

/// Explicit table; tuples not listed map to 0.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TableParity {
    table: HashMap<Vec<u32>, bool>,
}

impl TableParity {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, tuple: &[u32], bit: bool) {
        self.table.insert(tuple.to_vec(), bit);
    }
}

impl Parity for TableParity {
    fn bit(&self, tuple: &[u32]) -> bool {
        self.table.get(tuple).copied().unwrap_or(false)
    }
}

impl<P: Parity + ?Sized> Parity for &P {
    fn bit(&self, tuple: &[u32]) -> bool {
        (**self).bit(tuple)
    }
}

/// Two chosen elements per block.
pub(crate) type Pairs = Vec<[u32; 2]>;

/// Sum mod 2 of `f` over the tuples with block `i` fixed to `u` and every
/// other block drawing from its pair.
pub(crate) fn slice_sum<P: Parity + ?Sized>(f: &P, pairs: &Pairs, i: usize, u: u32) -> bool {
    let l = pairs.len();
    let mut tuple = vec![0u32; l];
    let mut acc = false;
    for mask in 0u64..(1u64 << (l - 1)) {
        let mut bit = 0;
        for (k, slot) in tuple.iter_mut().enumerate() {
            if k == i {
                *slot = u;
            } else {
                *slot = pairs[k][((mask >> bit) & 1) as usize];
                bit += 1;
            }
        }
        acc ^= f.bit(&tuple);
    }
    acc
}

/// `q` of the 2l-set given by `pairs`, mod 2.
pub(crate) fn q_odd<P: Parity + ?Sized>(f: &P, pairs: &Pairs) -> bool {
    slice_sum(f, pairs, 0, pairs[0][0]) ^ slice_sum(f, pairs, 0, pairs[0][1])
}
