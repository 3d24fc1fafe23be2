use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rng::rng_with_stream;
use crate::{Error, Result};

/// Assignment of the vertices `0..n` to blocks `0..l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexPartition {
    l: usize,
    assignment: Vec<u32>,
}

impl VertexPartition {
    pub fn new(l: usize, assignment: Vec<u32>) -> Result<Self> {
        if l == 0 {
            return Err(Error::param("a partition needs at least one block"));
        }
        if let Some(&b) = assignment.iter().find(|&&b| b as usize >= l) {
            return Err(Error::param(format!("block {b} out of range 0..{l}")));
        }
        Ok(VertexPartition { l, assignment })
    }

    /// Each vertex placed in a uniformly random block, independently.
    pub fn random(n: u32, l: usize, seed: u64) -> Result<Self> {
        if l == 0 {
            return Err(Error::param("a partition needs at least one block"));
        }
        let mut rng = rng_with_stream(seed, 2);
        let assignment = (0..n).map(|_| rng.random_range(0..l as u32)).collect();
        Ok(VertexPartition { l, assignment })
    }

    pub fn blocks(&self) -> usize {
        self.l
    }

    pub fn n(&self) -> u32 {
        self.assignment.len() as u32
    }

    #[inline]
    pub fn block(&self, v: u32) -> usize {
        self.assignment[v as usize] as usize
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    /// Block-intersection sizes of `set`.
    pub fn counts(&self, set: &[u32]) -> Vec<usize> {
        let mut c = vec![0usize; self.l];
        for &v in set {
            c[self.block(v)] += 1;
        }
        c
    }

    pub fn set_type(&self, set: &[u32]) -> SetType {
        SetType::from_ordered(self.counts(set))
    }

    /// `true` iff every vertex of `set` lies in one block.
    pub fn monochromatic(&self, set: &[u32]) -> bool {
        match set.split_first() {
            None => true,
            Some((&first, rest)) => {
                let b = self.block(first);
                rest.iter().all(|&v| self.block(v) == b)
            }
        }
    }

    /// Number of blocks missed by `set` and the weight `sum_i i*|set ∩ V_i|`.
    pub fn block_stats(&self, set: &[u32]) -> (usize, u64) {
        let counts = self.counts(set);
        let empty = counts.iter().filter(|&&c| c == 0).count();
        let weight = counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i * c) as u64)
            .sum();
        (empty, weight)
    }
}

/// Ordered and unordered block-intersection type of a vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SetType {
    pub ordered: Vec<usize>,
    pub unordered: Vec<usize>,
}

impl SetType {
    pub fn from_ordered(ordered: Vec<usize>) -> Self {
        let mut unordered = ordered.clone();
        unordered.sort_unstable_by(|a, b| b.cmp(a));
        SetType { ordered, unordered }
    }

    /// Digit-string form used in the literature, e.g. `"210"`.
    pub fn ordered_code(&self) -> String {
        code(&self.ordered)
    }

    pub fn unordered_code(&self) -> String {
        code(&self.unordered)
    }
}

fn code(parts: &[usize]) -> String {
    parts.iter().map(|c| c.to_string()).collect()
}
