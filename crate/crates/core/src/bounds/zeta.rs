use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Largest `l^(r-1)` the enumeration route accepts by default.
pub const ENUMERATION_GUARD: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZetaMethod {
    #[default]
    Formula,
    Enumeration,
}

/// Rows `0..=max_n` of the Stirling numbers of the second kind.
#[derive(Debug, Clone)]
pub struct StirlingTable {
    rows: Vec<Vec<BigUint>>,
}

impl StirlingTable {
    pub fn new(max_n: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![BigUint::one()]);
        for a in 1..=max_n {
            let prev = &rows[a - 1];
            let mut row = vec![BigUint::zero(); a + 1];
            for b in 1..=a {
                let stay = if b < a { &prev[b] * BigUint::from(b) } else { BigUint::zero() };
                row[b] = stay + &prev[b - 1];
            }
            rows.push(row);
        }
        StirlingTable { rows }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// `S(a, b)`; zero when `b > a`. Panics if `a` exceeds the table.
    pub fn get(&self, a: usize, b: usize) -> BigUint {
        self.rows[a].get(b).cloned().unwrap_or_default()
    }

    /// `T(r, l) = l! sum_j (-1)^j C(r-1, j) S(r-1-j, l-j)`.
    pub fn t_count(&self, r: usize, l: usize) -> BigInt {
        let k = r - 1;
        let mut total = BigInt::zero();
        let mut binom = BigInt::one();
        for j in 0..=l.min(k) {
            if j > 0 {
                binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j);
            }
            let term = &binom * BigInt::from(self.get(k - j, l - j));
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total * factorial(l)
    }
}

fn factorial(l: usize) -> BigInt {
    (1..=l).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn stirling2(a: usize, b: usize) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    StirlingTable::new(a).get(a, b)
}

fn check(r: usize, l: usize) -> Result<()> {
    if r < 3 {
        return Err(Error::param(format!("zeta1 needs r >= 3, got {r}")));
    }
    if l == 0 {
        return Err(Error::param("zeta1 needs l >= 1"));
    }
    Ok(())
}

/// Probability that a uniform assignment of r-1 labelled elements to `l`
/// blocks puts at least two elements in every block.
pub fn zeta1(r: usize, l: usize, method: ZetaMethod) -> Result<BigRational> {
    match method {
        ZetaMethod::Formula => zeta1_formula(r, l),
        ZetaMethod::Enumeration => zeta1_enumeration(r, l, ENUMERATION_GUARD),
    }
}

pub fn zeta2(r: usize, l: usize, method: ZetaMethod) -> Result<BigRational> {
    Ok(BigRational::one() - zeta1(r, l, method)?)
}

pub fn zeta1_formula(r: usize, l: usize) -> Result<BigRational> {
    check(r, l)?;
    Ok(zeta1_from_table(&StirlingTable::new(r - 1), r, l))
}

pub(crate) fn zeta1_from_table(table: &StirlingTable, r: usize, l: usize) -> BigRational {
    let denom = num_traits::pow(BigInt::from(l), r - 1);
    BigRational::new(table.t_count(r, l), denom)
}

/// Brute force over all `l^(r-1)` assignments; refuses more than `guard`.
pub fn zeta1_enumeration(r: usize, l: usize, guard: u128) -> Result<BigRational> {
    check(r, l)?;
    let k = r - 1;
    let size = (l as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if size > guard {
        return Err(Error::EnumerationGuard { size, guard });
    }
    // Split on the first two digits; each piece runs an odometer.
    let head = k.min(2);
    let pieces = (l as u64).pow(head as u32);
    let count_piece = |p: u64| -> u64 {
        let mut counts = vec![0u32; l];
        let mut q = p;
        for _ in 0..head {
            counts[(q % l as u64) as usize] += 1;
            q /= l as u64;
        }
        count_tail(&mut counts, k - head)
    };
    #[cfg(feature = "parallel")]
    let hits: u64 = (0..pieces).into_par_iter().map(count_piece).sum();
    #[cfg(not(feature = "parallel"))]
    let hits: u64 = (0..pieces).map(count_piece).sum();
    Ok(BigRational::new(BigInt::from(hits), BigInt::from(size)))
}

/// Number of ways to place `tail` more elements so every block ends with
/// at least two, starting from `counts`.
fn count_tail(counts: &mut [u32], tail: usize) -> u64 {
    let l = counts.len();
    let mut digits = vec![0usize; tail];
    counts[0] += tail as u32;
    let mut short = counts.iter().filter(|&&c| c < 2).count();
    let mut hits = 0u64;
    let dec = |counts: &mut [u32], b: usize, short: &mut usize| {
        counts[b] -= 1;
        if counts[b] == 1 {
            *short += 1;
        }
    };
    let inc = |counts: &mut [u32], b: usize, short: &mut usize| {
        counts[b] += 1;
        if counts[b] == 2 {
            *short -= 1;
        }
    };
    loop {
        if short == 0 {
            hits += 1;
        }
        let mut pos = 0;
        loop {
            if pos == tail {
                return hits;
            }
            let old = digits[pos];
            dec(counts, old, &mut short);
            if old + 1 < l {
                digits[pos] = old + 1;
                inc(counts, old + 1, &mut short);
                break;
            }
            digits[pos] = 0;
            inc(counts, 0, &mut short);
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn stirling_small_values() {
        assert_eq!(stirling2(4, 2), BigUint::from(7u32));
        assert_eq!(stirling2(0, 0), BigUint::one());
        assert_eq!(stirling2(5, 0), BigUint::zero());
        assert_eq!(stirling2(3, 5), BigUint::zero());
        for n in 1..30 {
            assert_eq!(stirling2(n, 1), BigUint::one());
            assert_eq!(stirling2(n, n), BigUint::one());
        }
        assert_eq!(stirling2(10, 5), BigUint::from(42_525u32));
    }

    /// Set partitions of {0..n} into b non-empty parts, by restricted
    /// growth strings.
    fn partitions_brute(n: usize, b: usize) -> u64 {
        fn go(i: usize, n: usize, used: usize, b: usize) -> u64 {
            if i == n {
                return (used == b) as u64;
            }
            (0..=used.min(b - 1)).map(|c| go(i + 1, n, used.max(c + 1), b)).sum()
        }
        if b == 0 {
            return (n == 0) as u64;
        }
        go(0, n, 0, b)
    }

    #[test]
    fn stirling_matches_set_partition_count() {
        for n in 0..9 {
            for b in 0..=n {
                assert_eq!(stirling2(n, b), BigUint::from(partitions_brute(n, b)), "S({n},{b})");
            }
        }
    }

    #[test]
    fn zeta_spot_values() {
        assert_eq!(zeta1(6, 2, ZetaMethod::Formula).unwrap(), q(20, 32));
        assert_eq!(zeta2(6, 2, ZetaMethod::Formula).unwrap(), q(12, 32));
        assert_eq!(zeta1(5, 2, ZetaMethod::Formula).unwrap(), q(6, 16));
        assert_eq!(zeta1(5, 2, ZetaMethod::Enumeration).unwrap(), q(6, 16));
        for r in 3..20 {
            assert_eq!(zeta1(r, 1, ZetaMethod::Formula).unwrap(), BigRational::one());
        }
        assert_eq!(zeta1(6, 3, ZetaMethod::Formula).unwrap(), BigRational::zero());
    }

    #[test]
    fn formula_equals_enumeration_small() {
        for r in 3..=9 {
            for l in 1..=5 {
                assert_eq!(
                    zeta1(r, l, ZetaMethod::Formula).unwrap(),
                    zeta1(r, l, ZetaMethod::Enumeration).unwrap(),
                    "r={r} l={l}"
                );
            }
        }
    }

    #[test]
    fn guard_and_domain() {
        assert!(matches!(
            zeta1(13, 5, ZetaMethod::Enumeration),
            Err(Error::EnumerationGuard { .. })
        ));
        assert!(zeta1(2, 1, ZetaMethod::Formula).is_err());
        assert!(zeta1(5, 0, ZetaMethod::Formula).is_err());
    }

    #[test]
    fn zeta_in_unit_interval() {
        let t = StirlingTable::new(60);
        for r in 3..=61 {
            for l in 1..=(r / 2) {
                let z = zeta1_from_table(&t, r, l).to_f64().unwrap();
                assert!((0.0..=1.0).contains(&z), "r={r} l={l} z={z}");
            }
        }
    }
}
