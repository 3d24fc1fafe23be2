//! Finite verifications of the ratio bounds on bounded `d` ranges.

use serde::Serialize;

use super::{
    alpha, beta, beta_limit, delta, eta, golden_section_max, psi_with, tau_bound_sidorenko,
    AppendixBConstants, Zeta, ZetaMethod,
};
use crate::{Error, Result};

/// Largest ratio found on a grid, refined by golden-section search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioCheck {
    pub r: usize,
    pub max_ratio: f64,
    pub arg_d: f64,
    pub bound: f64,
    /// `r * beta_limit / alpha(r, d_hi)`, which bounds the ratio for all
    /// `d >= d_hi`.
    pub tail_bound: f64,
    pub passed: bool,
}

/// Grid maximum of `f` on `[lo, hi]` with `points` nodes, then refined on
/// the two neighbouring cells.
fn grid_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> (f64, f64) {
    let points = points.max(2);
    let step = (hi - lo) / (points - 1) as f64;
    let (mut best_i, mut best) = (0, f64::NEG_INFINITY);
    for i in 0..points {
        let v = f(lo + step * i as f64);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let a = lo + step * best_i.saturating_sub(1) as f64;
    let b = (lo + step * (best_i + 1) as f64).min(hi);
    let (x, v) = golden_section_max(&f, a, b, 1e-9);
    if v > best {
        (x, v)
    } else {
        (lo + step * best_i as f64, best)
    }
}

/// `max r beta_r(d) / alpha_r(d)` over `[d_lo, d_hi]`, compared with
/// `ceil((r+1)/2)`.
pub fn small_r_ratio_check(r: usize, d_lo: f64, d_hi: f64, grid: usize) -> Result<RatioCheck> {
    beta_limit(r)?;
    if d_lo < 1.0 / (r - 1) as f64 - 1e-15 || d_hi <= d_lo {
        return Err(Error::param(format!(
            "need 1/(r-1) <= d_lo < d_hi, got [{d_lo}, {d_hi}]"
        )));
    }
    let rf = r as f64;
    let ratio = |d: f64| rf * beta(r, d).expect("r checked") / alpha(r, d);
    let (arg_d, max_ratio) = grid_max(ratio, d_lo, d_hi, grid);
    let bound = (r + 1).div_ceil(2) as f64;
    Ok(RatioCheck {
        r,
        max_ratio,
        arg_d,
        bound,
        tail_bound: rf * beta_limit(r)? / alpha(r, d_hi),
        passed: max_ratio <= bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MediumCheck {
    pub r: usize,
    pub best_l: usize,
    pub coefficient: f64,
    pub passed: bool,
}

pub const MEDIUM_R_BOUND: f64 = 0.938;

/// `min_l tau_bound_sidorenko(r, l) / (1 - (2r-1)^{-1/(r-1)})`.
pub fn medium_r_check(r: usize) -> Result<MediumCheck> {
    if !(7..=270).contains(&r) {
        return Err(Error::param(format!("medium_r_check covers 7..=270, got {r}")));
    }
    let denom = 1.0 - ((2 * r - 1) as f64).powf(-1.0 / (r - 1) as f64);
    let (best_l, coefficient) = (2..=r / 2)
        .map(|l| (l, tau_bound_sidorenko(r, l).expect("l in range") / denom))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("r >= 7 has l = 2");
    Ok(MediumCheck {
        r,
        best_l,
        coefficient,
        passed: coefficient <= MEDIUM_R_BOUND,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct R6Check {
    pub max_ratio: f64,
    pub arg_d: f64,
    /// `6 (3/8) / alpha_6(d_hi)`, the bound for `d >= d_hi`.
    pub shortcut: f64,
    /// Limit of the ratio as `d -> 0+`.
    pub limit_at_zero: f64,
    pub passed: bool,
}

pub const R6_BOUND: f64 = 4.686;

/// `max psi_{6,2}(d) / ((1/6) alpha_6(d))` over `[d_lo, d_hi]`.
pub fn r6_ratio_check(d_lo: f64, d_hi: f64, grid: usize) -> Result<R6Check> {
    if d_lo < 0.2 - 1e-15 || d_hi <= d_lo {
        return Err(Error::param(format!("need 1/5 <= d_lo < d_hi, got [{d_lo}, {d_hi}]")));
    }
    let z = Zeta::new(6, 2, ZetaMethod::Formula)?;
    let ratio = |d: f64| 6.0 * psi_with(6, 2, d, z) / alpha(6, d);
    let (arg_d, max_ratio) = grid_max(ratio, d_lo, d_hi, grid);
    let top = super::psi_limit(6, 2, z);
    let shortcut = 6.0 * top / alpha(6, d_hi);
    // Both bracketed factors and alpha_6 have slope 1 at the origin.
    let limit_at_zero = 6.0 * (z.z1 / 4.0 + z.z2 / 2.0 + 1.0 / 32.0);
    Ok(R6Check {
        max_ratio,
        arg_d,
        shortcut,
        limit_at_zero,
        passed: max_ratio < R6_BOUND && shortcut < R6_BOUND,
    })
}

/// `eta_r` is non-decreasing (up to `1e-12`) on an even grid of
/// `[1/(r-1), 2]` with `points` nodes.
pub fn eta_monotone_check(r: usize, points: usize) -> bool {
    let lo = 1.0 / (r - 1) as f64;
    let points = points.max(2);
    let step = (2.0 - lo) / (points - 1) as f64;
    let mut prev = eta(r, lo);
    for i in 1..points {
        let cur = eta(r, lo + step * i as f64);
        if cur < prev - 1e-12 {
            return false;
        }
        prev = cur;
    }
    true
}

/// `delta_r` strictly decreasing for `r` in `r_lo..=r_hi` under fixed
/// constants.
pub fn delta_decreasing_check(r_lo: usize, r_hi: usize, c: &AppendixBConstants) -> bool {
    (r_lo..r_hi).all(|r| delta(r + 1, c) < delta(r, c))
}
