//! Closed-form densities and the numerical checks built on them.
//!
//! `alpha` is the matching density of the random greedy process, `beta`
//! and `psi` the densities of the improved covers, and the ratio of the
//! two (times `r`) bounds `tau / nu`.

mod checks;
mod minimax;
mod zeta;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::{Error, Result};

pub use checks::{
    delta_decreasing_check, eta_monotone_check, medium_r_check, r6_ratio_check, small_r_ratio_check, MediumCheck, R6Check,
    RatioCheck,
};
pub use minimax::{
    golden_section_max, minimax_ratio, table_appendix_d, table_csv, BoundReport, LSup,
    MinimaxOptions, TABLE_HEADER,
};
pub use zeta::{
    stirling2, zeta1, zeta1_enumeration, zeta1_formula, zeta2, StirlingTable, ZetaMethod,
    ENUMERATION_GUARD,
};

/// `1 - ((r-1) d + 1)^{-1/(r-1)}`.
pub fn alpha(r: usize, d: f64) -> f64 {
    let k = (r - 1) as f64;
    -((-(k * d).ln_1p() / k).exp_m1())
}

/// Improved-cover density for `r` in {3, 4, 5}.
pub fn beta(r: usize, d: f64) -> Result<f64> {
    let (scale, inner) = match r {
        3 => (0.5, d / 2.0 * (1.0 + (-d).exp())),
        4 => (4.0 / 9.0, d / 3.0 * (2.0 + (-2.0 * d).exp())),
        5 => (5.0 / 16.0, d / 2.0 * (1.0 + (-d).exp())),
        _ => return Err(Error::param(format!("beta is defined for r in 3..=5, got {r}"))),
    };
    Ok(-scale * (-inner).exp_m1())
}

/// `lim_{d -> inf} beta(r, d)`.
pub fn beta_limit(r: usize) -> Result<f64> {
    match r {
        3 => Ok(0.5),
        4 => Ok(4.0 / 9.0),
        5 => Ok(5.0 / 16.0),
        _ => Err(Error::param(format!("beta is defined for r in 3..=5, got {r}"))),
    }
}

/// `zeta1` as a float, with `zeta2 = 1 - zeta1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Zeta {
    pub z1: f64,
    pub z2: f64,
}

impl Zeta {
    pub fn new(r: usize, l: usize, method: ZetaMethod) -> Result<Self> {
        let z = zeta1(r, l, method)?;
        Ok(Self::from_rational(&z))
    }

    pub(crate) fn from_rational(z: &num_rational::BigRational) -> Self {
        let z1 = z.to_f64().expect("finite ratio");
        Zeta { z1, z2: 1.0 - z1 }
    }
}

fn check_psi(r: usize, l: usize) -> Result<()> {
    if l < 2 || 2 * l > r {
        return Err(Error::param(format!("psi needs 2 <= l <= r/2, got r = {r}, l = {l}")));
    }
    Ok(())
}

/// Improved larger-arity cover density, with `zeta1` from `method`.
pub fn psi(r: usize, l: usize, d: f64, method: ZetaMethod) -> Result<f64> {
    check_psi(r, l)?;
    Ok(psi_with(r, l, d, Zeta::new(r, l, method)?))
}

/// `psi` for a precomputed `zeta`.
pub fn psi_with(r: usize, l: usize, d: f64, zeta: Zeta) -> f64 {
    let lf = l as f64;
    let miss = (1.0 - 1.0 / lf).powi(r as i32 - 1);
    let inner = d / 2.0 * (1.0 + (-d).exp());
    zeta.z1 / (2.0 * lf) * -(-inner).exp_m1() + (zeta.z2 / lf + miss) * -(-d).exp_m1()
}

/// `lim_{d -> inf} psi`.
pub fn psi_limit(r: usize, l: usize, zeta: Zeta) -> f64 {
    let lf = l as f64;
    zeta.z1 / (2.0 * lf) + zeta.z2 / lf + (1.0 - 1.0 / lf).powi(r as i32 - 1)
}

/// `(1 - e^{-d}) / alpha(r, d)`.
pub fn eta(r: usize, d: f64) -> f64 {
    -(-d).exp_m1() / alpha(r, d)
}

/// `1/l + (1 - 1/l)^{r-1}`.
pub fn tau_bound_fr(r: usize, l: usize) -> Result<f64> {
    if l == 0 || r < 2 {
        return Err(Error::param("tau_bound_fr needs l >= 1 and r >= 2"));
    }
    let lf = l as f64;
    Ok(1.0 / lf + (1.0 - 1.0 / lf).powi(r as i32 - 1))
}

/// `(1/2) [1/l + (3 + (r-1)/(l-1)) (1 - 1/l)^{r-1}]`.
pub fn tau_bound_sidorenko(r: usize, l: usize) -> Result<f64> {
    if l < 2 || 2 * l > r {
        return Err(Error::param(format!(
            "tau_bound_sidorenko needs 2 <= l <= r/2, got r = {r}, l = {l}"
        )));
    }
    let (rf, lf) = (r as f64, l as f64);
    Ok(0.5 * (1.0 / lf + (3.0 + (rf - 1.0) / (lf - 1.0)) * (1.0 - 1.0 / lf).powi(r as i32 - 1)))
}

/// Lower ends of the admissible ranges of `c0..c3` for `r >= r0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AppendixBConstants {
    pub r0: usize,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl AppendixBConstants {
    /// Explicit constants, e.g. rounded published values.
    pub fn explicit(r0: usize, c0: f64, c1: f64, c2: f64, c3: f64) -> Self {
        AppendixBConstants { r0, c0, c1, c2, c3 }
    }
}

fn log_term(r: usize) -> f64 {
    let ln = ((r - 1) as f64).ln();
    ln + ln.sqrt()
}

pub fn appendix_b_constants(r0: usize) -> Result<AppendixBConstants> {
    if r0 < 3 {
        return Err(Error::param("r0 must be at least 3"));
    }
    let big_l = log_term(r0);
    let m = (r0 - 1) as f64;
    if m - 2.0 * big_l <= 0.0 {
        return Err(Error::param(format!("constants undefined for r0 = {r0}: non-positive denominator")));
    }
    let c0 = big_l * big_l / (m - big_l);
    let c1 = 2.0 * big_l * big_l / (m - 2.0 * big_l);
    let c2 = (big_l + 3.0 + c1) / m.ln().sqrt().exp();
    let c3 = ((2 * r0 - 1) as f64).ln() / (2.0 * m);
    Ok(AppendixBConstants { r0, c0, c1, c2, c3 })
}

/// `(ln(r-1) + sqrt(ln(r-1)) + c0 + c2) / (2 (1 - c3) ln(2r-1))`.
pub fn delta(r: usize, c: &AppendixBConstants) -> f64 {
    (log_term(r) + c.c0 + c.c2) / (2.0 * (1.0 - c.c3) * ((2 * r - 1) as f64).ln())
}

/// The choice of `l` used for large `r`.
pub fn large_r_l(r: usize) -> usize {
    ((r - 1) as f64 / log_term(r)).floor() as usize
}
