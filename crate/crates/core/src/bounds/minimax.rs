//! `min_l sup_d psi_{r,l}(d) / alpha_r(d)`: the bound on `tau / (r nu)`.

use serde::Serialize;

use super::zeta::{zeta1_from_table, StirlingTable};
use super::{alpha, large_r_l, psi_limit, psi_with, Zeta};
use crate::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maximiser of a unimodal `f` on `[a, b]`, to within `tol` in `x`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinimaxOptions {
    /// Right end of the coarse grid; the left end is `1/(r-1)`.
    pub d_hi: f64,
    pub grid_points: usize,
    /// Width of the final golden-section bracket.
    pub tol: f64,
    /// Half-width of the `l` window around the large-`r` choice; `None`
    /// scans all `l` for `r <= 500` and uses 10 above.
    pub l_window: Option<usize>,
}

impl Default for MinimaxOptions {
    fn default() -> Self {
        MinimaxOptions {
            d_hi: 50.0,
            grid_points: 2000,
            tol: 1e-6,
            l_window: None,
        }
    }
}

/// Supremum over `d` for one `l`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LSup {
    pub l: usize,
    pub sup: f64,
    /// `f64::INFINITY` when the `d -> inf` limit is the supremum.
    pub arg_d: f64,
    pub coarse_sup: f64,
    pub coarse_arg_d: f64,
    pub limit: f64,
    /// Whether the golden-section refinement produced the supremum.
    pub refined: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub quantity: &'static str,
    pub r: usize,
    /// `min_l sup_d psi / alpha`, i.e. the bound on `tau / (r nu)`.
    pub value: f64,
    pub best_l: usize,
    pub arg_d: f64,
    /// The same minimax computed from the coarse grid alone.
    pub coarse_value: f64,
    pub d_lo: f64,
    pub options: MinimaxOptions,
    pub per_l: Vec<LSup>,
}

impl BoundReport {
    fn best(&self) -> &LSup {
        self.per_l.iter().find(|s| s.l == self.best_l).expect("best l present")
    }

    pub fn refined(&self) -> bool {
        self.best().refined
    }

    /// Limit candidate of the chosen `l`.
    pub fn limit(&self) -> f64 {
        self.best().limit
    }
}

fn l_range(r: usize, window: Option<usize>) -> (usize, usize) {
    let hi = r / 2;
    let w = match window {
        Some(w) => w,
        None if r <= 500 => return (2, hi),
        None => 10,
    };
    let centre = large_r_l(r).max(2);
    (centre.saturating_sub(w).max(2), (centre + w).min(hi))
}

fn sup_for_l(r: usize, l: usize, zeta: Zeta, opts: &MinimaxOptions) -> LSup {
    let lo = 1.0 / (r - 1) as f64;
    let f = |d: f64| psi_with(r, l, d, zeta) / alpha(r, d);
    let n = opts.grid_points.max(3);
    let step = (opts.d_hi - lo) / (n - 1) as f64;
    let (mut best_i, mut coarse) = (0, f64::NEG_INFINITY);
    for i in 0..n {
        let v = f(lo + step * i as f64);
        if v > coarse {
            coarse = v;
            best_i = i;
        }
    }
    let coarse_arg = lo + step * best_i as f64;
    let a = lo + step * best_i.saturating_sub(1) as f64;
    let b = (lo + step * (best_i + 1) as f64).min(opts.d_hi);
    let (x, fx) = golden_section_max(f, a, b, opts.tol);
    let limit = psi_limit(r, l, zeta);
    let (mut sup, mut arg_d, mut refined) = (coarse, coarse_arg, false);
    if fx > sup {
        sup = fx;
        arg_d = x;
        refined = true;
    }
    if limit > sup {
        sup = limit;
        arg_d = f64::INFINITY;
        refined = false;
    }
    LSup {
        l,
        sup,
        arg_d,
        coarse_sup: coarse.max(limit),
        coarse_arg_d: if limit > coarse { f64::INFINITY } else { coarse_arg },
        limit,
        refined,
    }
}

fn report(r: usize, table: &StirlingTable, opts: &MinimaxOptions) -> BoundReport {
    let (l_lo, l_hi) = l_range(r, opts.l_window);
    let per_l: Vec<LSup> = (l_lo..=l_hi)
        .map(|l| {
            let zeta = Zeta::from_rational(&zeta1_from_table(table, r, l));
            sup_for_l(r, l, zeta, opts)
        })
        .collect();
    let best = per_l
        .iter()
        .min_by(|a, b| a.sup.total_cmp(&b.sup))
        .expect("non-empty l range");
    let coarse_value = per_l.iter().map(|s| s.coarse_sup).fold(f64::INFINITY, f64::min);
    BoundReport {
        quantity: "minimax_ratio",
        r,
        value: best.sup,
        best_l: best.l,
        arg_d: best.arg_d,
        coarse_value,
        d_lo: 1.0 / (r - 1) as f64,
        options: *opts,
        per_l,
    }
}

fn check_opts(r: usize, opts: &MinimaxOptions) -> Result<()> {
    if r < 6 {
        return Err(Error::param(format!("minimax needs r >= 6, got {r}")));
    }
    if !(opts.d_hi > 1.0 / (r - 1) as f64) || !(opts.tol > 0.0) || opts.grid_points < 3 {
        return Err(Error::param("minimax options need d_hi > 1/(r-1), tol > 0, >= 3 grid points"));
    }
    Ok(())
}

pub fn minimax_ratio(r: usize, opts: &MinimaxOptions) -> Result<BoundReport> {
    check_opts(r, opts)?;
    Ok(report(r, &StirlingTable::new(r - 1), opts))
}

/// One report per `r` in `r_lo..=r_hi`, in order.
pub fn table_appendix_d(r_lo: usize, r_hi: usize, opts: &MinimaxOptions) -> Result<Vec<BoundReport>> {
    if r_lo > r_hi {
        return Err(Error::param(format!("empty range {r_lo}..={r_hi}")));
    }
    check_opts(r_lo, opts)?;
    let table = StirlingTable::new(r_hi - 1);
    let rs: Vec<usize> = (r_lo..=r_hi).collect();
    #[cfg(feature = "parallel")]
    let rows = rs.par_iter().map(|&r| report(r, &table, opts)).collect();
    #[cfg(not(feature = "parallel"))]
    let rows = rs.iter().map(|&r| report(r, &table, opts)).collect();
    Ok(rows)
}

pub const TABLE_HEADER: &str = "r,value,best_l,arg_d,grid_points,refined,coarse_value";

/// CSV with header `r,value,best_l,arg_d,grid_points,refined,coarse_value`.
pub fn table_csv(rows: &[BoundReport]) -> String {
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{:.6},{},{},{},{},{:.6}\n",
            row.r,
            row.value,
            row.best_l,
            if row.arg_d.is_finite() { format!("{:.6}", row.arg_d) } else { "inf".into() },
            row.options.grid_points,
            row.refined(),
            row.coarse_value
        ));
    }
    out
}
