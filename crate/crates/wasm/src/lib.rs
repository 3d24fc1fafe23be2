//! Browser bindings for the demo page. Every export returns a JSON string;
//! the `*_json` functions carry the logic and also run natively.

use hyperlab::bounds::{alpha, beta, beta_limit, minimax_ratio, psi_with, tau_bound_fr, tau_bound_sidorenko, MinimaxOptions, Zeta, ZetaMethod};
use hyperlab::branching::{closed_form_survival, survival_probability_mc, DecreasingMode};
use hyperlab::cover::{build_cover, Construction, CoverRecipe};
use hyperlab::graph::{binomial, sample_hypergraph, SamplingMethod};
use hyperlab::matching::validate_cover;
use hyperlab::rng::derive_seed;
use serde_json::json;
use wasm_bindgen::prelude::*;

const MAX_POINTS: usize = 200;
const MAX_SURVIVAL_TRIALS: u64 = 200_000;
const MAX_MINIMAX_R: usize = 60;
const MAX_DEMO_EDGES: f64 = 50_000.0;

type Out = Result<String, String>;

fn check_points(points: usize) -> Result<(), String> {
    if (2..=MAX_POINTS).contains(&points) {
        Ok(())
    } else {
        Err(format!("points must be in 2..={MAX_POINTS}"))
    }
}

fn grid(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    (0..points).map(move |i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
}

/// Monte Carlo survival against the closed form on `d` in `(0, d_max]`.
pub fn survival_curve_json(r: usize, d_max: f64, points: usize, trials: u64, seed: u64) -> Out {
    check_points(points)?;
    if !(d_max > 0.0 && d_max <= 100.0) {
        return Err("d_max must be in (0, 100]".into());
    }
    if trials == 0 || trials > MAX_SURVIVAL_TRIALS {
        return Err(format!("trials must be in 1..={MAX_SURVIVAL_TRIALS}"));
    }
    let mut rows = Vec::with_capacity(points);
    for (i, d) in grid(d_max / points as f64, d_max, points).enumerate() {
        let est = survival_probability_mc(r, d, trials, derive_seed(seed, i as u64), DecreasingMode::Thinned)
            .map_err(|e| e.to_string())?;
        rows.push(json!({
            "d": d,
            "mc": est.estimate,
            "stderr": est.stderr,
            "closed_form": closed_form_survival(r, d, 1.0),
        }));
    }
    Ok(json!({ "r": r, "points": rows }).to_string())
}

/// `psi / alpha` for one `(r, l)` over `d`, plus the minimax over all `l`.
pub fn bound_curve_json(r: usize, l: usize, d_max: f64, points: usize) -> Out {
    check_points(points)?;
    if !(6..=MAX_MINIMAX_R).contains(&r) {
        return Err(format!("r must be in 6..={MAX_MINIMAX_R}"));
    }
    if l < 2 || 2 * l > r {
        return Err(format!("l must be in 2..={}", r / 2));
    }
    let lo = 1.0 / (r - 1) as f64;
    if !(d_max > lo && d_max <= 200.0) {
        return Err(format!("d_max must be in ({lo}, 200]"));
    }
    let zeta = Zeta::new(r, l, ZetaMethod::Formula).map_err(|e| e.to_string())?;
    let rows: Vec<_> = grid(lo, d_max, points)
        .map(|d| {
            let (p, a) = (psi_with(r, l, d, zeta), alpha(r, d));
            json!({ "d": d, "psi": p, "alpha": a, "ratio": p / a })
        })
        .collect();
    let report = minimax_ratio(r, &MinimaxOptions::default()).map_err(|e| e.to_string())?;
    let sup_l = report.per_l.iter().find(|s| s.l == l).map(|s| s.sup);
    Ok(json!({
        "r": r,
        "l": l,
        "points": rows,
        "sup_for_l": sup_l,
        "minimax": {
            "value": report.value,
            "best_l": report.best_l,
            "arg_d": report.arg_d,
        },
    })
    .to_string())
}

/// Samples `H_r(n, p)` with `p = d / (n - r + 1)`, builds one cover and
/// reports its size next to the analytic density.
pub fn cover_demo_json(construction: &str, r: usize, n: u32, d: f64, seed: u64) -> Out {
    let c = Construction::from_id(construction).map_err(|e| e.to_string())?;
    let r = c.fixed_r().unwrap_or(r);
    if r < 3 || n as usize <= r || !(d >= 0.0) {
        return Err("need r >= 3, n > r and d >= 0".into());
    }
    let p = (d / (n as usize - (r - 1)) as f64).min(1.0);
    if binomial(n as u64, r as u64) as f64 * p > MAX_DEMO_EDGES {
        return Err(format!("expected edge count above {MAX_DEMO_EDGES}; lower n or d"));
    }
    let g = sample_hypergraph(n, r, p, derive_seed(seed, 0), SamplingMethod::Auto).map_err(|e| e.to_string())?;
    let l = c.default_l();
    let recipe = CoverRecipe::new(c, derive_seed(seed, 1)).with_l(l);
    let out = build_cover(&g, &recipe).map_err(|e| e.to_string())?;
    let valid = validate_cover(&g, &out.cover).ok;
    let (target, basis) = match c {
        Construction::R3Improved | Construction::R4Improved | Construction::R5Improved => {
            (beta(r, d).map_err(|e| e.to_string())?, "binom")
        }
        Construction::R3Basic | Construction::R4Basic | Construction::R5Basic => {
            (beta_limit(r).map_err(|e| e.to_string())?, "shadow")
        }
        Construction::FranklRodl => (tau_bound_fr(r, l).map_err(|e| e.to_string())?, "shadow"),
        Construction::Sidorenko => (tau_bound_sidorenko(r, l).map_err(|e| e.to_string())?, "shadow"),
        Construction::SidorenkoImproved => (
            hyperlab::bounds::psi(r, l, d, ZetaMethod::Formula).map_err(|e| e.to_string())?,
            "binom",
        ),
    };
    let scale = binomial(n as u64, r as u64 - 1) as f64;
    Ok(json!({
        "construction": c.id(),
        "r": r,
        "n": n,
        "l": l,
        "d": d,
        "edges": g.edge_count(),
        "shadow": out.shadow_len,
        "cover": out.cover.len(),
        "family_sizes": out.family_sizes,
        "density": out.cover.len() as f64 / scale,
        "shadow_fraction": if out.shadow_len == 0 { 0.0 } else { out.cover.len() as f64 / out.shadow_len as f64 },
        "target": target,
        "target_basis": basis,
        "valid": valid,
    })
    .to_string())
}

fn to_js(r: Out) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn survival_curve(r: usize, d_max: f64, points: usize, trials: u32, seed: u32) -> Result<String, JsError> {
    to_js(survival_curve_json(r, d_max, points, trials as u64, seed as u64))
}

#[wasm_bindgen]
pub fn bound_curve(r: usize, l: usize, d_max: f64, points: usize) -> Result<String, JsError> {
    to_js(bound_curve_json(r, l, d_max, points))
}

#[wasm_bindgen]
pub fn cover_demo(construction: &str, r: usize, n: u32, d: f64, seed: u32) -> Result<String, JsError> {
    to_js(cover_demo_json(construction, r, n, d, seed as u64))
}
