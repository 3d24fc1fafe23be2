//! The acceptance criteria, each a self-contained check with pinned
//! parameters and tolerances. `verify` and the `acceptance` test target
//! both run these.

use std::collections::BTreeMap;
use std::time::Instant;

use hyperlab::bounds::{
    alpha, appendix_b_constants, beta, delta, delta_decreasing_check, eta_monotone_check, medium_r_check,
    r6_ratio_check, small_r_ratio_check, table_appendix_d, zeta1_enumeration, zeta1_formula, AppendixBConstants,
    MinimaxOptions,
};
use hyperlab::branching::{
    closed_form_survival, sample_gw_tree, survival_probability_mc, DecreasingMode, TreeCaps,
};
use hyperlab::cover::{build_cover, frankl_rodl_family, Construction, CoverRecipe};
use hyperlab::graph::{binomial, sample_hypergraph, SamplingMethod, VSet, VertexPartition};
use hyperlab::matching::{random_greedy_matching, validate_cover};
use hyperlab::oracle::{exact_nu, exact_tau, OracleConfig};
use hyperlab::rng::derive_seed;
use hyperlab::RGraph;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::stats::MeanSe;

/// Reference values of `min_l sup_d psi / alpha` for `r = 6..=85`, rounded
/// to four decimals (trailing zeros dropped).
pub const EXPECTED_TABLE: [f64; 80] = [
    0.7805, 0.7064, 0.6789, 0.6804, 0.699, 0.7062, 0.6741, 0.6565, //
    0.6503, 0.6526, 0.6613, 0.6638, 0.6484, 0.6392, 0.6353, 0.6357, //
    0.6397, 0.6465, 0.6369, 0.63, 0.6263, 0.6253, 0.6266, 0.6299, //
    0.6309, 0.6248, 0.6209, 0.6188, 0.6185, 0.6196, 0.6221, 0.622, //
    0.6178, 0.6151, 0.6136, 0.6134, 0.6141, 0.6159, 0.6165, 0.6132, //
    0.611, 0.6097, 0.6093, 0.6098, 0.6109, 0.6127, 0.6099, 0.608, //
    0.6067, 0.6062, 0.6063, 0.607, 0.6082, 0.6075, 0.6057, 0.6044, //
    0.6037, 0.6035, 0.6038, 0.6046, 0.6058, 0.604, 0.6026, 0.6018, //
    0.6014, 0.6013, 0.6017, 0.6025, 0.6027, 0.6013, 0.6003, 0.5997, //
    0.5994, 0.5995, 0.5999, 0.6005, 0.6003, 0.5992, 0.5984, 0.5979, //
];
pub const TABLE_R_LO: usize = 6;
pub const TABLE_TIGHT_TOL: f64 = 5e-4;
pub const TABLE_TIGHT_MIN_ROWS: usize = 75;
pub const TABLE_LOOSE_TOL: f64 = 2e-3;

pub const ZETA_MAX_K: usize = 12;
pub const ZETA_MAX_L: usize = 5;
pub const ZETA_GUARD: u128 = 300_000_000;

pub const SURVIVAL_TRIALS: u64 = 100_000;
pub const SURVIVAL_Z: f64 = 3.0;
pub const SURVIVAL_MIN_CELLS: usize = 8;

pub const TREE_D: f64 = 0.3;
pub const TREES_PER_R: usize = 300;
pub const TREE_MAX_EDGES: usize = 64;
pub const TREE_MIN_TOTAL: usize = 500;

pub const VALIDITY_INSTANCES: u64 = 1000;
pub const VALIDITY_DEGREES: [f64; 4] = [0.5, 1.0, 2.0, 20.0];
pub const VALIDITY_N: (u32, u32) = (20, 60);
/// Vertex counts are capped so the expected edge count stays below this.
pub const VALIDITY_EDGE_BUDGET: f64 = 40_000.0;

pub const DENSITY_TRIALS: u64 = 200;
pub const DENSITY_Z: f64 = 3.0;
pub const DENSITY_SLACK_NUMERATOR: f64 = 5.0;

pub const MEDIUM_BOUND: f64 = 0.938;
pub const R6_BOUND: f64 = 4.686;
pub const DELTA_271_BOUND: f64 = 0.747;
pub const PUBLISHED_CONSTANTS: (f64, f64, f64, f64) = (0.2421, 0.50, 1.08, 0.012);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "{} [{:>2}] {}: {} ({:.1}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

pub fn name(id: u8) -> &'static str {
    match id {
        1 => "minimax table",
        2 => "zeta1 formula vs enumeration",
        3 => "survival closed form",
        4 => "tau = nu on trees",
        5 => "extremal instance",
        6 => "cover validity suite",
        7 => "finite-n density targets",
        8 => "appendix finite checks",
        9 => "frankl-rodl identity",
        10 => "asymptotic claims substituted",
        _ => "unknown",
    }
}

/// Runs the listed criteria in order, calling `progress` after each one.
/// Criterion 10 summarises 1, 3, 4 and 7; any of those not listed are run
/// silently first.
pub fn run(ids: &[u8], seed: u64, progress: impl Fn(&CriterionOutcome)) -> Vec<CriterionOutcome> {
    let mut done: BTreeMap<u8, CriterionOutcome> = BTreeMap::new();
    let mut suite = None;
    let mut out = Vec::new();
    for &id in ids {
        let o = if id == 10 {
            for dep in [1, 3, 4, 7] {
                done.entry(dep).or_insert_with(|| criterion_cached(dep, seed, &mut suite));
            }
            criterion_10(&done)
        } else {
            criterion_cached(id, seed, &mut suite)
        };
        progress(&o);
        done.insert(id, o.clone());
        out.push(o);
    }
    out
}

/// Runs a single criterion other than 10.
pub fn criterion(id: u8, seed: u64) -> CriterionOutcome {
    criterion_cached(id, seed, &mut None)
}

/// Criteria 6 and 9 share one pass over the validity suite.
fn criterion_cached(id: u8, seed: u64, suite: &mut Option<SuiteTally>) -> CriterionOutcome {
    let start = Instant::now();
    if matches!(id, 6 | 9) && suite.is_none() {
        *suite = Some(validity_suite(seed));
    }
    let (passed, detail) = match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(seed),
        4 => criterion_4(seed),
        5 => criterion_5(),
        6 => criterion_6(suite.as_ref().expect("suite computed")),
        7 => criterion_7(seed),
        8 => criterion_8(),
        9 => criterion_9(suite.as_ref().expect("suite computed")),
        _ => (false, format!("criterion {id} cannot run on its own")),
    };
    CriterionOutcome {
        id,
        name: name(id),
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

type Check = (bool, String);

fn err(e: impl std::fmt::Display) -> Check {
    (false, format!("error: {e}"))
}

fn criterion_1() -> Check {
    let r_hi = TABLE_R_LO + EXPECTED_TABLE.len() - 1;
    let rows = match table_appendix_d(TABLE_R_LO, r_hi, &MinimaxOptions::default()) {
        Ok(rows) => rows,
        Err(e) => return err(e),
    };
    let devs: Vec<(usize, f64)> = rows
        .iter()
        .zip(EXPECTED_TABLE)
        .map(|(row, want)| (row.r, (row.value - want).abs()))
        .collect();
    let tight = devs.iter().filter(|(_, d)| *d <= TABLE_TIGHT_TOL).count();
    let (worst_r, worst) = devs.iter().copied().fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    let outside: Vec<String> = devs
        .iter()
        .filter(|(_, d)| *d > TABLE_TIGHT_TOL)
        .map(|(r, d)| format!("r={r}:{d:.5}"))
        .collect();
    let passed = tight >= TABLE_TIGHT_MIN_ROWS && worst <= TABLE_LOOSE_TOL;
    (
        passed,
        format!(
            "{tight}/{} rows within {TABLE_TIGHT_TOL} (need {TABLE_TIGHT_MIN_ROWS}), max deviation {worst:.5} at r={worst_r} \
             (limit {TABLE_LOOSE_TOL}); outside tight band: [{}]",
            devs.len(),
            outside.join(" ")
        ),
    )
}

fn criterion_2() -> Check {
    let cases: Vec<(usize, usize)> = (3..=ZETA_MAX_K + 1)
        .flat_map(|r| (1..=ZETA_MAX_L).map(move |l| (r, l)))
        .collect();
    let mismatches: Vec<String> = cases
        .iter()
        .filter_map(|&(r, l)| match (zeta1_formula(r, l), zeta1_enumeration(r, l, ZETA_GUARD)) {
            (Ok(a), Ok(b)) if a == b => None,
            (Ok(a), Ok(b)) => Some(format!("({r},{l}): {a} vs {b}")),
            (a, b) => Some(format!("({r},{l}): {a:?} / {b:?}")),
        })
        .collect();
    let spot = zeta1_formula(6, 2).ok() == Some(BigRational::new(20.into(), 32.into()));
    (
        mismatches.is_empty() && spot,
        format!(
            "{} (r, l) pairs with r-1 in 2..={ZETA_MAX_K}, l in 1..={ZETA_MAX_L}: {} mismatches{}; zeta1(6,2) = 20/32: {spot}",
            cases.len(),
            mismatches.len(),
            if mismatches.is_empty() { String::new() } else { format!(" [{}]", mismatches.join(", ")) }
        ),
    )
}

fn criterion_3(seed: u64) -> Check {
    let mut cells = Vec::new();
    for r in 3..=5usize {
        for d in [0.5, 1.0, 2.0] {
            let cell_seed = derive_seed(seed ^ 0x5eed_0003, cells.len() as u64);
            match survival_probability_mc(r, d, SURVIVAL_TRIALS, cell_seed, DecreasingMode::Thinned) {
                Ok(est) => cells.push((r, d, est.z_score(closed_form_survival(r, d, 1.0)))),
                Err(e) => return err(e),
            }
        }
    }
    let within = cells.iter().filter(|c| c.2.abs() <= SURVIVAL_Z).count();
    let zs: Vec<String> = cells.iter().map(|(r, d, z)| format!("({r},{d}):{z:+.2}")).collect();
    (
        within >= SURVIVAL_MIN_CELLS,
        format!(
            "{within}/9 cells with |z| <= {SURVIVAL_Z} at {SURVIVAL_TRIALS} trials (need {SURVIVAL_MIN_CELLS}); z = [{}]",
            zs.join(" ")
        ),
    )
}

fn criterion_4(seed: u64) -> Check {
    let cfg = OracleConfig::with_max_edges(TREE_MAX_EDGES);
    let mut total = 0;
    let mut parts = Vec::new();
    let mut failures = Vec::new();
    for r in [3usize, 4] {
        let (mut kept, mut empty, mut large, mut truncated, mut draws) = (0usize, 0usize, 0usize, 0usize, 0u64);
        let mut edges_seen = 0usize;
        while kept < TREES_PER_R && draws < 100 * TREES_PER_R as u64 {
            let s = derive_seed(seed ^ 0x7ee5, (r as u64) << 40 | draws);
            draws += 1;
            let tree = match sample_gw_tree(r, TREE_D, TreeCaps::default(), s) {
                Ok(t) => t,
                Err(e) => return err(e),
            };
            if tree.truncated() {
                truncated += 1;
                continue;
            }
            let k = tree.tree.edge_count();
            if k == 0 {
                empty += 1;
                continue;
            }
            if k > TREE_MAX_EDGES {
                large += 1;
                continue;
            }
            let g = tree.tree.to_graph();
            match (exact_nu(&g, r - 1, &cfg), exact_tau(&g, r - 1, &cfg)) {
                (Ok(nu), Ok(tau)) if nu == tau => {}
                (nu, tau) => failures.push(format!("r={r} seed={s}: nu={nu:?} tau={tau:?}")),
            }
            kept += 1;
            edges_seen = edges_seen.max(k);
        }
        total += kept;
        parts.push(format!(
            "r={r}: {kept} trees (largest {edges_seen} edges), skipped {empty} empty, {large} over {TREE_MAX_EDGES} edges, {truncated} truncated"
        ));
    }
    (
        failures.is_empty() && total >= TREE_MIN_TOTAL,
        format!(
            "d={TREE_D}; {total} non-empty trees (need {TREE_MIN_TOTAL}), {} with tau != nu; {}{}",
            failures.len(),
            parts.join("; "),
            if failures.is_empty() { String::new() } else { format!(" [{}]", failures.join(", ")) }
        ),
    )
}

fn criterion_5() -> Check {
    let cfg = OracleConfig::default();
    let mut found = Vec::new();
    let mut ok = true;
    for r in 3..=6usize {
        let g = RGraph::complete(r as u32 + 1, r);
        let nu = exact_nu(&g, r - 1, &cfg);
        let tau = exact_tau(&g, r - 1, &cfg);
        let want = (r + 1).div_ceil(2);
        ok &= nu == Ok(1) && tau == Ok(want);
        found.push(format!("r={r}: nu={nu:?} tau={tau:?} (want 1, {want})"));
    }
    (ok, found.join("; "))
}

/// One instance of the validity suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Instance {
    pub construction: Construction,
    pub r: usize,
    pub l: usize,
    pub n: u32,
    pub d: f64,
    pub graph_seed: u64,
    pub recipe_seed: u64,
}

/// The `k`-th instance for `c`. `d` cycles through `VALIDITY_DEGREES`;
/// constructions without a fixed `r` cycle through `r` in {4, 5, 6}
/// (improved Sidorenko stays at `r = 6, l = 2`).
pub fn instance(c: Construction, k: u64, seed: u64) -> Instance {
    let d = VALIDITY_DEGREES[(k % 4) as usize];
    let r = match c {
        Construction::SidorenkoImproved => 6,
        _ => c.fixed_r().unwrap_or(4 + ((k / 4) % 3) as usize),
    };
    let l = match c {
        Construction::FranklRodl => 2 + ((k / 12) % 2) as usize,
        Construction::Sidorenko if r == 6 => 2 + ((k / 12) % 2) as usize,
        _ => c.default_l(),
    };
    let n_lo = VALIDITY_N.0.max((r as f64 - 1.0 + d).ceil() as u32);
    let n_hi = (n_lo..=VALIDITY_N.1)
        .take_while(|&n| binomial(n as u64, r as u64) as f64 * d / (n as usize - (r - 1)) as f64 <= VALIDITY_EDGE_BUDGET)
        .last()
        .unwrap_or(n_lo);
    let base = derive_seed(seed ^ 0xc0_7e25, (c as u64) << 32 | k);
    let n = n_lo + (derive_seed(base, 0) % (n_hi - n_lo + 1) as u64) as u32;
    Instance {
        construction: c,
        r,
        l,
        n,
        d,
        graph_seed: derive_seed(base, 1),
        recipe_seed: derive_seed(base, 2),
    }
}

/// Checks cover validity and the Frankl-Rödl identity on one instance.
/// Returns `(cover_ok, identity_ok)` or a description of an error.
pub fn check_instance(inst: &Instance) -> Result<(bool, bool), String> {
    let p = inst.d / (inst.n as usize - (inst.r - 1)) as f64;
    let g = sample_hypergraph(inst.n, inst.r, p, inst.graph_seed, SamplingMethod::Auto).map_err(|e| e.to_string())?;
    let recipe = CoverRecipe::new(inst.construction, inst.recipe_seed).with_l(inst.l);
    let out = build_cover(&g, &recipe).map_err(|e| e.to_string())?;
    let cover_ok = validate_cover(&g, &out.cover).ok;
    let part = VertexPartition::random(g.n(), inst.l, recipe.partition_seed).map_err(|e| e.to_string())?;
    // Every shadow set lies in some window, so the family's union is the shadow.
    let (sizes, mut union): (Vec<usize>, Vec<VSet>) = if inst.construction == Construction::FranklRodl {
        (out.family_sizes.clone(), g.shadow().sets)
    } else {
        let family = frankl_rodl_family(&g, &part).map_err(|e| e.to_string())?;
        (
            family.iter().map(|c| c.len()).collect(),
            family.into_iter().flat_map(|c| c.sets).collect(),
        )
    };
    union.sort_unstable();
    union.dedup();
    let total: usize = sizes.iter().sum();
    let missing: usize = union.iter().map(|s| part.block_stats(s).0).sum();
    if union.len() != out.shadow_len {
        return Ok((cover_ok, false));
    }
    Ok((cover_ok, total == out.shadow_len + missing))
}

struct SuiteTally {
    per_construction: Vec<(Construction, usize, usize)>,
    identity_failures: usize,
    errors: Vec<String>,
    instances: usize,
}

fn validity_suite(seed: u64) -> SuiteTally {
    let mut tally = SuiteTally {
        per_construction: Vec::new(),
        identity_failures: 0,
        errors: Vec::new(),
        instances: 0,
    };
    for c in Construction::ALL {
        let results: Vec<Result<(bool, bool), String>> = (0..VALIDITY_INSTANCES)
            .into_par_iter()
            .map(|k| check_instance(&instance(c, k, seed)))
            .collect();
        let mut invalid = 0;
        for (k, res) in results.iter().enumerate() {
            match res {
                Ok((cover_ok, id_ok)) => {
                    invalid += usize::from(!cover_ok);
                    tally.identity_failures += usize::from(!id_ok);
                }
                Err(e) => tally.errors.push(format!("{c} #{k}: {e}")),
            }
        }
        tally.instances += results.len();
        tally.per_construction.push((c, results.len(), invalid));
    }
    tally
}

fn criterion_6(t: &SuiteTally) -> Check {
    let invalid: usize = t.per_construction.iter().map(|x| x.2).sum();
    let parts: Vec<String> = t
        .per_construction
        .iter()
        .map(|(c, k, bad)| format!("{c}:{}/{k}", k - bad))
        .collect();
    (
        invalid == 0 && t.errors.is_empty(),
        format!(
            "{} instances, {invalid} violations, {} errors; valid per construction [{}]{}",
            t.instances,
            t.errors.len(),
            parts.join(" "),
            if t.errors.is_empty() { String::new() } else { format!(" first error: {}", t.errors[0]) }
        ),
    )
}

fn criterion_9(t: &SuiteTally) -> Check {
    (
        t.identity_failures == 0 && t.errors.is_empty(),
        format!(
            "sum_j |C_j| = |D(G)| + sum_i |A_i| checked on {} suite instances: {} failures, {} errors",
            t.instances,
            t.identity_failures,
            t.errors.len()
        ),
    )
}

fn criterion_7(seed: u64) -> Check {
    let d = 1.0;
    let mut ok = true;
    let mut parts = Vec::new();
    for (c, n) in [
        (Construction::R3Improved, 100u32),
        (Construction::R4Improved, 60),
        (Construction::R5Improved, 40),
    ] {
        let r = c.fixed_r().expect("fixed r");
        let p = d / (n as usize - (r - 1)) as f64;
        let scale = binomial(n as u64, r as u64 - 1) as f64;
        let trials: Result<Vec<(f64, f64)>, String> = (0..DENSITY_TRIALS)
            .into_par_iter()
            .map(|i| {
                let base = derive_seed(seed ^ 0xde75, (r as u64) << 32 | i);
                let g = sample_hypergraph(n, r, p, derive_seed(base, 0), SamplingMethod::Auto)
                    .map_err(|e| e.to_string())?;
                let cover = build_cover(&g, &CoverRecipe::new(c, derive_seed(base, 1))).map_err(|e| e.to_string())?;
                let m = random_greedy_matching(&g, derive_seed(base, 2));
                Ok((cover.cover.len() as f64 / scale, r as f64 * m.len() as f64 / scale))
            })
            .collect();
        let trials = match trials {
            Ok(t) => t,
            Err(e) => return err(e),
        };
        let slack = DENSITY_SLACK_NUMERATOR / n as f64;
        let cov = MeanSe::of(&trials.iter().map(|t| t.0).collect::<Vec<_>>());
        let mat = MeanSe::of(&trials.iter().map(|t| t.1).collect::<Vec<_>>());
        let b = beta(r, d).expect("beta defined");
        let a = alpha(r, d);
        let cov_ok = (cov.mean - b).abs() <= DENSITY_Z * cov.se + slack;
        let mat_ok = (mat.mean - a).abs() <= DENSITY_Z * mat.se + slack;
        ok &= cov_ok && mat_ok;
        parts.push(format!(
            "r={r} n={n}: cover {:.4}±{:.4} vs beta {b:.4} [{}], matching {:.4}±{:.4} vs alpha {a:.4} [{}], slack {slack:.3}",
            cov.mean,
            cov.se,
            if cov_ok { "ok" } else { "miss" },
            mat.mean,
            mat.se,
            if mat_ok { "ok" } else { "miss" },
        ));
    }
    (ok, format!("{DENSITY_TRIALS} trials, d=1; {}", parts.join("; ")))
}

fn criterion_8() -> Check {
    let mut parts = Vec::new();
    let mut ok = true;
    for r in [4usize, 5] {
        match small_r_ratio_check(r, 1.0 / (r - 1) as f64, 5.0, 4000) {
            Ok(c) => {
                let pass = c.passed && c.max_ratio <= 3.0;
                ok &= pass;
                parts.push(format!("small r={r}: max {:.4} at d={:.3} (<= 3: {pass})", c.max_ratio, c.arg_d));
            }
            Err(e) => return err(e),
        }
    }
    let mut worst = (0usize, 0.0f64);
    for r in 7..=270 {
        match medium_r_check(r) {
            Ok(c) if c.coefficient > worst.1 => worst = (r, c.coefficient),
            Ok(_) => {}
            Err(e) => return err(e),
        }
    }
    let medium_ok = worst.1 <= MEDIUM_BOUND;
    ok &= medium_ok;
    parts.push(format!("medium 7..=270: max coefficient {:.6} at r={} (<= {MEDIUM_BOUND}: {medium_ok})", worst.1, worst.0));
    match r6_ratio_check(0.2, 6.0, 20_000) {
        Ok(c) => {
            let pass = c.passed && c.max_ratio < R6_BOUND && c.shortcut < R6_BOUND && c.limit_at_zero < R6_BOUND;
            ok &= pass;
            parts.push(format!(
                "r6: max {:.5} on [0.2, 6], shortcut {:.4}, limit at 0 {:.4} (< {R6_BOUND}: {pass})",
                c.max_ratio, c.shortcut, c.limit_at_zero
            ));
        }
        Err(e) => return err(e),
    }
    let (c0, c1, c2, c3) = PUBLISHED_CONSTANTS;
    let published = AppendixBConstants::explicit(271, c0, c1, c2, c3);
    let d271 = delta(271, &published);
    let d_ok = d271 < DELTA_271_BOUND;
    let lower_ok = match appendix_b_constants(271) {
        Ok(low) => low.c0 <= c0 && low.c1 <= c1 && low.c2 <= c2 && low.c3 <= c3,
        Err(e) => return err(e),
    };
    ok &= d_ok && lower_ok;
    parts.push(format!("delta_271 {d271:.5} (< {DELTA_271_BOUND}: {d_ok}), computed constants below published: {lower_ok}"));
    let eta_bad: Vec<usize> = (6..=50).filter(|&r| !eta_monotone_check(r, 10_000)).collect();
    let dec = delta_decreasing_check(4, 10_000, &published);
    ok &= eta_bad.is_empty() && dec;
    parts.push(format!("eta monotone for r in 6..=50: {}, delta decreasing on 4..=10000: {dec}", eta_bad.is_empty()));
    (ok, parts.join("; "))
}

fn criterion_10(done: &BTreeMap<u8, CriterionOutcome>) -> CriterionOutcome {
    let deps = [1u8, 3, 4, 7];
    let status: Vec<String> = deps
        .iter()
        .map(|id| format!("{}={}", id, if done[id].passed { "pass" } else { "fail" }))
        .collect();
    CriterionOutcome {
        id: 10,
        name: name(10),
        passed: deps.iter().all(|id| done[id].passed),
        detail: format!(
            "w.h.p./n->inf statements replaced by finite-n checks 3, 4, 7 and the exact table 1: {}",
            status.join(" ")
        ),
        seconds: 0.0,
    }
}
