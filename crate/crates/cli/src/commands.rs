//! The subcommands. Each builds its full output in memory before anything
//! is written.

use hyperlab::bounds::{alpha, beta, beta_limit, psi, table_appendix_d, tau_bound_fr, tau_bound_sidorenko, ZetaMethod};
use hyperlab::branching::{closed_form_survival, survival_probability_mc};
use hyperlab::cover::{build_cover, Construction, CoverRecipe};
use hyperlab::graph::{binomial, sample_hypergraph, SamplingMethod};
use hyperlab::matching::{random_greedy_matching, validate_cover};
use hyperlab::oracle::exact_pair_by_components;
use hyperlab::rng::derive_seed;
use hyperlab::{Error, RGraph};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::acceptance;
use crate::config::{edge_probability, CommandKind, ExperimentConfig, Format};
use crate::error::{CliError, CliResult};
use crate::output::{num, Table};
use crate::stats::MeanSe;

/// Rendered output of a command plus whether it succeeded in substance
/// (only `verify` can report failure without erroring).
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub text: String,
    pub ok: bool,
}

pub fn run(cfg: &ExperimentConfig) -> CliResult<CommandOutput> {
    let table = match cfg.command {
        CommandKind::Gen => {
            return Ok(CommandOutput {
                text: gen(cfg)?,
                ok: true,
            })
        }
        CommandKind::Verify => return Ok(verify(cfg)),
        CommandKind::MatchingMc => matching_mc(cfg)?,
        CommandKind::CoverMc => cover_mc(cfg)?,
        CommandKind::SurvivalMc => survival_mc(cfg)?,
        CommandKind::OracleCompare => oracle_compare(cfg)?,
        CommandKind::BoundsTable => bounds_table(cfg)?,
    };
    Ok(CommandOutput {
        text: table.stamp(cfg).render(cfg.format)?,
        ok: true,
    })
}

/// Trial `i` samples its graph from `derive_seed(seed, 2 i)` and draws any
/// further randomness from `derive_seed(seed, 2 i + 1)`.
pub fn trial_seeds(seed: u64, i: u64) -> (u64, u64) {
    (derive_seed(seed, 2 * i), derive_seed(seed, 2 * i + 1))
}

pub fn sample(cfg: &ExperimentConfig, graph_seed: u64) -> CliResult<RGraph> {
    Ok(sample_hypergraph(cfg.n, cfg.r, cfg.p, graph_seed, SamplingMethod::Auto)?)
}

fn gen(cfg: &ExperimentConfig) -> CliResult<String> {
    let g = sample(cfg, cfg.seed)?;
    Ok(match cfg.format {
        Format::Json => {
            let mut v = serde_json::to_value(g.to_json_value()).expect("graph json");
            v["config_hash"] = json!(cfg.hash());
            v["seed"] = json!(cfg.seed);
            v["d"] = num(cfg.d);
            v["p"] = num(cfg.p);
            let mut s = serde_json::to_string(&v).expect("json");
            s.push('\n');
            s
        }
        Format::Csv | Format::Text => g.to_text(),
    })
}

fn matching_mc(cfg: &ExperimentConfig) -> CliResult<Table> {
    let scale = binomial(cfg.n as u64, cfg.r as u64 - 1) as f64;
    let densities = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let (gs, ms) = trial_seeds(cfg.seed, i);
            let g = sample(cfg, gs)?;
            let m = random_greedy_matching(&g, ms);
            Ok(cfg.r as f64 * m.len() as f64 / scale)
        })
        .collect::<CliResult<Vec<f64>>>()?;
    let s = MeanSe::of(&densities);
    let target = alpha(cfg.r, cfg.d);
    let mut t = Table::new(&["r", "n", "d", "p", "trials", "mean", "stderr", "alpha", "z"]);
    t.push(vec![
        json!(cfg.r),
        json!(cfg.n),
        num(cfg.d),
        num(cfg.p),
        json!(cfg.trials),
        num(s.mean),
        num(s.se),
        num(target),
        num(s.z(target)),
    ]);
    Ok(t)
}

/// Analytic target of a construction and whether it is a fraction of
/// `C(n, r-1)` (`binom`) or of the shadow (`shadow`).
pub fn cover_target(c: Construction, r: usize, l: usize, d: f64) -> hyperlab::Result<(f64, &'static str)> {
    Ok(match c {
        Construction::R3Improved | Construction::R4Improved | Construction::R5Improved => (beta(r, d)?, "binom"),
        Construction::R3Basic | Construction::R4Basic | Construction::R5Basic => (beta_limit(r)?, "shadow"),
        Construction::FranklRodl => (tau_bound_fr(r, l)?, "shadow"),
        Construction::Sidorenko => (tau_bound_sidorenko(r, l)?, "shadow"),
        Construction::SidorenkoImproved => (psi(r, l, d, ZetaMethod::Formula)?, "binom"),
    })
}

/// Per-trial cover size, shadow size and validity.
pub fn cover_trial(cfg: &ExperimentConfig, c: Construction, i: u64) -> CliResult<(usize, usize, bool)> {
    let (gs, cs) = trial_seeds(cfg.seed, i);
    let g = sample(cfg, gs)?;
    let out = build_cover(&g, &CoverRecipe::new(c, cs).with_l(cfg.l))?;
    let valid = validate_cover(&g, &out.cover).ok;
    Ok((out.cover.len(), out.shadow_len, valid))
}

fn cover_mc(cfg: &ExperimentConfig) -> CliResult<Table> {
    let c = cfg.construction.expect("resolved construction");
    let scale = binomial(cfg.n as u64, cfg.r as u64 - 1) as f64;
    let trials = (0..cfg.trials)
        .into_par_iter()
        .map(|i| cover_trial(cfg, c, i))
        .collect::<CliResult<Vec<_>>>()?;
    let density: Vec<f64> = trials.iter().map(|&(k, _, _)| k as f64 / scale).collect();
    let of_shadow: Vec<f64> = trials
        .iter()
        .map(|&(k, s, _)| if s == 0 { 0.0 } else { k as f64 / s as f64 })
        .collect();
    let invalid = trials.iter().filter(|t| !t.2).count();
    let (target, basis) = cover_target(c, cfg.r, cfg.l, cfg.d)?;
    let (a, b) = (MeanSe::of(&density), MeanSe::of(&of_shadow));
    let mut t = Table::new(&[
        "construction",
        "r",
        "n",
        "l",
        "d",
        "p",
        "trials",
        "mean_density",
        "stderr_density",
        "mean_shadow_fraction",
        "stderr_shadow_fraction",
        "target",
        "target_basis",
        "invalid",
    ]);
    t.push(vec![
        json!(c.id()),
        json!(cfg.r),
        json!(cfg.n),
        json!(cfg.l),
        num(cfg.d),
        num(cfg.p),
        json!(cfg.trials),
        num(a.mean),
        num(a.se),
        num(b.mean),
        num(b.se),
        num(target),
        json!(basis),
        json!(invalid),
    ]);
    if invalid > 0 {
        return Err(CliError::Failed(format!("{invalid} of {} covers were invalid", cfg.trials)));
    }
    Ok(t)
}

fn survival_mc(cfg: &ExperimentConfig) -> CliResult<Table> {
    let est = survival_probability_mc(cfg.r, cfg.d, cfg.trials, cfg.seed, cfg.mode)?;
    let target = closed_form_survival(cfg.r, cfg.d, 1.0);
    let mode = serde_json::to_value(cfg.mode).expect("mode");
    let mut t = Table::new(&["r", "d", "mode", "trials", "survived", "estimate", "stderr", "closed_form", "z"]);
    t.push(vec![
        json!(cfg.r),
        num(cfg.d),
        mode,
        json!(est.trials),
        json!(est.survived),
        num(est.estimate),
        num(est.stderr),
        num(target),
        num(est.z_score(target)),
    ]);
    Ok(t)
}

/// Outcome of one exact comparison: `None` when a cap was hit.
pub fn oracle_trial(cfg: &ExperimentConfig, n: u32, i: u64) -> CliResult<Option<(usize, usize)>> {
    let p = edge_probability(cfg.r, n, cfg.d)?;
    let g = sample_hypergraph(n, cfg.r, p, trial_seeds(cfg.seed, i).0, SamplingMethod::Auto)?;
    match exact_pair_by_components(&g, &cfg.oracle) {
        Ok(pair) => Ok(Some(pair)),
        Err(Error::InstanceTooLarge { .. } | Error::BudgetExhausted(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn oracle_compare(cfg: &ExperimentConfig) -> CliResult<Table> {
    let mut t = Table::new(&[
        "r",
        "n",
        "d",
        "p",
        "trials",
        "solved",
        "capped",
        "mean_nu",
        "mean_tau",
        "mean_ratio",
        "max_ratio",
        "equal_fraction",
    ]);
    for &n in &cfg.n_list {
        let results = (0..cfg.trials)
            .into_par_iter()
            .map(|i| oracle_trial(cfg, n, i))
            .collect::<CliResult<Vec<_>>>()?;
        let solved: Vec<(usize, usize)> = results.iter().flatten().copied().collect();
        // An empty graph has nu = tau = 0; its ratio counts as 1.
        let ratios: Vec<f64> = solved
            .iter()
            .map(|&(nu, tau)| if nu == 0 { 1.0 } else { tau as f64 / nu as f64 })
            .collect();
        let k = solved.len().max(1) as f64;
        let mean = |f: &dyn Fn(&(usize, usize)) -> f64| solved.iter().map(f).sum::<f64>() / k;
        t.push(vec![
            json!(cfg.r),
            json!(n),
            num(cfg.d),
            num(edge_probability(cfg.r, n, cfg.d)?),
            json!(cfg.trials),
            json!(solved.len()),
            json!(results.len() - solved.len()),
            num(mean(&|x| x.0 as f64)),
            num(mean(&|x| x.1 as f64)),
            num(ratios.iter().sum::<f64>() / k),
            num(ratios.iter().copied().fold(1.0, f64::max)),
            num(solved.iter().filter(|x| x.0 == x.1).count() as f64 / k),
        ]);
    }
    Ok(t)
}

fn bounds_table(cfg: &ExperimentConfig) -> CliResult<Table> {
    let rows = table_appendix_d(cfg.r_lo, cfg.r_hi, &cfg.minimax)?;
    let mut t = Table::new(&["r", "value", "best_l", "arg_d", "grid_points", "refined", "coarse_value"]);
    for row in rows {
        t.push(vec![
            json!(row.r),
            num(row.value),
            json!(row.best_l),
            num(row.arg_d),
            json!(row.options.grid_points),
            json!(row.refined()),
            num(row.coarse_value),
        ]);
    }
    Ok(t)
}

fn verify(cfg: &ExperimentConfig) -> CommandOutput {
    let to_file = cfg.out.is_some();
    let outcomes = acceptance::run(&cfg.criteria, cfg.seed, |o| {
        if to_file {
            eprintln!("{}", o.line());
        }
    });
    let ok = outcomes.iter().all(|o| o.passed);
    let text = match cfg.format {
        Format::Json => {
            let rows: Vec<Value> = outcomes.iter().map(|o| serde_json::to_value(o).expect("json")).collect();
            let mut s = serde_json::to_string_pretty(&rows).expect("json");
            s.push('\n');
            s
        }
        _ => outcomes.iter().map(|o| o.line() + "\n").collect(),
    };
    CommandOutput { text, ok }
}
