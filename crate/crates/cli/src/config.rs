//! Experiment configuration: flags and TOML files merged into one
//! validated, hashable record.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use hyperlab::bounds::MinimaxOptions;
use hyperlab::branching::DecreasingMode;
use hyperlab::cover::Construction;
use hyperlab::graph::binomial;
use hyperlab::oracle::OracleConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// Largest expected edge count accepted when sampling.
pub const DEFAULT_MAX_SAMPLE_EDGES: f64 = 20_000_000.0;
/// Largest `r_hi - r_lo + 1` accepted by `bounds-table`.
pub const MAX_TABLE_ROWS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
    /// Edge-list text; only meaningful for `gen`.
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Thinned,
    Filtered,
}

impl From<Mode> for DecreasingMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Thinned => DecreasingMode::Thinned,
            Mode::Filtered => DecreasingMode::Filtered,
        }
    }
}

/// Raw parameters as given on the command line or in a config file.
/// Every field is optional; flags override file values.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Params {
    /// Uniformity r.
    #[arg(long)]
    pub r: Option<usize>,
    /// Number of vertices.
    #[arg(long)]
    pub n: Option<u32>,
    /// Expected co-degree; p = d / (n - (r - 1)).
    #[arg(long)]
    pub d: Option<f64>,
    /// Edge probability (exclusive with --d).
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Cover construction id, e.g. r3-improved or sidorenko.
    #[arg(long)]
    pub construction: Option<String>,
    /// Number of partition blocks.
    #[arg(long)]
    pub l: Option<usize>,
    /// Decreasing-tree generator for survival-mc.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Largest component the exact oracles accept.
    #[arg(long)]
    pub max_edges: Option<usize>,
    /// Branch-and-bound node budget of the exact cover solver.
    #[arg(long)]
    pub node_budget: Option<u64>,
    /// Largest expected edge count when sampling.
    #[arg(long)]
    pub max_sample_edges: Option<f64>,
    /// Comma-separated vertex counts for oracle-compare.
    #[arg(long)]
    pub n_list: Option<String>,
    /// First r of bounds-table.
    #[arg(long)]
    pub r_lo: Option<usize>,
    /// Last r of bounds-table.
    #[arg(long)]
    pub r_hi: Option<usize>,
    /// Coarse grid size over d for the minimax.
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Right end of the minimax grid over d.
    #[arg(long)]
    pub d_hi: Option<f64>,
    /// Final bracket width of the golden-section refinement.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Comma-separated criterion numbers for verify.
    #[arg(long)]
    pub criteria: Option<String>,
}

macro_rules! overlay {
    ($top:expr, $base:expr, $($f:ident),*) => {
        Params { $($f: $top.$f.clone().or_else(|| $base.$f.clone())),* }
    };
}

impl Params {
    /// `self` with gaps filled from `base`.
    pub fn over(&self, base: &Params) -> Params {
        overlay!(
            self, base, r, n, d, p, trials, seed, out, format, construction, l, mode, max_edges, node_budget,
            max_sample_edges, n_list, r_lo, r_hi, grid_points, d_hi, tol, criteria
        )
    }

    pub fn from_toml(text: &str) -> CliResult<Params> {
        toml::from_str(text).map_err(|e| CliError::config(format!("config file: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Params> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Params::from_toml(&text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Gen,
    MatchingMc,
    CoverMc,
    SurvivalMc,
    OracleCompare,
    BoundsTable,
    Verify,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Gen => "gen",
            CommandKind::MatchingMc => "matching-mc",
            CommandKind::CoverMc => "cover-mc",
            CommandKind::SurvivalMc => "survival-mc",
            CommandKind::OracleCompare => "oracle-compare",
            CommandKind::BoundsTable => "bounds-table",
            CommandKind::Verify => "verify",
        }
    }
}

/// A validated configuration. Output location and format are excluded
/// from the hash, so the same experiment hashes the same wherever it is
/// written.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: CommandKind,
    pub r: usize,
    pub n: u32,
    pub d: f64,
    pub p: f64,
    pub trials: u64,
    pub seed: u64,
    pub construction: Option<Construction>,
    pub l: usize,
    pub mode: DecreasingMode,
    pub oracle: OracleConfig,
    pub n_list: Vec<u32>,
    pub r_lo: usize,
    pub r_hi: usize,
    pub minimax: MinimaxOptions,
    pub criteria: Vec<u8>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub format: Format,
}

impl ExperimentConfig {
    /// First 16 hex digits of the SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serialises");
        let digest = Sha256::digest(json.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn resolve(command: CommandKind, params: &Params) -> CliResult<Self> {
        let defaults = MinimaxOptions::default();
        let oracle_defaults = OracleConfig::default();
        let mut cfg = ExperimentConfig {
            command,
            r: 0,
            n: 0,
            d: 0.0,
            p: 0.0,
            trials: 0,
            seed: params.seed.unwrap_or(0),
            construction: None,
            l: 0,
            mode: params.mode.map(Into::into).unwrap_or_default(),
            oracle: OracleConfig {
                max_edges: params.max_edges.unwrap_or(oracle_defaults.max_edges),
                node_budget: params.node_budget.unwrap_or(oracle_defaults.node_budget),
            },
            n_list: Vec::new(),
            r_lo: 0,
            r_hi: 0,
            minimax: MinimaxOptions {
                d_hi: params.d_hi.unwrap_or(defaults.d_hi),
                grid_points: params.grid_points.unwrap_or(defaults.grid_points),
                tol: params.tol.unwrap_or(defaults.tol),
                l_window: None,
            },
            criteria: Vec::new(),
            out: params.out.clone(),
            format: params.format.unwrap_or(match command {
                CommandKind::Gen => Format::Text,
                _ => Format::Csv,
            }),
        };
        let max_sample = params.max_sample_edges.unwrap_or(DEFAULT_MAX_SAMPLE_EDGES);
        match command {
            CommandKind::Gen => {
                cfg.set_graph(params, max_sample)?;
            }
            CommandKind::MatchingMc => {
                cfg.set_graph(params, max_sample)?;
                cfg.trials = trials(params, 100)?;
            }
            CommandKind::CoverMc => {
                let id = params
                    .construction
                    .as_deref()
                    .ok_or_else(|| CliError::config("cover-mc needs --construction"))?;
                let c = Construction::from_id(id)?;
                let mut p = params.clone();
                if p.r.is_none() {
                    p.r = c.fixed_r();
                }
                cfg.construction = Some(c);
                cfg.set_graph(&p, max_sample)?;
                cfg.l = params.l.unwrap_or(c.default_l());
                hyperlab::cover::CoverRecipe::new(c, 0).with_l(cfg.l).validate(cfg.r)?;
                cfg.trials = trials(params, 100)?;
            }
            CommandKind::SurvivalMc => {
                if params.p.is_some() {
                    return Err(CliError::config("survival-mc takes --d, not --p"));
                }
                cfg.r = require(params.r, "r")?;
                cfg.d = require(params.d, "d")?;
                if cfg.r < 2 || !(cfg.d >= 0.0 && cfg.d.is_finite()) {
                    return Err(CliError::config("survival-mc needs r >= 2 and finite d >= 0"));
                }
                cfg.trials = trials(params, 100_000)?;
            }
            CommandKind::OracleCompare => {
                if params.p.is_some() {
                    return Err(CliError::config("oracle-compare takes --d, not --p"));
                }
                cfg.r = require(params.r, "r")?;
                cfg.d = require(params.d, "d")?;
                if cfg.r < 2 || !(cfg.d >= 0.0 && cfg.d.is_finite()) {
                    return Err(CliError::config("oracle-compare needs r >= 2 and finite d >= 0"));
                }
                cfg.n_list = match (&params.n_list, params.n) {
                    (Some(_), Some(_)) => return Err(CliError::config("give --n or --n-list, not both")),
                    (Some(list), None) => parse_list(list, "n-list")?,
                    (None, Some(n)) => vec![n],
                    (None, None) => vec![20, 30, 40],
                };
                for &n in &cfg.n_list {
                    let p = edge_probability(cfg.r, n, cfg.d)?;
                    check_sample_size(cfg.r, n, p, max_sample)?;
                }
                cfg.trials = trials(params, 100)?;
                if cfg.oracle.max_edges == 0 || cfg.oracle.max_edges > 128 {
                    return Err(CliError::config("max-edges must lie in 1..=128"));
                }
            }
            CommandKind::BoundsTable => {
                cfg.r_lo = params.r_lo.or(params.r).unwrap_or(6);
                cfg.r_hi = params.r_hi.unwrap_or(cfg.r_lo);
                if cfg.r_lo < 6 || cfg.r_hi < cfg.r_lo {
                    return Err(CliError::config(format!(
                        "bounds-table needs 6 <= r-lo <= r-hi, got {}..={}",
                        cfg.r_lo, cfg.r_hi
                    )));
                }
                if cfg.r_hi - cfg.r_lo >= MAX_TABLE_ROWS {
                    return Err(CliError::Cap(format!("at most {MAX_TABLE_ROWS} rows per table")));
                }
                let m = cfg.minimax;
                if m.grid_points < 2 || !(m.tol > 0.0) || !(m.d_hi.is_finite() && m.d_hi > 1.0) {
                    return Err(CliError::config("need grid-points >= 2, tol > 0 and finite d-hi > 1"));
                }
            }
            CommandKind::Verify => {
                cfg.criteria = match &params.criteria {
                    Some(list) => parse_list(list, "criteria")?,
                    None => (1..=10).collect(),
                };
                if cfg.criteria.iter().any(|&c| !(1..=10).contains(&c)) {
                    return Err(CliError::config("criteria are numbered 1..=10"));
                }
            }
        }
        if cfg.format == Format::Text && command != CommandKind::Gen {
            return Err(CliError::config("text format is only available for gen"));
        }
        Ok(cfg)
    }

    fn set_graph(&mut self, params: &Params, max_sample: f64) -> CliResult<()> {
        let r = require(params.r, "r")?;
        let n = require(params.n, "n")?;
        if r < 2 || r as u64 > n as u64 {
            return Err(CliError::config(format!("need 2 <= r <= n, got r={r}, n={n}")));
        }
        let (d, p) = match (params.d, params.p) {
            (Some(_), Some(_)) => return Err(CliError::config("--d and --p are mutually exclusive")),
            (None, None) => return Err(CliError::config("one of --d or --p is required")),
            (Some(d), None) => (d, edge_probability(r, n, d)?),
            (None, Some(p)) => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(CliError::config(format!("p must lie in [0, 1], got {p}")));
                }
                ((n as usize - (r - 1)) as f64 * p, p)
            }
        };
        check_sample_size(r, n, p, max_sample)?;
        self.r = r;
        self.n = n;
        self.d = d;
        self.p = p;
        Ok(())
    }
}

fn require<T>(v: Option<T>, name: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::config(format!("missing --{name}")))
}

fn trials(params: &Params, default: u64) -> CliResult<u64> {
    match params.trials.unwrap_or(default) {
        0 => Err(CliError::config("trials must be positive")),
        t => Ok(t),
    }
}

/// `p = d / (n - (r - 1))`, rejected unless it lies in `[0, 1]`.
pub fn edge_probability(r: usize, n: u32, d: f64) -> CliResult<f64> {
    if (n as usize) < r {
        return Err(CliError::config(format!("need n >= r, got n={n}, r={r}")));
    }
    let p = d / (n as usize - (r - 1)) as f64;
    if !(0.0..=1.0).contains(&p) {
        return Err(CliError::config(format!("d = {d} gives p = {p} outside [0, 1] at n = {n}")));
    }
    Ok(p)
}

fn check_sample_size(r: usize, n: u32, p: f64, cap: f64) -> CliResult<()> {
    let expected = binomial(n as u64, r as u64) as f64 * p;
    if expected > cap {
        return Err(CliError::Cap(format!(
            "expected {expected:.0} edges exceeds the sampling cap of {cap:.0}"
        )));
    }
    Ok(())
}

fn parse_list<T: std::str::FromStr>(list: &str, name: &str) -> CliResult<Vec<T>> {
    list.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::config(format!("{name}: cannot parse {s:?}")))
        })
        .collect()
}
