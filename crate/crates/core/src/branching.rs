//! Galton-Watson r-trees, the decreasing-weight trees of the random greedy
//! matching, the survival recursion, and Binomial/Poisson total variation.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::RTree;
use crate::rng::{derive_seed, poisson, rng_from_seed};
use crate::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Caps that stop generation of a possibly infinite tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeCaps {
    /// Deepest edge depth generated.
    pub depth: usize,
    /// Largest number of (r-1)-sets generated.
    pub nodes: usize,
}

impl Default for TreeCaps {
    fn default() -> Self {
        TreeCaps {
            depth: 10_000,
            nodes: 1_000_000,
        }
    }
}

/// A sampled tree with its generation metadata.
#[derive(Debug, Clone)]
pub struct GwTree {
    pub tree: RTree,
    /// Offspring mean per (r-1)-set.
    pub d: f64,
    /// Edge weights, indexed like `tree.edges()`, for decreasing trees.
    pub edge_weights: Option<Vec<f64>>,
    pub node_capped: bool,
    pub depth_capped: bool,
    /// `edges_per_depth[i]` counts edges at depth `i + 1`.
    pub edges_per_depth: Vec<usize>,
}

impl GwTree {
    pub fn truncated(&self) -> bool {
        self.node_capped || self.depth_capped
    }

    fn record_edge(&mut self, depth: usize) {
        if self.edges_per_depth.len() < depth {
            self.edges_per_depth.resize(depth, 0);
        }
        self.edges_per_depth[depth - 1] += 1;
    }
}

fn check_params(r: usize, d: f64) -> Result<()> {
    if r < 2 {
        return Err(Error::param("r must be at least 2"));
    }
    if !(d >= 0.0) || !d.is_finite() {
        return Err(Error::param(format!("offspring mean must be finite and >= 0, got {d}")));
    }
    Ok(())
}

/// `T^d`: every (r-1)-set, breadth first, is the base of `Po(d)` new edges.
pub fn sample_gw_tree(r: usize, d: f64, caps: TreeCaps, seed: u64) -> Result<GwTree> {
    check_params(r, d)?;
    let mut rng = rng_from_seed(seed);
    let mut out = GwTree {
        tree: RTree::with_standard_root(r),
        d,
        edge_weights: None,
        node_capped: false,
        depth_capped: false,
        edges_per_depth: Vec::new(),
    };
    let mut next = 0;
    while next < out.tree.set_count() {
        let set = next;
        next += 1;
        let kids = poisson(&mut rng, d);
        if kids == 0 {
            continue;
        }
        let depth = out.tree.set_depth(set) + 1;
        if depth > caps.depth {
            out.depth_capped = true;
            continue;
        }
        for _ in 0..kids {
            if out.tree.set_count() + (r - 1) > caps.nodes {
                out.node_capped = true;
                return Ok(out);
            }
            out.tree.grow(set);
            out.record_edge(depth);
        }
    }
    Ok(out)
}

/// How the decreasing-weight tree is generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecreasingMode {
    /// A set of weight `x` gets `Po(d x)` edges with weights uniform on `[0, x]`.
    #[default]
    Thinned,
    /// `Po(d)` edges with weights uniform on `[0, 1]`; those of weight `>= x`
    /// are discarded.
    Filtered,
}

/// `W^d`: the part of `T^d` reachable from the root along decreasing
/// weights, with the root carrying `root_weight`.
///
/// Each child set inherits the weight of the edge that created it.
pub fn sample_decreasing_tree(
    r: usize,
    d: f64,
    root_weight: f64,
    caps: TreeCaps,
    mode: DecreasingMode,
    seed: u64,
) -> Result<GwTree> {
    check_params(r, d)?;
    if !(0.0..=1.0).contains(&root_weight) {
        return Err(Error::param("root weight must lie in [0, 1]"));
    }
    let mut rng = rng_from_seed(seed);
    let mut out = GwTree {
        tree: RTree::with_standard_root(r),
        d,
        edge_weights: Some(Vec::new()),
        node_capped: false,
        depth_capped: false,
        edges_per_depth: Vec::new(),
    };
    let mut set_weight = vec![root_weight];
    let mut weights = Vec::new();
    let mut next = 0;
    let mut kid_weights: Vec<f64> = Vec::new();
    while next < out.tree.set_count() {
        let set = next;
        next += 1;
        let x = set_weight[set];
        kid_weights.clear();
        match mode {
            DecreasingMode::Thinned => {
                let k = poisson(&mut rng, d * x);
                kid_weights.extend((0..k).map(|_| x * rng.random::<f64>()));
            }
            DecreasingMode::Filtered => {
                let k = poisson(&mut rng, d);
                kid_weights.extend((0..k).map(|_| rng.random::<f64>()).filter(|&w| w < x));
            }
        }
        if kid_weights.is_empty() {
            continue;
        }
        let depth = out.tree.set_depth(set) + 1;
        if depth > caps.depth {
            out.depth_capped = true;
            continue;
        }
        for &w in &kid_weights {
            if out.tree.set_count() + (r - 1) > caps.nodes {
                out.node_capped = true;
                out.edge_weights = Some(weights);
                return Ok(out);
            }
            out.tree.grow(set);
            weights.push(w);
            set_weight.extend(std::iter::repeat_n(w, r - 1));
            out.record_edge(depth);
        }
    }
    out.edge_weights = Some(weights);
    Ok(out)
}

/// Verdicts of the survival recursion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurvivalOutcome {
    /// `survives[s]` for every (r-1)-set index of the tree.
    pub survives: Vec<bool>,
}

impl SurvivalOutcome {
    pub fn root_survives(&self) -> bool {
        self.survives[0]
    }
}

/// A set dies iff it is the base of an edge whose other r-1 sets all
/// survive; sets based by no edge survive.
pub fn survival(t: &GwTree) -> Result<SurvivalOutcome> {
    if t.truncated() {
        return Err(Error::TruncatedTree);
    }
    Ok(survival_of(&t.tree))
}

/// Survival recursion on any finite rooted tree.
pub fn survival_of(tree: &RTree) -> SurvivalOutcome {
    let mut survives = vec![true; tree.set_count()];
    // Sets are created after their parent edge, so reverse creation order
    // evaluates every child before its base.
    for s in (0..tree.set_count()).rev() {
        let dies = tree.edges_on(s).iter().any(|&e| {
            tree.edges()[e].children.iter().all(|&c| survives[c])
        });
        survives[s] = !dies;
    }
    SurvivalOutcome { survives }
}

/// `f(x) = ((r-1) d x + 1)^{-1/(r-1)}`, the survival probability of a set
/// of weight `x` in `W^d`.
pub fn closed_form_survival(r: usize, d: f64, x: f64) -> f64 {
    let k = (r - 1) as f64;
    (k * d * x + 1.0).powf(-1.0 / k)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurvivalEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub trials: u64,
    pub survived: u64,
}

impl SurvivalEstimate {
    pub fn z_score(&self, target: f64) -> f64 {
        if self.stderr == 0.0 {
            if (self.estimate - target).abs() < 1e-15 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.estimate - target) / self.stderr
        }
    }
}

/// Fraction of independent `W^d` samples (root weight 1) whose root
/// survives. Trial `i` uses `derive_seed(seed, i)`.
pub fn survival_probability_mc(
    r: usize,
    d: f64,
    trials: u64,
    seed: u64,
    mode: DecreasingMode,
) -> Result<SurvivalEstimate> {
    check_params(r, d)?;
    if trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    let one = |i: u64| -> Result<u64> {
        let t = sample_decreasing_tree(r, d, 1.0, TreeCaps::default(), mode, derive_seed(seed, i))?;
        Ok(survival(&t)?.root_survives() as u64)
    };
    #[cfg(feature = "parallel")]
    let survived: u64 = (0..trials).into_par_iter().map(one).sum::<Result<u64>>()?;
    #[cfg(not(feature = "parallel"))]
    let survived: u64 = (0..trials).map(one).sum::<Result<u64>>()?;
    let p = survived as f64 / trials as f64;
    Ok(SurvivalEstimate {
        estimate: p,
        stderr: (p * (1.0 - p) / trials as f64).sqrt(),
        trials,
        survived,
    })
}

/// Total variation between `Bin(n + c, p)` and `Po(n p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TvDistance {
    pub value: f64,
    /// Support window `0..=window_hi` summed exactly.
    pub window_hi: u64,
    /// Mass of both laws beyond the window (bounded by 1e-12).
    pub tail_bound: f64,
}

const TV_TAIL: f64 = 1e-12;

/// Half the l1 distance over `0..=K`, where `K` is the first point past
/// which both tails carry less than `1e-12`; the tails are then added to
/// the sum, so the error is below `1e-12`.
pub fn tv_bin_po(n: u64, c: i64, p: f64) -> Result<TvDistance> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p must lie in [0, 1]"));
    }
    let trials = n as i64 + c;
    if trials < 0 {
        return Err(Error::param("n + c must be non-negative"));
    }
    let trials = trials as u64;
    let lambda = n as f64 * p;
    if p == 0.0 {
        return Ok(TvDistance {
            value: 0.0,
            window_hi: 0,
            tail_bound: 0.0,
        });
    }
    let ln_fact = LnFactorial::new();
    let bin = |k: u64| -> f64 {
        if k > trials {
            0.0
        } else if p == 1.0 {
            (k == trials) as u64 as f64
        } else {
            (ln_fact.choose(trials, k) + k as f64 * p.ln() + (trials - k) as f64 * (-p).ln_1p())
                .exp()
        }
    };
    let po = |k: u64| -> f64 {
        (k as f64 * lambda.ln() - lambda - ln_fact.get(k)).exp()
    };
    let mut sum = 0.0;
    let mut cdf_bin = 0.0;
    let mut cdf_po = 0.0;
    let mut k = 0u64;
    loop {
        let (b, q) = (bin(k), po(k));
        sum += (b - q).abs();
        cdf_bin += b;
        cdf_po += q;
        let past_modes = k as f64 > lambda.max(trials as f64 * p);
        if past_modes && (1.0 - cdf_bin).max(0.0) + (1.0 - cdf_po).max(0.0) < TV_TAIL {
            break;
        }
        if past_modes && k >= trials && 1.0 - cdf_po < TV_TAIL {
            break;
        }
        k += 1;
    }
    let tail = (1.0 - cdf_bin).max(0.0) + (1.0 - cdf_po).max(0.0);
    Ok(TvDistance {
        value: 0.5 * (sum + tail),
        window_hi: k,
        tail_bound: tail,
    })
}

/// `ln k!` via `ln Γ(k + 1)` (Lanczos), exact enough for pmf work.
struct LnFactorial;

impl LnFactorial {
    fn new() -> Self {
        LnFactorial
    }

    fn get(&self, k: u64) -> f64 {
        if k < 2 {
            return 0.0;
        }
        if k < 64 {
            return (2..=k).map(|i| (i as f64).ln()).sum();
        }
        ln_gamma(k as f64 + 1.0)
    }

    fn choose(&self, n: u64, k: u64) -> f64 {
        self.get(n) - self.get(k) - self.get(n - k)
    }
}

fn ln_gamma(x: f64) -> f64 {
    // Lanczos approximation, g = 7, n = 9.
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + 7.5;
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}
