//! Randomised suites: draw configurations satisfying a theorem's hypotheses,
//! run the matching ordering check, count passes.
//!
//! Same-parent suites use a u-grid over either the uniform or an exponential
//! parent; different-parent suites use exponential or common-shape Weibull
//! pairs on a y-grid. Shape vectors come from Robin-Hood inverse transfers
//! (mass moved from a smaller to a larger coordinate), which keep the total
//! and can only spread the vector, so the result majorizes the start point.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::majorization::{compare, in_d_plus, in_e_plus, ShapeVector};
use crate::numeric::logspace;
use crate::order_stats::HeterogeneousSeries;
use crate::ordering::grid::{Grid, GridKind, DEFAULT_GRID_POINTS, DEFAULT_UNIT_BOUNDS};
use crate::ordering::premise::power_hr_premise;
use crate::ordering::verdict::{check, CheckOptions, OrderingVerdict, Outcome, Relation};
use crate::parent::{ParentDistribution, ParentSpec};
use crate::scenario::RunOptions;

/// Powers on which the all-`s` hazard premise is verified.
pub const PREMISE_S_POINTS: usize = 50;
pub const PREMISE_S_RANGE: (f64, f64) = (1e-2, 1e2);

const MAX_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremId {
    T3_1,
    /// Alternates branches i) and ii) by trial index.
    T3_2,
    T3_2i,
    T3_2ii,
    T3_3,
    T3_3i,
    T3_3ii,
    T3_4,
    T3_5,
    T3_5i,
    T3_5ii,
    T4_1,
    T4_2,
    T4_2i,
    T4_2ii,
    T4_3,
    T4_4,
    T4_4i,
    T4_4ii,
    /// Two components under the 3.1 hypotheses with full majorization,
    /// checked in lr order.
    T3_1N2,
    /// Two components under the 3.2 hypotheses, checked in lr order.
    T3_2N2,
}

impl TheoremId {
    pub const ALL: [TheoremId; 21] = [
        TheoremId::T3_1,
        TheoremId::T3_2,
        TheoremId::T3_2i,
        TheoremId::T3_2ii,
        TheoremId::T3_3,
        TheoremId::T3_3i,
        TheoremId::T3_3ii,
        TheoremId::T3_4,
        TheoremId::T3_5,
        TheoremId::T3_5i,
        TheoremId::T3_5ii,
        TheoremId::T4_1,
        TheoremId::T4_2,
        TheoremId::T4_2i,
        TheoremId::T4_2ii,
        TheoremId::T4_3,
        TheoremId::T4_4,
        TheoremId::T4_4i,
        TheoremId::T4_4ii,
        TheoremId::T3_1N2,
        TheoremId::T3_2N2,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            TheoremId::T3_1 => "3.1",
            TheoremId::T3_2 => "3.2",
            TheoremId::T3_2i => "3.2i",
            TheoremId::T3_2ii => "3.2ii",
            TheoremId::T3_3 => "3.3",
            TheoremId::T3_3i => "3.3i",
            TheoremId::T3_3ii => "3.3ii",
            TheoremId::T3_4 => "3.4",
            TheoremId::T3_5 => "3.5",
            TheoremId::T3_5i => "3.5i",
            TheoremId::T3_5ii => "3.5ii",
            TheoremId::T4_1 => "4.1",
            TheoremId::T4_2 => "4.2",
            TheoremId::T4_2i => "4.2i",
            TheoremId::T4_2ii => "4.2ii",
            TheoremId::T4_3 => "4.3",
            TheoremId::T4_4 => "4.4",
            TheoremId::T4_4i => "4.4i",
            TheoremId::T4_4ii => "4.4ii",
            TheoremId::T3_1N2 => "3.1-n2",
            TheoremId::T3_2N2 => "3.2-n2",
        }
    }

    /// Resolves a two-branch id to the branch used for `index`.
    fn branch(self, index: usize) -> TheoremId {
        let even = index.is_multiple_of(2);
        match self {
            TheoremId::T3_2 => {
                if even {
                    TheoremId::T3_2i
                } else {
                    TheoremId::T3_2ii
                }
            }
            TheoremId::T3_3 => {
                if even {
                    TheoremId::T3_3i
                } else {
                    TheoremId::T3_3ii
                }
            }
            TheoremId::T3_5 => {
                if even {
                    TheoremId::T3_5i
                } else {
                    TheoremId::T3_5ii
                }
            }
            TheoremId::T4_2 => {
                if even {
                    TheoremId::T4_2i
                } else {
                    TheoremId::T4_2ii
                }
            }
            TheoremId::T4_4 => {
                if even {
                    TheoremId::T4_4i
                } else {
                    TheoremId::T4_4ii
                }
            }
            other => other,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .trim()
            .chars()
            .filter(|c| !matches!(c, '(' | ')' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        TheoremId::ALL
            .iter()
            .copied()
            .find(|id| id.label() == norm)
            .ok_or_else(|| Error::Unknown(s.trim().to_string()))
    }
}

/// One generated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub theorem: TheoremId,
    pub index: usize,
    pub parent_u: ParentSpec,
    pub parent_v: ParentSpec,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub gammas: Vec<f64>,
    pub deltas: Vec<f64>,
    /// Size of the first block for multiple-outlier configurations.
    pub n1: Option<usize>,
    pub relation: Relation,
    pub expected: Outcome,
    pub grid: GridKind,
}

impl TrialConfig {
    pub fn series(&self) -> Result<(HeterogeneousSeries, HeterogeneousSeries)> {
        let u = HeterogeneousSeries::new(
            self.parent_u.build()?,
            self.alphas.clone(),
            self.betas.clone(),
        )?;
        let v = HeterogeneousSeries::new(
            self.parent_v.build()?,
            self.gammas.clone(),
            self.deltas.clone(),
        )?;
        Ok((u, v))
    }

    pub fn build_grid(&self, points: usize) -> Result<Grid> {
        let (lo, hi) = DEFAULT_UNIT_BOUNDS;
        match self.grid {
            GridKind::Y => Grid::y(lo, hi, points),
            _ => Grid::u(&self.parent_u.build()?, lo, hi, points),
        }
    }

    /// Scenario-file text that replays this configuration with `check`.
    pub fn scenario_text(&self) -> String {
        let vec = |v: &[f64]| {
            format!(
                "[{}]",
                v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        };
        let mut s = String::new();
        writeln!(s, "name = {}-trial-{}", self.theorem, self.index).unwrap();
        if self.parent_u == self.parent_v {
            writeln!(s, "parent = {}", self.parent_u).unwrap();
        } else {
            writeln!(s, "parent_u = {}", self.parent_u).unwrap();
            writeln!(s, "parent_v = {}", self.parent_v).unwrap();
        }
        writeln!(s, "alphas = {}", vec(&self.alphas)).unwrap();
        writeln!(s, "betas = {}", vec(&self.betas)).unwrap();
        writeln!(s, "gammas = {}", vec(&self.gammas)).unwrap();
        writeln!(s, "deltas = {}", vec(&self.deltas)).unwrap();
        writeln!(s, "relation = {}", self.relation.short()).unwrap();
        writeln!(s, "grid = {}", self.grid).unwrap();
        writeln!(s, "expect = {}={}", self.relation.short(), self.expected).unwrap();
        s
    }
}

fn sv(v: &[f64]) -> Option<ShapeVector> {
    ShapeVector::new(v.to_vec()).ok()
}

fn majorizes(x: &[f64], y: &[f64]) -> bool {
    matches!((sv(x), sv(y)), (Some(a), Some(b)) if compare(&a, &b).is_ok_and(|r| r.majorizes()))
}

fn weak_super(x: &[f64], y: &[f64]) -> bool {
    matches!((sv(x), sv(y)), (Some(a), Some(b)) if compare(&a, &b).is_ok_and(|r| r.weak_super()))
}

fn weak_sub(x: &[f64], y: &[f64]) -> bool {
    matches!((sv(x), sv(y)), (Some(a), Some(b)) if compare(&a, &b).is_ok_and(|r| r.weak_sub()))
}

fn blocks(a: f64, n1: usize, b: f64, n2: usize) -> Vec<f64> {
    let mut v = vec![a; n1];
    v.extend(std::iter::repeat_n(b, n2));
    v
}

fn is_blocks(v: &[f64], n1: usize) -> Option<(f64, f64)> {
    if n1 == 0 || n1 >= v.len() {
        return None;
    }
    let (a, b) = (v[0], v[n1]);
    (v[..n1].iter().all(|&x| x == a) && v[n1..].iter().all(|&x| x == b)).then_some((a, b))
}

/// `X1 <=_st X2` on the grid, i.e. `ln S1 <= ln S2` pointwise.
fn parents_st_ordered(
    f1: &dyn ParentDistribution,
    f2: &dyn ParentDistribution,
    grid: &Grid,
) -> bool {
    grid.points()
        .iter()
        .all(|&x| f1.log_sf(x) <= f2.log_sf(x) + 1e-12 * f2.log_sf(x).abs().max(1.0))
}

/// `X1^s <=_hr X2^s` for every `s` of the premise grid.
fn power_premise_for_all(
    f1: &dyn ParentDistribution,
    f2: &dyn ParentDistribution,
    grid: &Grid,
) -> bool {
    logspace(PREMISE_S_RANGE.0, PREMISE_S_RANGE.1, PREMISE_S_POINTS)
        .into_iter()
        .all(|s| power_hr_premise(f1, f2, s, grid).is_ok_and(|r| r.nondecreasing()))
}

/// Checks that `cfg` satisfies every hypothesis of its theorem branch,
/// including the parent premises on `grid`.
pub fn hypotheses_hold(cfg: &TrialConfig, grid: &Grid) -> bool {
    use TheoremId::*;
    let (a, b, g, d) = (&cfg.alphas, &cfg.betas, &cfg.gammas, &cfg.deltas);
    let n = a.len();
    if [b.len(), g.len(), d.len()].iter().any(|&l| l != n) {
        return false;
    }
    let same_parent = cfg.parent_u == cfg.parent_v;
    let parents = match (cfg.parent_u.build(), cfg.parent_v.build()) {
        (Ok(p1), Ok(p2)) => (p1, p2),
        _ => return false,
    };
    let (f1, f2) = (parents.0.as_ref(), parents.1.as_ref());
    match cfg.theorem {
        T3_1 | T3_1N2 => {
            same_parent
                && (cfg.theorem != T3_1N2 || n == 2)
                && in_d_plus(a)
                && in_d_plus(g)
                && in_e_plus(b)
                && b == d
                && if cfg.theorem == T3_1N2 {
                    majorizes(a, g)
                } else {
                    weak_super(a, g)
                }
        }
        T3_2i | T3_2ii | T3_2N2 => {
            let cone = if cfg.expected == Outcome::HoldsLeq {
                in_e_plus
            } else {
                in_d_plus
            };
            same_parent
                && (cfg.theorem != T3_2N2 || n == 2)
                && a == g
                && in_d_plus(a)
                && cone(b)
                && cone(d)
                && majorizes(b, d)
        }
        T3_3i => {
            same_parent && a == g && in_d_plus(a) && in_e_plus(b) && in_e_plus(d) && weak_sub(b, d)
        }
        T3_3ii => {
            same_parent
                && a == g
                && in_d_plus(a)
                && in_d_plus(b)
                && in_d_plus(d)
                && weak_super(b, d)
        }
        T3_4 => {
            let Some(n1) = cfg.n1 else { return false };
            match (is_blocks(a, n1), is_blocks(g, n1), is_blocks(b, n1)) {
                (Some((al, als)), Some((ga, gas)), Some((be, bes))) => {
                    same_parent && b == d && al > als && ga > gas && be < bes && majorizes(a, g)
                }
                _ => false,
            }
        }
        T3_5i | T3_5ii => {
            let Some(n1) = cfg.n1 else { return false };
            match (is_blocks(a, n1), is_blocks(b, n1), is_blocks(d, n1)) {
                (Some((al, als)), Some((be, bes)), Some((de, des))) => {
                    let order = if cfg.theorem == T3_5i {
                        be > bes
                    } else {
                        be < bes
                    };
                    same_parent && a == g && al > als && order && de < des && majorizes(b, d)
                }
                _ => false,
            }
        }
        T4_1 => {
            in_d_plus(a)
                && in_d_plus(g)
                && in_e_plus(b)
                && b == d
                && majorizes(a, g)
                && parents_st_ordered(f1, f2, grid)
        }
        T4_2i => {
            a == g
                && in_d_plus(a)
                && in_e_plus(b)
                && in_e_plus(d)
                && majorizes(b, d)
                && parents_st_ordered(f1, f2, grid)
        }
        T4_2ii => {
            a == g
                && in_d_plus(a)
                && in_d_plus(b)
                && in_d_plus(d)
                && majorizes(b, d)
                && parents_st_ordered(f2, f1, grid)
        }
        T4_3 => {
            in_d_plus(a)
                && in_d_plus(g)
                && in_e_plus(b)
                && b == d
                && majorizes(a, g)
                && power_premise_for_all(f1, f2, grid)
        }
        T4_4i => {
            a == g
                && in_d_plus(a)
                && in_e_plus(b)
                && in_e_plus(d)
                && majorizes(b, d)
                && power_premise_for_all(f1, f2, grid)
        }
        T4_4ii => {
            a == g
                && in_d_plus(a)
                && in_d_plus(b)
                && in_d_plus(d)
                && majorizes(b, d)
                && power_premise_for_all(f2, f1, grid)
        }
        T3_2 | T3_3 | T3_5 | T4_2 | T4_4 => false,
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

fn positive_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| log_uniform(rng, 0.1, 10.0)).collect()
}

/// Returns `(x, y)` with `x` majorizing `y`, both unsorted.
fn majorized_pair(rng: &mut ChaCha8Rng, n: usize) -> (Vec<f64>, Vec<f64>) {
    let y = positive_vector(rng, n);
    let mut x = y.clone();
    for _ in 0..2 * n {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let (small, large) = if x[i] <= x[j] { (i, j) } else { (j, i) };
        let t = x[small] * rng.random_range(0.0..0.8);
        x[small] -= t;
        x[large] += t;
    }
    (x, y)
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn sorted_asc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn pick_n(rng: &mut ChaCha8Rng) -> usize {
    [2, 3, 5][rng.random_range(0..3)]
}

fn same_parent(rng: &mut ChaCha8Rng, index: usize) -> ParentSpec {
    if index % 4 < 2 {
        ParentSpec::Uniform01
    } else {
        ParentSpec::Exponential {
            rate: log_uniform(rng, 0.5, 2.0),
        }
    }
}

/// Parent pair with `X1` smaller than `X2` in hazard rate order (hence also
/// in st order), for every power `s`.
fn ordered_parents(rng: &mut ChaCha8Rng, index: usize) -> (ParentSpec, ParentSpec) {
    let c2 = log_uniform(rng, 0.3, 3.0);
    let c1 = c2 * log_uniform(rng, 1.1, 4.0);
    if index % 4 < 2 {
        (
            ParentSpec::Exponential { rate: c1 },
            ParentSpec::Exponential { rate: c2 },
        )
    } else {
        let k = log_uniform(rng, 0.5, 2.0);
        (
            ParentSpec::Weibull {
                shape: k,
                rate_coeff: c1,
            },
            ParentSpec::Weibull {
                shape: k,
                rate_coeff: c2,
            },
        )
    }
}

fn draw(theorem: TheoremId, index: usize, rng: &mut ChaCha8Rng) -> TrialConfig {
    use TheoremId::*;
    let n = match theorem {
        T3_1N2 | T3_2N2 => 2,
        _ => pick_n(rng),
    };
    let mut cfg = TrialConfig {
        theorem,
        index,
        parent_u: ParentSpec::Uniform01,
        parent_v: ParentSpec::Uniform01,
        alphas: Vec::new(),
        betas: Vec::new(),
        gammas: Vec::new(),
        deltas: Vec::new(),
        n1: None,
        relation: Relation::HazardRate,
        expected: Outcome::HoldsLeq,
        grid: GridKind::U,
    };
    let p = same_parent(rng, index);
    cfg.parent_u = p;
    cfg.parent_v = p;

    match theorem {
        T3_1 | T3_1N2 => {
            let (x, y) = majorized_pair(rng, n);
            // shrinking x keeps its prefix sums below y's; the two-component
            // lr claim needs the full relation, so x is left as drawn there
            let x: Vec<f64> = if theorem == T3_1N2 {
                x
            } else {
                x.into_iter()
                    .map(|e| e * rng.random_range(0.5..=1.0))
                    .collect()
            };
            cfg.alphas = sorted_desc(x);
            cfg.gammas = sorted_desc(y);
            cfg.betas = sorted_asc(positive_vector(rng, n));
            cfg.deltas = cfg.betas.clone();
            if theorem == T3_1N2 {
                cfg.relation = Relation::LikelihoodRatio;
            }
        }
        T3_2i | T3_2ii | T3_2N2 | T4_2i | T4_2ii | T4_4i | T4_4ii => {
            let increasing = match theorem {
                T3_2N2 => index.is_multiple_of(2),
                _ => matches!(theorem, T3_2i | T4_2i | T4_4i),
            };
            let (x, y) = majorized_pair(rng, n);
            let (x, y) = if increasing {
                (sorted_asc(x), sorted_asc(y))
            } else {
                (sorted_desc(x), sorted_desc(y))
            };
            cfg.alphas = sorted_desc(positive_vector(rng, n));
            cfg.gammas = cfg.alphas.clone();
            cfg.betas = x;
            cfg.deltas = y;
            cfg.expected = if increasing {
                Outcome::HoldsLeq
            } else {
                Outcome::HoldsGeq
            };
            if theorem == T3_2N2 {
                cfg.relation = Relation::LikelihoodRatio;
            }
            if matches!(theorem, T4_2i | T4_2ii | T4_4i | T4_4ii) {
                let (f1, f2) = ordered_parents(rng, index);
                (cfg.parent_u, cfg.parent_v) = if increasing { (f1, f2) } else { (f2, f1) };
                cfg.grid = GridKind::Y;
                cfg.relation = if matches!(theorem, T4_2i | T4_2ii) {
                    Relation::UsualStochastic
                } else {
                    Relation::HazardRate
                };
            }
        }
        T3_3i | T3_3ii => {
            let (x, y) = majorized_pair(rng, n);
            cfg.alphas = sorted_desc(positive_vector(rng, n));
            cfg.gammas = cfg.alphas.clone();
            if theorem == T3_3i {
                // growing x keeps its suffix sums above y's
                let x: Vec<f64> = x
                    .into_iter()
                    .map(|e| e * rng.random_range(1.0..=2.0))
                    .collect();
                cfg.betas = sorted_asc(x);
                cfg.deltas = sorted_asc(y);
            } else {
                let x: Vec<f64> = x
                    .into_iter()
                    .map(|e| e * rng.random_range(0.5..=1.0))
                    .collect();
                cfg.betas = sorted_desc(x);
                cfg.deltas = sorted_desc(y);
                cfg.expected = Outcome::HoldsGeq;
            }
        }
        T3_4 => {
            let n1 = rng.random_range(1..n);
            let n2 = n - n1;
            let gamma_star = log_uniform(rng, 0.1, 5.0);
            let gamma = gamma_star * log_uniform(rng, 1.05, 5.0);
            let alpha_star = gamma_star * rng.random_range(0.05..0.95);
            let alpha = gamma + n2 as f64 * (gamma_star - alpha_star) / n1 as f64;
            let beta = log_uniform(rng, 0.1, 5.0);
            let beta_star = beta * log_uniform(rng, 1.05, 5.0);
            cfg.n1 = Some(n1);
            cfg.alphas = blocks(alpha, n1, alpha_star, n2);
            cfg.gammas = blocks(gamma, n1, gamma_star, n2);
            cfg.betas = blocks(beta, n1, beta_star, n2);
            cfg.deltas = cfg.betas.clone();
            cfg.relation = Relation::LikelihoodRatio;
        }
        T3_5i | T3_5ii => {
            let n1 = rng.random_range(1..n);
            let n2 = n - n1;
            let alpha_star = log_uniform(rng, 0.1, 5.0);
            let alpha = alpha_star * log_uniform(rng, 1.05, 5.0);
            let delta = log_uniform(rng, 0.1, 5.0);
            let delta_star = delta * log_uniform(rng, 1.05, 5.0);
            let total = n1 as f64 * delta + n2 as f64 * delta_star;
            let (beta, beta_star) = if theorem == T3_5ii {
                let beta = delta * rng.random_range(0.05..0.95);
                (beta, (total - n1 as f64 * beta) / n2 as f64)
            } else {
                let beta_star = delta * rng.random_range(0.05..0.95);
                ((total - n2 as f64 * beta_star) / n1 as f64, beta_star)
            };
            cfg.n1 = Some(n1);
            cfg.alphas = blocks(alpha, n1, alpha_star, n2);
            cfg.gammas = cfg.alphas.clone();
            cfg.betas = blocks(beta, n1, beta_star, n2);
            cfg.deltas = blocks(delta, n1, delta_star, n2);
            cfg.relation = Relation::LikelihoodRatio;
            cfg.expected = if theorem == T3_5i {
                Outcome::HoldsGeq
            } else {
                Outcome::HoldsLeq
            };
        }
        T4_1 | T4_3 => {
            let (x, y) = majorized_pair(rng, n);
            cfg.alphas = sorted_desc(x);
            cfg.gammas = sorted_desc(y);
            cfg.betas = sorted_asc(positive_vector(rng, n));
            cfg.deltas = cfg.betas.clone();
            let (f1, f2) = ordered_parents(rng, index);
            cfg.parent_u = f1;
            cfg.parent_v = f2;
            cfg.grid = GridKind::Y;
            cfg.relation = if theorem == T4_1 {
                Relation::UsualStochastic
            } else {
                Relation::HazardRate
            };
        }
        T3_2 | T3_3 | T3_5 | T4_2 | T4_4 => unreachable!("branch ids are resolved before drawing"),
    }
    cfg
}

/// Draws configuration `index` of `theorem`'s suite, retrying until the
/// hypotheses validate on `grid`.
pub fn generate_config(
    theorem: TheoremId,
    seed: u64,
    index: usize,
    grid_points: usize,
) -> Result<TrialConfig> {
    let branch = theorem.branch(index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    for _ in 0..MAX_ATTEMPTS {
        let mut cfg = draw(branch, index, &mut rng);
        let grid = cfg.build_grid(grid_points)?;
        if hypotheses_hold(&cfg, &grid) {
            cfg.theorem = branch;
            return Ok(cfg);
        }
    }
    Err(Error::Unknown(format!(
        "could not generate a configuration for {theorem} trial {index}"
    )))
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub config: TrialConfig,
    pub verdict: OrderingVerdict,
    pub passed: bool,
    /// The first-grid verdict disagreed and refinement was needed.
    pub refined: bool,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub theorem: TheoremId,
    pub trials: usize,
    pub seed: u64,
    pub outcomes: Vec<TrialOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.outcomes.iter().filter(|o| o.passed).count()
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.trials
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        writeln!(
            s,
            "theorem={} trials={} seed={}",
            self.theorem, self.trials, self.seed
        )
        .unwrap();
        for o in &self.outcomes {
            writeln!(
                s,
                "trial={} n={} branch={} relation={} expected={} result={} {}{}",
                o.config.index,
                o.config.alphas.len(),
                o.config.theorem,
                o.config.relation.short(),
                o.config.expected,
                o.verdict.result,
                if o.passed { "pass" } else { "FAIL" },
                if o.refined { " refined" } else { "" }
            )
            .unwrap();
            if !o.passed {
                writeln!(s, "--- replay scenario for trial {} ---", o.config.index).unwrap();
                s.push_str(&o.config.scenario_text());
                writeln!(s, "--- {} ---", o.verdict.summary_line()).unwrap();
            }
        }
        writeln!(s, "passed={}/{}", self.passed(), self.trials).unwrap();
        s
    }
}

/// Checks one configuration; a failure on the first grid is re-examined with
/// grid refinement before it counts.
pub fn run_trial(cfg: &TrialConfig, opts: &RunOptions) -> Result<TrialOutcome> {
    let (u, v) = cfg.series()?;
    let grid = cfg.build_grid(opts.grid_points.unwrap_or(DEFAULT_GRID_POINTS))?;
    let copts = opts.check_options();
    let first = check(cfg.relation, &u, &v, &grid, &copts)?;
    if first.supports(cfg.expected) {
        return Ok(TrialOutcome {
            config: cfg.clone(),
            verdict: first,
            passed: true,
            refined: false,
        });
    }
    let refined = check(
        cfg.relation,
        &u,
        &v,
        &grid,
        &CheckOptions {
            refine: true,
            ..copts
        },
    )?;
    Ok(TrialOutcome {
        config: cfg.clone(),
        passed: refined.supports(cfg.expected),
        verdict: refined,
        refined: true,
    })
}

/// Runs `trials` configurations in parallel; outcomes are ordered by index.
pub fn verify_theorem(
    theorem: TheoremId,
    trials: usize,
    seed: u64,
    opts: &RunOptions,
) -> Result<SuiteReport> {
    if trials == 0 {
        return Err(Error::ParameterDomain {
            name: "trials",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    let points = opts.grid_points.unwrap_or(DEFAULT_GRID_POINTS);
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(&generate_config(theorem, seed, i, points)?, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport {
        theorem,
        trials,
        seed,
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_parse_in_several_spellings() {
        assert_eq!("3.2(i)".parse::<TheoremId>().unwrap(), TheoremId::T3_2i);
        assert_eq!("3.2ii".parse::<TheoremId>().unwrap(), TheoremId::T3_2ii);
        assert_eq!(" 4.4 ".parse::<TheoremId>().unwrap(), TheoremId::T4_4);
        assert_eq!("3.1-n2".parse::<TheoremId>().unwrap(), TheoremId::T3_1N2);
        assert!("3.9".parse::<TheoremId>().is_err());
    }

    #[test]
    fn zero_trials_is_a_domain_error() {
        assert!(matches!(
            verify_theorem(TheoremId::T3_1, 0, 1, &RunOptions::default()),
            Err(Error::ParameterDomain { name: "trials", .. })
        ));
    }

    #[test]
    fn generated_configs_satisfy_hypotheses() {
        for id in TheoremId::ALL {
            for i in 0..6 {
                let cfg = generate_config(id, 17, i, 64).unwrap();
                let grid = cfg.build_grid(64).unwrap();
                assert!(hypotheses_hold(&cfg, &grid), "{id} {i}: {cfg:?}");
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_config(TheoremId::T3_4, 5, 3, 64).unwrap();
        let b = generate_config(TheoremId::T3_4, 5, 3, 64).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn replay_text_parses() {
        let cfg = generate_config(TheoremId::T4_3, 2, 1, 64).unwrap();
        let s = crate::scenario::Scenario::parse(&cfg.scenario_text()).unwrap();
        assert_eq!(s.u.alphas(), cfg.alphas.as_slice());
        assert_eq!(s.expect, vec![(cfg.relation, cfg.expected)]);
    }

    #[test]
    fn weak_majorization_alone_does_not_give_lr_at_two() {
        let u = HeterogeneousSeries::new(
            ParentSpec::Uniform01.build().unwrap(),
            vec![4.972911430306339, 0.005855759532646873],
            vec![0.22148481760315575, 0.2409032977898468],
        )
        .unwrap();
        let v = HeterogeneousSeries::new(
            ParentSpec::Uniform01.build().unwrap(),
            vec![8.156315643433352, 0.14807076772528108],
            vec![0.22148481760315575, 0.2409032977898468],
        )
        .unwrap();
        assert!(weak_super(u.alphas(), v.alphas()) && !majorizes(u.alphas(), v.alphas()));
        let grid = Grid::default_u(u.parent()).unwrap();
        let opts = CheckOptions {
            refine: true,
            ..CheckOptions::default()
        };
        assert_eq!(
            check(Relation::HazardRate, &u, &v, &grid, &opts)
                .unwrap()
                .result,
            Outcome::HoldsLeq
        );
        assert_eq!(
            check(Relation::LikelihoodRatio, &u, &v, &grid, &opts)
                .unwrap()
                .result,
            Outcome::Violated
        );
    }

    #[test]
    fn small_suites_pass() {
        for id in [TheoremId::T3_1, TheoremId::T3_4, TheoremId::T4_1] {
            let r = verify_theorem(id, 8, 3, &RunOptions::default()).unwrap();
            assert!(r.all_passed(), "{}", r.text());
        }
    }
}
