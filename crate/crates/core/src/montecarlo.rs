//! Seeded inverse-transform sampling of Kw-G variables and their minima.
//!
//! Every component draws from its own ChaCha8 stream: the generator is seeded
//! with the 64-bit seed and `set_stream(k)` selects component `k`. A single
//! component uses stream 0, so `sample_min` of a one-component series equals
//! `sample_kwg` with the same seed.

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kwg::{kwg_cdf, kwg_quantile, KwGShape};
use crate::order_stats::{min_log_sf, HeterogeneousSeries};
use crate::ordering::grid::Grid;
use crate::ordering::verdict::{
    check, CheckOptions, OrderingVerdict, Outcome, Relation, VerdictReport,
};
use crate::parent::ParentDistribution;

/// Offset mixed into the seed for the second sample of a pair.
const PAIR_SEED_OFFSET: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed used for `V` when a pair is sampled from one user seed.
pub fn pair_seed(seed: u64) -> u64 {
    seed.wrapping_add(PAIR_SEED_OFFSET)
}

/// Failure probability used for each DKW band.
pub const DKW_LEVEL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub draws: Vec<f64>,
    pub seed: u64,
    pub size: usize,
}

impl SampleBatch {
    /// Draws sorted ascending.
    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.draws.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

fn ensure_size(size: usize) -> Result<()> {
    if size == 0 {
        Err(Error::ParameterDomain {
            name: "size",
            value: 0.0,
            reason: "must be at least 1",
        })
    } else {
        Ok(())
    }
}

fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn component_draws(
    shape: KwGShape,
    parent: &dyn ParentDistribution,
    size: usize,
    seed: u64,
    index: u64,
) -> Result<Vec<f64>> {
    let mut rng = stream(seed, index);
    (0..size)
        .map(|_| {
            let p: f64 = rng.sample(Open01);
            kwg_quantile(shape, parent, p)
        })
        .collect()
}

pub fn sample_kwg(
    shape: KwGShape,
    parent: &dyn ParentDistribution,
    size: usize,
    seed: u64,
) -> Result<SampleBatch> {
    ensure_size(size)?;
    Ok(SampleBatch {
        draws: component_draws(shape, parent, size, seed, 0)?,
        seed,
        size,
    })
}

/// Each draw is the minimum over one draw per component.
pub fn sample_min(series: &HeterogeneousSeries, size: usize, seed: u64) -> Result<SampleBatch> {
    ensure_size(size)?;
    let parent = series.parent().as_ref();
    let shapes: Vec<KwGShape> = series.shapes().collect();
    let per_component = shapes
        .par_iter()
        .enumerate()
        .map(|(k, &s)| component_draws(s, parent, size, seed, k as u64))
        .collect::<Result<Vec<_>>>()?;
    let mut draws = per_component[0].clone();
    for comp in &per_component[1..] {
        for (d, &c) in draws.iter_mut().zip(comp) {
            *d = d.min(c);
        }
    }
    Ok(SampleBatch { draws, seed, size })
}

/// Kolmogorov distance between sorted draws and a continuous cdf.
pub fn ks_distance<F>(sorted: &[f64], cdf: F) -> f64
where
    F: Fn(f64) -> f64 + Sync,
{
    let n = sorted.len() as f64;
    sorted
        .par_iter()
        .enumerate()
        .map(|(i, &x)| {
            let c = cdf(x);
            (c - i as f64 / n).max((i + 1) as f64 / n - c)
        })
        .reduce(|| 0.0, f64::max)
}

/// Kolmogorov distance of a `sample_kwg` batch from the analytic cdf.
pub fn ks_distance_kwg(
    batch: &SampleBatch,
    shape: KwGShape,
    parent: &dyn ParentDistribution,
) -> f64 {
    ks_distance(&batch.sorted(), |x| kwg_cdf(shape, parent, x))
}

/// Kolmogorov distance of a `sample_min` batch from `1 - min_sf`.
pub fn ks_distance_min(batch: &SampleBatch, series: &HeterogeneousSeries) -> f64 {
    ks_distance(&batch.sorted(), |x| -min_log_sf(series, x).exp_m1())
}

/// Fraction of sorted draws strictly above `x`.
pub fn empirical_sf(sorted: &[f64], x: f64) -> f64 {
    let below = sorted.partition_point(|&d| d <= x);
    (sorted.len() - below) as f64 / sorted.len() as f64
}

/// Dvoretzky-Kiefer-Wolfowitz half-width at level `DKW_LEVEL`.
pub fn dkw_band(size: usize) -> f64 {
    ((2.0 / DKW_LEVEL).ln() / (2.0 * size as f64)).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalOrderReport {
    pub analytic: OrderingVerdict,
    /// Sum of both samples' DKW half-widths.
    pub band: f64,
    /// Largest `S_U - S_V` over the grid, empirical.
    pub max_excess_leq: f64,
    /// Largest `S_V - S_U` over the grid, empirical.
    pub max_excess_geq: f64,
    /// Empirical `S_U <= S_V` within the band.
    pub empirical_leq: bool,
    /// Empirical `S_U >= S_V` within the band.
    pub empirical_geq: bool,
    pub agrees: bool,
    pub size: usize,
    pub seed: u64,
}

/// Compares empirical survival curves of `U` and `V` with the analytic
/// verdict for `relation`.
///
/// Only the st consequence is tested empirically: `holds_leq` (for any of
/// the three relations) requires `S_U <= S_V` within the band, `holds_geq`
/// the reverse. A violated st verdict agrees when, at its witnesses, the
/// empirical gap does not contradict the analytic sign beyond the band.
/// `U` is sampled with `seed`, `V` with a fixed offset of it.
pub fn empirical_order_check(
    relation: Relation,
    u: &HeterogeneousSeries,
    v: &HeterogeneousSeries,
    size: usize,
    seed: u64,
    grid: &Grid,
) -> Result<EmpiricalOrderReport> {
    let analytic = check(relation, u, v, grid, &CheckOptions::default())?;
    let su = sample_min(u, size, seed)?.sorted();
    let sv = sample_min(v, size, pair_seed(seed))?.sorted();
    let band = 2.0 * dkw_band(size);

    let gap = |x: f64| empirical_sf(&su, x) - empirical_sf(&sv, x);
    let gaps: Vec<f64> = grid.points().iter().map(|&x| gap(x)).collect();
    let max_excess_leq = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let max_excess_geq = gaps.iter().map(|g| -g).fold(f64::NEG_INFINITY, f64::max);
    let empirical_leq = max_excess_leq <= band;
    let empirical_geq = max_excess_geq <= band;

    let agrees = match analytic.result {
        Outcome::HoldsLeq => empirical_leq,
        Outcome::HoldsGeq => empirical_geq,
        Outcome::Inconclusive => true,
        Outcome::Violated => match &analytic.report {
            VerdictReport::Pointwise(p) => {
                let leq_side = p.worst_leq.is_none_or(|w| gap(w.x) > -band);
                let geq_side = p.worst_geq.is_none_or(|w| -gap(w.x) > -band);
                leq_side && geq_side
            }
            // a violated hr or lr verdict makes no st claim
            _ => true,
        },
    };

    Ok(EmpiricalOrderReport {
        analytic,
        band,
        max_excess_leq,
        max_excess_geq,
        empirical_leq,
        empirical_geq,
        agrees,
        size,
        seed,
    })
}
