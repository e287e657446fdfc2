//! Log-space primitives shared by the distribution code.
//!
//! Everything here works on `f64` and leans on `ln_1p` / `exp_m1` from std.

use std::f64::consts::LN_2;

/// `ln(1 - e^a)` for `a <= 0`.
///
/// Switches between the two cancellation-free forms at `a = -ln 2`.
/// Returns `-inf` at `a = 0` and `0` at `a = -inf`.
pub fn log1mexp(a: f64) -> f64 {
    debug_assert!(!(a > 0.0), "log1mexp requires a <= 0, got {a}");
    if a > -LN_2 {
        (-a.exp_m1()).ln()
    } else {
        (-a.exp()).ln_1p()
    }
}

/// `e^a - 1 - a`, accurate for small `|a|`.
pub fn expm1_minus_identity(a: f64) -> f64 {
    if a.abs() < 0.5 {
        // sum_{k>=2} a^k / k!
        let mut term = a * a / 2.0;
        let mut acc = 0.0_f64;
        let mut k = 2.0;
        while term.abs() > f64::EPSILON * acc.abs() * 0.25 && k < 40.0 {
            acc += term;
            k += 1.0;
            term *= a / k;
        }
        acc
    } else {
        a.exp_m1() - a
    }
}

/// `1 - e^a + a e^a`, accurate for small `|a|`.
pub fn one_minus_exp_plus_a_exp(a: f64) -> f64 {
    if a.abs() < 0.5 {
        // sum_{k>=2} (k-1) a^k / k!
        let mut pow_over_fact = a * a / 2.0;
        let mut acc = 0.0;
        let mut k = 2.0_f64;
        loop {
            let term = (k - 1.0) * pow_over_fact;
            acc += term;
            if term.abs() <= f64::EPSILON * acc.abs() * 0.25 || k > 40.0 {
                break;
            }
            k += 1.0;
            pow_over_fact *= a / k;
        }
        acc
    } else {
        -a.exp_m1() + a * a.exp()
    }
}

/// Pairwise (cascade) summation.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 8;
    if values.len() <= BLOCK {
        values.iter().sum()
    } else {
        let mid = values.len() / 2;
        pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
    }
}

/// `ln(sum_i e^{x_i})` with max-shift and pairwise accumulation.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() || max.is_nan() {
        return max;
    }
    let shifted: Vec<f64> = values.iter().map(|v| (v - max).exp()).collect();
    max + pairwise_sum(&shifted).ln()
}

/// `n` evenly spaced points on `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

/// `n` logarithmically spaced points on `[lo, hi]` (both positive).
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    linspace(lo.ln(), hi.ln(), n)
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                v.exp()
            }
        })
        .collect()
}
