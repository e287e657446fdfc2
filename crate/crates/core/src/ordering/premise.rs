//! Hazard rate comparison of powered parents `F_1^s` and `F_2^s`.

use crate::error::{ensure_positive, Result};
use crate::ordering::grid::Grid;
use crate::ordering::scan::{monotonicity_scan, MonotonicityReport, DEFAULT_SLOPE_TOL};
use crate::parent::{log_one_minus_cdf_pow, ParentDistribution};

/// Classifies `(1 - F2^s) / (1 - F1^s)` along `grid` (scanned in log form).
///
/// `increasing` means the variable with cdf `F1^s` is smaller in hazard rate
/// order than the one with cdf `F2^s`.
pub fn power_hr_premise(
    f1: &dyn ParentDistribution,
    f2: &dyn ParentDistribution,
    s: f64,
    grid: &Grid,
) -> Result<MonotonicityReport> {
    power_hr_premise_with_tol(f1, f2, s, grid, DEFAULT_SLOPE_TOL)
}

pub fn power_hr_premise_with_tol(
    f1: &dyn ParentDistribution,
    f2: &dyn ParentDistribution,
    s: f64,
    grid: &Grid,
    slope_tol: f64,
) -> Result<MonotonicityReport> {
    ensure_positive("s", s)?;
    grid.ensure_inside(f1)?;
    grid.ensure_inside(f2)?;
    monotonicity_scan(
        |x| Ok(log_one_minus_cdf_pow(f2, s, x) - log_one_minus_cdf_pow(f1, s, x)),
        grid,
        slope_tol,
    )
}

/// Premise check across several powers: every `s` must give a nondecreasing
/// ratio. Returns the first `s` that fails, if any.
pub fn premise_holds_for_all(
    f1: &dyn ParentDistribution,
    f2: &dyn ParentDistribution,
    s_grid: &[f64],
    grid: &Grid,
) -> Result<Option<f64>> {
    for &s in s_grid {
        if !power_hr_premise(f1, f2, s, grid)?.nondecreasing() {
            return Ok(Some(s));
        }
    }
    Ok(None)
}
