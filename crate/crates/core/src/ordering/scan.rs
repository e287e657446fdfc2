//! Direction classification of a scalar function sampled on a grid.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ordering::grid::Grid;

/// Default relative slope tolerance.
pub const DEFAULT_SLOPE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
    Constant,
    NonMonotone,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Increasing => "increasing",
            Direction::Decreasing => "decreasing",
            Direction::Constant => "constant",
            Direction::NonMonotone => "non_monotone",
        })
    }
}

/// A point where the slope sign flips; `sign` is the new sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub x: f64,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub direction: Direction,
    pub witnesses: Vec<Witness>,
    /// Largest step against the dominant direction, in units of `f`.
    pub max_violation: f64,
    /// Same, divided by `max(1, |f|)` at the step start.
    pub max_violation_rel: f64,
    pub points: usize,
}

impl MonotonicityReport {
    /// Nondecreasing on the grid (increasing or constant).
    pub fn nondecreasing(&self) -> bool {
        matches!(self.direction, Direction::Increasing | Direction::Constant)
    }

    /// Nonincreasing on the grid (decreasing or constant).
    pub fn nonincreasing(&self) -> bool {
        matches!(self.direction, Direction::Decreasing | Direction::Constant)
    }
}

/// Evaluates `f` on `grid` and classifies the result.
///
/// Steps with `|df| <= slope_tol * max(1, |f|)` count as flat. Evaluation is
/// spread across the rayon pool; results are merged in grid order.
pub fn monotonicity_scan<F>(f: F, grid: &Grid, slope_tol: f64) -> Result<MonotonicityReport>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let values = evaluate(&f, grid.points())?;
    classify(grid.points(), &values, slope_tol)
}

pub(crate) fn evaluate<F>(f: &F, xs: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    xs.par_iter()
        .map(|&x| {
            let v = f(x)?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Evaluation { x, value: v })
            }
        })
        .collect()
}

/// Classifies precomputed samples `values[i] = f(xs[i])`.
pub fn classify(xs: &[f64], values: &[f64], slope_tol: f64) -> Result<MonotonicityReport> {
    if xs.len() != values.len() {
        return Err(Error::Dimension {
            expected: xs.len(),
            found: values.len(),
        });
    }
    if let Some((&x, &v)) = xs.iter().zip(values).find(|(_, v)| !v.is_finite()) {
        return Err(Error::Evaluation { x, value: v });
    }

    let mut signs = Vec::with_capacity(values.len().saturating_sub(1));
    let (mut rise, mut fall) = (0.0_f64, 0.0_f64);
    for w in values.windows(2) {
        let d = w[1] - w[0];
        let scale = w[0].abs().max(1.0);
        let s: i8 = if d.abs() <= slope_tol * scale {
            0
        } else if d > 0.0 {
            rise += d;
            1
        } else {
            fall -= d;
            -1
        };
        signs.push(s);
    }

    let mut witnesses = Vec::new();
    let mut last = 0_i8;
    for (i, &s) in signs.iter().enumerate() {
        if s != 0 {
            if last != 0 && s != last {
                witnesses.push(Witness { x: xs[i], sign: s });
            }
            last = s;
        }
    }

    let any_up = signs.contains(&1);
    let any_down = signs.contains(&-1);
    let direction = match (any_up, any_down) {
        (true, true) => Direction::NonMonotone,
        (true, false) => Direction::Increasing,
        (false, true) => Direction::Decreasing,
        (false, false) => Direction::Constant,
    };

    let (mut max_violation, mut max_violation_rel) = (0.0_f64, 0.0_f64);
    if direction == Direction::NonMonotone {
        let opposing: i8 = if rise >= fall { -1 } else { 1 };
        for (w, &s) in values.windows(2).zip(&signs) {
            if s == opposing {
                let d = (w[1] - w[0]).abs();
                max_violation = max_violation.max(d);
                max_violation_rel = max_violation_rel.max(d / w[0].abs().max(1.0));
            }
        }
    }

    Ok(MonotonicityReport {
        direction,
        witnesses,
        max_violation,
        max_violation_rel,
        points: xs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::x(0.0, 1.0, 101).unwrap()
    }

    #[test]
    fn identity_is_increasing() {
        let r = monotonicity_scan(Ok, &grid(), DEFAULT_SLOPE_TOL).unwrap();
        assert_eq!(r.direction, Direction::Increasing);
        assert!(r.witnesses.is_empty());
    }

    #[test]
    fn constant_is_constant() {
        let r = monotonicity_scan(|_| Ok(4.2), &grid(), DEFAULT_SLOPE_TOL).unwrap();
        assert_eq!(r.direction, Direction::Constant);
        assert!(r.nondecreasing() && r.nonincreasing());
    }

    #[test]
    fn tiny_noise_is_flat() {
        let r = monotonicity_scan(
            |x| Ok(1.0 + 1e-13 * (100.0 * x).sin()),
            &grid(),
            DEFAULT_SLOPE_TOL,
        )
        .unwrap();
        assert_eq!(r.direction, Direction::Constant);
    }

    #[test]
    fn hump_has_one_witness() {
        let r = monotonicity_scan(
            |x| Ok(-(x - 0.505) * (x - 0.505)),
            &grid(),
            DEFAULT_SLOPE_TOL,
        )
        .unwrap();
        assert_eq!(r.direction, Direction::NonMonotone);
        assert_eq!(r.witnesses.len(), 1);
        assert_eq!(r.witnesses[0].sign, -1);
        assert!((r.witnesses[0].x - 0.51).abs() < 1e-12);
        assert!(r.max_violation > 0.0);
    }

    #[test]
    fn non_finite_value_reports_point() {
        let err = monotonicity_scan(|x| Ok(if x > 0.5 { f64::NAN } else { x }), &grid(), 1e-9)
            .unwrap_err();
        assert!(matches!(err, Error::Evaluation { x, .. } if x > 0.5));
    }

    #[test]
    fn witnesses_iff_non_monotone() {
        for k in 1..6 {
            let r = monotonicity_scan(|x| Ok((k as f64 * 3.0 * x).sin()), &grid(), 1e-9).unwrap();
            assert_eq!(
                r.direction == Direction::NonMonotone,
                !r.witnesses.is_empty()
            );
        }
    }
}
