//! Baked-in figure configurations rendered as `t,value` CSV.
//!
//! Density-ratio figures use the u-grid of a uniform parent and write the
//! linear ratio `g_U / g_V`. Survival-ratio figures use the y-grid
//! (`x = -ln y`) and write the natural log of the ratio, because the linear
//! ratio leaves double range for small y. Rows follow increasing x, so on a
//! y-grid `t` runs from near 1 down to near 0.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::order_stats::{log_pdf_ratio, log_sf_ratio, HeterogeneousSeries};
use crate::ordering::grid::{Grid, DEFAULT_GRID_POINTS, DEFAULT_UNIT_BOUNDS};
use crate::ordering::scan::{classify, Direction, MonotonicityReport, DEFAULT_SLOPE_TOL};
use crate::parent::{log_one_minus_cdf_pow, make_uniform01, make_weibull};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    F3_1,
    F3_2i,
    F3_2ii,
    F4_1i,
    F4_1ii,
    F4_2,
}

impl FigureId {
    pub const ALL: [FigureId; 6] = [
        FigureId::F3_1,
        FigureId::F3_2i,
        FigureId::F3_2ii,
        FigureId::F4_1i,
        FigureId::F4_1ii,
        FigureId::F4_2,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            FigureId::F3_1 => "3.1",
            FigureId::F3_2i => "3.2i",
            FigureId::F3_2ii => "3.2ii",
            FigureId::F4_1i => "4.1i",
            FigureId::F4_1ii => "4.1ii",
            FigureId::F4_2 => "4.2",
        }
    }

    /// Qualitative shape the figure is drawn to show.
    pub fn claim(&self) -> Direction {
        match self {
            FigureId::F4_1i | FigureId::F4_2 => Direction::Increasing,
            _ => Direction::NonMonotone,
        }
    }

    fn log_scale(&self) -> bool {
        matches!(self, FigureId::F4_1i | FigureId::F4_1ii | FigureId::F4_2)
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .trim()
            .chars()
            .filter(|c| !matches!(c, '(' | ')' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        FigureId::ALL
            .iter()
            .copied()
            .find(|id| id.label() == norm)
            .ok_or_else(|| Error::Unknown(format!("figure {}", s.trim())))
    }
}

#[derive(Debug, Clone)]
pub struct FigureData {
    pub id: FigureId,
    /// Plot coordinate per row (u or y).
    pub t: Vec<f64>,
    pub values: Vec<f64>,
    pub scan: MonotonicityReport,
    pub grid: String,
}

impl FigureData {
    pub fn reproduced(&self) -> bool {
        self.scan.direction == self.id.claim()
    }

    pub fn csv(&self) -> String {
        let mut s = String::with_capacity(48 * self.t.len());
        s.push_str("t,value\n");
        for (t, v) in self.t.iter().zip(&self.values) {
            writeln!(s, "{t:.16e},{v:.16e}").unwrap();
        }
        s
    }

    pub fn verdict_line(&self) -> String {
        let witnesses: Vec<String> = self
            .scan
            .witnesses
            .iter()
            .take(5)
            .map(|w| format!("{:.6e}", w.x))
            .collect();
        format!(
            "figure={} claim={} observed={} witnesses={} first=[{}] status={} scale={} grid={}",
            self.id,
            self.id.claim(),
            self.scan.direction,
            self.scan.witnesses.len(),
            witnesses.join(","),
            if self.reproduced() {
                "reproduced"
            } else {
                "not_reproduced"
            },
            if self.id.log_scale() { "log" } else { "linear" },
            self.grid
        )
    }
}

fn uniform_series(alphas: &[f64], betas: &[f64]) -> Result<HeterogeneousSeries> {
    HeterogeneousSeries::new(make_uniform01(), alphas.to_vec(), betas.to_vec())
}

/// Renders `id` on a grid of `points` points (2001 by default).
pub fn reproduce(id: FigureId, points: Option<usize>) -> Result<FigureData> {
    let n = points.unwrap_or(DEFAULT_GRID_POINTS);
    let (lo, hi) = DEFAULT_UNIT_BOUNDS;
    let (grid, logs): (Grid, Vec<f64>) = match id {
        FigureId::F3_1 | FigureId::F3_2i | FigureId::F3_2ii => {
            let (u, v) = match id {
                FigureId::F3_1 => (
                    uniform_series(&[6.2, 4.1, 2.0], &[1.0, 2.0, 3.0])?,
                    uniform_series(&[5.2, 5.1, 2.0], &[1.0, 2.0, 3.0])?,
                ),
                FigureId::F3_2i => (
                    uniform_series(&[5.0, 1.0, 0.01], &[0.005, 0.004, 0.001])?,
                    uniform_series(&[5.0, 1.0, 0.01], &[0.0045, 0.0045, 0.001])?,
                ),
                _ => (
                    uniform_series(&[5.0, 1.0, 0.01], &[0.003, 0.004, 0.005])?,
                    uniform_series(&[5.0, 1.0, 0.01], &[0.0035, 0.0035, 0.005])?,
                ),
            };
            let grid = Grid::u(u.parent(), lo, hi, n)?;
            let logs = grid
                .points()
                .iter()
                .map(|&x| log_pdf_ratio(&u, &v, x))
                .collect();
            (grid, logs)
        }
        FigureId::F4_1i | FigureId::F4_1ii => {
            let f1 = make_weibull(4.4, 3.0)?;
            let f2 = make_weibull(0.4, 0.2)?;
            let s = if id == FigureId::F4_1i { 0.02 } else { 1.98 };
            let grid = Grid::y(lo, hi, n)?;
            let logs = grid
                .points()
                .iter()
                .map(|&x| {
                    log_one_minus_cdf_pow(f2.as_ref(), s, x)
                        - log_one_minus_cdf_pow(f1.as_ref(), s, x)
                })
                .collect();
            (grid, logs)
        }
        FigureId::F4_2 => {
            let u = HeterogeneousSeries::new(
                make_weibull(4.4, 3.0)?,
                vec![1.99, 0.01],
                vec![1.0, 2.0],
            )?;
            let v = HeterogeneousSeries::new(
                make_weibull(0.4, 0.2)?,
                vec![1.98, 0.02],
                vec![1.0, 2.0],
            )?;
            let grid = Grid::y(lo, hi, n)?;
            let logs = grid
                .points()
                .iter()
                .map(|&x| log_sf_ratio(&u, &v, x))
                .collect();
            (grid, logs)
        }
    };
    if let Some((x, v)) = grid
        .points()
        .iter()
        .zip(&logs)
        .find(|(_, v)| !v.is_finite())
    {
        return Err(Error::Evaluation { x: *x, value: *v });
    }
    let scan = classify(grid.points(), &logs, DEFAULT_SLOPE_TOL)?;
    let values = if id.log_scale() {
        logs
    } else {
        logs.iter()
            .zip(grid.points())
            .map(|(&l, &x)| {
                let v = l.exp();
                if v.is_finite() && v > 0.0 {
                    Ok(v)
                } else {
                    Err(Error::Overflow { x })
                }
            })
            .collect::<Result<Vec<_>>>()?
    };
    Ok(FigureData {
        id,
        t: grid.coords().to_vec(),
        values,
        scan,
        grid: grid.description(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_parse() {
        assert_eq!("3.2(ii)".parse::<FigureId>().unwrap(), FigureId::F3_2ii);
        assert_eq!("4.2".parse::<FigureId>().unwrap(), FigureId::F4_2);
        assert!("5.1".parse::<FigureId>().is_err());
    }

    #[test]
    fn csv_shape() {
        let d = reproduce(FigureId::F3_1, None).unwrap();
        let csv = d.csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,value");
        assert_eq!(lines.len(), 2002);
        assert!(!csv.contains('\r'));
        let first: Vec<f64> = lines[1].split(',').map(|f| f.parse().unwrap()).collect();
        assert!((first[0] - 1e-6).abs() < 1e-18);
    }

    #[test]
    fn density_figures_are_non_monotone() {
        for id in [FigureId::F3_1, FigureId::F3_2i, FigureId::F3_2ii] {
            let d = reproduce(id, None).unwrap();
            assert!(d.reproduced(), "{}", d.verdict_line());
            assert!(!d.scan.witnesses.is_empty());
        }
    }

    #[test]
    fn survival_figures() {
        assert!(reproduce(FigureId::F4_1ii, None).unwrap().reproduced());
        assert!(reproduce(FigureId::F4_2, None).unwrap().reproduced());
        // the premise ratio dips within 1e-4 of y = 1
        let d = reproduce(FigureId::F4_1i, None).unwrap();
        assert_eq!(d.scan.direction, Direction::NonMonotone);
        assert!(d.scan.witnesses.iter().all(|w| w.x < 1e-3));
    }
}
