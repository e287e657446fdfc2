//! Evaluation grids.
//!
//! Points are always strictly increasing in `x`. A grid remembers how it was
//! built so that it can be refined (point count doubled) and described in
//! verdict output.

use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::linspace;
use crate::parent::{Parent, ParentDistribution};

/// Smallest admissible grid.
pub const MIN_GRID_POINTS: usize = 16;
/// Default point count.
pub const DEFAULT_GRID_POINTS: usize = 2001;
/// Default bounds for u- and y-grids.
pub const DEFAULT_UNIT_BOUNDS: (f64, f64) = (1e-6, 1.0 - 1e-6);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    /// Points placed directly in `x`.
    X,
    /// Points placed in `u = F(x)` and mapped through the parent quantile.
    U,
    /// Points placed in `y` with `x = -ln y`.
    Y,
}

impl fmt::Display for GridKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GridKind::X => "x",
            GridKind::U => "u",
            GridKind::Y => "y",
        })
    }
}

impl std::str::FromStr for GridKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "x" => Ok(GridKind::X),
            "u" => Ok(GridKind::U),
            "y" => Ok(GridKind::Y),
            other => Err(Error::Unknown(other.to_string())),
        }
    }
}

#[derive(Clone)]
pub struct Grid {
    kind: GridKind,
    lo: f64,
    hi: f64,
    /// Native coordinate of each point (x, u or y), aligned with `points`.
    coords: Vec<f64>,
    points: Vec<f64>,
    parent: Option<Parent>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("description", &self.description())
            .finish()
    }
}

impl Grid {
    /// Direct grid in `x`.
    pub fn x(lo: f64, hi: f64, n: usize) -> Result<Self> {
        check_count(n)?;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Grid(format!(
                "x bounds must be finite with lo < hi, got [{lo}, {hi}]"
            )));
        }
        let coords = linspace(lo, hi, n);
        Self::finish(GridKind::X, lo, hi, coords.clone(), coords, None)
    }

    /// Grid in `u = F(x)`, mapped to `x` through `parent`'s quantile.
    pub fn u(parent: &Parent, lo: f64, hi: f64, n: usize) -> Result<Self> {
        check_count(n)?;
        check_unit_bounds(lo, hi)?;
        let coords = linspace(lo, hi, n);
        let points = coords
            .iter()
            .map(|&u| parent.quantile(u))
            .collect::<Result<Vec<_>>>()?;
        Self::finish(GridKind::U, lo, hi, coords, points, Some(parent.clone()))
    }

    /// Grid in `y` with `x = -ln y`; stored in increasing `x`.
    pub fn y(lo: f64, hi: f64, n: usize) -> Result<Self> {
        check_count(n)?;
        check_unit_bounds(lo, hi)?;
        let mut coords = linspace(lo, hi, n);
        coords.reverse();
        let points = coords.iter().map(|&y| -y.ln()).collect();
        Self::finish(GridKind::Y, lo, hi, coords, points, None)
    }

    /// Default u-grid over `parent`.
    pub fn default_u(parent: &Parent) -> Result<Self> {
        Self::u(
            parent,
            DEFAULT_UNIT_BOUNDS.0,
            DEFAULT_UNIT_BOUNDS.1,
            DEFAULT_GRID_POINTS,
        )
    }

    /// Default y-grid.
    pub fn default_y() -> Result<Self> {
        Self::y(
            DEFAULT_UNIT_BOUNDS.0,
            DEFAULT_UNIT_BOUNDS.1,
            DEFAULT_GRID_POINTS,
        )
    }

    /// Rebuilds with `n` points, same kind and bounds.
    pub fn with_points(&self, n: usize) -> Result<Self> {
        match self.kind {
            GridKind::X => Self::x(self.lo, self.hi, n),
            GridKind::U => Self::u(
                self.parent.as_ref().expect("u-grid keeps its parent"),
                self.lo,
                self.hi,
                n,
            ),
            GridKind::Y => Self::y(self.lo, self.hi, n),
        }
    }

    /// Doubles resolution: `n -> 2n - 1`, keeping every existing point.
    pub fn refined(&self) -> Result<Self> {
        self.with_points(2 * self.len() - 1)
    }

    fn finish(
        kind: GridKind,
        lo: f64,
        hi: f64,
        coords: Vec<f64>,
        points: Vec<f64>,
        parent: Option<Parent>,
    ) -> Result<Self> {
        if let Some(w) = points.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::Grid(format!(
                "points must be strictly increasing, found {} then {}",
                w[0], w[1]
            )));
        }
        Ok(Self {
            kind,
            lo,
            hi,
            coords,
            points,
            parent,
        })
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Checks every point lies strictly inside the parent's support.
    pub fn ensure_inside(&self, parent: &dyn ParentDistribution) -> Result<()> {
        let support = parent.support();
        match self.points.iter().find(|&&x| !support.contains_interior(x)) {
            Some(x) => Err(Error::Grid(format!(
                "point {x} lies outside the support ({}, {}) of {}",
                support.lo,
                support.hi,
                parent.label()
            ))),
            None => Ok(()),
        }
    }

    pub fn description(&self) -> String {
        format!("{}[{:e},{:e}]x{}", self.kind, self.lo, self.hi, self.len())
    }
}

fn check_count(n: usize) -> Result<()> {
    if n < MIN_GRID_POINTS {
        Err(Error::Grid(format!(
            "at least {MIN_GRID_POINTS} points are required, got {n}"
        )))
    } else {
        Ok(())
    }
}

fn check_unit_bounds(lo: f64, hi: f64) -> Result<()> {
    if lo > 0.0 && hi < 1.0 && lo < hi {
        Ok(())
    } else {
        Err(Error::Grid(format!(
            "unit-interval bounds must satisfy 0 < lo < hi < 1, got [{lo}, {hi}]"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parent::{make_exponential, make_uniform01};

    #[test]
    fn u_grid_on_uniform_parent_is_identity() {
        let g = Grid::default_u(&make_uniform01()).unwrap();
        assert_eq!(g.len(), 2001);
        assert_eq!(g.points(), g.coords());
        assert_eq!(g.points()[0], 1e-6);
    }

    #[test]
    fn y_grid_is_increasing_in_x() {
        let g = Grid::default_y().unwrap();
        assert!(g.points().windows(2).all(|w| w[0] < w[1]));
        assert!((g.points()[0] - (-(1.0 - 1e-6_f64).ln())).abs() < 1e-18);
        assert!((g.points()[2000] - (-(1e-6_f64).ln())).abs() < 1e-12);
        // coordinates run the other way
        assert!(g.coords()[0] > g.coords()[1]);
    }

    #[test]
    fn refinement_keeps_old_points() {
        let p = make_exponential(2.0).unwrap();
        let g = Grid::u(&p, 0.01, 0.99, 17).unwrap();
        let r = g.refined().unwrap();
        assert_eq!(r.len(), 33);
        for (i, x) in g.points().iter().enumerate() {
            assert!((r.points()[2 * i] - x).abs() <= 1e-15 * x.abs().max(1.0));
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::x(0.0, 1.0, 15).is_err());
        assert!(Grid::x(1.0, 0.0, 100).is_err());
        assert!(Grid::y(0.0, 0.5, 100).is_err());
        assert!(Grid::u(&make_uniform01(), 0.2, 1.0, 100).is_err());
        let g = Grid::x(-1.0, 0.5, 20).unwrap();
        assert!(g.ensure_inside(make_uniform01().as_ref()).is_err());
        assert!(Grid::x(0.1, 0.5, 20)
            .unwrap()
            .ensure_inside(make_uniform01().as_ref())
            .is_ok());
    }
}
