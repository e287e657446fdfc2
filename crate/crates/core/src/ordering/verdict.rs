//! Usual stochastic, hazard rate and likelihood ratio checks between two
//! minima on a grid.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::order_stats::{
    log_pdf_ratio, log_sf_ratio, min_log_hazard, min_log_sf, HeterogeneousSeries,
};
use crate::ordering::grid::Grid;
use crate::ordering::scan::{classify, evaluate, Direction, MonotonicityReport, DEFAULT_SLOPE_TOL};

/// Default relative tolerance for pointwise inequalities.
pub const DEFAULT_POINTWISE_TOL: f64 = 1e-10;

/// Scans whose largest opposing step is within this multiple of the slope
/// tolerance are reported as inconclusive rather than violated.
const STRADDLE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    UsualStochastic,
    HazardRate,
    LikelihoodRatio,
}

impl Relation {
    pub const ALL: [Relation; 3] = [
        Relation::UsualStochastic,
        Relation::HazardRate,
        Relation::LikelihoodRatio,
    ];

    pub fn short(&self) -> &'static str {
        match self {
            Relation::UsualStochastic => "st",
            Relation::HazardRate => "hr",
            Relation::LikelihoodRatio => "lr",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::UsualStochastic => "usual_stochastic",
            Relation::HazardRate => "hazard_rate",
            Relation::LikelihoodRatio => "likelihood_ratio",
        })
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "st" | "usual_stochastic" => Ok(Relation::UsualStochastic),
            "hr" | "hazard_rate" => Ok(Relation::HazardRate),
            "lr" | "likelihood_ratio" => Ok(Relation::LikelihoodRatio),
            other => Err(Error::Unknown(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    HoldsLeq,
    HoldsGeq,
    Violated,
    Inconclusive,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::HoldsLeq => "holds_leq",
            Outcome::HoldsGeq => "holds_geq",
            Outcome::Violated => "violated",
            Outcome::Inconclusive => "inconclusive",
        })
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "holds_leq" => Ok(Outcome::HoldsLeq),
            "holds_geq" => Ok(Outcome::HoldsGeq),
            "violated" => Ok(Outcome::Violated),
            "inconclusive" => Ok(Outcome::Inconclusive),
            other => Err(Error::Unknown(other.to_string())),
        }
    }
}

/// Largest excess of a pointwise inequality and where it occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointExcess {
    pub x: f64,
    pub excess: f64,
}

/// Outcome of comparing two log-scale curves point by point.
///
/// `leq` means the `U`-side inequality holds everywhere (for st:
/// `S_U <= S_V`; for hr: `r_U >= r_V`), `geq` the mirrored one.
#[derive(Debug, Clone, PartialEq)]
pub struct PointwiseSummary {
    pub leq: bool,
    pub geq: bool,
    pub leq_failures: usize,
    pub geq_failures: usize,
    pub worst_leq: Option<PointExcess>,
    pub worst_geq: Option<PointExcess>,
}

impl PointwiseSummary {
    /// `diffs[i]` is the log-excess of the `leq` side at `xs[i]`; positive
    /// beyond `tol` breaks `leq`, negative beyond `-tol` breaks `geq`.
    fn from_log_diffs(xs: &[f64], diffs: &[f64], tol: f64) -> Self {
        let mut s = PointwiseSummary {
            leq: true,
            geq: true,
            leq_failures: 0,
            geq_failures: 0,
            worst_leq: None,
            worst_geq: None,
        };
        for (&x, &d) in xs.iter().zip(diffs) {
            if d > tol {
                s.leq = false;
                s.leq_failures += 1;
                if s.worst_leq.is_none_or(|w| d > w.excess) {
                    s.worst_leq = Some(PointExcess { x, excess: d });
                }
            }
            if -d > tol {
                s.geq = false;
                s.geq_failures += 1;
                if s.worst_geq.is_none_or(|w| -d > w.excess) {
                    s.worst_geq = Some(PointExcess { x, excess: -d });
                }
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum VerdictReport {
    Scan(MonotonicityReport),
    Pointwise(PointwiseSummary),
    Both {
        scan: MonotonicityReport,
        pointwise: PointwiseSummary,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderingVerdict {
    pub relation: Relation,
    pub result: Outcome,
    pub report: VerdictReport,
    pub tolerance: f64,
    /// Description of the grid the verdict was reached on.
    pub grid: String,
    pub diagnostics: Vec<String>,
}

impl OrderingVerdict {
    /// Points evidencing a violation (empty when the order holds).
    pub fn witnesses(&self) -> Vec<f64> {
        let from_scan =
            |r: &MonotonicityReport| r.witnesses.iter().map(|w| w.x).collect::<Vec<_>>();
        // closest approaches are not witnesses when the order holds
        let holds = matches!(self.result, Outcome::HoldsLeq | Outcome::HoldsGeq);
        let from_points = |p: &PointwiseSummary| {
            if holds {
                return Vec::new();
            }
            p.worst_leq
                .iter()
                .chain(p.worst_geq.iter())
                .map(|e| e.x)
                .collect::<Vec<_>>()
        };
        match &self.report {
            VerdictReport::Scan(r) => from_scan(r),
            VerdictReport::Pointwise(p) => from_points(p),
            VerdictReport::Both { scan, pointwise } => {
                let mut w = from_scan(scan);
                if w.is_empty() {
                    w = from_points(pointwise);
                }
                w
            }
        }
    }

    /// Whether the verdict supports `want`. A `holds_leq` result whose
    /// evidence is symmetric (constant ratio, equal curves) also supports
    /// `holds_geq`.
    pub fn supports(&self, want: Outcome) -> bool {
        if self.result == want {
            return true;
        }
        if want != Outcome::HoldsGeq || self.result != Outcome::HoldsLeq {
            return false;
        }
        match &self.report {
            VerdictReport::Scan(r) => r.nonincreasing(),
            VerdictReport::Pointwise(p) => p.geq,
            VerdictReport::Both { scan, pointwise } => scan.nonincreasing() && pointwise.geq,
        }
    }

    /// One-line `key=value` rendering.
    pub fn summary_line(&self) -> String {
        let mut line = format!(
            "relation={} result={} grid={} tol={:e}",
            self.relation.short(),
            self.result,
            self.grid,
            self.tolerance
        );
        let w = self.witnesses();
        if !w.is_empty() {
            let shown: Vec<String> = w.iter().take(4).map(|x| format!("{x:.6e}")).collect();
            line.push_str(&format!(
                " witnesses={} first=[{}]",
                w.len(),
                shown.join(",")
            ));
        }
        match &self.report {
            VerdictReport::Scan(r) | VerdictReport::Both { scan: r, .. } => {
                line.push_str(&format!(" scan={}", r.direction));
            }
            VerdictReport::Pointwise(_) => {}
        }
        line
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    pub slope_tol: f64,
    pub pointwise_tol: f64,
    /// Double the grid until the verdict is stable across two refinements.
    pub refine: bool,
    pub max_refinements: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            slope_tol: DEFAULT_SLOPE_TOL,
            pointwise_tol: DEFAULT_POINTWISE_TOL,
            refine: false,
            max_refinements: 4,
        }
    }
}

pub fn check_usual_stochastic(
    u: &HeterogeneousSeries,
    v: &HeterogeneousSeries,
    grid: &Grid,
) -> Result<OrderingVerdict> {
    check(
        Relation::UsualStochastic,
        u,
        v,
        grid,
        &CheckOptions::default(),
    )
}

pub fn check_hazard_rate(
    u: &HeterogeneousSeries,
    v: &HeterogeneousSeries,
    grid: &Grid,
) -> Result<OrderingVerdict> {
    check(Relation::HazardRate, u, v, grid, &CheckOptions::default())
}

pub fn check_likelihood_ratio(
    u: &HeterogeneousSeries,
    v: &HeterogeneousSeries,
    grid: &Grid,
) -> Result<OrderingVerdict> {
    check(
        Relation::LikelihoodRatio,
        u,
        v,
        grid,
        &CheckOptions::default(),
    )
}

/// Runs one relation check, refining the grid when `opts.refine` is set.
pub fn check(
    relation: Relation,
    u: &HeterogeneousSeries,
    v: &HeterogeneousSeries,
    grid: &Grid,
    opts: &CheckOptions,
) -> Result<OrderingVerdict> {
    grid.ensure_inside(u.parent().as_ref())?;
    grid.ensure_inside(v.parent().as_ref())?;
    let first = check_once(relation, u, v, grid, opts)?;
    if !opts.refine {
        return Ok(first);
    }
    refine_until_stable(first, grid, opts.max_refinements, |g| {
        check_once(relation, u, v, g, opts)
    })
}

/// Re-evaluates on successively doubled grids until three consecutive
/// verdicts agree or `max_refinements` doublings have been made.
pub(crate) fn refine_until_stable<F>(
    first: OrderingVerdict,
    grid: &Grid,
    max_refinements: usize,
    run: F,
) -> Result<OrderingVerdict>
where
    F: Fn(&Grid) -> Result<OrderingVerdict>,
{
    let mut history = vec![first.result];
    let mut current = first;
    let mut g = grid.clone();
    for _ in 0..max_refinements {
        let n = history.len();
        if n >= 3 && history[n - 1] == history[n - 2] && history[n - 2] == history[n - 3] {
            break;
        }
        g = g.refined()?;
        current = run(&g)?;
        history.push(current.result);
    }
    let n = history.len();
    let stable = n >= 3 && history[n - 1] == history[n - 2] && history[n - 2] == history[n - 3];
    let trail: Vec<String> = history.iter().map(|o| o.to_string()).collect();
    current.diagnostics.push(format!(
        "refinement {} after {} grids: {}",
        if stable { "stable" } else { "unsettled" },
        n,
        trail.join(" -> ")
    ));
    Ok(current)
}

fn check_once(
    relation: Relation,
    u: &HeterogeneousSeries,
    v: &HeterogeneousSeries,
    grid: &Grid,
    opts: &CheckOptions,
) -> Result<OrderingVerdict> {
    match relation {
        Relation::UsualStochastic => st_once(u, v, grid, opts),
        Relation::HazardRate => hr_once(u, v, grid, opts),
        Relation::LikelihoodRatio => lr_once(u, v, grid, opts),
    }
}

fn st_once(
    u: &HeterogeneousSeries,
    v: &HeterogeneousSeries,
    grid: &Grid,
    opts: &CheckOptions,
) -> Result<OrderingVerdict> {
    let xs = grid.points();
    let diffs = evaluate(&|x| Ok(min_log_sf(u, x) - min_log_sf(v, x)), xs)?;
    let p = PointwiseSummary::from_log_diffs(xs, &diffs, opts.pointwise_tol);
    let result = match (p.leq, p.geq) {
        (true, _) => Outcome::HoldsLeq,
        (false, true) => Outcome::HoldsGeq,
        (false, false) => Outcome::Violated,
    };
    Ok(OrderingVerdict {
        relation: Relation::UsualStochastic,
        result,
        report: VerdictReport::Pointwise(p),
        tolerance: opts.pointwise_tol,
        grid: grid.description(),
        diagnostics: Vec::new(),
    })
}

/// Directions an order may hold in, as `(leq, geq)`.
fn scan_directions(r: &MonotonicityReport) -> (bool, bool) {
    match r.direction {
        Direction::Increasing => (true, false),
        Direction::Decreasing => (false, true),
        Direction::Constant => (true, true),
        Direction::NonMonotone => (false, false),
    }
}

fn straddles(r: &MonotonicityReport, slope_tol: f64) -> bool {
    r.direction == Direction::NonMonotone && r.max_violation_rel <= STRADDLE_FACTOR * slope_tol
}

fn hr_once(
    u: &HeterogeneousSeries,
    v: &HeterogeneousSeries,
    grid: &Grid,
    opts: &CheckOptions,
) -> Result<OrderingVerdict> {
    let xs = grid.points();
    let ratio = evaluate(&|x| Ok(log_sf_ratio(u, v, x)), xs)?;
    let scan = classify(xs, &ratio, opts.slope_tol)?;
    // leq needs r_U >= r_V, so the leq-excess is log r_V - log r_U
    let diffs = evaluate(&|x| Ok(min_log_hazard(v, x) - min_log_hazard(u, x)), xs)?;
    let pointwise = PointwiseSummary::from_log_diffs(xs, &diffs, opts.pointwise_tol);

    let (s_leq, s_geq) = scan_directions(&scan);
    let (p_leq, p_geq) = (pointwise.leq, pointwise.geq);
    let mut diagnostics = Vec::new();
    let result = if s_leq && p_leq {
        Outcome::HoldsLeq
    } else if s_geq && p_geq {
        Outcome::HoldsGeq
    } else if !s_leq && !s_geq && !p_leq && !p_geq {
        if straddles(&scan, opts.slope_tol) {
            diagnostics.push(format!(
                "ratio scan opposing steps within {STRADDLE_FACTOR}x slope tolerance (max {:e})",
                scan.max_violation_rel
            ));
            Outcome::Inconclusive
        } else {
            Outcome::Violated
        }
    } else {
        diagnostics.push(format!(
            "criteria disagree: ratio scan {} but pointwise hazards leq={p_leq} geq={p_geq}",
            scan.direction
        ));
        Outcome::Inconclusive
    };
    Ok(OrderingVerdict {
        relation: Relation::HazardRate,
        result,
        report: VerdictReport::Both { scan, pointwise },
        tolerance: opts.slope_tol,
        grid: grid.description(),
        diagnostics,
    })
}

fn lr_once(
    u: &HeterogeneousSeries,
    v: &HeterogeneousSeries,
    grid: &Grid,
    opts: &CheckOptions,
) -> Result<OrderingVerdict> {
    let xs = grid.points();
    // log(g_V / g_U)
    let ratio = evaluate(&|x| Ok(log_pdf_ratio(v, u, x)), xs)?;
    let scan = classify(xs, &ratio, opts.slope_tol)?;
    let mut diagnostics = Vec::new();
    let result = match scan.direction {
        Direction::Increasing | Direction::Constant => Outcome::HoldsLeq,
        Direction::Decreasing => Outcome::HoldsGeq,
        Direction::NonMonotone if straddles(&scan, opts.slope_tol) => {
            diagnostics.push(format!(
                "density ratio opposing steps within {STRADDLE_FACTOR}x slope tolerance (max {:e})",
                scan.max_violation_rel
            ));
            Outcome::Inconclusive
        }
        Direction::NonMonotone => Outcome::Violated,
    };
    Ok(OrderingVerdict {
        relation: Relation::LikelihoodRatio,
        result,
        report: VerdictReport::Scan(scan),
        tolerance: opts.slope_tol,
        grid: grid.description(),
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parent::{make_exponential, make_uniform01};

    fn series(alphas: &[f64], betas: &[f64]) -> HeterogeneousSeries {
        HeterogeneousSeries::new(make_uniform01(), alphas.to_vec(), betas.to_vec()).unwrap()
    }

    #[test]
    fn identical_series_hold_every_order() {
        let u = series(&[2.0, 0.5], &[1.0, 3.0]);
        let g = Grid::default_u(u.parent()).unwrap();
        for r in Relation::ALL {
            let v = check(r, &u, &u, &g, &CheckOptions::default()).unwrap();
            assert_eq!(v.result, Outcome::HoldsLeq, "{r}");
            assert!(v.witnesses().is_empty());
        }
    }

    #[test]
    fn first_counterexample() {
        let u = series(&[6.2, 4.1, 2.0], &[1.0, 2.0, 3.0]);
        let v = series(&[5.2, 5.1, 2.0], &[1.0, 2.0, 3.0]);
        let g = Grid::default_u(u.parent()).unwrap();
        assert_eq!(
            check_hazard_rate(&u, &v, &g).unwrap().result,
            Outcome::HoldsLeq
        );
        let lr = check_likelihood_ratio(&u, &v, &g).unwrap();
        assert_eq!(lr.result, Outcome::Violated);
        let w = lr.witnesses();
        assert!(!w.is_empty() && w.iter().all(|&x| x > 1e-6 && x < 1.0 - 1e-6));
    }

    #[test]
    fn hazard_geq_branch() {
        let u = series(&[3.0, 2.0, 1.0], &[0.6, 0.3, 0.1]);
        let v = series(&[3.0, 2.0, 1.0], &[0.5, 0.3, 0.2]);
        let g = Grid::default_u(u.parent()).unwrap();
        assert_eq!(
            check_hazard_rate(&u, &v, &g).unwrap().result,
            Outcome::HoldsGeq
        );
    }

    #[test]
    fn outlier_lr_example() {
        let u = series(&[3.0, 1.0], &[1.0, 2.0]);
        let v = series(&[2.5, 1.5], &[1.0, 2.0]);
        let g = Grid::default_u(u.parent()).unwrap();
        assert_eq!(
            check_likelihood_ratio(&u, &v, &g).unwrap().result,
            Outcome::HoldsLeq
        );
    }

    #[test]
    fn different_parents_st() {
        let p1 = make_exponential(2.0).unwrap();
        let p2 = make_exponential(1.0).unwrap();
        let u =
            HeterogeneousSeries::new(p1.clone(), vec![6.2, 4.1, 2.0], vec![1.0, 2.0, 3.0]).unwrap();
        let v =
            HeterogeneousSeries::new(p2.clone(), vec![5.2, 5.1, 2.0], vec![1.0, 2.0, 3.0]).unwrap();
        let g = Grid::default_y().unwrap();
        assert_eq!(
            check_usual_stochastic(&u, &v, &g).unwrap().result,
            Outcome::HoldsLeq
        );

        // swap parents only
        let u2 = u.with_parent(p2);
        let v2 = v.with_parent(p1);
        let x = Grid::x(0.01, 5.0, 64).unwrap();
        let st = check_usual_stochastic(&u2, &v2, &x).unwrap();
        assert_ne!(st.result, Outcome::HoldsLeq);
    }

    #[test]
    fn refinement_reports_trail() {
        let u = series(&[6.2, 4.1, 2.0], &[1.0, 2.0, 3.0]);
        let v = series(&[5.2, 5.1, 2.0], &[1.0, 2.0, 3.0]);
        let g = Grid::u(u.parent(), 1e-6, 1.0 - 1e-6, 101).unwrap();
        let opts = CheckOptions {
            refine: true,
            ..CheckOptions::default()
        };
        let lr = check(Relation::LikelihoodRatio, &u, &v, &g, &opts).unwrap();
        assert_eq!(lr.result, Outcome::Violated);
        assert!(lr.diagnostics.iter().any(|d| d.contains("stable")));
    }

    #[test]
    fn grid_outside_support_is_rejected() {
        let u = series(&[1.0], &[1.0]);
        let g = Grid::x(0.5, 1.5, 32).unwrap();
        assert!(matches!(
            check_usual_stochastic(&u, &u, &g),
            Err(Error::Grid(_))
        ));
    }
}
