//! Scenario files: flat `key = value` text describing two minima and the
//! orderings to check between them.
//!
//! ```text
//! # comment
//! name     = counterexample-3.1
//! parent   = uniform01            # or parent_u / parent_v
//! alphas   = [6.2, 4.1, 2]        # U shapes
//! betas    = [1, 2, 3]
//! gammas   = [5.2, 5.1, 2]        # V shapes; default to alphas / betas
//! deltas   = [1, 2, 3]
//! relation = all                  # st | hr | lr | all | comma list
//! grid     = u                    # u | x | y
//! expect   = hr=holds_leq, lr=violated
//! ```
//!
//! A side may instead be given in multiple-outlier form with
//! `u_base = [alpha, beta]`, `u_outlier = [alpha*, beta*]`,
//! `u_counts = [n1, n2]` (and the `v_` equivalents). Other keys: `grid_lo`,
//! `grid_hi`, `grid_points`, `seed`, `output`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::montecarlo::{empirical_order_check, ks_distance_min, pair_seed, sample_min};
use crate::order_stats::{HeterogeneousSeries, MultipleOutlierSeries};
use crate::ordering::grid::{Grid, GridKind, DEFAULT_GRID_POINTS, DEFAULT_UNIT_BOUNDS};
use crate::ordering::verdict::{check, CheckOptions, OrderingVerdict, Outcome, Relation};
use crate::parent::ParentSpec;

const KEYS: &[&str] = &[
    "name",
    "parent",
    "parent_u",
    "parent_v",
    "alphas",
    "betas",
    "gammas",
    "deltas",
    "u_base",
    "u_outlier",
    "u_counts",
    "v_base",
    "v_outlier",
    "v_counts",
    "relation",
    "grid",
    "grid_lo",
    "grid_hi",
    "grid_points",
    "seed",
    "output",
    "expect",
];

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub kind: GridKind,
    pub lo: f64,
    pub hi: f64,
    /// `None` defers to the caller's default point count.
    pub points: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub parent_u: ParentSpec,
    pub parent_v: ParentSpec,
    pub u: HeterogeneousSeries,
    pub v: HeterogeneousSeries,
    pub relations: Vec<Relation>,
    pub grid: GridSpec,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub expect: Vec<(Relation, Outcome)>,
}

struct Entry {
    line: usize,
    value: String,
}

fn perr(line: usize, field: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

fn parse_number(line: usize, field: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| perr(line, field, format!("`{}` is not a number", s.trim())))
}

fn parse_vector(e: &Entry, field: &str) -> Result<Vec<f64>> {
    let v = e.value.trim();
    let inner = v
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| perr(e.line, field, "expected a bracketed vector like [1, 2, 3]"))?;
    if inner.trim().is_empty() {
        return Err(perr(e.line, field, "vector is empty"));
    }
    inner
        .split(',')
        .map(|s| parse_number(e.line, field, s))
        .collect()
}

fn parse_pair(e: &Entry, field: &str) -> Result<(f64, f64)> {
    match parse_vector(e, field)?.as_slice() {
        &[a, b] => Ok((a, b)),
        other => Err(perr(
            e.line,
            field,
            format!("expected 2 entries, found {}", other.len()),
        )),
    }
}

fn parse_count(line: usize, field: &str, x: f64) -> Result<usize> {
    if x >= 0.0 && x.fract() == 0.0 && x <= u32::MAX as f64 {
        Ok(x as usize)
    } else {
        Err(perr(line, field, format!("`{x}` is not a count")))
    }
}

fn parse_relations(e: &Entry) -> Result<Vec<Relation>> {
    let mut out = Vec::new();
    for part in e.value.split(',') {
        let p = part.trim();
        if p == "all" {
            out.extend(Relation::ALL);
        } else {
            out.push(
                p.parse()
                    .map_err(|_| perr(e.line, "relation", format!("unknown relation `{p}`")))?,
            );
        }
    }
    out.dedup();
    Ok(out)
}

fn parse_expect(e: &Entry) -> Result<Vec<(Relation, Outcome)>> {
    let mut out = Vec::new();
    for part in e.value.split(',') {
        let (r, o) = part.split_once('=').ok_or_else(|| {
            perr(
                e.line,
                "expect",
                format!("expected relation=outcome, found `{}`", part.trim()),
            )
        })?;
        let outcome: Outcome = o
            .parse()
            .map_err(|_| perr(e.line, "expect", format!("unknown outcome `{}`", o.trim())))?;
        if r.trim() == "all" {
            out.extend(Relation::ALL.iter().map(|&r| (r, outcome)));
        } else {
            let rel: Relation = r
                .parse()
                .map_err(|_| perr(e.line, "expect", format!("unknown relation `{}`", r.trim())))?;
            out.push((rel, outcome));
        }
    }
    Ok(out)
}

fn parse_parent(e: &Entry, field: &str) -> Result<ParentSpec> {
    e.value
        .parse()
        .map_err(|err| perr(e.line, field, format!("invalid parent: {err}")))
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<&'static str, Entry> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (k, v) = content
                .split_once('=')
                .ok_or_else(|| perr(line, content, "expected `key = value`"))?;
            let k = k.trim();
            let key = KEYS
                .iter()
                .find(|&&known| known == k)
                .ok_or_else(|| perr(line, k, "unknown key"))?;
            if let Some(prev) = entries.get(key) {
                return Err(perr(
                    line,
                    k,
                    format!("duplicate key, first set on line {}", prev.line),
                ));
            }
            entries.insert(
                key,
                Entry {
                    line,
                    value: v.trim().to_string(),
                },
            );
        }

        let name = entries
            .get("name")
            .map_or_else(|| "unnamed".to_string(), |e| e.value.clone());

        let (parent_u, parent_v) = match (
            entries.get("parent"),
            entries.get("parent_u"),
            entries.get("parent_v"),
        ) {
            (Some(p), None, None) => {
                let spec = parse_parent(p, "parent")?;
                (spec, spec)
            }
            (None, Some(a), Some(b)) => {
                (parse_parent(a, "parent_u")?, parse_parent(b, "parent_v")?)
            }
            (Some(p), _, _) => {
                return Err(perr(
                    p.line,
                    "parent",
                    "give either `parent` or both `parent_u` and `parent_v`",
                ))
            }
            (None, Some(e), None) | (None, None, Some(e)) => {
                return Err(perr(
                    e.line,
                    "parent",
                    "`parent_u` and `parent_v` must be given together",
                ))
            }
            (None, None, None) => return Err(perr(0, "parent", "missing parent specification")),
        };

        let u = side(&entries, "u", ("alphas", "betas"), None, &parent_u)?;
        let v = side(&entries, "v", ("gammas", "deltas"), Some(&u), &parent_v)?;
        if u.len() != v.len() {
            let line = entries
                .get("gammas")
                .or(entries.get("v_counts"))
                .or(entries.get("deltas"))
                .map_or(0, |e| e.line);
            return Err(perr(
                line,
                "gammas",
                format!("U has {} components but V has {}", u.len(), v.len()),
            ));
        }

        let relations = match entries.get("relation") {
            Some(e) => parse_relations(e)?,
            None => Relation::ALL.to_vec(),
        };

        let kind = match entries.get("grid") {
            Some(e) => e
                .value
                .parse()
                .map_err(|_| perr(e.line, "grid", format!("unknown grid kind `{}`", e.value)))?,
            None => GridKind::U,
        };
        let bound = |key: &str, default: Option<f64>| -> Result<f64> {
            match entries.get(key) {
                Some(e) => parse_number(e.line, key, &e.value),
                None => default.ok_or_else(|| perr(0, key, "required for an x grid")),
            }
        };
        let unit = kind != GridKind::X;
        let lo = bound("grid_lo", unit.then_some(DEFAULT_UNIT_BOUNDS.0))?;
        let hi = bound("grid_hi", unit.then_some(DEFAULT_UNIT_BOUNDS.1))?;
        let points = match entries.get("grid_points") {
            Some(e) => Some(parse_count(
                e.line,
                "grid_points",
                parse_number(e.line, "grid_points", &e.value)?,
            )?),
            None => None,
        };
        let grid = GridSpec {
            kind,
            lo,
            hi,
            points,
        };

        let seed = match entries.get("seed") {
            Some(e) => e
                .value
                .parse::<u64>()
                .map_err(|_| perr(e.line, "seed", "expected an unsigned 64-bit integer"))?,
            None => 1,
        };
        let output = entries.get("output").map(|e| PathBuf::from(&e.value));
        let expect = match entries.get("expect") {
            Some(e) => parse_expect(e)?,
            None => Vec::new(),
        };

        let scenario = Scenario {
            name,
            parent_u,
            parent_v,
            u,
            v,
            relations,
            grid,
            seed,
            output,
            expect,
        };
        // surface grid problems (bounds, support) at parse time
        let g = scenario.build_grid(None).map_err(|err| {
            let line = entries
                .get("grid")
                .or(entries.get("grid_lo"))
                .map_or(0, |e| e.line);
            perr(line, "grid", err.to_string())
        })?;
        for series in [&scenario.u, &scenario.v] {
            g.ensure_inside(series.parent().as_ref()).map_err(|err| {
                perr(
                    entries.get("grid").map_or(0, |e| e.line),
                    "grid",
                    err.to_string(),
                )
            })?;
        }
        Ok(scenario)
    }

    /// Builds the evaluation grid; `points` overrides the scenario's count.
    /// A u-grid maps through U's parent.
    pub fn build_grid(&self, points: Option<usize>) -> Result<Grid> {
        let n = points.or(self.grid.points).unwrap_or(DEFAULT_GRID_POINTS);
        match self.grid.kind {
            GridKind::X => Grid::x(self.grid.lo, self.grid.hi, n),
            GridKind::U => Grid::u(self.u.parent(), self.grid.lo, self.grid.hi, n),
            GridKind::Y => Grid::y(self.grid.lo, self.grid.hi, n),
        }
    }
}

fn side(
    entries: &BTreeMap<&'static str, Entry>,
    prefix: &str,
    (shape_key, weight_key): (&'static str, &'static str),
    fallback: Option<&HeterogeneousSeries>,
    parent: &ParentSpec,
) -> Result<HeterogeneousSeries> {
    let get = |suffix: &str| entries.get(format!("{prefix}_{suffix}").as_str());
    let built = parent
        .build()
        .map_err(|e| perr(0, "parent", e.to_string()))?;
    let outlier = [get("base"), get("outlier"), get("counts")];
    let explicit = [entries.get(shape_key), entries.get(weight_key)];

    if outlier.iter().any(Option::is_some) {
        if let Some(e) = explicit.iter().flatten().next() {
            return Err(perr(
                e.line,
                shape_key,
                format!("cannot mix with `{prefix}_base` outlier blocks"),
            ));
        }
        let [Some(b), Some(o), Some(c)] = outlier else {
            let line = outlier.iter().flatten().next().map_or(0, |e| e.line);
            return Err(perr(
                line,
                &format!("{prefix}_base"),
                format!("`{prefix}_base`, `{prefix}_outlier` and `{prefix}_counts` must be given together"),
            ));
        };
        let base = parse_pair(b, &format!("{prefix}_base"))?;
        let out = parse_pair(o, &format!("{prefix}_outlier"))?;
        let counts_field = format!("{prefix}_counts");
        let (n1, n2) = parse_pair(c, &counts_field)?;
        let n1 = parse_count(c.line, &counts_field, n1)?;
        let n2 = parse_count(c.line, &counts_field, n2)?;
        let m = MultipleOutlierSeries::new(built, base, n1, out, n2)
            .map_err(|e| perr(c.line, &counts_field, e.to_string()))?;
        return Ok(m.expand());
    }

    let shapes = match (entries.get(shape_key), fallback) {
        (Some(e), _) => parse_vector(e, shape_key)?,
        (None, Some(f)) => f.alphas().to_vec(),
        (None, None) => return Err(perr(0, shape_key, "missing")),
    };
    let weights = match (entries.get(weight_key), fallback) {
        (Some(e), _) => parse_vector(e, weight_key)?,
        (None, Some(f)) => f.betas().to_vec(),
        (None, None) => return Err(perr(0, weight_key, "missing")),
    };
    let line = entries
        .get(weight_key)
        .or(entries.get(shape_key))
        .map_or(0, |e| e.line);
    HeterogeneousSeries::new(built, shapes, weights)
        .map_err(|e| perr(line, weight_key, e.to_string()))
}

/// Caller-side overrides for grid size, refinement and tolerance.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOptions {
    pub grid_points: Option<usize>,
    pub refine: bool,
    /// Slope tolerance; the pointwise tolerance is set to a tenth of it.
    pub tol: Option<f64>,
}

impl RunOptions {
    pub fn check_options(&self) -> CheckOptions {
        let mut o = CheckOptions {
            refine: self.refine,
            ..CheckOptions::default()
        };
        if let Some(t) = self.tol {
            o.slope_tol = t;
            o.pointwise_tol = t / 10.0;
        }
        o
    }
}

#[derive(Debug, Clone)]
pub struct CheckRun {
    pub verdicts: Vec<OrderingVerdict>,
    /// Expected outcomes that were not met, as `(relation, expected, found)`.
    pub mismatches: Vec<(Relation, Outcome, Option<Outcome>)>,
    pub text: String,
}

impl CheckRun {
    pub fn matched(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn outcome(&self, r: Relation) -> Option<Outcome> {
        self.verdicts
            .iter()
            .find(|v| v.relation == r)
            .map(|v| v.result)
    }
}

/// Checks every requested relation and compares with `expect`.
pub fn run_check(scenario: &Scenario, opts: &RunOptions) -> Result<CheckRun> {
    let grid = scenario.build_grid(opts.grid_points)?;
    let copts = opts.check_options();
    let mut verdicts = Vec::new();
    for &r in &scenario.relations {
        verdicts.push(check(r, &scenario.u, &scenario.v, &grid, &copts)?);
    }
    let mut mismatches = Vec::new();
    for &(r, expected) in &scenario.expect {
        let found = verdicts.iter().find(|v| v.relation == r).map(|v| v.result);
        if found != Some(expected) {
            mismatches.push((r, expected, found));
        }
    }

    let mut text = String::new();
    writeln!(text, "scenario={}", scenario.name).unwrap();
    for v in &verdicts {
        writeln!(text, "{}", v.summary_line()).unwrap();
        for d in &v.diagnostics {
            writeln!(text, "  note: {d}").unwrap();
        }
    }
    for &(r, expected) in &scenario.expect {
        let got = verdicts.iter().find(|v| v.relation == r).map(|v| v.result);
        let state = if got == Some(expected) {
            "match"
        } else {
            "mismatch"
        };
        let found_s = got.map_or_else(|| "not_checked".to_string(), |o| o.to_string());
        writeln!(
            text,
            "expect relation={} wanted={} found={} {state}",
            r.short(),
            expected,
            found_s
        )
        .unwrap();
    }
    let status = if scenario.expect.is_empty() {
        "no_expectation"
    } else if mismatches.is_empty() {
        "match"
    } else {
        "mismatch"
    };
    writeln!(text, "status={status}").unwrap();
    Ok(CheckRun {
        verdicts,
        mismatches,
        text,
    })
}

#[derive(Debug, Clone)]
pub struct SimulationRun {
    pub ks_u: f64,
    pub ks_v: f64,
    pub st_agrees: bool,
    pub text: String,
}

/// Samples both minima, reports Kolmogorov distances and the empirical st
/// comparison against the analytic verdict.
pub fn simulate(
    scenario: &Scenario,
    size: usize,
    seed: u64,
    opts: &RunOptions,
) -> Result<SimulationRun> {
    let grid = scenario.build_grid(opts.grid_points)?;
    let su = sample_min(&scenario.u, size, seed)?;
    let ks_u = ks_distance_min(&su, &scenario.u);
    let report = empirical_order_check(
        Relation::UsualStochastic,
        &scenario.u,
        &scenario.v,
        size,
        seed,
        &grid,
    )?;
    let sv = sample_min(&scenario.v, size, pair_seed(seed))?;
    let ks_v = ks_distance_min(&sv, &scenario.v);

    let mut text = String::new();
    writeln!(text, "scenario={} size={size} seed={seed}", scenario.name).unwrap();
    writeln!(text, "sample=U ks={ks_u:.6e}").unwrap();
    writeln!(text, "sample=V ks={ks_v:.6e}").unwrap();
    writeln!(
        text,
        "empirical_st analytic={} band={:.6e} max_excess_leq={:.6e} max_excess_geq={:.6e} agrees={}",
        report.analytic.result, report.band, report.max_excess_leq, report.max_excess_geq, report.agrees
    )
    .unwrap();
    Ok(SimulationRun {
        ks_u,
        ks_v,
        st_agrees: report.agrees,
        text,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const CE31: &str = "
# first counterexample
name = ce31
parent = uniform01
alphas = [6.2, 4.1, 2]
gammas = [5.2, 5.1, 2]
betas  = [1, 2, 3]
relation = hr, lr
expect = hr=holds_leq, lr=violated
";

    #[test]
    fn parses_and_matches() {
        let s = Scenario::parse(CE31).unwrap();
        assert_eq!(s.v.betas(), &[1.0, 2.0, 3.0]);
        assert_eq!(
            s.relations,
            vec![Relation::HazardRate, Relation::LikelihoodRatio]
        );
        let run = run_check(&s, &RunOptions::default()).unwrap();
        assert!(run.matched(), "{}", run.text);
        assert!(run.text.ends_with("status=match\n"));
    }

    #[test]
    fn outlier_blocks_expand() {
        let s = Scenario::parse(
            "parent = uniform01\nu_base=[3,1]\nu_outlier=[1,2]\nu_counts=[2,1]\nv_base=[2.5,1]\nv_outlier=[1.5,2]\nv_counts=[2,1]\n",
        )
        .unwrap();
        assert_eq!(s.u.alphas(), &[3.0, 3.0, 1.0]);
        assert_eq!(s.v.betas(), &[1.0, 1.0, 2.0]);
    }

    #[test]
    fn errors_carry_line_and_field() {
        let err = Scenario::parse("parent = uniform01\nalphas = [1, 2]\nbetas = [1, 2, 3]\n")
            .unwrap_err();
        assert!(
            matches!(err, Error::Parse { line: 3, ref field, .. } if field == "betas"),
            "{err:?}"
        );
        let err = Scenario::parse("parent = uniform01\nalphas = [1, 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = Scenario::parse("parent = uniform01\nalphaz = [1]\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, ref field, .. } if field == "alphaz"));
        let err = Scenario::parse("parent = uniform01\nalphas=[1]\nbetas=[1]\nrelation = rhr\n")
            .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }));
        let err = Scenario::parse(
            "parent = uniform01\nalphas=[1]\nbetas=[1]\ngrid=x\ngrid_lo=0.5\ngrid_hi=2\n",
        )
        .unwrap_err();
        assert!(
            matches!(err, Error::Parse { ref field, .. } if field == "grid"),
            "{err:?}"
        );
        let err =
            Scenario::parse("parent = uniform01\nalphas=[1, 2]\nbetas=[1, 1]\ngammas=[1,2,3]\n")
                .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err:?}");
    }

    #[test]
    fn identical_sides_hold_everything() {
        let s = Scenario::parse(
            "parent = exponential(2)\nalphas=[2, 0.5]\nbetas=[1, 3]\nexpect = all=holds_leq\n",
        )
        .unwrap();
        let run = run_check(&s, &RunOptions::default()).unwrap();
        assert!(run.matched(), "{}", run.text);
    }

    #[test]
    fn tolerance_override() {
        let o = RunOptions {
            tol: Some(1e-6),
            ..RunOptions::default()
        }
        .check_options();
        assert_eq!(o.slope_tol, 1e-6);
        assert_eq!(o.pointwise_tol, 1e-7);
    }
}
