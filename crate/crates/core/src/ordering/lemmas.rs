//! Auxiliary functions of `(s, u)` whose monotonicity in `s` drives the
//! ordering results, plus a grid suite that checks those monotonicities.
//!
//! Everything is written in terms of `a = s ln u`, so that `u^s = e^a` and
//! `1 - u^s = -expm1(a)` stay accurate near both ends of `(0, 1)`.

use crate::error::{ensure_open_unit, ensure_positive, Error, Result};
use crate::majorization::ShapeVector;
use crate::numeric::{expm1_minus_identity, one_minus_exp_plus_a_exp};

fn checked(s: f64, u: f64) -> Result<f64> {
    ensure_positive("s", s)?;
    ensure_open_unit("u", u)?;
    Ok(s * u.ln())
}

/// `s t u^s / (1 - u^s)`.
pub fn phi(s: f64, t: f64, u: f64) -> Result<f64> {
    let a = checked(s, u)?;
    ensure_positive("t", t)?;
    Ok(s * t * a.exp() / -a.exp_m1())
}

/// `1 + s ln u / (1 - u^s)`.
pub fn phi1(s: f64, u: f64) -> Result<f64> {
    let a = checked(s, u)?;
    Ok(expm1_minus_identity(a) / a.exp_m1())
}

/// `s / (1 - u^s)`.
pub fn phi2(s: f64, u: f64) -> Result<f64> {
    let a = checked(s, u)?;
    Ok(s / -a.exp_m1())
}

/// `s u^s (1 - u^s + s u^s ln u) / (1 - u^s)^3`.
pub fn phi3(s: f64, u: f64) -> Result<f64> {
    let a = checked(s, u)?;
    let q = -a.exp_m1();
    Ok(s * a.exp() * one_minus_exp_plus_a_exp(a) / (q * q * q))
}

/// `s u^(s-1) / (1 - u^s)`, the per-component hazard factor with unit density.
pub fn hazard_factor(s: f64, u: f64) -> Result<f64> {
    let a = checked(s, u)?;
    Ok(s * (a - u.ln()).exp() / -a.exp_m1())
}

/// Weighted average of `phi2(alpha_k, u)` with weights `phi(alpha_k, beta_k, u)`.
///
/// Weights are normalised in log space so that the result stays defined when
/// every weight underflows.
pub fn psi(alphas: &ShapeVector, betas: &ShapeVector, u: f64) -> Result<f64> {
    if alphas.len() != betas.len() {
        return Err(Error::Dimension {
            expected: alphas.len(),
            found: betas.len(),
        });
    }
    ensure_open_unit("u", u)?;
    let ln_u = u.ln();
    let mut log_w = Vec::with_capacity(alphas.len());
    let mut p2 = Vec::with_capacity(alphas.len());
    for (&al, &be) in alphas.as_slice().iter().zip(betas.as_slice()) {
        let a = al * ln_u;
        let q = -a.exp_m1();
        log_w.push(al.ln() + be.ln() + a - q.ln());
        p2.push(al / q);
    }
    let m = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut num, mut den) = (0.0, 0.0);
    for (lw, p) in log_w.iter().zip(&p2) {
        let w = (lw - m).exp();
        num += w * p;
        den += w;
    }
    Ok(num / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predicate {
    /// Nonincreasing in `s` for each fixed `u`.
    Decreasing,
    /// Nondecreasing in `s` for each fixed `u`.
    Increasing,
    /// `<= 0` everywhere.
    NonPositive,
    /// Convex in `s` for each fixed `u`.
    Convex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaCheck {
    pub name: String,
    pub predicate: Predicate,
    pub passed: bool,
    /// Largest violation, relative to the local scale; zero on a pass.
    pub worst_violation: f64,
    /// `(s, u)` where the worst violation occurs.
    pub witness: Option<(f64, f64)>,
    /// Informational entries are reported but do not gate `all_passed`.
    pub informational: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    pub fn all_passed(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| !c.informational)
            .all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&LemmaCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Relative tolerance used by the suite.
pub const LEMMA_TOL: f64 = 1e-9;

/// Evaluates `f` on `s_grid x u_grid` and tests `pred` along `s` for every `u`.
///
/// `s_grid` must be increasing. Grids too short for the predicate pass
/// vacuously.
pub fn check_predicate<F>(
    name: &str,
    f: F,
    pred: Predicate,
    s_grid: &[f64],
    u_grid: &[f64],
    tol: f64,
) -> LemmaCheck
where
    F: Fn(f64, f64) -> f64,
{
    let mut worst = 0.0_f64;
    let mut witness = None;
    let mut note = |v: f64, s: f64, u: f64| {
        if v > worst {
            worst = v;
            witness = Some((s, u));
        }
    };
    for &u in u_grid {
        let vals: Vec<f64> = s_grid.iter().map(|&s| f(s, u)).collect();
        match pred {
            Predicate::NonPositive => {
                for (&s, &v) in s_grid.iter().zip(&vals) {
                    if v > tol {
                        note(v, s, u);
                    }
                }
            }
            Predicate::Decreasing | Predicate::Increasing => {
                let sign = if pred == Predicate::Decreasing {
                    1.0
                } else {
                    -1.0
                };
                for (k, w) in vals.windows(2).enumerate() {
                    let rise = sign * (w[1] - w[0]);
                    let scale = w[0].abs().max(w[1].abs()).max(1.0);
                    if rise > tol * scale {
                        note(rise / scale, s_grid[k + 1], u);
                    }
                }
            }
            Predicate::Convex => {
                for k in 0..vals.len().saturating_sub(2) {
                    let (s0, s1, s2) = (s_grid[k], s_grid[k + 1], s_grid[k + 2]);
                    let d0 = (vals[k + 1] - vals[k]) / (s1 - s0);
                    let d1 = (vals[k + 2] - vals[k + 1]) / (s2 - s1);
                    let fscale = vals[k].abs().max(vals[k + 1].abs()).max(vals[k + 2].abs());
                    // slope noise from rounding in f is about eps * |f| / h
                    let scale = d0.abs().max(d1.abs())
                        + 1e3 * f64::EPSILON * fscale / (s1 - s0).min(s2 - s1);
                    let drop = d0 - d1;
                    if scale > 0.0 && drop > tol * scale {
                        note(drop / scale, s1, u);
                    }
                }
            }
        }
    }
    LemmaCheck {
        name: name.to_string(),
        predicate: pred,
        passed: witness.is_none(),
        worst_violation: worst,
        witness,
        informational: false,
    }
}

fn ok(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::NAN)
}

/// `phi(s, 1, u) * d phi2 / d s`, derivative by Richardson-extrapolated
/// central differences.
fn phi_times_dphi2(s: f64, u: f64) -> f64 {
    let central = |h: f64| (ok(phi2(s + h, u)) - ok(phi2(s - h, u))) / (2.0 * h);
    let h = 1e-3 * s;
    let d = (4.0 * central(h / 2.0) - central(h)) / 3.0;
    ok(phi(s, 1.0, u)) * d
}

/// `d phi / d s = phi * phi1 / s` at `t = 1`.
fn dphi_ds(s: f64, u: f64) -> f64 {
    ok(phi(s, 1.0, u)) * ok(phi1(s, u)) / s
}

/// Runs every auxiliary monotonicity and sign claim over the grids.
///
/// Entries:
/// * `phi_decreasing`, `phi1_decreasing`, `phi1_nonpositive`,
///   `phi2_increasing`, `phi3_decreasing`;
/// * `phi_dphi2_decreasing`: the product `phi * d phi2/ds` built from a
///   numerical derivative, which coincides with `phi3`;
/// * `hazard_factor_decreasing`, `hazard_factor_convex`;
/// * `dphi_ds_decreasing` (informational): the literal claim that
///   `d phi/ds` decreases in `s`. It does not hold, since `d phi/ds <= 0`
///   rises to zero as `s` grows.
pub fn lemma_monotonicity_suite(s_grid: &[f64], u_grid: &[f64]) -> LemmaReport {
    let tol = LEMMA_TOL;
    // the finite-difference entry carries truncation and rounding error
    let fd_tol = 1e-6;
    let mut checks = vec![
        check_predicate(
            "phi_decreasing",
            |s, u| ok(phi(s, 1.0, u)),
            Predicate::Decreasing,
            s_grid,
            u_grid,
            tol,
        ),
        check_predicate(
            "phi1_decreasing",
            |s, u| ok(phi1(s, u)),
            Predicate::Decreasing,
            s_grid,
            u_grid,
            tol,
        ),
        check_predicate(
            "phi1_nonpositive",
            |s, u| ok(phi1(s, u)),
            Predicate::NonPositive,
            s_grid,
            u_grid,
            tol,
        ),
        check_predicate(
            "phi2_increasing",
            |s, u| ok(phi2(s, u)),
            Predicate::Increasing,
            s_grid,
            u_grid,
            tol,
        ),
        check_predicate(
            "phi_dphi2_decreasing",
            phi_times_dphi2,
            Predicate::Decreasing,
            s_grid,
            u_grid,
            fd_tol,
        ),
        check_predicate(
            "phi3_decreasing",
            |s, u| ok(phi3(s, u)),
            Predicate::Decreasing,
            s_grid,
            u_grid,
            tol,
        ),
        check_predicate(
            "hazard_factor_decreasing",
            |s, u| ok(hazard_factor(s, u)),
            Predicate::Decreasing,
            s_grid,
            u_grid,
            tol,
        ),
        check_predicate(
            "hazard_factor_convex",
            |s, u| ok(hazard_factor(s, u)),
            Predicate::Convex,
            s_grid,
            u_grid,
            1e-6,
        ),
    ];
    let mut literal = check_predicate(
        "dphi_ds_decreasing",
        dphi_ds,
        Predicate::Decreasing,
        s_grid,
        u_grid,
        tol,
    );
    literal.informational = true;
    checks.push(literal);
    LemmaReport { checks }
}
