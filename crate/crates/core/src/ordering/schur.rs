//! Numerical Schur-convexity evidence from pairwise partial derivatives.

use std::fmt;

use crate::error::{ensure_positive, Result};
use crate::majorization::ShapeVector;

/// Default relative finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchurEvidence {
    Convex,
    Concave,
    /// Every pair term vanishes within tolerance.
    Both,
    Neither,
}

impl fmt::Display for SchurEvidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchurEvidence::Convex => "schur_convex_evidence",
            SchurEvidence::Concave => "schur_concave_evidence",
            SchurEvidence::Both => "schur_convex_and_concave_evidence",
            SchurEvidence::Neither => "neither",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairTerm {
    pub i: usize,
    pub j: usize,
    /// `(x_i - x_j) (df/dx_i - df/dx_j)`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchurReport {
    pub evidence: SchurEvidence,
    pub terms: Vec<PairTerm>,
    pub tolerance: f64,
}

/// Central-difference Schur check of `f` at `x`.
///
/// The step for coordinate `i` is `max(step, step * |x_i|)`, capped at half of
/// `x_i` so that the perturbed vector stays positive.
pub fn schur_differential_check<F>(f: F, x: &ShapeVector, step: f64) -> Result<SchurReport>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    ensure_positive("step", step)?;
    let xs = x.as_slice();
    let n = xs.len();
    let f0 = f(xs)?;
    let mut grad = Vec::with_capacity(n);
    let mut work = xs.to_vec();
    for i in 0..n {
        let h = step.max(step * xs[i].abs()).min(0.5 * xs[i]);
        work[i] = xs[i] + h;
        let up = f(&work)?;
        work[i] = xs[i] - h;
        let down = f(&work)?;
        work[i] = xs[i];
        grad.push((up - down) / (2.0 * h));
    }

    let spread = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - xs.iter().copied().fold(f64::INFINITY, f64::min);
    let grad_scale = grad.iter().fold(0.0_f64, |m, g| m.max(g.abs()));
    let tolerance = 1e-7 * f0.abs().max(1.0).max(grad_scale) * spread.max(1.0);

    let mut terms = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            terms.push(PairTerm {
                i,
                j,
                value: (xs[i] - xs[j]) * (grad[i] - grad[j]),
            });
        }
    }
    let convex = terms.iter().all(|t| t.value >= -tolerance);
    let concave = terms.iter().all(|t| t.value <= tolerance);
    let evidence = match (convex, concave) {
        (true, true) => SchurEvidence::Both,
        (true, false) => SchurEvidence::Convex,
        (false, true) => SchurEvidence::Concave,
        (false, false) => SchurEvidence::Neither,
    };
    Ok(SchurReport {
        evidence,
        terms,
        tolerance,
    })
}
