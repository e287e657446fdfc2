//! The minimum of `n` independent heterogeneous Kw-G lifetimes that share
//! a parent.
//!
//! Survival products are accumulated as pairwise sums of logs and hazards
//! as log-sum-exp, so `n` in the thousands costs no precision. Density is
//! always `hazard * survival`. Cross-sample ratios are `exp` of a log
//! difference; the `log_*` variants never underflow and are what the
//! ordering checks consume.

use std::fmt;

use crate::error::{ensure_positive, Error, Result};
use crate::kwg::{kwg_log_hazard, KwGShape, SF_FLOOR};
use crate::numeric::{log_sum_exp, pairwise_sum};
use crate::parent::{log_one_minus_cdf_pow, Parent};

/// `n` independent `Kw-G(alpha_i, beta_i, F)` lifetimes.
#[derive(Clone)]
pub struct HeterogeneousSeries {
    parent: Parent,
    alphas: Vec<f64>,
    betas: Vec<f64>,
}

impl fmt::Debug for HeterogeneousSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HeterogeneousSeries")
            .field("parent", &self.parent.label())
            .field("alphas", &self.alphas)
            .field("betas", &self.betas)
            .finish()
    }
}

impl HeterogeneousSeries {
    pub fn new(parent: Parent, alphas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::Dimension {
                expected: 1,
                found: 0,
            });
        }
        if alphas.len() != betas.len() {
            return Err(Error::Dimension {
                expected: alphas.len(),
                found: betas.len(),
            });
        }
        for &a in &alphas {
            ensure_positive("alpha", a)?;
        }
        for &b in &betas {
            ensure_positive("beta", b)?;
        }
        Ok(Self {
            parent,
            alphas,
            betas,
        })
    }

    pub fn parent(&self) -> &Parent {
        &self.parent
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn shapes(&self) -> impl Iterator<Item = KwGShape> + '_ {
        self.alphas
            .iter()
            .zip(&self.betas)
            .map(|(&a, &b)| KwGShape::new(a, b).expect("validated at construction"))
    }

    /// Same shapes over a different parent.
    pub fn with_parent(&self, parent: Parent) -> Self {
        Self {
            parent,
            alphas: self.alphas.clone(),
            betas: self.betas.clone(),
        }
    }
}

/// Two-block heterogeneous sample: `n1` copies of `(alpha, beta)` followed by
/// `n2` copies of `(alpha_star, beta_star)`.
#[derive(Clone)]
pub struct MultipleOutlierSeries {
    parent: Parent,
    base: (f64, f64),
    n1: usize,
    outlier: (f64, f64),
    n2: usize,
}

impl fmt::Debug for MultipleOutlierSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultipleOutlierSeries")
            .field("parent", &self.parent.label())
            .field("base", &self.base)
            .field("n1", &self.n1)
            .field("outlier", &self.outlier)
            .field("n2", &self.n2)
            .finish()
    }
}

impl MultipleOutlierSeries {
    pub fn new(
        parent: Parent,
        base: (f64, f64),
        n1: usize,
        outlier: (f64, f64),
        n2: usize,
    ) -> Result<Self> {
        for (name, n) in [("n1", n1), ("n2", n2)] {
            if n == 0 {
                return Err(Error::ParameterDomain {
                    name,
                    value: 0.0,
                    reason: "block multiplicity must be at least 1",
                });
            }
        }
        ensure_positive("alpha", base.0)?;
        ensure_positive("beta", base.1)?;
        ensure_positive("alpha_star", outlier.0)?;
        ensure_positive("beta_star", outlier.1)?;
        Ok(Self {
            parent,
            base,
            n1,
            outlier,
            n2,
        })
    }

    pub fn base(&self) -> (f64, f64) {
        self.base
    }

    pub fn outlier(&self) -> (f64, f64) {
        self.outlier
    }

    pub fn counts(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    pub fn expand(&self) -> HeterogeneousSeries {
        let mut alphas = vec![self.base.0; self.n1];
        alphas.extend(std::iter::repeat_n(self.outlier.0, self.n2));
        let mut betas = vec![self.base.1; self.n1];
        betas.extend(std::iter::repeat_n(self.outlier.1, self.n2));
        HeterogeneousSeries {
            parent: self.parent.clone(),
            alphas,
            betas,
        }
    }
}

impl From<&MultipleOutlierSeries> for HeterogeneousSeries {
    fn from(m: &MultipleOutlierSeries) -> Self {
        m.expand()
    }
}

/// `ln P(min > x) = sum_i beta_i ln(1 - F(x)^alpha_i)`.
pub fn min_log_sf(series: &HeterogeneousSeries, x: f64) -> f64 {
    let parent = series.parent.as_ref();
    let terms: Vec<f64> = series
        .alphas
        .iter()
        .zip(&series.betas)
        .map(|(&a, &b)| b * log_one_minus_cdf_pow(parent, a, x))
        .collect();
    pairwise_sum(&terms)
}

pub fn min_sf(series: &HeterogeneousSeries, x: f64) -> f64 {
    min_log_sf(series, x).exp()
}

/// `ln r_{1:n}(x)`, the log of the summed component hazards.
pub fn min_log_hazard(series: &HeterogeneousSeries, x: f64) -> f64 {
    let parent = series.parent.as_ref();
    let terms: Vec<f64> = series
        .shapes()
        .map(|s| kwg_log_hazard(s, parent, x))
        .collect();
    log_sum_exp(&terms)
}

/// `ln g_{1:n}(x) = ln r_{1:n}(x) + ln P(min > x)`.
pub fn min_log_pdf(series: &HeterogeneousSeries, x: f64) -> f64 {
    min_log_hazard(series, x) + min_log_sf(series, x)
}

fn guard(series: &HeterogeneousSeries, x: f64) -> Result<()> {
    let parent = series.parent.as_ref();
    let floor = SF_FLOOR.ln();
    let underflow = series
        .alphas
        .iter()
        .zip(&series.betas)
        .any(|(&a, &b)| b * log_one_minus_cdf_pow(parent, a, x) < floor);
    if underflow || min_log_sf(series, x) < floor {
        Err(Error::Overflow { x })
    } else {
        Ok(())
    }
}

/// Hazard rate of the minimum. Fails where any survival factor underflows.
pub fn min_hazard(series: &HeterogeneousSeries, x: f64) -> Result<f64> {
    guard(series, x)?;
    Ok(min_log_hazard(series, x).exp())
}

/// Density of the minimum, `hazard * survival`.
pub fn min_pdf(series: &HeterogeneousSeries, x: f64) -> Result<f64> {
    guard(series, x)?;
    Ok(min_log_pdf(series, x).exp())
}

/// `ln(P(V_min > x) / P(U_min > x))`.
pub fn log_sf_ratio(u: &HeterogeneousSeries, v: &HeterogeneousSeries, x: f64) -> f64 {
    min_log_sf(v, x) - min_log_sf(u, x)
}

/// `P(V_min > x) / P(U_min > x)`.
pub fn sf_ratio(u: &HeterogeneousSeries, v: &HeterogeneousSeries, x: f64) -> Result<f64> {
    guard(u, x)?;
    guard(v, x)?;
    finite_exp(log_sf_ratio(u, v, x), x)
}

/// `ln(g_U(x) / g_V(x))`.
pub fn log_pdf_ratio(u: &HeterogeneousSeries, v: &HeterogeneousSeries, x: f64) -> f64 {
    min_log_pdf(u, x) - min_log_pdf(v, x)
}

/// `g_U(x) / g_V(x)`, density of `U_min` over density of `V_min`.
pub fn pdf_ratio(u: &HeterogeneousSeries, v: &HeterogeneousSeries, x: f64) -> Result<f64> {
    guard(u, x)?;
    guard(v, x)?;
    finite_exp(log_pdf_ratio(u, v, x), x)
}

fn finite_exp(log_value: f64, x: f64) -> Result<f64> {
    let value = log_value.exp();
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Overflow { x })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kwg::{kwg_pdf, kwg_sf};
    use crate::numeric::linspace;
    use crate::parent::{make_exponential, make_uniform01};

    fn series(parent: Parent, a: &[f64], b: &[f64]) -> HeterogeneousSeries {
        HeterogeneousSeries::new(parent, a.to_vec(), b.to_vec()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn construction_validates() {
        let u = make_uniform01();
        assert!(matches!(
            HeterogeneousSeries::new(u.clone(), vec![1.0, 2.0], vec![1.0]),
            Err(Error::Dimension {
                expected: 2,
                found: 1
            })
        ));
        assert!(HeterogeneousSeries::new(u.clone(), vec![], vec![]).is_err());
        assert!(HeterogeneousSeries::new(u.clone(), vec![1.0, -2.0], vec![1.0, 1.0]).is_err());
        assert!(MultipleOutlierSeries::new(u.clone(), (1.0, 1.0), 0, (2.0, 2.0), 1).is_err());
        assert!(MultipleOutlierSeries::new(u, (1.0, 1.0), 1, (0.0, 2.0), 1).is_err());
    }

    #[test]
    fn min_sf_examples() {
        let u = make_uniform01();
        let one = series(u.clone(), &[2.0], &[3.0]);
        let s = KwGShape::new(2.0, 3.0).unwrap();
        assert!(close(min_sf(&one, 0.4), kwg_sf(s, u.as_ref(), 0.4), 1e-15));
        assert!(close(
            min_sf(&series(u.clone(), &[1.0, 1.0], &[1.0, 2.0]), 0.5),
            0.125,
            1e-15
        ));
        assert!(close(
            min_sf(&series(u, &[2.0, 2.0], &[1.0, 1.0]), 0.5),
            0.5625,
            1e-15
        ));
    }

    #[test]
    fn min_hazard_examples() {
        let e = make_exponential(1.0).unwrap();
        let s = series(e, &[1.0, 1.0], &[1.0, 2.0]);
        for &x in &[0.1, 1.0, 7.0] {
            assert!(close(min_hazard(&s, x).unwrap(), 3.0, 1e-12));
        }
        let u = make_uniform01();
        assert!(close(
            min_hazard(&series(u.clone(), &[1.0, 1.0], &[1.0, 2.0]), 0.5).unwrap(),
            6.0,
            1e-14
        ));
        assert!(close(
            min_hazard(&series(u, &[2.0], &[1.0]), 0.5).unwrap(),
            4.0 / 3.0,
            1e-14
        ));
    }

    #[test]
    fn min_pdf_examples() {
        let u = make_uniform01();
        let one = series(u.clone(), &[2.0], &[2.0]);
        let s = KwGShape::new(2.0, 2.0).unwrap();
        assert!(close(
            min_pdf(&one, 0.5).unwrap(),
            kwg_pdf(s, u.as_ref(), 0.5),
            1e-14
        ));
        assert!(close(
            min_pdf(&series(u, &[1.0, 1.0], &[1.0, 2.0]), 0.5).unwrap(),
            0.75,
            1e-14
        ));
    }

    #[test]
    fn min_pdf_matches_derivative_of_cdf() {
        // oracle: central difference of 1 - min_sf
        let u = make_uniform01();
        let ce = series(u, &[6.2, 4.1, 2.0], &[1.0, 2.0, 3.0]);
        for x in linspace(0.01, 0.99, 99) {
            let h = 1e-6;
            let fd = (min_sf(&ce, x - h) - min_sf(&ce, x + h)) / (2.0 * h);
            let pdf = min_pdf(&ce, x).unwrap();
            assert!(pdf > 0.0 && pdf.is_finite());
            assert!(
                (fd - pdf).abs() <= f64::max(1e-6, 1e-4 * pdf),
                "x={x} fd={fd} pdf={pdf}"
            );
        }
    }

    #[test]
    fn hazard_is_negative_log_sf_slope() {
        let e = make_exponential(2.0).unwrap();
        let s = series(e, &[0.3, 2.5, 1.0], &[2.0, 0.4, 1.1]);
        for x in linspace(0.05, 3.0, 60) {
            let h = 1e-5 * x;
            let fd = -(min_log_sf(&s, x + h) - min_log_sf(&s, x - h)) / (2.0 * h);
            let r = min_hazard(&s, x).unwrap();
            assert!((fd - r).abs() <= f64::max(1e-5, 1e-3 * r), "x={x}");
        }
    }

    #[test]
    fn log_sf_is_sum_of_component_logs() {
        let u = make_uniform01();
        let s = series(u, &[0.01, 1.0, 5.0], &[0.005, 0.004, 0.001]);
        for x in linspace(1e-6, 1.0 - 1e-6, 101) {
            let direct: f64 = [(0.01, 0.005), (1.0, 0.004), (5.0, 0.001)]
                .iter()
                .map(|&(a, b): &(f64, f64)| b * (-x.powf(a)).ln_1p())
                .sum();
            assert!((min_log_sf(&s, x) - direct).abs() <= 1e-10 * direct.abs().max(1e-300) + 1e-18);
        }
    }

    #[test]
    fn ratios() {
        let u = make_uniform01();
        let a = series(u.clone(), &[3.0, 1.0], &[1.0, 2.0]);
        for x in linspace(0.01, 0.99, 11) {
            assert_eq!(sf_ratio(&a, &a, x).unwrap(), 1.0);
            assert_eq!(pdf_ratio(&a, &a, x).unwrap(), 1.0);
        }
        let b2 = series(u.clone(), &[1.0], &[2.0]);
        let b1 = series(u, &[1.0], &[1.0]);
        assert!(close(sf_ratio(&b2, &b1, 0.5).unwrap(), 2.0, 1e-14));
    }

    #[test]
    fn ratio_underflow_is_reported() {
        let e = make_exponential(1.0).unwrap();
        let a = series(e.clone(), &[1.0], &[3.0]);
        let b = series(e, &[1.0], &[1.0]);
        assert_eq!(sf_ratio(&a, &b, 400.0), Err(Error::Overflow { x: 400.0 }));
        assert!(close(log_sf_ratio(&a, &b, 400.0), 800.0, 1e-12));
    }

    #[test]
    fn outlier_expansion_is_exact() {
        let u = make_uniform01();
        let m = MultipleOutlierSeries::new(u.clone(), (3.0, 1.0), 2, (1.0, 2.0), 3).unwrap();
        let explicit = series(u, &[3.0, 3.0, 1.0, 1.0, 1.0], &[1.0, 1.0, 2.0, 2.0, 2.0]);
        let expanded = m.expand();
        assert_eq!(expanded.alphas(), explicit.alphas());
        assert_eq!(expanded.betas(), explicit.betas());
        for x in linspace(0.01, 0.99, 25) {
            assert_eq!(min_log_sf(&expanded, x), min_log_sf(&explicit, x));
            assert_eq!(min_log_hazard(&expanded, x), min_log_hazard(&explicit, x));
            assert_eq!(min_log_pdf(&expanded, x), min_log_pdf(&explicit, x));
        }
    }

    #[test]
    fn large_n_keeps_precision() {
        let u = make_uniform01();
        let n = 1000;
        let s = series(u, &vec![2.0; n], &vec![0.001; n]);
        // n identical factors: n * beta * ln(1 - x^2)
        let x: f64 = 0.3;
        let expected = n as f64 * 0.001 * (-x * x).ln_1p();
        assert!((min_log_sf(&s, x) - expected).abs() <= 1e-14 * expected.abs());
    }
}
