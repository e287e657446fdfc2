//! Single-variable Kw-G distribution functions.
//!
//! For a parent cdf `F` and shapes `alpha, beta > 0` the Kw-G cdf is
//! `G(x) = 1 - (1 - F(x)^alpha)^beta`. Every power is evaluated as an
//! exponential of a logarithm, and `(1 - F^alpha)^beta` goes through
//! [`log_one_minus_cdf_pow`], so shapes in the 1e-3 range keep full
//! precision.

use crate::error::{ensure_open_unit, ensure_positive, Error, Result};
use crate::parent::{log_one_minus_cdf_pow, ParentDistribution};

/// Survival values below this are rejected by the linear-scale hazard API.
pub const SF_FLOOR: f64 = 1e-300;

/// Shape pair `(alpha, beta)`, both strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KwGShape {
    alpha: f64,
    beta: f64,
}

impl KwGShape {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        ensure_positive("alpha", alpha)?;
        ensure_positive("beta", beta)?;
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// `ln(1 - G(x)) = beta * ln(1 - F(x)^alpha)`.
pub fn kwg_log_sf(shape: KwGShape, parent: &dyn ParentDistribution, x: f64) -> f64 {
    shape.beta * log_one_minus_cdf_pow(parent, shape.alpha, x)
}

pub fn kwg_sf(shape: KwGShape, parent: &dyn ParentDistribution, x: f64) -> f64 {
    kwg_log_sf(shape, parent, x).exp()
}

pub fn kwg_cdf(shape: KwGShape, parent: &dyn ParentDistribution, x: f64) -> f64 {
    -kwg_log_sf(shape, parent, x).exp_m1()
}

/// `ln g(x)` with `g = alpha beta F^{alpha-1} f (1 - F^alpha)^{beta-1}`.
pub fn kwg_log_pdf(shape: KwGShape, parent: &dyn ParentDistribution, x: f64) -> f64 {
    let log_tail = log_one_minus_cdf_pow(parent, shape.alpha, x);
    shape.alpha.ln()
        + shape.beta.ln()
        + (shape.alpha - 1.0) * parent.log_cdf(x)
        + parent.log_pdf(x)
        + (shape.beta - 1.0) * log_tail
}

pub fn kwg_pdf(shape: KwGShape, parent: &dyn ParentDistribution, x: f64) -> f64 {
    kwg_log_pdf(shape, parent, x).exp()
}

/// `ln r(x)` with `r = alpha beta F^{alpha-1} f / (1 - F^alpha)`.
///
/// Has no underflow guard; stays finite deep into the right tail.
pub fn kwg_log_hazard(shape: KwGShape, parent: &dyn ParentDistribution, x: f64) -> f64 {
    shape.alpha.ln() + shape.beta.ln() + (shape.alpha - 1.0) * parent.log_cdf(x) + parent.log_pdf(x)
        - log_one_minus_cdf_pow(parent, shape.alpha, x)
}

/// Hazard rate `g / (1 - G)`.
///
/// Fails with [`Error::Overflow`] where the survival probability drops
/// below [`SF_FLOOR`].
pub fn kwg_hazard(shape: KwGShape, parent: &dyn ParentDistribution, x: f64) -> Result<f64> {
    if kwg_log_sf(shape, parent, x) < SF_FLOOR.ln() {
        return Err(Error::Overflow { x });
    }
    Ok(kwg_log_hazard(shape, parent, x).exp())
}

/// Closed-form inverse `F^{-1}((1 - (1 - p)^{1/beta})^{1/alpha})`.
pub fn kwg_quantile(shape: KwGShape, parent: &dyn ParentDistribution, p: f64) -> Result<f64> {
    ensure_open_unit("p", p)?;
    // 1 - (1-p)^{1/beta}
    let inner = -((-p).ln_1p() / shape.beta).exp_m1();
    let u = (inner.ln() / shape.alpha).exp();
    if u <= 0.0 {
        return Ok(parent.support().lo);
    }
    if u >= 1.0 {
        return Ok(parent.support().hi);
    }
    parent.quantile(u)
}
