//! Parent distributions `F` from which Kw-G laws are generated.
//!
//! A parent is any absolutely continuous law on an open interval that can
//! report its cdf, density and quantile, together with the log-forms the
//! rest of the crate relies on for precision. Three parents ship built in
//! (`uniform01`, `exponential(rate)`, `weibull(shape, rate_coeff)`); other
//! laws plug in by implementing [`ParentDistribution`].
//!
//! Evaluation exactly at (or beyond) a support endpoint returns the analytic
//! limit rather than an error.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{ensure_open_unit, ensure_positive, Error, Result};
use crate::numeric::log1mexp;

/// Open support interval `(lo, hi)` on the extended real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub lo: f64,
    pub hi: f64,
}

impl Support {
    pub fn contains_interior(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }
}

/// The parent cdf `F` of a Kw-G family.
///
/// Implementors must keep `log_cdf`, `log_sf` and `log_pdf` accurate in the
/// tails; the survival powers `(1 - F^a)^b` are assembled from them.
pub trait ParentDistribution: fmt::Debug + Send + Sync {
    fn support(&self) -> Support;
    fn cdf(&self, x: f64) -> f64;
    fn pdf(&self, x: f64) -> f64;
    /// `ln F(x)`.
    fn log_cdf(&self, x: f64) -> f64;
    /// `ln(1 - F(x))`.
    fn log_sf(&self, x: f64) -> f64;
    /// `ln f(x)`.
    fn log_pdf(&self, x: f64) -> f64;
    /// Inverse cdf on `(0, 1)`.
    fn quantile(&self, p: f64) -> Result<f64>;
    /// Scenario identifier, e.g. `weibull(4.4, 3)`.
    fn label(&self) -> String;
}

/// Shared handle to a parent.
pub type Parent = Arc<dyn ParentDistribution>;

/// `ln(1 - F(x)^s)` for `s > 0`.
///
/// When `F(x)` is within ~4e-18 of one the first-order form
/// `ln s + ln(1 - F(x))` is used, so the result stays finite long after
/// `F(x)` itself rounds to one.
pub fn log_one_minus_cdf_pow(parent: &dyn ParentDistribution, s: f64, x: f64) -> f64 {
    let log_sf = parent.log_sf(x);
    if log_sf < -40.0 {
        return s.ln() + log_sf;
    }
    log1mexp(s * parent.log_cdf(x))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uniform01;

impl ParentDistribution for Uniform01 {
    fn support(&self) -> Support {
        Support { lo: 0.0, hi: 1.0 }
    }

    fn cdf(&self, x: f64) -> f64 {
        x.clamp(0.0, 1.0)
    }

    fn pdf(&self, x: f64) -> f64 {
        if (0.0..=1.0).contains(&x) {
            1.0
        } else {
            0.0
        }
    }

    fn log_cdf(&self, x: f64) -> f64 {
        self.cdf(x).ln()
    }

    fn log_sf(&self, x: f64) -> f64 {
        (-self.cdf(x)).ln_1p()
    }

    fn log_pdf(&self, x: f64) -> f64 {
        self.pdf(x).ln()
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        ensure_open_unit("p", p)?;
        Ok(p)
    }

    fn label(&self) -> String {
        "uniform01".to_string()
    }
}

/// `F(x) = 1 - exp(-rate x)` on `(0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponential {
    rate: f64,
}

impl Exponential {
    pub fn new(rate: f64) -> Result<Self> {
        ensure_positive("rate", rate)?;
        Ok(Self { rate })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }
}

impl ParentDistribution for Exponential {
    fn support(&self) -> Support {
        Support {
            lo: 0.0,
            hi: f64::INFINITY,
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -(-self.rate * x).exp_m1()
        }
    }

    fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.rate * (-self.rate * x).exp()
        }
    }

    fn log_cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            f64::NEG_INFINITY
        } else {
            log1mexp(-self.rate * x)
        }
    }

    fn log_sf(&self, x: f64) -> f64 {
        -self.rate * x.max(0.0)
    }

    fn log_pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            f64::NEG_INFINITY
        } else {
            self.rate.ln() - self.rate * x
        }
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        ensure_open_unit("p", p)?;
        Ok(-(-p).ln_1p() / self.rate)
    }

    fn label(&self) -> String {
        format!("exponential({})", self.rate)
    }
}

/// `F(x) = 1 - exp(-rate_coeff x^shape)` on `(0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weibull {
    shape: f64,
    rate_coeff: f64,
}

impl Weibull {
    pub fn new(shape: f64, rate_coeff: f64) -> Result<Self> {
        ensure_positive("shape", shape)?;
        ensure_positive("rate_coeff", rate_coeff)?;
        Ok(Self { shape, rate_coeff })
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn rate_coeff(&self) -> f64 {
        self.rate_coeff
    }

    fn cumulative_hazard(&self, x: f64) -> f64 {
        self.rate_coeff * x.powf(self.shape)
    }
}

impl ParentDistribution for Weibull {
    fn support(&self) -> Support {
        Support {
            lo: 0.0,
            hi: f64::INFINITY,
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -(-self.cumulative_hazard(x)).exp_m1()
        }
    }

    fn pdf(&self, x: f64) -> f64 {
        self.log_pdf(x).exp()
    }

    fn log_cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            f64::NEG_INFINITY
        } else {
            log1mexp(-self.cumulative_hazard(x))
        }
    }

    fn log_sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -self.cumulative_hazard(x)
        }
    }

    fn log_pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return f64::NEG_INFINITY;
        }
        (self.rate_coeff * self.shape).ln() + (self.shape - 1.0) * x.ln()
            - self.cumulative_hazard(x)
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        ensure_open_unit("p", p)?;
        Ok((-(-p).ln_1p() / self.rate_coeff).powf(1.0 / self.shape))
    }

    fn label(&self) -> String {
        format!("weibull({}, {})", self.shape, self.rate_coeff)
    }
}

pub fn make_uniform01() -> Parent {
    Arc::new(Uniform01)
}

pub fn make_exponential(rate: f64) -> Result<Parent> {
    Ok(Arc::new(Exponential::new(rate)?))
}

pub fn make_weibull(shape: f64, rate_coeff: f64) -> Result<Parent> {
    Ok(Arc::new(Weibull::new(shape, rate_coeff)?))
}

/// Parsed form of a parent identifier as it appears in scenario files.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParentSpec {
    Uniform01,
    Exponential { rate: f64 },
    Weibull { shape: f64, rate_coeff: f64 },
}

impl ParentSpec {
    pub fn build(&self) -> Result<Parent> {
        match *self {
            ParentSpec::Uniform01 => Ok(make_uniform01()),
            ParentSpec::Exponential { rate } => make_exponential(rate),
            ParentSpec::Weibull { shape, rate_coeff } => make_weibull(shape, rate_coeff),
        }
    }
}

impl fmt::Display for ParentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParentSpec::Uniform01 => write!(f, "uniform01"),
            ParentSpec::Exponential { rate } => write!(f, "exponential({rate})"),
            ParentSpec::Weibull { shape, rate_coeff } => {
                write!(f, "weibull({shape}, {rate_coeff})")
            }
        }
    }
}

impl FromStr for ParentSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(open) => {
                let close = s
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Unknown(s.to_string()))?;
                let args: std::result::Result<Vec<f64>, _> = close[open + 1..]
                    .split(',')
                    .map(|a| a.trim().parse::<f64>())
                    .collect();
                (
                    s[..open].trim(),
                    args.map_err(|_| Error::Unknown(s.to_string()))?,
                )
            }
            None => (s, Vec::new()),
        };
        let spec = match (name, args.as_slice()) {
            ("uniform01", []) => ParentSpec::Uniform01,
            ("exponential", &[rate]) => ParentSpec::Exponential { rate },
            ("weibull", &[shape, rate_coeff]) => ParentSpec::Weibull { shape, rate_coeff },
            _ => return Err(Error::Unknown(s.to_string())),
        };
        // validate parameters eagerly
        spec.build()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::linspace;

    fn builtins() -> Vec<Parent> {
        vec![
            make_uniform01(),
            make_exponential(2.0).unwrap(),
            make_exponential(0.3).unwrap(),
            make_weibull(4.4, 3.0).unwrap(),
            make_weibull(0.4, 0.2).unwrap(),
            make_weibull(2.0, 1.0).unwrap(),
        ]
    }

    #[test]
    fn uniform_identities() {
        let u = make_uniform01();
        assert_eq!(u.cdf(0.3), 0.3);
        assert_eq!(u.quantile(0.75).unwrap(), 0.75);
        assert_eq!(u.pdf(0.5), 1.0);
    }

    #[test]
    fn exponential_values() {
        let e2 = make_exponential(2.0).unwrap();
        assert_eq!(e2.cdf(0.0), 0.0);
        let e1 = make_exponential(1.0).unwrap();
        assert!((e1.cdf(std::f64::consts::LN_2) - 0.5).abs() < 1e-15);
        let q = e2.quantile(0.5).unwrap();
        assert!((q - std::f64::consts::LN_2 / 2.0).abs() < 1e-15);
        assert!((q - 0.34657).abs() < 1e-5);
    }

    #[test]
    fn weibull_values_at_one() {
        let w1 = make_weibull(4.4, 3.0).unwrap();
        assert!((w1.cdf(1.0) - (1.0 - (-3.0_f64).exp())).abs() < 1e-15);
        assert!((w1.cdf(1.0) - 0.950213).abs() < 1e-6);
        let w2 = make_weibull(0.4, 0.2).unwrap();
        assert!((w2.cdf(1.0) - 0.181269).abs() < 1e-6);
    }

    #[test]
    fn weibull_shape_one_is_exponential() {
        let w = make_weibull(1.0, 1.7).unwrap();
        let e = make_exponential(1.7).unwrap();
        for x in linspace(1e-4, 20.0, 500) {
            assert!((w.cdf(x) - e.cdf(x)).abs() < 1e-12);
            assert!((w.pdf(x) - e.pdf(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn nonpositive_parameters_are_rejected() {
        assert!(matches!(
            make_exponential(0.0),
            Err(Error::ParameterDomain { .. })
        ));
        assert!(matches!(
            make_exponential(-1.0),
            Err(Error::ParameterDomain { .. })
        ));
        assert!(make_weibull(0.0, 1.0).is_err());
        assert!(make_weibull(1.0, -2.0).is_err());
        assert!(make_uniform01().quantile(1.0).is_err());
    }

    #[test]
    fn endpoints_return_limits() {
        for p in builtins() {
            let s = p.support();
            assert_eq!(p.cdf(s.lo), 0.0, "{}", p.label());
            assert_eq!(p.log_sf(s.lo), 0.0, "{}", p.label());
        }
        assert_eq!(make_uniform01().cdf(1.0), 1.0);
        assert_eq!(make_exponential(1.0).unwrap().cdf(f64::INFINITY), 1.0);
    }

    fn interior_grid(p: &dyn ParentDistribution) -> Vec<f64> {
        linspace(1e-4, 1.0 - 1e-4, 1000)
            .into_iter()
            .map(|u| p.quantile(u).unwrap())
            .collect()
    }

    #[test]
    fn cdf_nondecreasing_and_pdf_nonnegative() {
        for p in builtins() {
            let xs = interior_grid(p.as_ref());
            for w in xs.windows(2) {
                assert!(p.cdf(w[0]) <= p.cdf(w[1]), "{}", p.label());
            }
            assert!(xs.iter().all(|&x| p.pdf(x) >= 0.0));
        }
    }

    #[test]
    fn quantile_round_trip() {
        for p in builtins() {
            for x in interior_grid(p.as_ref()) {
                let back = p.quantile(p.cdf(x)).unwrap();
                assert!(
                    (back - x).abs() <= 1e-8 * x.abs().max(1e-300),
                    "{} at {x}",
                    p.label()
                );
            }
        }
    }

    #[test]
    fn log_cdf_consistency() {
        for p in builtins() {
            for x in interior_grid(p.as_ref()) {
                let c = p.cdf(x);
                if c > 1e-300 {
                    assert!(
                        (p.log_cdf(x).exp() - c).abs() <= 1e-12 * c,
                        "{} at {x}",
                        p.label()
                    );
                }
            }
        }
    }

    #[test]
    fn density_matches_central_difference() {
        for p in builtins() {
            for x in interior_grid(p.as_ref()).into_iter().step_by(7) {
                let h = 1e-5 * x.abs();
                let fd = (p.cdf(x + h) - p.cdf(x - h)) / (2.0 * h);
                let pdf = p.pdf(x);
                assert!(
                    (fd - pdf).abs() <= f64::max(1e-6, 1e-4 * pdf.abs()),
                    "{} at {x}: fd={fd} pdf={pdf}",
                    p.label()
                );
            }
        }
    }

    #[test]
    fn log_one_minus_power_in_far_tail() {
        // F = 1 - e^{-t} with t = 1e5: 1 - F^s ~ s e^{-t}
        let w = make_weibull(1.0, 1.0).unwrap();
        let v = log_one_minus_cdf_pow(w.as_ref(), 0.02, 1e5);
        assert!((v - (0.02_f64.ln() - 1e5)).abs() < 1e-9);
        // moderate region agrees with the naive form
        let u = make_uniform01();
        let naive = (1.0 - 0.3_f64.powf(2.5)).ln();
        assert!((log_one_minus_cdf_pow(u.as_ref(), 2.5, 0.3) - naive).abs() < 1e-15);
    }

    #[test]
    fn parent_spec_parsing() {
        assert_eq!(
            "uniform01".parse::<ParentSpec>().unwrap(),
            ParentSpec::Uniform01
        );
        assert_eq!(
            "exponential(2)".parse::<ParentSpec>().unwrap(),
            ParentSpec::Exponential { rate: 2.0 }
        );
        assert_eq!(
            " weibull(4.4, 3) ".parse::<ParentSpec>().unwrap(),
            ParentSpec::Weibull {
                shape: 4.4,
                rate_coeff: 3.0
            }
        );
        assert!("gamma(2)".parse::<ParentSpec>().is_err());
        assert!("exponential(-1)".parse::<ParentSpec>().is_err());
        assert!("weibull(1)".parse::<ParentSpec>().is_err());
        let spec: ParentSpec = "weibull(0.4, 0.2)".parse().unwrap();
        assert_eq!(spec.to_string(), "weibull(0.4, 0.2)");
        assert_eq!(spec.build().unwrap().label(), "weibull(0.4, 0.2)");
    }
}
