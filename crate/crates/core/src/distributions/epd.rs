//! Exponential power distribution `f(x) = exp(-|x|^beta) / (2 Γ(1/beta + 1))`.

use std::f64::consts::LN_2;
use std::sync::Arc;

use super::gamma::unit_quantile;
use super::quantile::Tail;
use super::{Constraint, FamilySpec, ParamSpec};
use crate::descriptor::{Density, DistributionDescriptor, Kind, ParamSet, Support};
use crate::error::{Error, Result};
use crate::special::{ln_gamma, ln_gamma_inc, log1mexp};

/// Shape of the exponential power law, restricted to the log-concave
/// range `beta >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpdParams {
    beta: f64,
}

impl EpdParams {
    pub fn new(beta: f64) -> Result<Self> {
        if beta >= 1.0 && beta.is_finite() {
            Ok(Self { beta })
        } else {
            Err(Error::InvalidParameter {
                family: "epd".into(),
                param: "beta".into(),
                constraint: ">= 1".into(),
                value: beta,
            })
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// `-|x|^beta - ln 2 - ln Γ(1/beta + 1)`.
pub fn epd_log_pdf(x: f64, params: &EpdParams) -> f64 {
    -x.abs().powf(params.beta) - LN_2 - ln_gamma(1.0 / params.beta + 1.0)
}

/// `|x|^beta`: maps `EPD(beta)` onto `gamma(1/beta, 1)`.
pub fn epd_to_gamma(x: f64, beta: f64) -> f64 {
    x.abs().powf(beta)
}

#[derive(Debug)]
struct Epd {
    params: EpdParams,
}

impl Epd {
    // ln P(X > x) for x >= 0
    fn upper(&self, x: f64) -> f64 {
        let b = self.params.beta;
        -LN_2 + ln_gamma_inc(1.0 / b, x.powf(b)).1
    }
}

impl Density for Epd {
    fn log_pdf(&self, x: f64) -> f64 {
        epd_log_pdf(x, &self.params)
    }

    fn log_cdf(&self, x: f64) -> f64 {
        self.log_sf(-x)
    }

    fn log_sf(&self, x: f64) -> f64 {
        if x >= 0.0 {
            self.upper(x)
        } else {
            log1mexp(self.upper(-x))
        }
    }

    fn quantile(&self, p: f64) -> Option<f64> {
        if p.is_nan() {
            return Some(f64::NAN);
        }
        if p == 0.5 {
            return Some(0.0);
        }
        let b = self.params.beta;
        let q2 = 2.0 * p.min(1.0 - p);
        let tail = if q2 <= 0.5 {
            Tail::Upper(q2)
        } else {
            Tail::Lower(1.0 - q2)
        };
        let r = unit_quantile(1.0 / b, tail).powf(1.0 / b);
        Some(if p > 0.5 { r } else { -r })
    }
}

pub(super) fn descriptor(params: EpdParams) -> DistributionDescriptor {
    let b = params.beta;
    DistributionDescriptor {
        family_name: "epd".into(),
        params: ParamSet::new().with("beta", b),
        kind: Kind::Continuous,
        support: Support::REAL_LINE,
        mode: 0.0,
        mu: 0.0,
        // 1 / f(0)
        sigma: 2.0 * ln_gamma(1.0 / b + 1.0).exp(),
        density: Arc::new(Epd { params }),
        alternate: None,
    }
}

pub(super) fn spec() -> FamilySpec {
    FamilySpec::new(
        "epd",
        vec![ParamSpec::new("beta", Constraint::AtLeast(1.0))],
        |p: &ParamSet| Ok(descriptor(EpdParams::new(p.get("beta").unwrap())?)),
    )
    .alias("exponential_power")
}
