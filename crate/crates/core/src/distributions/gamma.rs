//! Gamma with shape `alpha` and rate `lambda`, plus the exponential as its
//! `alpha = 1` member. Shapes below one are not log-concave; for those the
//! family installs an exception route drawing `EPD(1/alpha)` variates and
//! mapping them through `|x|^beta / lambda`.

use std::sync::Arc;

use super::epd::{self, EpdParams};
use super::quantile::{invert_continuous, Tail};
use super::{Constraint, ExceptionHandler, FamilySpec, ParamSpec};
use crate::batch::{ImputationPolicy, ImputeMode};
use crate::descriptor::{BaseSampler, Density, DistributionDescriptor, Kind, ParamSet, Support};
use crate::devroye::ds_sample_continuous;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::special::{ln_gamma, ln_gamma_inc, ln_poisson_raw, ndtri};
use crate::target::TruncatedTarget;

/// Log-density of the unit-rate gamma at `z > 0`.
fn unit_log_pdf(alpha: f64, z: f64) -> f64 {
    if alpha >= 1.0 {
        ln_poisson_raw(alpha - 1.0, z)
    } else {
        (alpha / z).ln() + ln_poisson_raw(alpha, z)
    }
}

/// Unit-rate gamma quantile, solving in whichever tail `tail` names.
pub(super) fn unit_quantile(alpha: f64, tail: Tail) -> f64 {
    if alpha == 1.0 {
        return match tail {
            Tail::Lower(p) => -(-p).ln_1p(),
            Tail::Upper(q) => -q.ln(),
        };
    }
    let zn = match tail {
        Tail::Lower(p) => ndtri(p),
        Tail::Upper(q) => -ndtri(q),
    };
    // Wilson–Hilferty
    let h = 1.0 - 1.0 / (9.0 * alpha) + zn / (3.0 * alpha.sqrt());
    let mut guess = alpha * h * h * h;
    if !guess.is_finite() || guess <= 0.0 {
        guess = match tail {
            Tail::Lower(p) => ((p.ln() + ln_gamma(alpha + 1.0)) / alpha).exp(),
            Tail::Upper(_) => alpha,
        };
    }
    invert_continuous(
        tail,
        guess,
        0.0,
        |z| ln_gamma_inc(alpha, z).0.exp(),
        |z| ln_gamma_inc(alpha, z).1.exp(),
        |z| unit_log_pdf(alpha, z).exp(),
    )
}

#[derive(Debug)]
struct Gamma {
    alpha: f64,
    lambda: f64,
}

impl Density for Gamma {
    fn log_pdf(&self, x: f64) -> f64 {
        if x == 0.0 {
            return match self.alpha.partial_cmp(&1.0) {
                Some(std::cmp::Ordering::Less) => f64::INFINITY,
                Some(std::cmp::Ordering::Equal) => self.lambda.ln(),
                _ => f64::NEG_INFINITY,
            };
        }
        self.lambda.ln() + unit_log_pdf(self.alpha, self.lambda * x)
    }

    fn log_cdf(&self, x: f64) -> f64 {
        if self.alpha == 1.0 {
            return crate::special::log1mexp(-self.lambda * x);
        }
        ln_gamma_inc(self.alpha, self.lambda * x).0
    }

    fn log_sf(&self, x: f64) -> f64 {
        if self.alpha == 1.0 {
            return -self.lambda * x;
        }
        ln_gamma_inc(self.alpha, self.lambda * x).1
    }

    fn quantile(&self, p: f64) -> Option<f64> {
        if p.is_nan() {
            return Some(f64::NAN);
        }
        Some(unit_quantile(self.alpha, Tail::for_p(p)) / self.lambda)
    }
}

fn descriptor(family: &str, params: &ParamSet, alpha: f64, lambda: f64) -> DistributionDescriptor {
    DistributionDescriptor {
        family_name: family.into(),
        params: params.clone(),
        kind: Kind::Continuous,
        support: Support::new(0.0, f64::INFINITY),
        mode: if alpha >= 1.0 { (alpha - 1.0) / lambda } else { 0.0 },
        mu: alpha / lambda,
        sigma: alpha.sqrt() / lambda,
        density: Arc::new(Gamma { alpha, lambda }),
        alternate: None,
    }
}

/// Base sampler for gamma shapes below one: untruncated DS on
/// `EPD(beta = 1/alpha)`, then `|x|^beta / lambda`.
#[derive(Debug)]
pub struct EpdGammaSampler {
    beta: f64,
    lambda: f64,
    epd: TruncatedTarget,
    policy: ImputationPolicy,
}

impl EpdGammaSampler {
    pub fn new(alpha: f64, lambda: f64) -> Result<Self> {
        let beta = 1.0 / alpha;
        let epd = TruncatedTarget::untruncated(epd::descriptor(EpdParams::new(beta)?))?;
        Ok(Self {
            beta,
            lambda,
            epd,
            policy: ImputationPolicy {
                mode: ImputeMode::Error,
                ..ImputationPolicy::default()
            },
        })
    }
}

impl BaseSampler for EpdGammaSampler {
    fn draw(&self, rng: &mut RngStream) -> Result<(f64, u64)> {
        let d = ds_sample_continuous(&self.epd, rng, &self.policy).map_err(|e| Error::SamplerBreakdown {
            index: 0,
            reason: format!("EPD route: {e}"),
        })?;
        Ok((epd::epd_to_gamma(d.value, self.beta) / self.lambda, d.proposals))
    }
}

pub(super) fn spec() -> FamilySpec {
    FamilySpec::new(
        "gamma",
        vec![
            ParamSpec::new("alpha", Constraint::Positive),
            ParamSpec::new("lambda", Constraint::Positive).with_default(1.0),
        ],
        |p: &ParamSet| {
            let (alpha, lambda) = (p.get("alpha").unwrap(), p.get("lambda").unwrap());
            Ok(descriptor("gamma", p, alpha, lambda))
        },
    )
    .with_exception(ExceptionHandler {
        description: "alpha < 1: sample EPD(1/alpha) by DS and map through |x|^(1/alpha)".into(),
        applies: Arc::new(|p: &ParamSet| p.get("alpha").is_some_and(|a| a < 1.0)),
        route: Arc::new(|p: &ParamSet| {
            let s = EpdGammaSampler::new(p.get("alpha").unwrap(), p.get("lambda").unwrap())?;
            Ok(Arc::new(s) as Arc<dyn BaseSampler>)
        }),
    })
}

pub(super) fn exponential_spec() -> FamilySpec {
    FamilySpec::new(
        "exponential",
        vec![ParamSpec::new("lambda", Constraint::Positive).with_default(1.0)],
        |p: &ParamSet| Ok(descriptor("exponential", p, 1.0, p.get("lambda").unwrap())),
    )
    .alias("exp")
}
