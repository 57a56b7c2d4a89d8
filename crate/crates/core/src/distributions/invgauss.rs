//! Inverse Gaussian with mean `mu` and shape `lambda`.
//!
//! The log-density is concave only on `x <= 2 lambda / 3`; past that point
//! the far right tail is log-convex and the DS envelope is not guaranteed.

use std::f64::consts::PI;
use std::sync::Arc;

use super::quantile::{invert_continuous, Tail};
use super::{Constraint, FamilySpec, ParamSpec};
use crate::descriptor::{Density, DistributionDescriptor, Kind, ParamSet, Support};
use crate::special::{ln_mills_ratio, ln_ndtr, ln_norm_pdf, ln_norm_sf, log_add_exp, log_diff_exp};

#[derive(Debug)]
struct InverseGaussian {
    mu: f64,
    lambda: f64,
}

impl InverseGaussian {
    fn r(&self, x: f64) -> (f64, f64) {
        let s = (self.lambda / x).sqrt();
        (s * (x / self.mu - 1.0), s * (x / self.mu + 1.0))
    }
}

impl Density for InverseGaussian {
    fn log_pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let d = x - self.mu;
        0.5 * (self.lambda.ln() - (2.0 * PI).ln() - 3.0 * x.ln()) - self.lambda * d * d / (2.0 * self.mu * self.mu * x)
    }

    fn log_cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let (r1, r2) = self.r(x);
        log_add_exp(ln_ndtr(r1), 2.0 * self.lambda / self.mu + ln_ndtr(-r2))
    }

    fn log_sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let (r1, r2) = self.r(x);
        if r1 > 0.0 {
            // e^{2λ/μ} Φ̄(r2) = φ(r1) R(r2), with R the Mills ratio
            let diff = ln_mills_ratio(r1).exp() - ln_mills_ratio(r2).exp();
            if diff > 0.0 {
                return ln_norm_pdf(r1) + diff.ln();
            }
            return f64::NEG_INFINITY;
        }
        log_diff_exp(ln_norm_sf(r1), 2.0 * self.lambda / self.mu + ln_norm_sf(r2)).unwrap_or(f64::NEG_INFINITY)
    }

    fn quantile(&self, p: f64) -> Option<f64> {
        if p.is_nan() {
            return Some(f64::NAN);
        }
        Some(invert_continuous(
            Tail::for_p(p),
            self.mu,
            0.0,
            |x| self.log_cdf(x).exp(),
            |x| self.log_sf(x).exp(),
            |x| self.log_pdf(x).exp(),
        ))
    }
}

pub(super) fn spec() -> FamilySpec {
    FamilySpec::new(
        "inverse_gaussian",
        vec![
            ParamSpec::new("mu", Constraint::Positive),
            ParamSpec::new("lambda", Constraint::Positive),
        ],
        |p: &ParamSet| {
            let (mu, lambda) = (p.get("mu").unwrap(), p.get("lambda").unwrap());
            let t = 1.5 * mu / lambda;
            // mu (sqrt(1 + t^2) - t), rationalized
            let mode = mu / ((1.0 + t * t).sqrt() + t);
            Ok(DistributionDescriptor {
                family_name: "inverse_gaussian".into(),
                params: p.clone(),
                kind: Kind::Continuous,
                support: Support::new(0.0, f64::INFINITY),
                mode,
                mu,
                sigma: (mu * mu * mu / lambda).sqrt(),
                density: Arc::new(InverseGaussian { mu, lambda }),
                alternate: None,
            })
        },
    )
    .alias("invgauss")
    .alias("wald")
}
