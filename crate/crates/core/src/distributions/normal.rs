use std::sync::Arc;

use super::{Constraint, FamilySpec, ParamSpec};
use crate::descriptor::{Density, DistributionDescriptor, Kind, ParamSet, Support};
use crate::special::{ln_ndtr, ln_norm_pdf, ln_norm_sf, ndtri};

#[derive(Debug)]
struct Normal {
    mu: f64,
    sigma: f64,
}

impl Normal {
    fn z(&self, x: f64) -> f64 {
        (x - self.mu) / self.sigma
    }
}

impl Density for Normal {
    fn log_pdf(&self, x: f64) -> f64 {
        ln_norm_pdf(self.z(x)) - self.sigma.ln()
    }

    fn log_cdf(&self, x: f64) -> f64 {
        ln_ndtr(self.z(x))
    }

    fn log_sf(&self, x: f64) -> f64 {
        ln_norm_sf(self.z(x))
    }

    fn quantile(&self, p: f64) -> Option<f64> {
        Some(self.mu + self.sigma * ndtri(p))
    }
}

pub(super) fn spec() -> FamilySpec {
    FamilySpec::new(
        "normal",
        vec![
            ParamSpec::new("mu", Constraint::Real).with_default(0.0),
            ParamSpec::new("sigma", Constraint::Positive).with_default(1.0),
        ],
        |p: &ParamSet| {
            let (mu, sigma) = (p.get("mu").unwrap(), p.get("sigma").unwrap());
            Ok(DistributionDescriptor {
                family_name: "normal".into(),
                params: p.clone(),
                kind: Kind::Continuous,
                support: Support::REAL_LINE,
                mode: mu,
                mu,
                sigma,
                density: Arc::new(Normal { mu, sigma }),
                alternate: None,
            })
        },
    )
    .alias("gaussian")
    .alias("norm")
}
