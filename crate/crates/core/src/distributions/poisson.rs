use std::sync::Arc;

use super::quantile::discrete_quantile;
use super::{Constraint, FamilySpec, ParamSpec};
use crate::descriptor::{Density, DistributionDescriptor, Kind, ParamSet, Support};
use crate::special::{ln_gamma_inc, ln_poisson_raw};

#[derive(Debug)]
struct Poisson {
    lambda: f64,
}

impl Density for Poisson {
    fn log_pdf(&self, x: f64) -> f64 {
        ln_poisson_raw(x, self.lambda)
    }

    // P(X <= k) = Q(k + 1, lambda)
    fn log_cdf(&self, x: f64) -> f64 {
        ln_gamma_inc(x + 1.0, self.lambda).1
    }

    fn log_sf(&self, x: f64) -> f64 {
        ln_gamma_inc(x + 1.0, self.lambda).0
    }

    fn quantile(&self, p: f64) -> Option<f64> {
        let s = self.lambda.sqrt();
        Some(discrete_quantile(p, 0.0, f64::INFINITY, self.lambda, s, 1.0 / s, |x| {
            self.log_cdf(x)
        }))
    }
}

pub(super) fn spec() -> FamilySpec {
    FamilySpec::new(
        "poisson",
        vec![ParamSpec::new("lambda", Constraint::Positive)],
        |p: &ParamSet| {
            let lambda = p.get("lambda").unwrap();
            Ok(DistributionDescriptor {
                family_name: "poisson".into(),
                params: p.clone(),
                kind: Kind::Discrete,
                support: Support::new(0.0, f64::INFINITY),
                mode: lambda.floor(),
                mu: lambda,
                sigma: lambda.sqrt(),
                density: Arc::new(Poisson { lambda }),
                alternate: None,
            })
        },
    )
    .alias("pois")
}
