//! Geometric law on `{0, 1, ...}`: `f(x) = p (1-p)^x`.

use std::sync::Arc;

use super::{Constraint, FamilySpec, ParamSpec};
use crate::descriptor::{Density, DistributionDescriptor, Kind, ParamSet, Support};
use crate::special::log1mexp;

#[derive(Debug)]
struct Geometric {
    ln_p: f64,
    ln_q: f64,
}

impl Density for Geometric {
    fn log_pdf(&self, x: f64) -> f64 {
        self.ln_p + x * self.ln_q
    }

    fn log_cdf(&self, x: f64) -> f64 {
        log1mexp(self.log_sf(x))
    }

    fn log_sf(&self, x: f64) -> f64 {
        (x + 1.0) * self.ln_q
    }

    fn quantile(&self, p: f64) -> Option<f64> {
        if p.is_nan() {
            return Some(f64::NAN);
        }
        if p >= 1.0 {
            return Some(f64::INFINITY);
        }
        // fuzz guards against landing one step high when F(x) == p exactly
        let x = ((-p).ln_1p() / self.ln_q - 1.0 - 1e-12).ceil();
        Some(x.max(0.0))
    }
}

pub(super) fn spec() -> FamilySpec {
    FamilySpec::new(
        "geometric",
        vec![ParamSpec::new("p", Constraint::OpenUnit)],
        |ps: &ParamSet| {
            let p = ps.get("p").unwrap();
            Ok(DistributionDescriptor {
                family_name: "geometric".into(),
                params: ps.clone(),
                kind: Kind::Discrete,
                support: Support::new(0.0, f64::INFINITY),
                mode: 0.0,
                mu: 0.0,
                sigma: (1.0 - p).sqrt() / p,
                density: Arc::new(Geometric {
                    ln_p: p.ln(),
                    ln_q: (-p).ln_1p(),
                }),
                alternate: None,
            })
        },
    )
    .alias("geom")
}
