use std::sync::Arc;

use super::quantile::discrete_quantile;
use super::{Constraint, FamilySpec, ParamSpec};
use crate::descriptor::{Density, DistributionDescriptor, Kind, ParamSet, Support};
use crate::special::{ln_beta_inc, ln_binom_raw};

#[derive(Debug)]
struct Binomial {
    n: f64,
    p: f64,
    q: f64,
}

impl Density for Binomial {
    fn log_pdf(&self, x: f64) -> f64 {
        ln_binom_raw(x, self.n, self.p, self.q)
    }

    // P(X > k) = I_p(k + 1, n - k)
    fn log_cdf(&self, x: f64) -> f64 {
        if x >= self.n {
            return 0.0;
        }
        ln_beta_inc(x + 1.0, self.n - x, self.p, self.q).1
    }

    fn log_sf(&self, x: f64) -> f64 {
        if x >= self.n {
            return f64::NEG_INFINITY;
        }
        ln_beta_inc(x + 1.0, self.n - x, self.p, self.q).0
    }

    fn quantile(&self, p: f64) -> Option<f64> {
        let s = (self.n * self.p * self.q).sqrt();
        Some(discrete_quantile(
            p,
            0.0,
            self.n,
            self.n * self.p,
            s,
            (self.q - self.p) / s,
            |x| self.log_cdf(x),
        ))
    }
}

pub(super) fn spec() -> FamilySpec {
    FamilySpec::new(
        "binomial",
        vec![
            ParamSpec::new("n", Constraint::PositiveInteger),
            ParamSpec::new("p", Constraint::OpenUnit),
        ],
        |ps: &ParamSet| {
            let (n, p) = (ps.get("n").unwrap(), ps.get("p").unwrap());
            Ok(DistributionDescriptor {
                family_name: "binomial".into(),
                params: ps.clone(),
                kind: Kind::Discrete,
                support: Support::new(0.0, n),
                mode: ((n + 1.0) * p).floor().clamp(0.0, n),
                mu: n * p,
                sigma: (n * p * (1.0 - p)).sqrt(),
                density: Arc::new(Binomial { n, p, q: 1.0 - p }),
                alternate: None,
            })
        },
    )
    .alias("binom")
}
