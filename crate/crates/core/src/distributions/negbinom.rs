//! Negative binomial counting failures: `f(x) = C(x+n-1, x) p^x (1-p)^n`,
//! mean `np/(1-p)`. The schema keeps `n >= 1`, where the law is log-concave.

use std::sync::Arc;

use super::quantile::discrete_quantile;
use super::{Constraint, FamilySpec, ParamSpec};
use crate::descriptor::{Density, DistributionDescriptor, Kind, ParamSet, Support};
use crate::special::{ln_beta_inc, ln_binom_raw};

#[derive(Debug)]
struct NegBinomial {
    n: f64,
    p: f64,
    q: f64,
}

impl Density for NegBinomial {
    fn log_pdf(&self, x: f64) -> f64 {
        (self.n / (self.n + x)).ln() + ln_binom_raw(self.n, self.n + x, self.q, self.p)
    }

    // P(X > k) = I_p(k + 1, n)
    fn log_cdf(&self, x: f64) -> f64 {
        ln_beta_inc(x + 1.0, self.n, self.p, self.q).1
    }

    fn log_sf(&self, x: f64) -> f64 {
        ln_beta_inc(x + 1.0, self.n, self.p, self.q).0
    }

    fn quantile(&self, p: f64) -> Option<f64> {
        let mu = self.n * self.p / self.q;
        let s = (self.n * self.p).sqrt() / self.q;
        Some(discrete_quantile(
            p,
            0.0,
            f64::INFINITY,
            mu,
            s,
            (1.0 + self.p) / (self.n * self.p).sqrt(),
            |x| self.log_cdf(x),
        ))
    }
}

pub(super) fn spec() -> FamilySpec {
    FamilySpec::new(
        "negative_binomial",
        vec![
            ParamSpec::new("n", Constraint::AtLeast(1.0)),
            ParamSpec::new("p", Constraint::OpenUnit),
        ],
        |ps: &ParamSet| {
            let (n, p) = (ps.get("n").unwrap(), ps.get("p").unwrap());
            let q = 1.0 - p;
            let mode = if n > 1.0 { ((n - 1.0) * p / q).floor() } else { 0.0 };
            Ok(DistributionDescriptor {
                family_name: "negative_binomial".into(),
                params: ps.clone(),
                kind: Kind::Discrete,
                support: Support::new(0.0, f64::INFINITY),
                mode,
                mu: n * p / q,
                sigma: (n * p).sqrt() / q,
                density: Arc::new(NegBinomial { n, p, q }),
                alternate: None,
            })
        },
    )
    .alias("nbinom")
    .alias("negbinom")
}
