//! Independent references for truncated moments.

use crate::descriptor::{DistributionDescriptor, Kind};
use crate::distributions;
use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::special::normal_mills_inverse;
use crate::target::{project_mode, TruncationInterval};

/// `E[Z | Z > a]` for the standard normal, strictly above `a`.
pub fn truncated_mean_oracle_normal(a: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return 0.0;
    }
    normal_mills_inverse(a)
}

/// `E[X | X > a] = lambda (1 - F(a-1)) / (1 - F(a))` for Poisson(`lambda`).
pub fn truncated_mean_oracle_poisson(lambda: f64, a: f64) -> Result<f64> {
    let d = distributions::poisson(lambda)?;
    let a = a.floor();
    let (s1, s0) = (d.log_sf(a - 1.0), d.log_sf(a));
    if s0 == f64::NEG_INFINITY {
        return Err(Error::OracleUnavailable(format!(
            "P(X > {a}) underflows for Poisson({lambda})"
        )));
    }
    Ok(lambda * (s1 - s0).exp())
}

/// Width, in base standard deviations, of the window moments are summed or
/// integrated over.
const WINDOW: f64 = 60.0;

/// Mean and standard deviation of `desc` truncated to `iv`, by exhaustive
/// summation of `exp(log_pdf)` (discrete) or adaptive quadrature
/// (continuous) over `I` intersected with a `60 sigma` window. Uses the
/// log-density only: no CDF, survival function or interval mass.
pub fn brute_force_truncated_moments(desc: &DistributionDescriptor, iv: &TruncationInterval) -> Result<(f64, f64)> {
    let lo = iv.lower().max(desc.support.lower);
    let hi = iv.upper().min(desc.support.upper);
    let span = WINDOW * desc.sigma;
    let lo_eff = if lo.is_finite() { lo } else { desc.mu.min(hi) - span };
    let hi_eff = if hi.is_finite() { hi } else { desc.mu.max(lo) + span };
    let m = project_mode(desc, iv)?;
    let shift = desc.log_pdf(m);
    if !shift.is_finite() && desc.kind == Kind::Discrete {
        return Err(Error::OracleUnavailable("log f(m) is not finite".into()));
    }

    let (w, w1, w2) = match desc.kind {
        Kind::Discrete => {
            let first = (lo_eff.floor() + 1.0).max(desc.support.lower);
            let last = hi_eff.floor();
            if last - first > 5.0e7 {
                return Err(Error::OracleUnavailable("summation window too wide".into()));
            }
            let (mut w, mut w1, mut w2) = (0.0, 0.0, 0.0);
            let mut x = first;
            while x <= last {
                let f = (desc.log_pdf(x) - shift).exp();
                let d = x - m;
                w += f;
                w1 += d * f;
                w2 += d * d * f;
                x += 1.0;
            }
            (w, w1, w2)
        }
        Kind::Continuous => {
            let shift = if shift.is_finite() { shift } else { 0.0 };
            let q = |k: i32| {
                move |x: f64| {
                    let f = (desc.log_pdf(x) - shift).exp();
                    if f == 0.0 {
                        0.0
                    } else {
                        (x - m).powi(k) * f
                    }
                }
            };
            let piece = |k: i32| {
                let mut total = 0.0;
                for (a, b) in [(lo_eff, m), (m, hi_eff)] {
                    if b > a {
                        total += integrate(q(k), a, b, 1e-13, 4000).0;
                    }
                }
                total
            };
            (piece(0), piece(1), piece(2))
        }
    };
    if !w.is_finite() || w <= 0.0 {
        return Err(Error::OracleUnavailable(
            "truncated mass vanished inside the summation window".into(),
        ));
    }
    let c1 = w1 / w;
    let var = (w2 / w - c1 * c1).max(0.0);
    Ok((m + c1, var.sqrt()))
}
