//! Log-space special functions.
//!
//! Everything here returns logarithms of probabilities (or of ratios of
//! them) so that tail quantities stay meaningful long after their linear
//! counterparts have underflowed.

mod beta;
mod gamma;
mod loader;
mod normal;

pub use beta::ln_beta_inc;
pub use gamma::{ln_gamma, ln_gamma_inc};
pub use loader::{bd0, ln_binom_raw, ln_poisson_raw, stirlerr};
pub use normal::{ln_mills_ratio, ln_ndtr, ln_norm_pdf, ln_norm_sf, ndtri, normal_mills_inverse};

use std::f64::consts::LN_2;

use crate::error::{Error, Result};

/// `ln(sqrt(2π))`.
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Natural log of the smallest positive (subnormal) `f64`.
///
/// Probabilities whose logarithm falls below this value cannot be held by a
/// double at all; interval masses past this point are reported as `-inf`.
pub const LN_MIN_POSITIVE: f64 = -744.440_071_921_381_2;

/// `ln(1 - e^x)` for `x <= 0`, switching between the `expm1` and `log1p`
/// forms at `-ln 2` to keep full relative accuracy.
pub fn log1mexp(x: f64) -> f64 {
    if x > 0.0 || x.is_nan() {
        f64::NAN
    } else if x == 0.0 {
        f64::NEG_INFINITY
    } else if x > -LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// `ln(e^a + e^b)`.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    if hi == f64::INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(e^la - e^lb)` without leaving log space.
///
/// Returns `-inf` when `la == lb` and a domain error when `la < lb`.
pub fn log_diff_exp(la: f64, lb: f64) -> Result<f64> {
    if la.is_nan() || lb.is_nan() {
        return Err(Error::Domain(format!("log_diff_exp: NaN argument ({la}, {lb})")));
    }
    if la < lb {
        return Err(Error::Domain(format!(
            "log_diff_exp: first argument {la} is below second argument {lb}"
        )));
    }
    if lb == f64::NEG_INFINITY {
        return Ok(la);
    }
    if la == lb {
        return Ok(f64::NEG_INFINITY);
    }
    if la == f64::INFINITY {
        return Err(Error::Domain("log_diff_exp: infinite minuend".into()));
    }
    Ok(la + log1mexp(lb - la))
}

/// Numerically stable `ln(sum(exp(xs)))`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}
