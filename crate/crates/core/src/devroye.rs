//! Devroye's rejection sampler for truncated log-concave targets.
//!
//! Both variants propose from the universal envelope
//! `f_I(x) <= c min{1, exp(1 - c|x - m|)}`, `c = f_I(m)`, and run the
//! acceptance test on the log scale relative to the peak, so the target's
//! normalization never has to be exponentiated.

use crate::batch::{collect_batch, Draw, ImputationPolicy, Method, SampleBatch};
use crate::descriptor::Kind;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::target::TruncatedTarget;

fn check_peak(t: &TruncatedTarget) -> Result<()> {
    if t.log_peak().is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "log f_I(m) = {} is not finite; {} is not log-concave here",
            t.log_peak(),
            t.base().family_name
        )))
    }
}

/// One variate from a continuous truncated target.
pub fn ds_sample_continuous(t: &TruncatedTarget, rng: &mut RngStream, policy: &ImputationPolicy) -> Result<Draw> {
    if t.is_degenerate() {
        return policy.impute(t, "log P(I) underflowed to -inf", 0);
    }
    check_peak(t)?;
    let log_c = t.log_peak();
    let inv_c = (-log_c).exp();
    let m = t.proj_mode();
    for k in 1..=policy.max_iterations {
        let u = 2.0 * rng.uniform();
        let e = rng.exponential();
        let (x, z) = if u <= 1.0 {
            (u, -e)
        } else {
            let e2 = rng.exponential();
            (1.0 + e2, -e - e2)
        };
        let y = m + rng.sign() * x * inv_c;
        if z <= t.trunc_log_pdf(y) - log_c {
            return Ok(Draw {
                value: y,
                imputed: false,
                proposals: k,
            });
        }
    }
    policy.impute(t, "rejection loop hit max_iterations", policy.max_iterations)
}

/// One variate from a discrete truncated target.
///
/// The acceptance test compares against the continuous, unsigned offset
/// `Y` drawn from the envelope, before rounding; that keeps the output
/// exactly proportional to the target pmf with acceptance rate
/// `1 / (4 + c)`.
pub fn ds_sample_discrete(t: &TruncatedTarget, rng: &mut RngStream, policy: &ImputationPolicy) -> Result<Draw> {
    if t.is_degenerate() {
        return policy.impute(t, "log P(I) underflowed to -inf", 0);
    }
    check_peak(t)?;
    let log_c = t.log_peak();
    let c = log_c.exp();
    let w = 1.0 + 0.5 * c;
    let split = w / (1.0 + w);
    let m = t.proj_mode();
    for k in 1..=policy.max_iterations {
        let u = rng.uniform();
        let ln_w = rng.uniform_pos().ln();
        let (y, bound) = if u <= split {
            (w * rng.uniform() / c, 0.0)
        } else {
            let e = rng.exponential();
            ((w + e) / c, -e)
        };
        // f64::round rounds half away from zero
        let x = (rng.sign() * y).round();
        if ln_w + bound <= t.trunc_log_pdf(m + x) - log_c {
            return Ok(Draw {
                value: m + x,
                imputed: false,
                proposals: k,
            });
        }
    }
    policy.impute(t, "rejection loop hit max_iterations", policy.max_iterations)
}

/// One variate by whichever DS route fits the target, including the
/// family's alternate route when one is installed.
pub fn ds_sample(t: &TruncatedTarget, rng: &mut RngStream, policy: &ImputationPolicy) -> Result<Draw> {
    if let Some(alt) = &t.base().alternate {
        if t.is_degenerate() {
            return policy.impute(t, "log P(I) underflowed to -inf", 0);
        }
        // hit-or-miss on the transformed value
        let mut proposals = 0;
        for _ in 0..policy.max_iterations {
            let (v, used) = alt.draw(rng)?;
            proposals += used;
            if t.contains(v) {
                return Ok(Draw {
                    value: v,
                    imputed: false,
                    proposals,
                });
            }
        }
        return policy.impute(t, "alternate route exhausted max_iterations", proposals);
    }
    match t.kind() {
        Kind::Continuous => ds_sample_continuous(t, rng, policy),
        Kind::Discrete => ds_sample_discrete(t, rng, policy),
    }
}

/// `n` DS variates with acceptance accounting.
pub fn ds_sample_batch(
    t: &TruncatedTarget,
    n: usize,
    rng: &mut RngStream,
    policy: &ImputationPolicy,
) -> Result<SampleBatch> {
    collect_batch(n, Method::Devroye, || ds_sample(t, rng, policy))
}
