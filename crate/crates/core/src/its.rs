//! Reference samplers: inverse transform through the truncated quantile,
//! and hit-or-miss rejection from the untruncated base law.

use crate::batch::{collect_batch, Draw, ImputationPolicy, ImputeMode, Method, SampleBatch};
use crate::devroye::ds_sample;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::target::TruncatedTarget;

/// `q_I(U)` for one uniform `U`. Quantile failures go through `policy`,
/// except that the error mode returns the overflow itself. Nothing is
/// repaired.
pub fn its_sample(t: &TruncatedTarget, rng: &mut RngStream, policy: &ImputationPolicy) -> Result<Draw> {
    let u = rng.uniform();
    match t.trunc_quantile(u) {
        Ok(value) => Ok(Draw {
            value,
            imputed: false,
            proposals: 1,
        }),
        Err(e @ Error::TruncationOverflow { .. }) if policy.mode == ImputeMode::Error => Err(e),
        Err(e @ Error::TruncationOverflow { .. }) => policy.impute(t, &e.to_string(), 1),
        Err(e) => Err(e),
    }
}

pub fn its_batch(t: &TruncatedTarget, n: usize, rng: &mut RngStream, policy: &ImputationPolicy) -> Result<SampleBatch> {
    if !t.base().has_quantile() {
        return Err(Error::MissingQuantile(t.base().family_name.clone()));
    }
    collect_batch(n, Method::Its, || its_sample(t, rng, policy))
}

/// Hit-or-miss sampler. The base draws come from DS on the untruncated
/// base law, so a failure here reflects the `1/P(I)` cost alone.
#[derive(Debug, Clone)]
pub struct HitOrMiss {
    target: TruncatedTarget,
    base: TruncatedTarget,
}

/// A hit-or-miss variate and the number of base draws it took.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HitOrMissDraw {
    pub draw: Draw,
    pub trials: u64,
}

impl HitOrMiss {
    pub fn new(target: &TruncatedTarget) -> Result<Self> {
        Ok(Self {
            target: target.clone(),
            base: TruncatedTarget::untruncated(target.base().clone())?,
        })
    }

    /// Draws from the base until a value lands in `I`, for at most
    /// `policy.max_iterations` trials.
    pub fn sample(&self, rng: &mut RngStream, policy: &ImputationPolicy) -> Result<HitOrMissDraw> {
        let inner = ImputationPolicy::with_mode(crate::batch::ImputeMode::Error);
        for trial in 1..=policy.max_iterations {
            let d = ds_sample(&self.base, rng, &inner)?;
            if self.target.contains(d.value) {
                return Ok(HitOrMissDraw {
                    draw: Draw {
                        value: d.value,
                        imputed: false,
                        proposals: trial,
                    },
                    trials: trial,
                });
            }
        }
        let draw = policy.impute(&self.target, "no base draw landed in I", policy.max_iterations)?;
        Ok(HitOrMissDraw {
            draw,
            trials: policy.max_iterations,
        })
    }

    /// Batch whose `proposals` count base draws; per-variate trial counts are
    /// returned alongside.
    pub fn batch(&self, n: usize, rng: &mut RngStream, policy: &ImputationPolicy) -> Result<(SampleBatch, Vec<u64>)> {
        let mut trials = Vec::with_capacity(n);
        let batch = collect_batch(n, Method::HitOrMiss, || {
            let h = self.sample(rng, policy)?;
            trials.push(h.trials);
            Ok(h.draw)
        })?;
        Ok((batch, trials))
    }
}

/// One hit-or-miss variate, imputing the projected mode when `max_trials`
/// base draws all miss `I`.
pub fn hit_or_miss_sample(t: &TruncatedTarget, rng: &mut RngStream, max_trials: u64) -> Result<HitOrMissDraw> {
    let policy = ImputationPolicy::new(crate::batch::ImputeMode::Mode, max_trials)?;
    HitOrMiss::new(t)?.sample(rng, &policy)
}
