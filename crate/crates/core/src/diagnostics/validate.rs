//! Statistical checks on sampler output.

use serde::{Deserialize, Serialize};

use super::stats::{chi_square_gof, ks_one_sample, mean_sd, ChiSquare, KsTest};
use crate::batch::{ImputationPolicy, SampleBatch};
use crate::devroye::ds_sample_batch;
use crate::distributions;
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::target::{TruncatedTarget, TruncationInterval};

/// Outcome of a Z-test of a sample mean against an oracle mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationResult {
    pub sample_mean: f64,
    pub sample_sd: f64,
    pub oracle_mean: f64,
    /// Non-imputed values used.
    pub n: usize,
    /// Imputed values left out.
    pub n_imputed: usize,
    pub z: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// `Z = (X̄ - mu_a) / (S / sqrt(n))` over the non-imputed values of `batch`.
pub fn z_test_mean(batch: &SampleBatch, oracle_mean: f64, threshold: f64) -> Result<ValidationResult> {
    let xs: Vec<f64> = batch.clean_values().collect();
    if xs.len() < 2 {
        return Err(Error::Precondition(format!(
            "z-test needs at least 2 non-imputed values, got {}",
            xs.len()
        )));
    }
    let (mean, sd) = mean_sd(&xs);
    let n = xs.len();
    let z = if sd > 0.0 {
        (mean - oracle_mean) / (sd / (n as f64).sqrt())
    } else if mean == oracle_mean {
        0.0
    } else {
        f64::INFINITY.copysign(mean - oracle_mean)
    };
    Ok(ValidationResult {
        sample_mean: mean,
        sample_sd: sd,
        oracle_mean,
        n,
        n_imputed: batch.n_imputed(),
        z,
        threshold,
        pass: z.abs() < threshold,
    })
}

/// One row of an exponential-tail Q-Q table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QqPoint {
    pub prob: f64,
    pub empirical: f64,
    pub theoretical: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QqTable {
    pub a: f64,
    pub points: Vec<QqPoint>,
    pub ks_distance: f64,
    pub ks_p_value: f64,
    pub n: usize,
}

/// Compares the excess `X - a` of a normal-tail batch with exponential(rate
/// `a`): percentiles 1..99 of both, plus the KS distance. Requires
/// `a >= 10`.
pub fn exp_tail_qq(batch: &SampleBatch, a: f64) -> Result<QqTable> {
    if a.is_nan() || a < 10.0 {
        return Err(Error::Precondition(format!(
            "the exponential tail approximation needs a >= 10, got {a}"
        )));
    }
    let mut excess: Vec<f64> = batch.clean_values().map(|x| x - a).collect();
    if excess.is_empty() {
        return Err(Error::Precondition("no non-imputed values".into()));
    }
    excess.sort_by(f64::total_cmp);
    let n = excess.len();
    let points = (1..=99)
        .map(|k| {
            let prob = k as f64 / 100.0;
            // linear interpolation between order statistics
            let h = (n - 1) as f64 * prob;
            let lo = h.floor() as usize;
            let hi = (lo + 1).min(n - 1);
            let empirical = excess[lo] + (h - lo as f64) * (excess[hi] - excess[lo]);
            QqPoint {
                prob,
                empirical,
                theoretical: -(-prob).ln_1p() / a,
            }
        })
        .collect();
    let ks = ks_one_sample(&excess, |x| -(-a * x).exp_m1());
    Ok(QqTable {
        a,
        points,
        ks_distance: ks.statistic,
        ks_p_value: ks.p_value,
        n,
    })
}

/// Chi-square verdict of a memorylessness check.
#[derive(Debug, Clone, PartialEq)]
pub struct MemorylessResult {
    pub chi_square: ChiSquare,
    pub alpha: f64,
    pub n: usize,
    pub pass: bool,
}

/// Draws `n` DS variates from geometric(`p`) on `]a, inf[`, shifts them by
/// `floor(a) + 1`, and tests the result against the untruncated
/// geometric(`p`) pmf at level 0.001.
pub fn memorylessness_check(p: f64, a: f64, n: usize, rng: &mut RngStream) -> Result<MemorylessResult> {
    const ALPHA: f64 = 0.001;
    let desc = distributions::geometric(p)?;
    let t = TruncatedTarget::new(desc.clone(), TruncationInterval::above(a)?)?;
    if t.is_degenerate() {
        return Err(Error::DegenerateTarget);
    }
    let batch = ds_sample_batch(&t, n, rng, &ImputationPolicy::default())?;
    if batch.n_imputed() > 0 {
        return Err(Error::SamplerBreakdown {
            index: batch.imputed.iter().position(|&f| f).unwrap_or(0),
            reason: "imputed variate in memorylessness batch".into(),
        });
    }
    let shift = a.floor() + 1.0;
    let max = batch.values.iter().fold(0.0f64, |m, &v| m.max(v - shift)) as usize;
    let mut counts = vec![0u64; max + 2];
    for &v in &batch.values {
        counts[(v - shift) as usize] += 1;
    }
    let mut probs: Vec<f64> = (0..=max).map(|k| desc.log_pdf(k as f64).exp()).collect();
    probs.push(desc.log_sf(max as f64).exp());
    let chi_square = chi_square_gof(&counts, &probs);
    Ok(MemorylessResult {
        pass: chi_square.passes(ALPHA),
        chi_square,
        alpha: ALPHA,
        n,
    })
}

/// Continuous counterpart: DS variates from exponential(`lambda`) on
/// `]a, inf[`, excess `X - a` tested against exponential(`lambda`) by KS.
pub fn exp_memorylessness_check(lambda: f64, a: f64, n: usize, rng: &mut RngStream) -> Result<KsTest> {
    let t = TruncatedTarget::new(distributions::exponential(lambda)?, TruncationInterval::above(a)?)?;
    if t.is_degenerate() {
        return Err(Error::DegenerateTarget);
    }
    let batch = ds_sample_batch(&t, n, rng, &ImputationPolicy::default())?;
    let excess: Vec<f64> = batch.clean_values().map(|x| x - a).collect();
    Ok(ks_one_sample(&excess, |x| -(-lambda * x).exp_m1()))
}
