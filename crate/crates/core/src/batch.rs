//! Sampler output and imputation policy shared by every sampling method.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::target::TruncatedTarget;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Devroye,
    Its,
    HitOrMiss,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Devroye => "devroye",
            Method::Its => "its",
            Method::HitOrMiss => "hit_or_miss",
        }
    }
}

/// What a sampler returns when it cannot produce an exact variate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImputeMode {
    /// The projected mode, flagged as imputed.
    #[default]
    Mode,
    /// Abort with the index of the failing variate.
    Error,
    /// `+inf`, flagged as imputed. Kept only for comparison with samplers
    /// that behave this way.
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImputationPolicy {
    pub mode: ImputeMode,
    /// Cap on proposals (or base draws) per variate.
    pub max_iterations: u64,
}

impl Default for ImputationPolicy {
    fn default() -> Self {
        Self {
            mode: ImputeMode::Mode,
            max_iterations: 10_000,
        }
    }
}

impl ImputationPolicy {
    pub fn new(mode: ImputeMode, max_iterations: u64) -> Result<Self> {
        if max_iterations == 0 {
            return Err(Error::Precondition("max_iterations must be at least 1".into()));
        }
        Ok(Self { mode, max_iterations })
    }

    pub fn with_mode(mode: ImputeMode) -> Self {
        Self {
            mode,
            ..Self::default()
        }
    }

    /// Substitute value for a failed variate, or the error the policy asks
    /// for.
    pub(crate) fn impute(&self, t: &TruncatedTarget, reason: &str, proposals: u64) -> Result<Draw> {
        let value = match self.mode {
            ImputeMode::Mode => t.proj_mode(),
            ImputeMode::Infinite => f64::INFINITY,
            ImputeMode::Error => {
                return Err(Error::SamplerBreakdown {
                    index: 0,
                    reason: reason.into(),
                })
            }
        };
        Ok(Draw {
            value,
            imputed: true,
            proposals,
        })
    }
}

/// One variate with its bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Draw {
    pub value: f64,
    pub imputed: bool,
    /// Envelope proposals (DS), base draws (hit-or-miss) or uniforms (ITS)
    /// consumed.
    pub proposals: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    pub imputed: Vec<bool>,
    pub proposals: u64,
    pub accepts: u64,
    pub method: Method,
}

impl SampleBatch {
    pub(crate) fn with_capacity(n: usize, method: Method) -> Self {
        Self {
            values: Vec::with_capacity(n),
            imputed: Vec::with_capacity(n),
            proposals: 0,
            accepts: 0,
            method,
        }
    }

    pub(crate) fn push(&mut self, d: Draw) {
        self.values.push(d.value);
        self.imputed.push(d.imputed);
        self.proposals += d.proposals;
        if !d.imputed {
            self.accepts += 1;
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn n_imputed(&self) -> usize {
        self.imputed.iter().filter(|&&f| f).count()
    }

    /// `accepts / proposals`; `None` before any proposal.
    pub fn acceptance_rate(&self) -> Option<f64> {
        (self.proposals > 0).then(|| self.accepts as f64 / self.proposals as f64)
    }

    /// Values not flagged as imputed.
    pub fn clean_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.values
            .iter()
            .zip(&self.imputed)
            .filter(|(_, &f)| !f)
            .map(|(v, _)| *v)
    }
}

/// Runs `draw` `n` times, tagging policy errors with the variate index.
pub(crate) fn collect_batch(n: usize, method: Method, mut draw: impl FnMut() -> Result<Draw>) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::Precondition("batch size must be at least 1".into()));
    }
    let mut batch = SampleBatch::with_capacity(n, method);
    for i in 0..n {
        match draw() {
            Ok(d) => batch.push(d),
            Err(Error::SamplerBreakdown { reason, .. }) => return Err(Error::SamplerBreakdown { index: i, reason }),
            Err(e) => return Err(e),
        }
    }
    Ok(batch)
}
