//! Random variates from truncated log-concave distributions.
//!
//! The crate provides log-space descriptors for a set of log-concave
//! families, Devroye's universal rejection sampler for their truncations,
//! the inverse-transform and hit-or-miss samplers it is compared against,
//! and diagnostics that locate where each sampler stops being reliable.

pub mod batch;
pub mod descriptor;
pub mod devroye;
pub mod diagnostics;
pub mod distributions;
pub mod error;
pub mod its;
pub mod quadrature;
pub mod rng;
pub mod special;
pub mod target;

pub use batch::{Draw, ImputationPolicy, ImputeMode, Method, SampleBatch};
pub use descriptor::{DistributionDescriptor, Kind, ParamSet, Support};
pub use devroye::{ds_sample, ds_sample_batch, ds_sample_continuous, ds_sample_discrete};
pub use distributions::build_descriptor;
pub use error::{Error, Result};
pub use its::{hit_or_miss_sample, its_batch, its_sample, HitOrMiss};
pub use rng::RngStream;
pub use target::{TruncatedTarget, TruncationInterval};
