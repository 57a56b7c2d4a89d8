use trunclc::distributions::build_descriptor;
use trunclc::{DistributionDescriptor, ParamSet, TruncatedTarget, TruncationInterval};

use crate::cli::TargetArgs;
use crate::error::CliResult;
use crate::parse;

pub fn params(raw: &[String]) -> CliResult<Vec<(String, f64)>> {
    raw.iter().map(|s| parse::param(s)).collect()
}

pub fn descriptor(args: &TargetArgs) -> CliResult<DistributionDescriptor> {
    let set: ParamSet = params(&args.params)?.into_iter().collect();
    Ok(build_descriptor(&args.dist, &set)?)
}

pub fn interval(lower: Option<f64>, upper: Option<f64>) -> CliResult<TruncationInterval> {
    Ok(TruncationInterval::new(
        lower.unwrap_or(f64::NEG_INFINITY),
        upper.unwrap_or(f64::INFINITY),
    )?)
}

pub fn build(args: &TargetArgs) -> CliResult<TruncatedTarget> {
    Ok(TruncatedTarget::new(
        descriptor(args)?,
        interval(args.lower, args.upper)?,
    )?)
}
