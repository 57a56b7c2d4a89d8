use std::io::Write;

use serde_json::json;
use trunclc::{
    ds_sample_batch, its_batch, HitOrMiss, ImputationPolicy, ImputeMode, RngStream, SampleBatch, TruncatedTarget,
};

use crate::cli::{Format, Impute, SampleArgs, SampleMethod};
use crate::error::{usage, CliResult, EXIT_IMPUTED};
use crate::output::{csv_line, jnum, jopt, num, opt, write_json};
use crate::target;

fn policy(args: &SampleArgs) -> CliResult<ImputationPolicy> {
    let mode = match args.impute {
        Some(Impute::Mode) => ImputeMode::Mode,
        Some(Impute::Error) => ImputeMode::Error,
        Some(Impute::Inf) => ImputeMode::Infinite,
        None if args.method == SampleMethod::Its => ImputeMode::Error,
        None => ImputeMode::Mode,
    };
    ImputationPolicy::new(mode, args.max_iterations).map_err(|e| usage(e.to_string()))
}

pub fn run(args: &SampleArgs, out: &mut impl Write) -> CliResult<u8> {
    if args.n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let t = target::build(&args.target)?;
    let policy = policy(args)?;
    let mut rng = RngStream::new(args.seed.seed);
    let batch = match args.method {
        SampleMethod::Devroye => ds_sample_batch(&t, args.n, &mut rng, &policy)?,
        SampleMethod::Its => its_batch(&t, args.n, &mut rng, &policy)?,
        SampleMethod::Hitormiss => HitOrMiss::new(&t)?.batch(args.n, &mut rng, &policy)?.0,
    };
    write(args, &t, &batch, out)?;
    Ok(if batch.n_imputed() > 0 { EXIT_IMPUTED } else { 0 })
}

fn write(args: &SampleArgs, t: &TruncatedTarget, b: &SampleBatch, out: &mut impl Write) -> CliResult<()> {
    let rate = b.acceptance_rate();
    match args.format {
        Format::Csv => {
            writeln!(out, "value,imputed")?;
            for (v, i) in b.values.iter().zip(&b.imputed) {
                writeln!(out, "{}", csv_line(&[num(*v), i.to_string()]))?;
            }
            writeln!(
                out,
                "# proposals={},accepts={},acceptance_rate={}",
                b.proposals,
                b.accepts,
                opt(rate)
            )?;
        }
        Format::Plain => {
            for v in &b.values {
                writeln!(out, "{}", num(*v))?;
            }
            eprintln!(
                "proposals={} accepts={} acceptance_rate={} imputed={}",
                b.proposals,
                b.accepts,
                opt(rate),
                b.n_imputed()
            );
        }
        Format::Json => {
            let params: serde_json::Map<_, _> = t.base().params.iter().map(|(k, v)| (k.to_string(), jnum(v))).collect();
            let rows: Vec<_> = b
                .values
                .iter()
                .zip(&b.imputed)
                .map(|(v, i)| json!({ "value": jnum(*v), "imputed": i }))
                .collect();
            let doc = json!({
                "meta": {
                    "family": t.base().family_name,
                    "params": params,
                    "lower": jnum(args.target.lower.unwrap_or(f64::NEG_INFINITY)),
                    "upper": jnum(args.target.upper.unwrap_or(f64::INFINITY)),
                    "method": b.method.as_str(),
                    "seed": args.seed.seed,
                    "n": b.len(),
                },
                "rows": rows,
                "stats": {
                    "proposals": b.proposals,
                    "accepts": b.accepts,
                    "acceptance_rate": jopt(rate),
                    "imputed": b.n_imputed(),
                },
            });
            write_json(out, &doc)?;
        }
    }
    Ok(())
}
