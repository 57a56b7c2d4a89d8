use std::io::Write;

use serde_json::{json, Value};
use trunclc::diagnostics::stats::KsTest;
use trunclc::diagnostics::{
    brute_force_truncated_moments, exp_memorylessness_check, exp_tail_qq, memorylessness_check,
    truncated_mean_oracle_normal, truncated_mean_oracle_poisson, z_test_mean,
};
use trunclc::{
    ds_sample_batch, its_batch, DistributionDescriptor, HitOrMiss, ImputationPolicy, RngStream, SampleBatch,
    TruncatedTarget, TruncationInterval,
};

use crate::cli::{Format, MemorylessArgs, QqArgs, SampleMethod, ValidateCommand, ZtestArgs};
use crate::error::{usage, CliResult, EXIT_FAILURE};
use crate::output::{csv_line, jnum, jopt, num, opt, write_json};
use crate::{parse, target};

pub fn run(cmd: &ValidateCommand, out: &mut impl Write) -> CliResult<u8> {
    match cmd {
        ValidateCommand::Ztest(a) => ztest(a, out),
        ValidateCommand::Qq(a) => qq(a, out),
        ValidateCommand::Memoryless(a) => memoryless(a, out),
    }
}

fn batch(t: &TruncatedTarget, n: usize, method: SampleMethod, rng: &mut RngStream) -> trunclc::Result<SampleBatch> {
    let policy = ImputationPolicy::default();
    match method {
        SampleMethod::Devroye => ds_sample_batch(t, n, rng, &policy),
        SampleMethod::Its => its_batch(t, n, rng, &policy),
        SampleMethod::Hitormiss => Ok(HitOrMiss::new(t)?.batch(n, rng, &policy)?.0),
    }
}

/// Exact truncated mean: closed forms for the normal and Poisson upper
/// tails, exhaustive summation or quadrature otherwise.
fn oracle(d: &DistributionDescriptor, iv: &TruncationInterval) -> Option<f64> {
    let a = iv.lower();
    if iv.upper() == f64::INFINITY {
        match d.family_name.as_str() {
            "normal" => return Some(d.mu + d.sigma * truncated_mean_oracle_normal((a - d.mu) / d.sigma)),
            "poisson" => return truncated_mean_oracle_poisson(d.params.get("lambda")?, a).ok(),
            _ => {}
        }
    }
    brute_force_truncated_moments(d, iv).ok().map(|(m, _)| m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Pass,
    Fail,
    OracleUnavailable,
}

impl Verdict {
    fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::OracleUnavailable => "oracle_unavailable",
        }
    }
}

struct ZRow {
    lower: f64,
    n: usize,
    n_imputed: usize,
    mean: Option<f64>,
    sd: Option<f64>,
    oracle: Option<f64>,
    z: Option<f64>,
    verdict: Verdict,
}

fn ztest(args: &ZtestArgs, out: &mut impl Write) -> CliResult<u8> {
    let desc = target::descriptor(&args.target)?;
    let lowers = match (&args.lower_grid, args.target.lower) {
        (Some(g), _) => parse::lower_grid(g)?,
        (None, Some(a)) => vec![a],
        (None, None) => vec![f64::NEG_INFINITY],
    };
    if args.n < 2 {
        return Err(usage("--n must be at least 2"));
    }
    let mut rows = Vec::with_capacity(lowers.len());
    for (k, &a) in lowers.iter().enumerate() {
        let iv = target::interval(Some(a), args.target.upper)?;
        let t = TruncatedTarget::new(desc.clone(), iv)?;
        let mut rng = RngStream::substream(args.seed.seed, k as u64);
        let b = batch(&t, args.n, args.method, &mut rng)?;
        let oracle = oracle(&desc, &iv);
        let r = oracle.map(|o| z_test_mean(&b, o, args.threshold));
        let verdict = match &r {
            None => Verdict::OracleUnavailable,
            Some(Ok(v)) if v.pass && v.n_imputed == 0 => Verdict::Pass,
            Some(_) => Verdict::Fail,
        };
        let ok = r.and_then(Result::ok);
        rows.push(ZRow {
            lower: a,
            n: b.len(),
            n_imputed: b.n_imputed(),
            mean: ok.as_ref().map(|v| v.sample_mean),
            sd: ok.as_ref().map(|v| v.sample_sd),
            oracle,
            z: ok.as_ref().map(|v| v.z),
            verdict,
        });
    }
    let count = |v: Verdict| rows.iter().filter(|r| r.verdict == v).count();
    let (pass, fail, na) = (
        count(Verdict::Pass),
        count(Verdict::Fail),
        count(Verdict::OracleUnavailable),
    );
    match args.format {
        Format::Csv => {
            writeln!(out, "lower,n,n_imputed,sample_mean,sample_sd,oracle_mean,z,verdict")?;
            for r in &rows {
                let fields = [
                    num(r.lower),
                    r.n.to_string(),
                    r.n_imputed.to_string(),
                    opt(r.mean),
                    opt(r.sd),
                    opt(r.oracle),
                    opt(r.z),
                    r.verdict.as_str().to_string(),
                ];
                writeln!(out, "{}", csv_line(&fields))?;
            }
        }
        Format::Plain => {
            for r in &rows {
                writeln!(out, "{} {} {}", num(r.lower), opt(r.z), r.verdict.as_str())?;
            }
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "lower": jnum(r.lower), "n": r.n, "n_imputed": r.n_imputed,
                        "sample_mean": jopt(r.mean), "sample_sd": jopt(r.sd),
                        "oracle_mean": jopt(r.oracle), "z": jopt(r.z), "verdict": r.verdict.as_str(),
                    })
                })
                .collect();
            let doc = json!({
                "meta": {
                    "test": "ztest", "family": desc.family_name, "params": desc.params.to_string(),
                    "upper": jnum(args.target.upper.unwrap_or(f64::INFINITY)),
                    "method": format!("{:?}", args.method).to_lowercase(),
                    "n": args.n, "seed": args.seed.seed, "threshold": args.threshold,
                },
                "rows": rows,
                "summary": { "pass": pass, "fail": fail, "oracle_unavailable": na },
            });
            write_json(out, &doc)?;
        }
    }
    eprintln!(
        "ztest: {} rows, {pass} pass, {fail} fail, {na} oracle_unavailable",
        pass + fail + na
    );
    Ok(if fail > 0 { EXIT_FAILURE } else { 0 })
}

/// Reports only: the exponential law is an approximation to the tail
/// excess, so there is no pass/fail verdict.
fn qq(args: &QqArgs, out: &mut impl Write) -> CliResult<u8> {
    let t = target::build(&args.target)?;
    let d = t.base();
    if d.family_name != "normal" {
        return Err(usage("qq supports the normal family only"));
    }
    let a = args.target.lower.ok_or_else(|| usage("qq needs --lower"))?;
    let mut b = ds_sample_batch(
        &t,
        args.n,
        &mut RngStream::new(args.seed.seed),
        &ImputationPolicy::default(),
    )?;
    // standardize so the excess is compared with exponential(z_a)
    let za = (a - d.mu) / d.sigma;
    for v in &mut b.values {
        *v = (*v - d.mu) / d.sigma;
    }
    let q = exp_tail_qq(&b, za)?;
    match args.format {
        Format::Csv | Format::Plain => {
            let sep = if args.format == Format::Csv { "," } else { " " };
            if args.format == Format::Csv {
                writeln!(out, "prob,empirical,theoretical")?;
            }
            for p in &q.points {
                writeln!(
                    out,
                    "{}{sep}{}{sep}{}",
                    num(p.prob),
                    num(p.empirical),
                    num(p.theoretical)
                )?;
            }
            let trailer = format!(
                "ks_distance={} ks_p_value={} n={} imputed={}",
                num(q.ks_distance),
                num(q.ks_p_value),
                q.n,
                b.n_imputed()
            );
            if args.format == Format::Csv {
                writeln!(out, "# {}", trailer.replace(' ', ","))?;
            } else {
                eprintln!("{trailer}");
            }
        }
        Format::Json => {
            let points: Vec<Value> = q
                .points
                .iter()
                .map(|p| json!({ "prob": p.prob, "empirical": jnum(p.empirical), "theoretical": jnum(p.theoretical) }))
                .collect();
            let doc = json!({
                "meta": { "test": "qq", "family": d.family_name, "params": d.params.to_string(),
                          "lower": a, "n": args.n, "seed": args.seed.seed },
                "rows": points,
                "summary": { "ks_distance": jnum(q.ks_distance), "ks_p_value": jnum(q.ks_p_value),
                             "n": q.n, "imputed": b.n_imputed() },
            });
            write_json(out, &doc)?;
        }
    }
    Ok(0)
}

fn memoryless(args: &MemorylessArgs, out: &mut impl Write) -> CliResult<u8> {
    let d = target::descriptor(&args.target)?;
    let a = args.target.lower.ok_or_else(|| usage("memoryless needs --lower"))?;
    if args.target.upper.is_some() {
        return Err(usage("memoryless tests an upper tail; drop --upper"));
    }
    let mut rng = RngStream::new(args.seed.seed);
    let (test, statistic, p_value, pass) = match d.family_name.as_str() {
        "geometric" => {
            let r = memorylessness_check(d.params.get("p").unwrap_or(f64::NAN), a, args.n, &mut rng)?;
            ("chi_square", r.chi_square.statistic, r.chi_square.p_value, r.pass)
        }
        "exponential" => {
            let r: KsTest = exp_memorylessness_check(d.params.get("lambda").unwrap_or(1.0), a, args.n, &mut rng)?;
            ("ks", r.statistic, r.p_value, r.passes(0.001))
        }
        other => {
            return Err(usage(format!(
                "memoryless supports geometric and exponential, not {other}"
            )))
        }
    };
    let verdict = if pass { "pass" } else { "fail" };
    match args.format {
        Format::Csv => {
            writeln!(out, "family,params,lower,n,test,statistic,p_value,alpha,verdict")?;
            let fields = [
                d.family_name.clone(),
                d.params.to_string(),
                num(a),
                args.n.to_string(),
                test.to_string(),
                num(statistic),
                num(p_value),
                num(0.001),
                verdict.to_string(),
            ];
            writeln!(out, "{}", csv_line(&fields))?;
        }
        Format::Plain => writeln!(out, "{} {} {verdict}", num(statistic), num(p_value))?,
        Format::Json => {
            let doc = json!({
                "meta": { "test": "memoryless", "family": d.family_name, "params": d.params.to_string(),
                          "lower": a, "n": args.n, "seed": args.seed.seed },
                "rows": [{ "test": test, "statistic": jnum(statistic), "p_value": jnum(p_value),
                           "alpha": 0.001, "verdict": verdict }],
            });
            write_json(out, &doc)?;
        }
    }
    Ok(if pass { 0 } else { EXIT_FAILURE })
}
