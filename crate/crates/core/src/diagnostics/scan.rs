//! Breakdown-point scanner.
//!
//! For each parameter configuration the scanner walks a schedule of lower
//! truncation points `a` (upper bound `+inf`), draws `n_probe` variates per
//! probe, and records the last `a` that still yields a clean batch. The
//! interval between the last clean and the first broken probe is then
//! bisected down to the configured resolution.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{SafetyReport, SafetyRow, ScanMeta};
use crate::batch::{ImputationPolicy, ImputeMode, SampleBatch};
use crate::descriptor::{DistributionDescriptor, Kind, ParamSet};
use crate::devroye::ds_sample_batch;
use crate::distributions::{builtin_registry, Registry};
use crate::error::{Error, Result};
use crate::its::its_batch;
use crate::rng::RngStream;
use crate::special::LN_MIN_POSITIVE;
use crate::target::{TruncatedTarget, TruncationInterval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMethod {
    Its,
    Devroye,
    Both,
}

impl ScanMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScanMethod::Its => "its",
            ScanMethod::Devroye => "devroye",
            ScanMethod::Both => "both",
        }
    }

    fn runs_its(&self) -> bool {
        matches!(self, ScanMethod::Its | ScanMethod::Both)
    }

    fn runs_ds(&self) -> bool {
        matches!(self, ScanMethod::Devroye | ScanMethod::Both)
    }
}

impl fmt::Display for ScanMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScanMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "its" => Ok(ScanMethod::Its),
            "devroye" | "ds" => Ok(ScanMethod::Devroye),
            "both" => Ok(ScanMethod::Both),
            other => Err(Error::Parse(format!("unknown scan method `{other}`"))),
        }
    }
}

/// Where the probes go.
#[derive(Debug, Clone, PartialEq)]
pub enum ProbeSchedule {
    /// The same absolute lower bounds for every cell.
    Values(Vec<f64>),
    /// Depths in base standard deviations: `a = mu + z sigma`.
    Standardized(Vec<f64>),
    /// `z = 0, 1, ..., 10`, then 25% further per probe, until the scanned
    /// methods have broken down.
    Auto,
    /// `z = 2^k - 1`, until the scanned methods have broken down.
    GeometricProgression,
}

impl ProbeSchedule {
    pub fn describe(&self) -> String {
        match self {
            ProbeSchedule::Values(v) => format!("values[{}]", join(v)),
            ProbeSchedule::Standardized(v) => format!("z[{}]", join(v)),
            ProbeSchedule::Auto => "auto".into(),
            ProbeSchedule::GeometricProgression => "geometric-progression".into(),
        }
    }

    fn is_open_ended(&self) -> bool {
        matches!(self, ProbeSchedule::Auto | ProbeSchedule::GeometricProgression)
    }

    fn validate(&self) -> Result<()> {
        let v = match self {
            ProbeSchedule::Values(v) | ProbeSchedule::Standardized(v) => v,
            _ => return Ok(()),
        };
        if v.is_empty() {
            return Err(Error::Precondition("empty probe schedule".into()));
        }
        if v.iter().any(|x| !x.is_finite()) || v.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition(
                "probe schedule must be finite and strictly increasing".into(),
            ));
        }
        Ok(())
    }

    /// The `k`-th probe for a cell with the given `(mu, sigma)`.
    fn probe(&self, k: usize, mu: f64, sigma: f64) -> Option<f64> {
        match self {
            ProbeSchedule::Values(v) => v.get(k).copied(),
            ProbeSchedule::Standardized(v) => v.get(k).map(|z| mu + z * sigma),
            ProbeSchedule::Auto => {
                let z = if k <= 10 {
                    k as f64
                } else {
                    10.0 * 1.25f64.powi(k as i32 - 10)
                };
                Some(mu + z * sigma)
            }
            ProbeSchedule::GeometricProgression => Some(mu + (2f64.powi(k.min(1000) as i32) - 1.0) * sigma),
        }
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub method: ScanMethod,
    pub probes: ProbeSchedule,
    /// Variates per probe.
    pub n_probe: usize,
    pub seed: u64,
    /// Bisection stops once the bracket is narrower than this many base
    /// standard deviations (continuous families; discrete families stop at
    /// adjacent integers).
    pub resolution: f64,
    /// Also locate `ā″`, where `f` stops being a positive double.
    pub dprime: bool,
    /// Cap on schedule probes per cell and method.
    pub max_probes: usize,
    /// Probes still evaluated past the first breakdown of an open-ended
    /// schedule, to surface non-monotone behaviour.
    pub probes_past_break: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            method: ScanMethod::Both,
            probes: ProbeSchedule::Auto,
            n_probe: 1000,
            seed: 0,
            resolution: 0.01,
            dprime: false,
            max_probes: 400,
            probes_past_break: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Which {
    Its,
    Ds,
}

impl Which {
    fn tag(self) -> &'static str {
        match self {
            Which::Its => "its",
            Which::Ds => "ds",
        }
    }
}

enum Outcome {
    Clean,
    Broken(String),
    /// `]a, inf[` no longer meets the support.
    PastSupport,
}

struct Prober<'a> {
    desc: &'a DistributionDescriptor,
    cfg: &'a ScanConfig,
    which: Which,
    cell: u64,
    counter: u64,
}

impl Prober<'_> {
    fn eval(&mut self, a: f64) -> Outcome {
        let stream = (self.cell << 40) | ((self.which as u64) << 32) | self.counter;
        self.counter += 1;
        let mut rng = RngStream::substream(self.cfg.seed, stream);
        let iv = match TruncationInterval::above(a) {
            Ok(iv) => iv,
            Err(e) => return Outcome::Broken(e.to_string()),
        };
        let t = match TruncatedTarget::new(self.desc.clone(), iv) {
            Ok(t) => t,
            Err(Error::InvalidInterval(_)) => return Outcome::PastSupport,
            Err(e) => return Outcome::Broken(e.to_string()),
        };
        // any imputation already makes the batch unclean, so stop at the first
        let policy = ImputationPolicy::with_mode(ImputeMode::Error);
        let result: Result<SampleBatch> = match self.which {
            Which::Ds => ds_sample_batch(&t, self.cfg.n_probe, &mut rng, &policy),
            Which::Its => its_batch(&t, self.cfg.n_probe, &mut rng, &policy),
        };
        match result {
            Err(e) => Outcome::Broken(e.to_string()),
            Ok(b) if b.n_imputed() > 0 => Outcome::Broken(format!("{} imputed", b.n_imputed())),
            Ok(b) => match b.values.iter().find(|v| !v.is_finite() || !t.contains(**v)) {
                Some(v) => Outcome::Broken(format!("value {v} outside I")),
                None => Outcome::Clean,
            },
        }
    }
}

/// Scan result for one method on one cell.
struct Endpoint {
    a_bar: Option<f64>,
    notes: Vec<String>,
}

fn lattice(desc: &DistributionDescriptor, a: f64) -> f64 {
    match desc.kind {
        Kind::Discrete => a.floor(),
        Kind::Continuous => a,
    }
}

fn scan_method(desc: &DistributionDescriptor, cfg: &ScanConfig, cell: u64, which: Which) -> Endpoint {
    let mut p = Prober {
        desc,
        cfg,
        which,
        cell,
        counter: 0,
    };
    let tag = which.tag();
    let mut notes = Vec::new();
    let mut last_clean: Option<f64> = None;
    let mut first_break: Option<(f64, String)> = None;
    let mut after_break = 0;
    let mut prev: Option<f64> = None;
    let mut past_support: Option<f64> = None;

    for k in 0..cfg.max_probes {
        let Some(raw) = cfg.probes.probe(k, desc.mu, desc.sigma) else {
            break;
        };
        let a = lattice(desc, raw);
        if !a.is_finite() {
            break;
        }
        if prev.is_some_and(|q| a <= q) {
            continue;
        }
        prev = Some(a);
        match p.eval(a) {
            Outcome::PastSupport => {
                past_support = Some(a);
                break;
            }
            Outcome::Clean => match &first_break {
                None => last_clean = Some(a),
                Some((b, _)) => notes.push(format!("{tag}: non-monotone, clean at a={a} after breakdown at a={b}")),
            },
            Outcome::Broken(reason) => {
                if first_break.is_none() {
                    first_break = Some((a, reason));
                }
            }
        }
        if first_break.is_some() {
            after_break += 1;
            if cfg.probes.is_open_ended() && after_break > cfg.probes_past_break {
                break;
            }
        }
    }

    let upper = match (&first_break, past_support) {
        (Some((b, _)), _) => Some(*b),
        (None, s) => s,
    };
    let a_bar = match (upper, last_clean) {
        (_, None) => {
            match &first_break {
                Some((b, reason)) => {
                    notes.push(format!("{tag}: censored below, broken at first probe a={b} ({reason})"))
                }
                None => notes.push(format!("{tag}: no probe evaluated")),
            }
            None
        }
        (None, Some(c)) => {
            notes.push(format!("{tag}: censored above, no breakdown up to a={c}"));
            Some(c)
        }
        (Some(b), Some(c)) => {
            let (mut lo, mut hi) = (c, b);
            for _ in 0..64 {
                let done = match desc.kind {
                    Kind::Discrete => hi - lo <= 1.0,
                    Kind::Continuous => hi - lo <= cfg.resolution * desc.sigma,
                };
                if done {
                    break;
                }
                let mid = lattice(desc, 0.5 * (lo + hi));
                if mid <= lo || mid >= hi {
                    break;
                }
                match p.eval(mid) {
                    Outcome::Clean => lo = mid,
                    _ => hi = mid,
                }
            }
            if first_break.is_none() {
                notes.push(format!("{tag}: support exhausted, no breakdown up to a={lo}"));
            }
            Some(lo)
        }
    };
    Endpoint { a_bar, notes }
}

/// Largest `x >= mode` where `f(x)` is still a positive double; `None` when
/// the support ends first.
fn density_breakdown(desc: &DistributionDescriptor, resolution: f64) -> Option<f64> {
    let ok = |x: f64| desc.support.contains(x) && desc.log_pdf(x) >= LN_MIN_POSITIVE;
    let m = desc.mode;
    let mut step = match desc.kind {
        Kind::Discrete => desc.sigma.max(1.0).round(),
        Kind::Continuous => desc.sigma,
    };
    let mut lo = m;
    let mut hi;
    loop {
        hi = m + step;
        if !hi.is_finite() || hi > desc.support.upper {
            return None;
        }
        if !ok(hi) {
            break;
        }
        lo = hi;
        step *= 2.0;
    }
    let done = |lo: f64, hi: f64| match desc.kind {
        Kind::Discrete => hi - lo <= 1.0,
        Kind::Continuous => hi - lo <= resolution * desc.sigma,
    };
    while !done(lo, hi) {
        let mid = lattice(desc, 0.5 * (lo + hi));
        if mid <= lo || mid >= hi {
            break;
        }
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

fn eta(a: Option<f64>, desc: &DistributionDescriptor) -> Option<f64> {
    a.map(|a| (a - desc.mu) / desc.sigma)
}

/// [`scan_safety_with`] on the built-in registry.
pub fn scan_safety(family: &str, grid: &[ParamSet], cfg: &ScanConfig) -> Result<SafetyReport> {
    scan_safety_with(builtin_registry(), family, grid, cfg)
}

/// Measures `ā` (ITS) and/or `ā′` (DS) on every grid cell. Cells run in
/// parallel, each probe on its own substream of `cfg.seed`, so the report
/// depends only on the inputs.
pub fn scan_safety_with(
    registry: &Registry,
    family: &str,
    grid: &[ParamSet],
    cfg: &ScanConfig,
) -> Result<SafetyReport> {
    if grid.is_empty() {
        return Err(Error::Precondition("empty parameter grid".into()));
    }
    if cfg.n_probe == 0 {
        return Err(Error::Precondition("n_probe must be at least 1".into()));
    }
    cfg.probes.validate()?;
    let spec = registry
        .get(family)
        .ok_or_else(|| Error::UnknownFamily(family.into()))?;
    let descs: Vec<DistributionDescriptor> = grid.iter().map(|p| spec.build(p)).collect::<Result<_>>()?;

    let rows: Vec<SafetyRow> = descs
        .par_iter()
        .enumerate()
        .map(|(i, desc)| {
            let (its, ds) = rayon::join(
                || {
                    cfg.method
                        .runs_its()
                        .then(|| scan_method(desc, cfg, i as u64, Which::Its))
                },
                || {
                    cfg.method
                        .runs_ds()
                        .then(|| scan_method(desc, cfg, i as u64, Which::Ds))
                },
            );
            let mut notes = Vec::new();
            let a_bar = its.map(|e| {
                notes.extend(e.notes);
                e.a_bar
            });
            let a_bar_prime = ds.map(|e| {
                notes.extend(e.notes);
                e.a_bar
            });
            let a_bar = a_bar.flatten();
            let a_bar_prime = a_bar_prime.flatten();
            SafetyRow {
                params: desc.params.clone(),
                mu: desc.mu,
                sigma: desc.sigma,
                a_bar,
                a_bar_prime,
                a_bar_dprime: if cfg.dprime {
                    density_breakdown(desc, cfg.resolution)
                } else {
                    None
                },
                eta: eta(a_bar, desc),
                eta_prime: eta(a_bar_prime, desc),
                notes,
            }
        })
        .collect();

    Ok(SafetyReport {
        family: spec.name.clone(),
        param_names: spec.params.iter().map(|p| p.name.clone()).collect(),
        meta: ScanMeta {
            method: cfg.method,
            n_probe: cfg.n_probe,
            seed: cfg.seed,
            resolution: cfg.resolution,
            schedule: cfg.probes.describe(),
        },
        rows,
    })
}
