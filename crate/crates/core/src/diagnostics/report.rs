//! Safety reports and their CSV / JSON forms.
//!
//! CSV columns: `family`, one column per family parameter, `mu`, `sigma`,
//! `a_bar`, `a_bar_prime`, `a_bar_dprime`, `eta`, `eta_prime`, `n_probe`,
//! `seed`, `method`, `resolution`, `schedule`, `notes`. Missing values are
//! empty fields; notes are joined with `; `. Numbers use shortest
//! round-trip formatting, so parsing a written report gives it back
//! exactly.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::scan::ScanMethod;
use crate::descriptor::ParamSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanMeta {
    pub method: ScanMethod,
    pub n_probe: usize,
    pub seed: u64,
    pub resolution: f64,
    pub schedule: String,
}

/// One grid cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SafetyRow {
    pub params: ParamSet,
    pub mu: f64,
    pub sigma: f64,
    /// ITS breakdown point.
    pub a_bar: Option<f64>,
    /// DS breakdown point.
    pub a_bar_prime: Option<f64>,
    /// Where the density itself stops being a positive double.
    pub a_bar_dprime: Option<f64>,
    /// `(ā - mu) / sigma`.
    pub eta: Option<f64>,
    /// `(ā′ - mu) / sigma`.
    pub eta_prime: Option<f64>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SafetyReport {
    pub family: String,
    pub param_names: Vec<String>,
    pub meta: ScanMeta,
    pub rows: Vec<SafetyRow>,
}

const TAIL_COLUMNS: [&str; 13] = [
    "mu_std",
    "sigma_std",
    "a_bar",
    "a_bar_prime",
    "a_bar_dprime",
    "eta",
    "eta_prime",
    "n_probe",
    "seed",
    "method",
    "resolution",
    "schedule",
    "notes",
];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn parse_f64(s: &str, col: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::Parse(format!("column `{col}`: `{s}` is not a number")))
}

fn parse_opt(s: &str, col: &str) -> Result<Option<f64>> {
    if s.is_empty() {
        Ok(None)
    } else {
        parse_f64(s, col).map(Some)
    }
}

impl SafetyReport {
    /// Indices of cells where both safety ratios are finite and `η > η′`.
    pub fn ordering_counterexamples(&self) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| matches!((r.eta, r.eta_prime), (Some(e), Some(ep)) if e > ep))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["family".to_string()];
        header.extend(self.param_names.iter().cloned());
        header.extend(TAIL_COLUMNS.iter().map(|s| s.to_string()));
        out.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![self.family.clone()];
            for name in &self.param_names {
                rec.push(opt(r.params.get(name)));
            }
            rec.extend([
                r.mu.to_string(),
                r.sigma.to_string(),
                opt(r.a_bar),
                opt(r.a_bar_prime),
                opt(r.a_bar_dprime),
                opt(r.eta),
                opt(r.eta_prime),
                self.meta.n_probe.to_string(),
                self.meta.seed.to_string(),
                self.meta.method.to_string(),
                self.meta.resolution.to_string(),
                self.meta.schedule.clone(),
                r.notes.join("; "),
            ]);
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        let n_params = header
            .len()
            .checked_sub(1 + TAIL_COLUMNS.len())
            .ok_or_else(|| Error::Parse("too few columns".into()))?;
        if header[0] != "family" || header[1 + n_params..] != TAIL_COLUMNS.map(String::from) {
            return Err(Error::Parse(format!("unexpected header {header:?}")));
        }
        let param_names: Vec<String> = header[1..1 + n_params].to_vec();
        let mut family = None;
        let mut meta = None;
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let f = |i: usize| rec.get(i).unwrap_or("");
            family.get_or_insert_with(|| f(0).to_string());
            let mut params = ParamSet::new();
            for (k, name) in param_names.iter().enumerate() {
                if let Some(v) = parse_opt(f(1 + k), name)? {
                    params.set(name.clone(), v);
                }
            }
            let t = 1 + n_params;
            let col = |j: usize| f(t + j);
            if meta.is_none() {
                meta = Some(ScanMeta {
                    n_probe: col(7).parse().map_err(|_| Error::Parse("n_probe".into()))?,
                    seed: col(8).parse().map_err(|_| Error::Parse("seed".into()))?,
                    method: col(9).parse()?,
                    resolution: parse_f64(col(10), "resolution")?,
                    schedule: col(11).to_string(),
                });
            }
            rows.push(SafetyRow {
                params,
                mu: parse_f64(col(0), "mu_std")?,
                sigma: parse_f64(col(1), "sigma_std")?,
                a_bar: parse_opt(col(2), "a_bar")?,
                a_bar_prime: parse_opt(col(3), "a_bar_prime")?,
                a_bar_dprime: parse_opt(col(4), "a_bar_dprime")?,
                eta: parse_opt(col(5), "eta")?,
                eta_prime: parse_opt(col(6), "eta_prime")?,
                notes: if col(12).is_empty() {
                    Vec::new()
                } else {
                    col(12).split("; ").map(str::to_string).collect()
                },
            });
        }
        Ok(Self {
            family: family.ok_or_else(|| Error::Parse("report has no rows".into()))?,
            param_names,
            meta: meta.unwrap(),
            rows,
        })
    }

    /// `{"meta": {...}, "rows": [...]}` with parameters flattened into a map.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let params: Map<String, Value> = r.params.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
                json!({
                    "family": self.family,
                    "params": params,
                    "mu": r.mu,
                    "sigma": r.sigma,
                    "a_bar": r.a_bar,
                    "a_bar_prime": r.a_bar_prime,
                    "a_bar_dprime": r.a_bar_dprime,
                    "eta": r.eta,
                    "eta_prime": r.eta_prime,
                    "n_probe": self.meta.n_probe,
                    "seed": self.meta.seed,
                    "notes": r.notes,
                })
            })
            .collect();
        json!({
            "meta": {
                "family": self.family,
                "params": self.param_names,
                "method": self.meta.method,
                "n_probe": self.meta.n_probe,
                "seed": self.meta.seed,
                "resolution": self.meta.resolution,
                "schedule": self.meta.schedule,
                "version": env!("CARGO_PKG_VERSION"),
            },
            "rows": rows,
        })
    }
}
