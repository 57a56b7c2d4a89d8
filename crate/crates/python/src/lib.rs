//! Python bindings: descriptors, truncated targets, the three samplers,
//! the safety scanner and the validation checks.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use trunclc::diagnostics::{self, ProbeSchedule, ScanConfig, ScanMethod};
use trunclc::distributions::{build_descriptor, builtin_registry};
use trunclc::{
    ds_sample_batch, its_batch, DistributionDescriptor, Error, HitOrMiss, ImputationPolicy, ImputeMode, Kind, ParamSet,
    RngStream, TruncationInterval,
};

create_exception!(
    trunclc,
    TruncLcError,
    PyException,
    "Base class for sampler and numerical failures."
);
create_exception!(
    trunclc,
    TruncationOverflowError,
    TruncLcError,
    "The quantile route lost the tail."
);
create_exception!(
    trunclc,
    SamplerBreakdownError,
    TruncLcError,
    "A variate could not be produced."
);

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::TruncationOverflow { .. } => TruncationOverflowError::new_err(msg),
        Error::SamplerBreakdown { .. } => SamplerBreakdownError::new_err(msg),
        Error::UnknownFamily(_)
        | Error::InvalidParameter { .. }
        | Error::MissingParameter { .. }
        | Error::UnexpectedParameter { .. }
        | Error::InvalidInterval(_)
        | Error::Domain(_)
        | Error::Precondition(_)
        | Error::Parse(_) => PyValueError::new_err(msg),
        _ => TruncLcError::new_err(msg),
    }
}

trait OrPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> OrPy<T> for trunclc::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

fn param_set(params: Option<&Bound<'_, PyDict>>) -> PyResult<ParamSet> {
    let mut set = ParamSet::new();
    if let Some(d) = params {
        for (k, v) in d.iter() {
            set.set(k.extract::<String>()?, v.extract::<f64>()?);
        }
    }
    Ok(set)
}

fn params_dict<'py>(py: Python<'py>, p: &ParamSet) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (k, v) in p.iter() {
        d.set_item(k, v)?;
    }
    Ok(d)
}

/// A parameterized base distribution.
#[pyclass(name = "Distribution", module = "trunclc", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyDistribution {
    inner: DistributionDescriptor,
}

#[pymethods]
impl PyDistribution {
    #[new]
    #[pyo3(signature = (family, **params))]
    fn new(family: &str, params: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let inner = build_descriptor(family, &param_set(params)?).py_err()?;
        Ok(Self { inner })
    }

    #[getter]
    fn family(&self) -> &str {
        &self.inner.family_name
    }

    #[getter]
    fn params<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        params_dict(py, &self.inner.params)
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner.kind {
            Kind::Discrete => "discrete",
            Kind::Continuous => "continuous",
        }
    }

    #[getter]
    fn mode(&self) -> f64 {
        self.inner.mode
    }

    #[getter]
    fn mu(&self) -> f64 {
        self.inner.mu
    }

    #[getter]
    fn sigma(&self) -> f64 {
        self.inner.sigma
    }

    #[getter]
    fn support(&self) -> (f64, f64) {
        (self.inner.support.lower, self.inner.support.upper)
    }

    fn log_pdf(&self, x: f64) -> f64 {
        self.inner.log_pdf(x)
    }

    fn log_cdf(&self, x: f64) -> f64 {
        self.inner.log_cdf(x)
    }

    fn log_sf(&self, x: f64) -> f64 {
        self.inner.log_sf(x)
    }

    fn quantile(&self, p: f64) -> Option<f64> {
        self.inner.quantile(p)
    }

    /// Restrict to `]lower, upper]`.
    #[pyo3(signature = (lower = f64::NEG_INFINITY, upper = f64::INFINITY))]
    fn truncate(&self, lower: f64, upper: f64) -> PyResult<PyTarget> {
        PyTarget::new(self, lower, upper)
    }

    fn __repr__(&self) -> String {
        format!("Distribution({:?}, {})", self.inner.family_name, self.inner.params)
    }
}

/// A distribution truncated to `]lower, upper]`.
#[pyclass(name = "TruncatedTarget", module = "trunclc", frozen)]
struct PyTarget {
    inner: trunclc::TruncatedTarget,
}

#[pymethods]
impl PyTarget {
    #[new]
    #[pyo3(signature = (dist, lower = f64::NEG_INFINITY, upper = f64::INFINITY))]
    fn new(dist: &PyDistribution, lower: f64, upper: f64) -> PyResult<Self> {
        let iv = TruncationInterval::new(lower, upper).py_err()?;
        let inner = trunclc::TruncatedTarget::new(dist.inner.clone(), iv).py_err()?;
        Ok(Self { inner })
    }

    #[getter]
    fn base(&self) -> PyDistribution {
        PyDistribution {
            inner: self.inner.base().clone(),
        }
    }

    #[getter]
    fn lower(&self) -> f64 {
        self.inner.interval().lower()
    }

    #[getter]
    fn upper(&self) -> f64 {
        self.inner.interval().upper()
    }

    /// `ln P(I)`; `-inf` when the mass is not representable.
    #[getter]
    fn log_mass(&self) -> f64 {
        self.inner.log_mass()
    }

    #[getter]
    fn log_peak(&self) -> f64 {
        self.inner.log_peak()
    }

    #[getter]
    fn mode(&self) -> f64 {
        self.inner.proj_mode()
    }

    #[getter]
    fn is_degenerate(&self) -> bool {
        self.inner.is_degenerate()
    }

    fn contains(&self, x: f64) -> bool {
        self.inner.contains(x)
    }

    fn log_pdf(&self, x: f64) -> f64 {
        self.inner.trunc_log_pdf(x)
    }

    fn log_cdf(&self, x: f64) -> f64 {
        self.inner.trunc_log_cdf(x)
    }

    fn log_sf(&self, x: f64) -> f64 {
        self.inner.trunc_log_sf(x)
    }

    fn quantile(&self, p: f64) -> PyResult<f64> {
        self.inner.trunc_quantile(p).py_err()
    }

    /// Draw `n` variates. `method` is `devroye`, `its` or `hitormiss`;
    /// `impute` is `mode`, `error` or `inf`.
    #[pyo3(signature = (n, method = "devroye", seed = 0, impute = "mode", max_iterations = 10_000))]
    fn sample(
        &self,
        py: Python<'_>,
        n: usize,
        method: &str,
        seed: u64,
        impute: &str,
        max_iterations: u64,
    ) -> PyResult<PySampleBatch> {
        let mode = match impute {
            "mode" => ImputeMode::Mode,
            "error" => ImputeMode::Error,
            "inf" | "infinite" => ImputeMode::Infinite,
            other => return Err(PyValueError::new_err(format!("unknown imputation mode `{other}`"))),
        };
        let policy = ImputationPolicy::new(mode, max_iterations).py_err()?;
        let t = &self.inner;
        let run = |kind: u8| {
            let mut rng = RngStream::new(seed);
            match kind {
                0 => ds_sample_batch(t, n, &mut rng, &policy),
                1 => its_batch(t, n, &mut rng, &policy),
                _ => HitOrMiss::new(t)?.batch(n, &mut rng, &policy).map(|(b, _)| b),
            }
        };
        let kind = match method {
            "devroye" | "ds" => 0,
            "its" => 1,
            "hitormiss" | "hit_or_miss" => 2,
            other => return Err(PyValueError::new_err(format!("unknown method `{other}`"))),
        };
        let batch = py.detach(|| run(kind)).py_err()?;
        Ok(PySampleBatch { inner: batch })
    }

    fn __repr__(&self) -> String {
        format!(
            "TruncatedTarget({} {}, ]{}, {}])",
            self.inner.base().family_name,
            self.inner.base().params,
            self.lower(),
            self.upper()
        )
    }
}

/// Variates with per-value imputation flags and acceptance accounting.
#[pyclass(name = "SampleBatch", module = "trunclc", frozen)]
struct PySampleBatch {
    inner: trunclc::SampleBatch,
}

#[pymethods]
impl PySampleBatch {
    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.values.clone()
    }

    #[getter]
    fn imputed(&self) -> Vec<bool> {
        self.inner.imputed.clone()
    }

    #[getter]
    fn proposals(&self) -> u64 {
        self.inner.proposals
    }

    #[getter]
    fn accepts(&self) -> u64 {
        self.inner.accepts
    }

    #[getter]
    fn method(&self) -> &'static str {
        self.inner.method.as_str()
    }

    #[getter]
    fn n_imputed(&self) -> usize {
        self.inner.n_imputed()
    }

    #[getter]
    fn acceptance_rate(&self) -> Option<f64> {
        self.inner.acceptance_rate()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "SampleBatch(n={}, method={}, imputed={}, proposals={})",
            self.inner.len(),
            self.inner.method.as_str(),
            self.inner.n_imputed(),
            self.inner.proposals
        )
    }
}

/// Safety-scan report for one family over a parameter grid.
#[pyclass(name = "SafetyReport", module = "trunclc", frozen)]
struct PySafetyReport {
    inner: diagnostics::SafetyReport,
}

#[pymethods]
impl PySafetyReport {
    #[getter]
    fn family(&self) -> &str {
        &self.inner.family
    }

    /// One dict per grid cell.
    #[getter]
    fn rows<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let rows = PyList::empty(py);
        for r in &self.inner.rows {
            let d = PyDict::new(py);
            d.set_item("params", params_dict(py, &r.params)?)?;
            d.set_item("mu", r.mu)?;
            d.set_item("sigma", r.sigma)?;
            d.set_item("a_bar", r.a_bar)?;
            d.set_item("a_bar_prime", r.a_bar_prime)?;
            d.set_item("a_bar_dprime", r.a_bar_dprime)?;
            d.set_item("eta", r.eta)?;
            d.set_item("eta_prime", r.eta_prime)?;
            d.set_item("notes", r.notes.clone())?;
            rows.append(d)?;
        }
        Ok(rows)
    }

    /// Grid indices where `eta > eta_prime`.
    fn ordering_counterexamples(&self) -> Vec<usize> {
        self.inner.ordering_counterexamples()
    }

    fn to_csv(&self) -> PyResult<String> {
        self.inner.to_csv_string().py_err()
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    #[staticmethod]
    fn from_csv(text: &str) -> PyResult<Self> {
        let inner = diagnostics::SafetyReport::read_csv(text.as_bytes()).py_err()?;
        Ok(Self { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.rows.len()
    }
}

/// Scan a family over `grid` (a list of parameter dicts). `probes` is
/// `"auto"`, `"geometric-progression"` or a list of depths in standard
/// deviations.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (family, grid, method = "both", probes = None, n_probe = 1000, seed = 0, resolution = 0.01))]
fn scan_safety(
    py: Python<'_>,
    family: &str,
    grid: Vec<Bound<'_, PyDict>>,
    method: &str,
    probes: Option<&Bound<'_, PyAny>>,
    n_probe: usize,
    seed: u64,
    resolution: f64,
) -> PyResult<PySafetyReport> {
    let cells = grid.iter().map(|d| param_set(Some(d))).collect::<PyResult<Vec<_>>>()?;
    let schedule = match probes {
        None => ProbeSchedule::Auto,
        Some(p) => match p.extract::<String>() {
            Ok(s) if s == "auto" => ProbeSchedule::Auto,
            Ok(s) if s == "geometric-progression" => ProbeSchedule::GeometricProgression,
            Ok(s) => return Err(PyValueError::new_err(format!("unknown probe schedule `{s}`"))),
            Err(_) => ProbeSchedule::Standardized(p.extract::<Vec<f64>>()?),
        },
    };
    let cfg = ScanConfig {
        method: method.parse::<ScanMethod>().py_err()?,
        probes: schedule,
        n_probe,
        seed,
        resolution,
        ..ScanConfig::default()
    };
    let inner = py.detach(|| diagnostics::scan_safety(family, &cells, &cfg)).py_err()?;
    Ok(PySafetyReport { inner })
}

/// `E[Z | Z > a]` for the standard normal.
#[pyfunction]
fn truncated_mean_normal(a: f64) -> f64 {
    diagnostics::truncated_mean_oracle_normal(a)
}

/// `E[X | X > a]` for Poisson(`lam`).
#[pyfunction]
fn truncated_mean_poisson(lam: f64, a: f64) -> PyResult<f64> {
    diagnostics::truncated_mean_oracle_poisson(lam, a).py_err()
}

/// Z statistic of the batch mean against `oracle_mean`, as a dict.
#[pyfunction]
#[pyo3(signature = (batch, oracle_mean, threshold = 3.5))]
fn z_test_mean<'py>(
    py: Python<'py>,
    batch: &PySampleBatch,
    oracle_mean: f64,
    threshold: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = diagnostics::z_test_mean(&batch.inner, oracle_mean, threshold).py_err()?;
    let d = PyDict::new(py);
    d.set_item("sample_mean", r.sample_mean)?;
    d.set_item("sample_sd", r.sample_sd)?;
    d.set_item("oracle_mean", r.oracle_mean)?;
    d.set_item("n", r.n)?;
    d.set_item("n_imputed", r.n_imputed)?;
    d.set_item("z", r.z)?;
    d.set_item("pass", r.pass)?;
    Ok(d)
}

/// Geometric(`p`) on `]a, inf[`: shifted DS excess against the base pmf.
/// Returns `(statistic, p_value, passed)`.
#[pyfunction]
#[pyo3(signature = (p, a, n = 100_000, seed = 0))]
fn memorylessness_check(py: Python<'_>, p: f64, a: f64, n: usize, seed: u64) -> PyResult<(f64, f64, bool)> {
    let r = py
        .detach(|| diagnostics::memorylessness_check(p, a, n, &mut RngStream::new(seed)))
        .py_err()?;
    Ok((r.chi_square.statistic, r.chi_square.p_value, r.pass))
}

/// Names of the built-in families.
#[pyfunction]
fn families() -> Vec<String> {
    builtin_registry().names().map(str::to_string).collect()
}

#[pymodule(name = "trunclc")]
fn trunclc_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<PyDistribution>()?;
    m.add_class::<PyTarget>()?;
    m.add_class::<PySampleBatch>()?;
    m.add_class::<PySafetyReport>()?;
    m.add_function(wrap_pyfunction!(scan_safety, m)?)?;
    m.add_function(wrap_pyfunction!(truncated_mean_normal, m)?)?;
    m.add_function(wrap_pyfunction!(truncated_mean_poisson, m)?)?;
    m.add_function(wrap_pyfunction!(z_test_mean, m)?)?;
    m.add_function(wrap_pyfunction!(memorylessness_check, m)?)?;
    m.add_function(wrap_pyfunction!(families, m)?)?;
    m.add("TruncLcError", py.get_type::<TruncLcError>())?;
    m.add("TruncationOverflowError", py.get_type::<TruncationOverflowError>())?;
    m.add("SamplerBreakdownError", py.get_type::<SamplerBreakdownError>())?;
    Ok(())
}
