//! Built-in log-concave families and the registry that builds them.
//!
//! Each family is described by a [`FamilySpec`]: a parameter schema, a
//! builder producing a [`DistributionDescriptor`], and optionally an
//! [`ExceptionHandler`] that swaps in a different base sampler for part of
//! the parameter space (gamma with shape below one is the built-in case).

mod binomial;
mod epd;
mod gamma;
mod geometric;
mod invgauss;
mod negbinom;
mod normal;
mod poisson;
pub(crate) mod quantile;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, LazyLock};

use crate::descriptor::{BaseSampler, DistributionDescriptor, Kind, ParamSet};
use crate::error::{Error, Result};
use crate::rng::RngStream;

pub use epd::{epd_log_pdf, epd_to_gamma, EpdParams};
pub use gamma::EpdGammaSampler;

/// Domain constraint on one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Constraint {
    Real,
    Positive,
    /// `0 < x < 1`.
    OpenUnit,
    /// `x >= bound`.
    AtLeast(f64),
    /// Integer `x >= 1`.
    PositiveInteger,
}

impl Constraint {
    pub fn admits(&self, x: f64) -> bool {
        if x.is_nan() {
            return false;
        }
        match *self {
            Constraint::Real => x.is_finite(),
            Constraint::Positive => x > 0.0 && x.is_finite(),
            Constraint::OpenUnit => x > 0.0 && x < 1.0,
            Constraint::AtLeast(b) => x >= b && x.is_finite(),
            Constraint::PositiveInteger => x >= 1.0 && x.fract() == 0.0 && x < 9.0e15,
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            Constraint::Real => "finite real".into(),
            Constraint::Positive => "> 0".into(),
            Constraint::OpenUnit => "in (0, 1)".into(),
            Constraint::AtLeast(b) => format!(">= {b}"),
            Constraint::PositiveInteger => "integer >= 1".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ParamSpec {
    pub name: String,
    pub constraint: Constraint,
    pub default: Option<f64>,
}

impl ParamSpec {
    pub fn new(name: &str, constraint: Constraint) -> Self {
        Self {
            name: name.into(),
            constraint,
            default: None,
        }
    }

    pub fn with_default(mut self, value: f64) -> Self {
        self.default = Some(value);
        self
    }
}

pub type Builder = Arc<dyn Fn(&ParamSet) -> Result<DistributionDescriptor> + Send + Sync>;
pub type RoutePredicate = Arc<dyn Fn(&ParamSet) -> bool + Send + Sync>;
pub type RouteBuilder = Arc<dyn Fn(&ParamSet) -> Result<Arc<dyn BaseSampler>> + Send + Sync>;

/// Overrides the base sampler of a family on part of its parameter space.
#[derive(Clone)]
pub struct ExceptionHandler {
    pub description: String,
    pub applies: RoutePredicate,
    pub route: RouteBuilder,
}

impl fmt::Debug for ExceptionHandler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExceptionHandler")
            .field("description", &self.description)
            .finish()
    }
}

#[derive(Clone)]
pub struct FamilySpec {
    pub name: String,
    pub aliases: Vec<String>,
    pub params: Vec<ParamSpec>,
    pub builder: Builder,
    pub exception: Option<ExceptionHandler>,
}

impl fmt::Debug for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FamilySpec")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("exception", &self.exception)
            .finish()
    }
}

impl FamilySpec {
    pub fn new(
        name: &str,
        params: Vec<ParamSpec>,
        builder: impl Fn(&ParamSet) -> Result<DistributionDescriptor> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            aliases: Vec::new(),
            params,
            builder: Arc::new(builder),
            exception: None,
        }
    }

    pub fn alias(mut self, name: &str) -> Self {
        self.aliases.push(name.into());
        self
    }

    pub fn with_exception(mut self, handler: ExceptionHandler) -> Self {
        self.exception = Some(handler);
        self
    }

    /// Checks `given` against the schema and returns the parameters in
    /// schema order with defaults filled in.
    pub fn validate(&self, given: &ParamSet) -> Result<ParamSet> {
        for (name, _) in given.iter() {
            if !self.params.iter().any(|p| p.name == name) {
                return Err(Error::UnexpectedParameter {
                    family: self.name.clone(),
                    param: name.into(),
                });
            }
        }
        let mut out = ParamSet::new();
        for spec in &self.params {
            let value = given
                .get(&spec.name)
                .or(spec.default)
                .ok_or_else(|| Error::MissingParameter {
                    family: self.name.clone(),
                    param: spec.name.clone(),
                })?;
            if !spec.constraint.admits(value) {
                return Err(Error::InvalidParameter {
                    family: self.name.clone(),
                    param: spec.name.clone(),
                    constraint: spec.constraint.describe(),
                    value,
                });
            }
            out.set(spec.name.clone(), value);
        }
        Ok(out)
    }

    pub fn build(&self, given: &ParamSet) -> Result<DistributionDescriptor> {
        let params = self.validate(given)?;
        let mut desc = (self.builder)(&params)?;
        if let Some(handler) = &self.exception {
            if (handler.applies)(&params) {
                desc.alternate = Some((handler.route)(&params)?);
            }
        }
        Ok(desc)
    }
}

/// Named collection of families.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    families: BTreeMap<String, FamilySpec>,
    aliases: BTreeMap<String, String>,
}

impl Registry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Registry holding every built-in family.
    pub fn builtin() -> Self {
        let mut r = Self::empty();
        for spec in [
            normal::spec(),
            poisson::spec(),
            binomial::spec(),
            negbinom::spec(),
            geometric::spec(),
            gamma::spec(),
            gamma::exponential_spec(),
            invgauss::spec(),
            epd::spec(),
        ] {
            r.register(spec);
        }
        r
    }

    /// Adds (or replaces) a family.
    pub fn register(&mut self, spec: FamilySpec) {
        for a in &spec.aliases {
            self.aliases.insert(a.clone(), spec.name.clone());
        }
        self.families.insert(spec.name.clone(), spec);
    }

    pub fn get(&self, family: &str) -> Option<&FamilySpec> {
        let key = family.to_ascii_lowercase();
        let name = self.aliases.get(&key).unwrap_or(&key);
        self.families.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.families.keys().map(String::as_str)
    }

    pub fn build(&self, family: &str, params: &ParamSet) -> Result<DistributionDescriptor> {
        self.get(family)
            .ok_or_else(|| Error::UnknownFamily(family.into()))?
            .build(params)
    }
}

static BUILTIN: LazyLock<Registry> = LazyLock::new(Registry::builtin);

pub fn builtin_registry() -> &'static Registry {
    &BUILTIN
}

/// Builds a descriptor from the built-in registry.
pub fn build_descriptor(family: &str, params: &ParamSet) -> Result<DistributionDescriptor> {
    BUILTIN.build(family, params)
}

fn build(family: &str, params: &[(&str, f64)]) -> Result<DistributionDescriptor> {
    build_descriptor(family, &params.iter().copied().collect())
}

pub fn normal(mu: f64, sigma: f64) -> Result<DistributionDescriptor> {
    build("normal", &[("mu", mu), ("sigma", sigma)])
}

pub fn poisson(lambda: f64) -> Result<DistributionDescriptor> {
    build("poisson", &[("lambda", lambda)])
}

pub fn binomial(n: f64, p: f64) -> Result<DistributionDescriptor> {
    build("binomial", &[("n", n), ("p", p)])
}

pub fn negative_binomial(n: f64, p: f64) -> Result<DistributionDescriptor> {
    build("negative_binomial", &[("n", n), ("p", p)])
}

pub fn geometric(p: f64) -> Result<DistributionDescriptor> {
    build("geometric", &[("p", p)])
}

pub fn gamma(alpha: f64, lambda: f64) -> Result<DistributionDescriptor> {
    build("gamma", &[("alpha", alpha), ("lambda", lambda)])
}

pub fn exponential(lambda: f64) -> Result<DistributionDescriptor> {
    build("exponential", &[("lambda", lambda)])
}

pub fn inverse_gaussian(mu: f64, lambda: f64) -> Result<DistributionDescriptor> {
    build("inverse_gaussian", &[("mu", mu), ("lambda", lambda)])
}

pub fn epd(beta: f64) -> Result<DistributionDescriptor> {
    build("epd", &[("beta", beta)])
}

/// First point set at which a log-concavity probe failed.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcavityViolation {
    /// `(x-1, x, x+1)` for discrete probes, `(x1, midpoint, x2)` otherwise.
    pub points: [f64; 3],
    /// How far the inequality is missed, on the log scale.
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcavityReport {
    pub log_concave: bool,
    pub violation: Option<ConcavityViolation>,
}

const CONCAVITY_TOL: f64 = 1e-9;

/// Probes `2 l(x) >= l(x-1) + l(x+1)` at every integer of `[lo, hi]`
/// (discrete), or midpoint concavity on `n_probes` pseudo-random pairs in
/// `[lo, hi]` (continuous). Points where `l` is `-inf` are skipped.
pub fn check_log_concavity(desc: &DistributionDescriptor, lo: f64, hi: f64, n_probes: usize) -> ConcavityReport {
    let l = |x: f64| desc.log_pdf(x);
    let mut report = ConcavityReport {
        log_concave: true,
        violation: None,
    };
    let mut check = |p: [f64; 3], lhs: f64, rhs: f64| {
        if lhs.is_finite() && rhs.is_finite() && lhs < rhs - CONCAVITY_TOL {
            report.log_concave = false;
            report.violation = Some(ConcavityViolation {
                points: p,
                excess: rhs - lhs,
            });
            return false;
        }
        true
    };
    match desc.kind {
        Kind::Discrete => {
            let mut x = lo.ceil();
            while x <= hi.floor() {
                if !check([x - 1.0, x, x + 1.0], 2.0 * l(x), l(x - 1.0) + l(x + 1.0)) {
                    break;
                }
                x += 1.0;
            }
        }
        Kind::Continuous => {
            let mut rng = RngStream::new(0x6c63_7072_6f62_6521);
            for _ in 0..n_probes {
                let x1 = rng.uniform_in(lo, hi);
                let x2 = rng.uniform_in(lo, hi);
                let mid = 0.5 * (x1 + x2);
                if !check([x1, mid, x2], l(mid), 0.5 * (l(x1) + l(x2))) {
                    break;
                }
            }
        }
    }
    report
}
