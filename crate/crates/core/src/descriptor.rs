//! The base-distribution descriptor shared by every sampler.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Discrete,
    Continuous,
}

/// Closed support `[lower, upper]`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub lower: f64,
    pub upper: f64,
}

impl Support {
    pub const REAL_LINE: Support = Support {
        lower: f64::NEG_INFINITY,
        upper: f64::INFINITY,
    };

    pub fn new(lower: f64, upper: f64) -> Self {
        Self { lower, upper }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lower && x <= self.upper
    }
}

/// Ordered, named real parameters.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamSet(Vec<(String, f64)>);

impl ParamSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: impl Into<String>, value: f64) -> Self {
        self.set(name, value);
        self
    }

    pub fn set(&mut self, name: impl Into<String>, value: f64) {
        let name = name.into();
        match self.0.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = value,
            None => self.0.push((name, value)),
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(n, v)| (n.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<(S, f64)> for ParamSet {
    fn from_iter<I: IntoIterator<Item = (S, f64)>>(iter: I) -> Self {
        let mut set = ParamSet::new();
        for (n, v) in iter {
            set.set(n, v);
        }
        set
    }
}

impl fmt::Display for ParamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, v) in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{n}={v}")?;
            first = false;
        }
        Ok(())
    }
}

/// Log-space density functions of a base distribution.
///
/// Implementations may assume the argument lies inside the support and,
/// for discrete families, is an integer: [`DistributionDescriptor`] filters
/// everything else before delegating.
pub trait Density: Send + Sync + fmt::Debug {
    fn log_pdf(&self, x: f64) -> f64;
    fn log_cdf(&self, x: f64) -> f64;
    fn log_sf(&self, x: f64) -> f64;

    /// Quantile `inf{x : F(x) >= p}`, evaluated in linear probability space.
    /// `None` when the family offers no quantile function.
    fn quantile(&self, _p: f64) -> Option<f64> {
        None
    }
}

/// An alternate route drawing from the untruncated base law, installed by a
/// family's exception handler when the direct route does not apply.
pub trait BaseSampler: Send + Sync + fmt::Debug {
    /// One base variate together with the envelope proposals it consumed.
    fn draw(&self, rng: &mut RngStream) -> Result<(f64, u64)>;
}

/// A parameterized base distribution: `f`, `F`, `1 - F` (all in log form),
/// mode, support, and the central-tendency/dispersion pair `(mu, sigma)`
/// used to standardize truncation depths.
#[derive(Clone)]
pub struct DistributionDescriptor {
    pub family_name: String,
    pub params: ParamSet,
    pub kind: Kind,
    pub support: Support,
    pub mode: f64,
    pub mu: f64,
    pub sigma: f64,
    pub density: Arc<dyn Density>,
    pub alternate: Option<Arc<dyn BaseSampler>>,
}

impl fmt::Debug for DistributionDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DistributionDescriptor")
            .field("family_name", &self.family_name)
            .field("params", &self.params)
            .field("kind", &self.kind)
            .field("support", &self.support)
            .field("mode", &self.mode)
            .field("mu", &self.mu)
            .field("sigma", &self.sigma)
            .field("alternate", &self.alternate.is_some())
            .finish()
    }
}

impl DistributionDescriptor {
    pub fn is_discrete(&self) -> bool {
        self.kind == Kind::Discrete
    }

    fn in_support(&self, x: f64) -> bool {
        self.support.contains(x) && (self.kind == Kind::Continuous || x.fract() == 0.0)
    }

    /// `ln f(x)`; `-inf` off the support (and off the integers for discrete
    /// families).
    pub fn log_pdf(&self, x: f64) -> f64 {
        if !self.in_support(x) {
            return f64::NEG_INFINITY;
        }
        self.density.log_pdf(x)
    }

    /// `ln F(x) = ln P(X <= x)`.
    pub fn log_cdf(&self, x: f64) -> f64 {
        let x = self.lattice(x);
        if x.is_nan() {
            return f64::NAN;
        }
        if x < self.support.lower {
            f64::NEG_INFINITY
        } else if x >= self.support.upper {
            0.0
        } else {
            self.density.log_cdf(x)
        }
    }

    /// `ln(1 - F(x)) = ln P(X > x)`.
    pub fn log_sf(&self, x: f64) -> f64 {
        let x = self.lattice(x);
        if x.is_nan() {
            return f64::NAN;
        }
        if x < self.support.lower {
            0.0
        } else if x >= self.support.upper {
            f64::NEG_INFINITY
        } else {
            self.density.log_sf(x)
        }
    }

    pub fn quantile(&self, p: f64) -> Option<f64> {
        self.density.quantile(p)
    }

    pub fn has_quantile(&self) -> bool {
        self.density.quantile(0.5).is_some()
    }

    fn lattice(&self, x: f64) -> f64 {
        match self.kind {
            Kind::Discrete => x.floor(),
            Kind::Continuous => x,
        }
    }
}
