//! Truncated targets: a base descriptor restricted to `]a, b]`.
//!
//! Interval masses are assembled in log space from whichever tail keeps
//! the subtraction well conditioned. A mass smaller than the smallest
//! positive double is reported as `-inf`; such a target is *degenerate* and
//! samplers fall back on their imputation policy instead of failing.

use std::f64::consts::LN_2;

use crate::descriptor::{DistributionDescriptor, Kind};
use crate::error::{Error, Result};
use crate::special::{log_diff_exp, LN_MIN_POSITIVE};

/// Half-open truncation interval `]a, b]`: `a` excluded, `b` included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationInterval {
    lower: f64,
    upper: f64,
}

impl TruncationInterval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() {
            return Err(Error::InvalidInterval("NaN bound".into()));
        }
        if lower >= upper {
            return Err(Error::InvalidInterval(format!(
                "lower bound {lower} must be below upper bound {upper}"
            )));
        }
        if lower == f64::INFINITY || upper == f64::NEG_INFINITY {
            return Err(Error::InvalidInterval(format!("]{lower}, {upper}] is empty")));
        }
        Ok(Self { lower, upper })
    }

    /// `]-inf, +inf]`: no truncation.
    pub fn full() -> Self {
        Self {
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
        }
    }

    /// `]a, +inf]`.
    pub fn above(lower: f64) -> Result<Self> {
        Self::new(lower, f64::INFINITY)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lower && x <= self.upper
    }
}

/// Which pair of tail functions an interval mass is computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MassRoute {
    /// `ln(F(b) - F(a))`
    Cdf,
    /// `ln(S(a) - S(b))`
    Survival,
}

fn log_sub(hi: f64, lo: f64) -> f64 {
    if hi <= lo {
        f64::NEG_INFINITY
    } else {
        log_diff_exp(hi, lo).unwrap_or(f64::NAN)
    }
}

/// `ln P(a < X <= b)` through the requested route, with no underflow floor.
pub fn log_mass_via(desc: &DistributionDescriptor, a: f64, b: f64, route: MassRoute) -> f64 {
    if a >= b {
        return f64::NEG_INFINITY;
    }
    match route {
        MassRoute::Cdf => log_sub(desc.log_cdf(b), desc.log_cdf(a)),
        MassRoute::Survival => log_sub(desc.log_sf(a), desc.log_sf(b)),
    }
}

/// The route `log_interval_mass` picks for lower bound `a`: the CDF route
/// while `F(a) < 1/2`, the survival route beyond.
pub fn mass_route(desc: &DistributionDescriptor, a: f64) -> MassRoute {
    if desc.log_cdf(a) < -LN_2 {
        MassRoute::Cdf
    } else {
        MassRoute::Survival
    }
}

fn log_mass_between(desc: &DistributionDescriptor, a: f64, b: f64) -> f64 {
    log_mass_via(desc, a, b, mass_route(desc, a))
}

/// `ln P(I)` for `I = ]a, b]`; `-inf` once the mass is too small to be a
/// positive double.
pub fn log_interval_mass(desc: &DistributionDescriptor, iv: &TruncationInterval) -> f64 {
    let lm = log_mass_between(desc, iv.lower, iv.upper);
    if lm < LN_MIN_POSITIVE {
        f64::NEG_INFINITY
    } else {
        lm.min(0.0)
    }
}

/// Mode of the truncated law: the base mode clamped into `I`. For discrete
/// families the bounds are floored first and the lower one is moved to the
/// first admissible integer.
pub fn project_mode(desc: &DistributionDescriptor, iv: &TruncationInterval) -> Result<f64> {
    let m = desc.mode;
    let projected = match desc.kind {
        Kind::Continuous => m.max(iv.lower).min(iv.upper),
        Kind::Discrete => {
            let a = iv.lower.floor();
            let b = iv.upper.floor();
            (a + 1.0).max(b.min(m))
        }
    };
    let inside = desc.support.contains(projected)
        && projected >= iv.lower
        && projected <= iv.upper
        && projected.is_finite()
        && (desc.kind == Kind::Continuous || projected.fract() == 0.0);
    if inside {
        Ok(projected)
    } else {
        Err(Error::ModeOutsideInterval { mode: projected })
    }
}

/// A base distribution truncated to `]a, b]`, with its log-mass, projected
/// mode and log-peak `ln f_I(m)` cached.
#[derive(Debug, Clone)]
pub struct TruncatedTarget {
    base: DistributionDescriptor,
    interval: TruncationInterval,
    log_mass: f64,
    proj_mode: f64,
    log_peak: f64,
}

impl TruncatedTarget {
    pub fn new(base: DistributionDescriptor, interval: TruncationInterval) -> Result<Self> {
        let (lo, hi) = support_bounds(&base, &interval);
        if lo > hi || (base.kind == Kind::Continuous && lo == hi) {
            return Err(Error::InvalidInterval(format!(
                "]{}, {}] does not meet the support [{}, {}] of {}",
                interval.lower, interval.upper, base.support.lower, base.support.upper, base.family_name
            )));
        }
        let log_mass = log_interval_mass(&base, &interval);
        let proj_mode = project_mode(&base, &interval)?;
        let log_peak = base.log_pdf(proj_mode) - log_mass;
        Ok(Self {
            base,
            interval,
            log_mass,
            proj_mode,
            log_peak,
        })
    }

    /// The base law with no truncation.
    pub fn untruncated(base: DistributionDescriptor) -> Result<Self> {
        Self::new(base, TruncationInterval::full())
    }

    pub fn base(&self) -> &DistributionDescriptor {
        &self.base
    }

    pub fn interval(&self) -> &TruncationInterval {
        &self.interval
    }

    pub fn log_mass(&self) -> f64 {
        self.log_mass
    }

    pub fn proj_mode(&self) -> f64 {
        self.proj_mode
    }

    /// `ln f_I(m)`; `+inf` on a degenerate target.
    pub fn log_peak(&self) -> f64 {
        self.log_peak
    }

    pub fn kind(&self) -> Kind {
        self.base.kind
    }

    pub fn is_degenerate(&self) -> bool {
        self.log_mass == f64::NEG_INFINITY
    }

    /// Whether `x` is a point of `I ∩ X`.
    pub fn contains(&self, x: f64) -> bool {
        self.interval.contains(x)
            && self.base.support.contains(x)
            && (self.base.kind == Kind::Continuous || x.fract() == 0.0)
    }

    /// Infimum of `I ∩ X` (for discrete targets, its smallest point).
    pub fn lowest_point(&self) -> f64 {
        support_bounds(&self.base, &self.interval).0
    }

    /// Supremum of `I ∩ X`.
    pub fn highest_point(&self) -> f64 {
        support_bounds(&self.base, &self.interval).1
    }

    /// `ln f_I(x) = ln f(x) - ln P(I)` inside `I`, `-inf` outside.
    pub fn trunc_log_pdf(&self, x: f64) -> f64 {
        if !self.interval.contains(x) {
            return f64::NEG_INFINITY;
        }
        self.base.log_pdf(x) - self.log_mass
    }

    /// `ln F_I(x)`.
    pub fn trunc_log_cdf(&self, x: f64) -> f64 {
        if x <= self.interval.lower {
            return f64::NEG_INFINITY;
        }
        if x >= self.interval.upper {
            return 0.0;
        }
        (log_mass_between(&self.base, self.interval.lower, x) - self.log_mass).min(0.0)
    }

    /// `ln(1 - F_I(x))`.
    pub fn trunc_log_sf(&self, x: f64) -> f64 {
        if x <= self.interval.lower {
            return 0.0;
        }
        if x >= self.interval.upper {
            return f64::NEG_INFINITY;
        }
        (log_mass_between(&self.base, x, self.interval.upper) - self.log_mass).min(0.0)
    }

    /// Truncated quantile `q(F(a) + p P(I))`.
    ///
    /// The probability argument is assembled in linear space, exactly the
    /// pipeline inverse-transform samplers use. When that pipeline loses the
    /// information (the argument rounds to 1, or the base quantile lands
    /// outside `I`) the result is a [`Error::TruncationOverflow`] rather
    /// than a silently wrong value.
    pub fn trunc_quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
        }
        if !self.base.has_quantile() {
            return Err(Error::MissingQuantile(self.base.family_name.clone()));
        }
        if p == 0.0 {
            return Ok(self.lowest_point());
        }
        let f_a = self.base.log_cdf(self.interval.lower).exp();
        let mass = self.log_mass.exp();
        let arg = f_a + p * mass;
        if (p < 1.0 && arg >= 1.0) || mass == 0.0 {
            return Err(Error::TruncationOverflow {
                p,
                value: f64::INFINITY,
            });
        }
        let x = self
            .base
            .quantile(arg.min(1.0))
            .ok_or_else(|| Error::MissingQuantile(self.base.family_name.clone()))?;
        if !x.is_finite() || !self.contains(x) {
            return Err(Error::TruncationOverflow { p, value: x });
        }
        Ok(x)
    }
}

/// `(inf, sup)` of `I ∩ X`, on the integer lattice for discrete families.
fn support_bounds(base: &DistributionDescriptor, iv: &TruncationInterval) -> (f64, f64) {
    match base.kind {
        Kind::Continuous => (iv.lower.max(base.support.lower), iv.upper.min(base.support.upper)),
        Kind::Discrete => (
            (iv.lower.floor() + 1.0).max(base.support.lower.ceil()),
            iv.upper.floor().min(base.support.upper.floor()),
        ),
    }
}
