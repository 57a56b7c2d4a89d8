//! Quantile evaluation in linear probability space.
//!
//! These are the descriptors inverse-transform sampling relies on. They are
//! accurate for probabilities a double can resolve and make no attempt to
//! go further; that limit is what the safety scanner measures.

use crate::special::ndtri;

/// Which tail a continuous inversion solves in.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Tail {
    /// Solve `F(x) = p`.
    Lower(f64),
    /// Solve `1 - F(x) = q`.
    Upper(f64),
}

impl Tail {
    /// Picks the tail that keeps the target probability below 1/2.
    pub(crate) fn for_p(p: f64) -> Self {
        if p > 0.5 {
            Tail::Upper(1.0 - p)
        } else {
            Tail::Lower(p)
        }
    }
}

/// Safeguarded Newton inversion of a continuous CDF on `[lo, +inf)`.
///
/// `cdf`, `sf` and `pdf` are linear-space evaluations. Newton steps that
/// leave the current bracket fall back to bisection.
pub(crate) fn invert_continuous(
    tail: Tail,
    guess: f64,
    lo: f64,
    cdf: impl Fn(f64) -> f64,
    sf: impl Fn(f64) -> f64,
    pdf: impl Fn(f64) -> f64,
) -> f64 {
    let g = |x: f64| match tail {
        Tail::Lower(p) => cdf(x) - p,
        Tail::Upper(q) => q - sf(x),
    };
    match tail {
        Tail::Lower(p) if p <= 0.0 => return lo,
        Tail::Upper(q) if q <= 0.0 => return f64::INFINITY,
        Tail::Lower(p) if p >= 1.0 => return f64::INFINITY,
        Tail::Upper(q) if q >= 1.0 => return lo,
        _ => {}
    }

    let mut x = if guess.is_finite() && guess > lo {
        guess
    } else {
        lo + 1.0
    };
    let (mut a, mut b) = (lo, f64::INFINITY);
    // bracket
    let mut step = x.abs().max(1.0);
    for _ in 0..2000 {
        let gx = g(x);
        if gx.is_nan() {
            return f64::NAN;
        }
        if gx < 0.0 {
            a = x;
            x += step;
            step *= 2.0;
            if !x.is_finite() {
                return f64::INFINITY;
            }
        } else {
            b = x;
            break;
        }
    }
    if !b.is_finite() {
        return f64::INFINITY;
    }

    let mut x = if a == lo { 0.5 * (a + b) } else { x };
    for _ in 0..500 {
        let gx = g(x);
        if gx == 0.0 {
            return x;
        }
        if gx < 0.0 {
            a = x;
        } else {
            b = x;
        }
        let d = pdf(x);
        let newton = x - gx / d;
        let next = if d > 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs() || b - a <= 4.0 * f64::EPSILON * b.abs() {
            return next;
        }
        x = next;
    }
    x
}

/// Smallest lattice point `x` in `[lo, hi]` with `F(x) >= p`, where
/// `F(x) = exp(log_cdf(x))`.
///
/// Starts from a Cornish–Fisher guess `mu + sigma (z + skew (z^2 - 1) / 6)`
/// and walks with doubling steps before bisecting.
pub(crate) fn discrete_quantile(
    p: f64,
    lo: f64,
    hi: f64,
    mu: f64,
    sigma: f64,
    skew: f64,
    log_cdf: impl Fn(f64) -> f64,
) -> f64 {
    if p.is_nan() {
        return f64::NAN;
    }
    if p <= 0.0 {
        return lo;
    }
    if p >= 1.0 {
        return hi;
    }
    let cdf = |x: f64| log_cdf(x).exp();
    let z = ndtri(p);
    let guess = mu + sigma * (z + skew * (z * z - 1.0) / 6.0);
    let mut x = if guess.is_finite() {
        guess.round().clamp(lo, hi.min(9.0e15))
    } else {
        lo
    };

    let (mut below, mut above);
    if cdf(x) >= p {
        above = x;
        let mut step = 1.0;
        loop {
            let cand = (above - step).max(lo);
            if cand == above {
                return above;
            }
            if cdf(cand) >= p {
                above = cand;
                if cand == lo {
                    return lo;
                }
                step *= 2.0;
            } else {
                below = cand;
                break;
            }
        }
    } else {
        below = x;
        let mut step = 1.0;
        loop {
            x = below + step;
            if x >= hi {
                if cdf(hi) >= p || hi.is_infinite() {
                    above = hi;
                    break;
                }
                return hi;
            }
            if x > 9.0e15 {
                return f64::INFINITY;
            }
            if cdf(x) >= p {
                above = x;
                break;
            }
            below = x;
            step *= 2.0;
        }
        if above.is_infinite() {
            // bisect on a finite stand-in for the upper end
            above = (below * 2.0).max(below + 1.0);
            while cdf(above) < p {
                below = above;
                above *= 2.0;
                if above > 9.0e15 {
                    return f64::INFINITY;
                }
            }
        }
    }
    while above - below > 1.0 {
        let mid = (0.5 * (above + below)).floor();
        if cdf(mid) >= p {
            above = mid;
        } else {
            below = mid;
        }
    }
    above
}
