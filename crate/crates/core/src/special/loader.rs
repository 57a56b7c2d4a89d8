//! Saddle-point evaluation of Poisson and binomial log-probabilities
//! (Loader's method): the log-mass is assembled from Stirling-series
//! remainders and a deviance term, avoiding the cancellation that plagues
//! `ln(n!) - ln(k!) - ...`.

use std::f64::consts::PI;

use super::LN_SQRT_2PI;

const S0: f64 = 1.0 / 12.0;
const S1: f64 = 1.0 / 360.0;
const S2: f64 = 1.0 / 1260.0;
const S3: f64 = 1.0 / 1680.0;
const S4: f64 = 1.0 / 1188.0;

/// Error of Stirling's formula, `ln(n!) - ln(sqrt(2πn) (n/e)^n)`.
pub fn stirlerr(n: f64) -> f64 {
    if n <= 15.0 {
        if n == 0.0 {
            return 0.0;
        }
        return libm::lgamma(n + 1.0) - (n + 0.5) * n.ln() + n - LN_SQRT_2PI;
    }
    let nn = n * n;
    if n > 500.0 {
        (S0 - S1 / nn) / n
    } else if n > 80.0 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if n > 35.0 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance term `x ln(x/np) + np - x`, computed by series when `x ≈ np`.
pub fn bd0(x: f64, np: f64) -> f64 {
    if x == 0.0 {
        return np;
    }
    if (x - np).abs() < 0.1 * (x + np) {
        let mut v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        if s.abs() < f64::MIN_POSITIVE {
            return s;
        }
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / f64::from(2 * j + 1);
            if s1 == s {
                return s1;
            }
            s = s1;
        }
    }
    x * (x / np).ln() + np - x
}

/// `ln(λ^x e^{-λ} / Γ(x + 1))` for real `x >= 0`.
pub fn ln_poisson_raw(x: f64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return if x == 0.0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if !lambda.is_finite() || x < 0.0 {
        return f64::NEG_INFINITY;
    }
    if x <= lambda * f64::MIN_POSITIVE {
        return -lambda;
    }
    if lambda < x * f64::MIN_POSITIVE {
        if !x.is_finite() {
            return f64::NEG_INFINITY;
        }
        return -lambda + x * lambda.ln() - libm::lgamma(x + 1.0);
    }
    -stirlerr(x) - bd0(x, lambda) - 0.5 * (2.0 * PI * x).ln()
}

/// `ln(C(n, x) p^x q^(n-x))` for real `0 <= x <= n`, with `q = 1 - p`
/// supplied separately so callers can keep it exact.
pub fn ln_binom_raw(x: f64, n: f64, p: f64, q: f64) -> f64 {
    if p == 0.0 {
        return if x == 0.0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if q == 0.0 {
        return if x == n { 0.0 } else { f64::NEG_INFINITY };
    }
    if x == 0.0 {
        if n == 0.0 {
            return 0.0;
        }
        return if p < 0.1 { -bd0(n, n * q) - n * p } else { n * q.ln() };
    }
    if x == n {
        return if q < 0.1 { -bd0(n, n * p) - n * q } else { n * p.ln() };
    }
    if x < 0.0 || x > n {
        return f64::NEG_INFINITY;
    }
    let lc = stirlerr(n) - stirlerr(x) - stirlerr(n - x) - bd0(x, n * p) - bd0(n - x, n * q);
    let lf = (2.0 * PI).ln() + x.ln() + (-x / n).ln_1p();
    lc - 0.5 * lf
}
