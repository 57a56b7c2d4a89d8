use super::{ln_poisson_raw, log1mexp};

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAX_ITER: usize = 1_000_000;

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Logarithms of the regularized incomplete gamma functions,
/// `(ln P(a, x), ln Q(a, x))`.
///
/// The smaller of the two is computed directly (series for `P` when
/// `x < a + 1`, Lentz continued fraction for `Q` otherwise) and the other
/// follows from `log1mexp`, so deep tails never pass through `1 - P`.
pub fn ln_gamma_inc(a: f64, x: f64) -> (f64, f64) {
    if x.is_nan() || a.is_nan() || a <= 0.0 {
        return (f64::NAN, f64::NAN);
    }
    if x <= 0.0 {
        return (f64::NEG_INFINITY, 0.0);
    }
    if x == f64::INFINITY {
        return (0.0, f64::NEG_INFINITY);
    }
    // ln(x^a e^-x / Γ(a + 1))
    let ln_prefix = ln_poisson_raw(a, x);
    if x < a + 1.0 {
        let mut ap = a;
        let mut term = 1.0;
        let mut sum = 1.0;
        for _ in 0..MAX_ITER {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term < sum * EPS {
                break;
            }
        }
        let lp = (ln_prefix + sum.ln()).min(0.0);
        (lp, log1mexp(lp))
    } else {
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / FPMIN;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < FPMIN {
                d = FPMIN;
            }
            c = b + an / c;
            if c.abs() < FPMIN {
                c = FPMIN;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < EPS {
                break;
            }
        }
        // Q = x^a e^-x / Γ(a) * h = a * prefix * h
        let lq = (ln_prefix + a.ln() + h.ln()).min(0.0);
        (log1mexp(lq), lq)
    }
}
