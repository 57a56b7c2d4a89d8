use super::{ln_binom_raw, log1mexp};

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAX_ITER: usize = 1_000_000;

/// Logarithms of the regularized incomplete beta function and its
/// complement, `(ln I_x(a, b), ln(1 - I_x(a, b)))`.
///
/// `y` must equal `1 - x`; it is passed separately so that callers holding
/// an exact complement (e.g. `p` and `1 - p` of a binomial) do not lose it
/// to rounding.
pub fn ln_beta_inc(a: f64, b: f64, x: f64, y: f64) -> (f64, f64) {
    if a <= 0.0 || b <= 0.0 || x.is_nan() || y.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    if x <= 0.0 {
        return (f64::NEG_INFINITY, 0.0);
    }
    if y <= 0.0 {
        return (0.0, f64::NEG_INFINITY);
    }
    // ln(x^a y^b / B(a, b)) = ln(ab / (a + b)) + ln dbinom(a; a + b, x)
    let ln_front = (a * b / (a + b)).ln() + ln_binom_raw(a, a + b, x, y);
    if x < (a + 1.0) / (a + b + 2.0) {
        let li = (ln_front - a.ln() + continued_fraction(a, b, x).ln()).min(0.0);
        (li, log1mexp(li))
    } else {
        let lc = (ln_front - b.ln() + continued_fraction(b, a, y).ln()).min(0.0);
        (log1mexp(lc), lc)
    }
}

/// Modified Lentz evaluation of the incomplete-beta continued fraction.
fn continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
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
    h
}
