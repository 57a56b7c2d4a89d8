use std::f64::consts::SQRT_2;

use super::LN_SQRT_2PI;

/// Beyond this many standard deviations the survival function is taken from
/// the Mills-ratio continued fraction instead of `erfc`, which is about to
/// drop into subnormal range.
const CF_SWITCH: f64 = 30.0;

/// Standard normal log-density.
pub fn ln_norm_pdf(z: f64) -> f64 {
    -0.5 * z * z - LN_SQRT_2PI
}

/// Mills ratio `Φ̄(z)/φ(z)` by Lentz's method on Laplace's continued
/// fraction `1/(z + 1/(z + 2/(z + 3/(z + ...))))`. Intended for `z >= 3`.
fn mills_ratio_cf(z: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = z;
    let mut c = z;
    let mut d = 0.0;
    for k in 1..2000 {
        let a = k as f64;
        d = z + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = z + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / f
}

/// `ln(Φ̄(z)/φ(z))`, the log Mills ratio.
pub fn ln_mills_ratio(z: f64) -> f64 {
    if z >= 8.0 {
        mills_ratio_cf(z).ln()
    } else {
        ln_norm_sf(z) - ln_norm_pdf(z)
    }
}

/// `ln Φ̄(z) = ln P(Z > z)` for the standard normal.
pub fn ln_norm_sf(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    if z == f64::INFINITY {
        return f64::NEG_INFINITY;
    }
    if z >= CF_SWITCH {
        return ln_norm_pdf(z) + mills_ratio_cf(z).ln();
    }
    if z < 0.0 {
        return (-0.5 * libm::erfc(-z / SQRT_2)).ln_1p();
    }
    (0.5 * libm::erfc(z / SQRT_2)).ln()
}

/// `ln Φ(z) = ln P(Z <= z)` for the standard normal.
pub fn ln_ndtr(z: f64) -> f64 {
    ln_norm_sf(-z)
}

/// Inverse Mills ratio `φ(z)/Φ̄(z)`, i.e. `E[Z | Z > z]`.
///
/// The continued fraction is used for `z > 8`; the result is clamped to
/// stay strictly above `z`, which the exact value always does.
pub fn normal_mills_inverse(z: f64) -> f64 {
    let v = if z > 8.0 {
        1.0 / mills_ratio_cf(z)
    } else {
        (ln_norm_pdf(z) - ln_norm_sf(z)).exp()
    };
    if v > z {
        v
    } else {
        // a + 1/a - 2/a^3 + 10/a^5
        let r = 1.0 / z;
        z + r - 2.0 * r.powi(3) + 10.0 * r.powi(5)
    }
}

/// Standard normal quantile (Wichura's AS 241, PPND16).
///
/// Works in linear probability space: `ndtri(1.0)` is `+inf` and any `p`
/// that rounds to 1 lands there too.
pub fn ndtri(p: f64) -> f64 {
    if p.is_nan() || !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return q
            * (((((((r * 2_509.080_928_730_122_7 + 33_430.575_583_588_13) * r + 67_265.770_927_008_7) * r
                + 45_921.953_931_549_87)
                * r
                + 13_731.693_765_509_46)
                * r
                + 1_971.590_950_306_551_3)
                * r
                + 133.141_667_891_784_38)
                * r
                + 3.387_132_872_796_366_5)
            / (((((((r * 5_226.495_278_852_546 + 28_729.085_735_721_943) * r + 39_307.895_800_092_71) * r
                + 21_213.794_301_586_597)
                * r
                + 5_394.196_021_424_751)
                * r
                + 687.187_007_492_057_9)
                * r
                + 42.313_330_701_600_91)
                * r
                + 1.0);
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let mut r = (-tail.ln()).sqrt();
    let val = if r <= 5.0 {
        r -= 1.6;
        (((((((r * 7.745_450_142_783_414e-4 + 0.022_723_844_989_269_184) * r + 0.241_780_725_177_450_6) * r
            + 1.270_458_252_452_368_4)
            * r
            + 3.647_848_324_763_204_5)
            * r
            + 5.769_497_221_460_691)
            * r
            + 4.630_337_846_156_545)
            * r
            + 1.423_437_110_749_683_5)
            / (((((((r * 1.050_750_071_644_416_9e-9 + 5.475_938_084_995_345e-4) * r + 0.015_198_666_563_616_457)
                * r
                + 0.148_103_976_427_480_08)
                * r
                + 0.689_767_334_985_1)
                * r
                + 1.676_384_830_183_803_8)
                * r
                + 2.053_191_626_637_759)
                * r
                + 1.0)
    } else {
        r -= 5.0;
        (((((((r * 2.010_334_399_292_288_1e-7 + 2.711_555_568_743_487_6e-5) * r + 0.001_242_660_947_388_078_4) * r
            + 0.026_532_189_526_576_124)
            * r
            + 0.296_560_571_828_504_9)
            * r
            + 1.784_826_539_917_291_3)
            * r
            + 5.463_784_911_164_114)
            * r
            + 6.657_904_643_501_103)
            / (((((((r * 2.044_263_103_389_939_7e-15 + 1.421_511_758_316_446e-7) * r + 1.846_318_317_510_054_8e-5)
                * r
                + 7.868_691_311_456_133e-4)
                * r
                + 0.014_875_361_290_850_615)
                * r
                + 0.136_929_880_922_735_8)
                * r
                + 0.599_832_206_555_888)
                * r
                + 1.0)
    };
    if q < 0.0 {
        -val
    } else {
        val
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // 50-digit references for ln Φ̄(z).
    const SF_REF: [(f64, f64); 5] = [
        (1.0, -1.841_021_645_009_263_5),
        (5.0, -15.064_998_393_988_726),
        (10.0, -53.231_285_150_512_47),
        (20.0, -203.917_155_371_097_26),
        (38.0, -726.557_216_018_820_1),
    ];

    #[test]
    fn log_survival_reference_values() {
        for (z, expect) in SF_REF {
            let v = ln_norm_sf(z);
            assert!((v - expect).abs() < 1e-13 * expect.abs(), "z = {z}: {v}");
        }
    }

    #[test]
    fn continued_fraction_agrees_with_erfc_near_switch() {
        for &z in &[8.0, 15.0, 25.0, 29.0] {
            let via_cf = ln_norm_pdf(z) + mills_ratio_cf(z).ln();
            let via_erfc = (0.5 * libm::erfc(z / SQRT_2)).ln();
            assert!((via_cf - via_erfc).abs() < 1e-13 * via_erfc.abs(), "z = {z}");
        }
    }

    #[test]
    fn log_cdf_is_symmetric_mirror() {
        assert!((ln_ndtr(0.0) - 0.5f64.ln()).abs() < 1e-16);
        assert!((ln_ndtr(-5.0) - ln_norm_sf(5.0)).abs() < 1e-15);
        // ln Φ(5) = log1p(-Φ̄(5))
        let expect = (-(ln_norm_sf(5.0).exp())).ln_1p();
        assert!((ln_ndtr(5.0) - expect).abs() < 1e-22);
    }

    #[test]
    fn quantile_reference_values() {
        // 50-digit reference: Φ^{-1}(0.75) = 0.674489750196081743...
        assert!((ndtri(0.75) - 0.674_489_750_196_081_7).abs() < 1e-15);
        assert_eq!(ndtri(0.5), 0.0);
        assert!((ndtri(0.025) + 1.959_963_984_540_054).abs() < 1e-14);
        assert!((ndtri(1e-10) + 6.361_340_902_404_056).abs() < 1e-12);
        assert_eq!(ndtri(1.0), f64::INFINITY);
    }

    #[test]
    fn quantile_inverts_cdf() {
        for i in 1..200 {
            let p = i as f64 / 200.0;
            let z = ndtri(p);
            assert!((ln_ndtr(z).exp() - p).abs() < 1e-15, "p = {p}");
        }
    }

    #[test]
    fn truncated_mean_reference_values() {
        assert!((normal_mills_inverse(0.0) - 0.797_884_560_802_865_4).abs() < 1e-15);
        assert!((normal_mills_inverse(1.0) - 1.525_135_276_160_981).abs() < 1e-14);
        assert!((normal_mills_inverse(8.0) - 8.121_368_112_236_113).abs() < 1e-13);
        assert!((normal_mills_inverse(38.45) - 38.475_972_737_085_26).abs() < 1e-12);
        assert!(normal_mills_inverse(-40.0).abs() < 1e-300);
        assert!(normal_mills_inverse(12_000.0) > 12_000.0);
    }
}
