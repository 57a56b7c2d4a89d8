use trunclc::diagnostics::stats::{chi_square_gof, ks_one_sample, ks_two_sample, mean_sd};
use trunclc::diagnostics::{exp_tail_qq, truncated_mean_oracle_poisson};
use trunclc::distributions::{self as dist};
use trunclc::its::HitOrMiss;
use trunclc::special::log_diff_exp;
use trunclc::{
    ds_sample, ds_sample_batch, hit_or_miss_sample, its_batch, its_sample, DistributionDescriptor, Error,
    ImputationPolicy, ImputeMode, Kind, RngStream, SampleBatch, TruncatedTarget, TruncationInterval,
};

const ALPHA: f64 = 0.001;

fn target(d: DistributionDescriptor, a: f64, b: f64) -> TruncatedTarget {
    TruncatedTarget::new(d, TruncationInterval::new(a, b).unwrap()).unwrap()
}

fn above(d: DistributionDescriptor, a: f64) -> TruncatedTarget {
    target(d, a, f64::INFINITY)
}

fn ds(t: &TruncatedTarget, n: usize, seed: u64) -> SampleBatch {
    ds_sample_batch(t, n, &mut RngStream::new(seed), &ImputationPolicy::default()).unwrap()
}

fn normal() -> DistributionDescriptor {
    dist::normal(0.0, 1.0).unwrap()
}

/// `F_I(x)` from the base log-CDF.
fn trunc_cdf(t: &TruncatedTarget, x: f64) -> f64 {
    let a = t.interval().lower();
    let base = t.base();
    (log_diff_exp(base.log_cdf(x), base.log_cdf(a)).unwrap() - t.log_mass()).exp()
}

/// Counts of `values` on `lo..=hi` against the exact truncated pmf.
fn discrete_gof(t: &TruncatedTarget, values: &[f64], lo: i64, hi: i64) -> f64 {
    let mut counts = vec![0u64; (hi - lo + 1) as usize];
    for &v in values {
        counts[(v as i64 - lo) as usize] += 1;
    }
    let ln: Vec<f64> = (lo..=hi).map(|k| t.base().log_pdf(k as f64)).collect();
    let z = trunclc::special::log_sum_exp(&ln);
    let probs: Vec<f64> = ln.iter().map(|l| (l - z).exp()).collect();
    chi_square_gof(&counts, &probs).p_value
}

#[test]
fn continuous_acceptance_is_one_quarter() {
    let t = TruncatedTarget::untruncated(normal()).unwrap();
    let b = ds(&t, 250_000, 1);
    assert!(b.proposals >= 900_000);
    assert!((b.acceptance_rate().unwrap() - 0.25).abs() < 0.005);
}

#[test]
fn deep_normal_tail_is_clean() {
    let t = above(normal(), 38.0);
    let b = ds(&t, 100_000, 2);
    assert_eq!(b.n_imputed(), 0);
    assert!(b.values.iter().all(|&x| x > 38.0));
    let q = exp_tail_qq(&b, 38.0).unwrap();
    assert!(q.ks_p_value > ALPHA, "{}", q.ks_distance);
}

#[test]
fn half_normal_mean() {
    let b = ds(&above(normal(), 0.0), 100_000, 3);
    let (m, s) = mean_sd(&b.values);
    let se = s / (b.len() as f64).sqrt();
    assert!((m - (2.0 / std::f64::consts::PI).sqrt()).abs() < 4.0 * se);
}

#[test]
fn poisson_tail_mean_matches_oracle() {
    let b = ds(&above(dist::poisson(5.0).unwrap(), 12.0), 100_000, 4);
    let (m, s) = mean_sd(&b.values);
    let oracle = truncated_mean_oracle_poisson(5.0, 12.0).unwrap();
    assert!((m - oracle).abs() < 4.0 * s / (b.len() as f64).sqrt());
}

#[test]
fn geometric_tail_shift_is_base_law() {
    let d = dist::geometric(0.3).unwrap();
    let b = ds(&above(d.clone(), 20.0), 100_000, 5);
    let shifted: Vec<f64> = b.values.iter().map(|x| x - 21.0).collect();
    let t0 = TruncatedTarget::untruncated(d).unwrap();
    let max = shifted.iter().cloned().fold(0.0, f64::max) as i64;
    // the upper cell absorbs the remaining tail
    let mut counts = vec![0u64; max as usize + 1];
    for &v in &shifted {
        counts[v as usize] += 1;
    }
    let mut probs: Vec<f64> = (0..max).map(|k| t0.base().log_pdf(k as f64).exp()).collect();
    probs.push(t0.base().log_sf(max as f64 - 1.0).exp());
    assert!(chi_square_gof(&counts, &probs).passes(ALPHA));
}

#[test]
fn single_point_target() {
    let b = ds(&target(dist::binomial(10.0, 0.5).unwrap(), 9.0, 10.0), 1000, 6);
    assert!(b.values.iter().all(|&x| x == 10.0));
    assert!((b.acceptance_rate().unwrap() - 0.2).abs() < 0.03);
}

#[test]
fn batch_contract() {
    let t = above(normal(), 1.0);
    let mut rng = RngStream::new(7);
    assert!(matches!(
        ds_sample_batch(&t, 0, &mut rng, &ImputationPolicy::default()),
        Err(Error::Precondition(_))
    ));
    assert_eq!(ds(&t, 500, 9), ds(&t, 500, 9));
    assert_ne!(ds(&t, 500, 9), ds(&t, 500, 10));
    let b = ds(&t, 500, 9);
    assert_eq!(b.accepts as usize, b.len() - b.n_imputed());
    assert!(b.accepts <= b.proposals);
}

#[test]
fn degenerate_target_is_imputed_at_the_bound() {
    let t = above(normal(), 800.0);
    let b = ds(&t, 50, 11);
    assert!(b.values.iter().all(|&x| x == 800.0));
    assert!(b.imputed.iter().all(|&f| f));
    assert_eq!(b.acceptance_rate(), None);

    let mut rng = RngStream::new(1);
    let err = ds_sample_batch(&t, 5, &mut rng, &ImputationPolicy::with_mode(ImputeMode::Error));
    assert!(matches!(err, Err(Error::SamplerBreakdown { index: 0, .. })));
    let inf = ds_sample_batch(&t, 5, &mut rng, &ImputationPolicy::with_mode(ImputeMode::Infinite)).unwrap();
    assert!(inf.values.iter().all(|x| x.is_infinite()));
    assert!(ImputationPolicy::new(ImputeMode::Mode, 0).is_err());
}

#[test]
fn envelope_dominates_continuous_families() {
    let cases = [
        normal(),
        dist::normal(4.0, 0.01).unwrap(),
        dist::gamma(1.0, 1.0).unwrap(),
        dist::gamma(3.5, 2.0).unwrap(),
        dist::gamma(40.0, 0.1).unwrap(),
        dist::exponential(5.0).unwrap(),
        dist::epd(1.0).unwrap(),
        dist::epd(3.0).unwrap(),
        // shape large enough that the log-convex far tail stays under the envelope
        dist::inverse_gaussian(1.0, 10.0).unwrap(),
        dist::inverse_gaussian(2.0, 30.0).unwrap(),
    ];
    let mut rng = RngStream::new(12);
    for d in cases {
        let m = d.mode;
        let lf_m = d.log_pdf(m);
        let f_m = lf_m.exp();
        for _ in 0..1000 {
            let x = m + rng.sign() * rng.exponential() * 10.0 * d.sigma;
            let env = lf_m + f64::min(0.0, 1.0 - f_m * (x - m).abs());
            assert!(d.log_pdf(x) <= env + 1e-9, "{} {} x={x}", d.family_name, d.params);
        }
    }
}

#[test]
fn inverse_gaussian_small_shape_escapes_the_envelope() {
    // lambda = mu: the tail decays more slowly than the envelope
    let d = dist::inverse_gaussian(1.0, 1.0).unwrap();
    let (m, lf_m) = (d.mode, d.log_pdf(d.mode));
    let x = 30.0;
    assert!(d.log_pdf(x) > lf_m + 1.0 - lf_m.exp() * (x - m));
}

#[test]
fn discrete_acceptance_rate_law() {
    let cases = [
        above(dist::poisson(0.5).unwrap(), -1.0),
        above(dist::poisson(5.0).unwrap(), 8.0),
        above(dist::poisson(50.0).unwrap(), -1.0),
        above(dist::binomial(30.0, 0.2).unwrap(), 10.0),
        above(dist::geometric(0.6).unwrap(), -1.0),
        above(dist::negative_binomial(4.0, 0.5).unwrap(), 2.0),
    ];
    for (i, t) in cases.iter().enumerate() {
        let b = ds(t, 230_000, 100 + i as u64);
        let expect = 1.0 / (4.0 + t.log_peak().exp());
        let rate = b.acceptance_rate().unwrap();
        assert!(
            (rate - expect).abs() < 0.01,
            "{}: {rate} vs {expect}",
            t.base().family_name
        );
        assert!((0.2 - 1e-3..=0.25 + 1e-3).contains(&rate));
    }
}

#[test]
fn poisson_small_target_is_exact() {
    let t = target(dist::poisson(3.0).unwrap(), 4.0, 9.0);
    let b = ds(&t, 100_000, 13);
    assert!(discrete_gof(&t, &b.values, 5, 9) > ALPHA);
}

#[test]
fn normal_moderate_truncation_is_exact() {
    let t = above(normal(), 1.0);
    let b = ds(&t, 10_000, 14);
    assert!(ks_one_sample(&b.values, |x| trunc_cdf(&t, x)).passes(ALPHA));
}

#[test]
fn values_stay_in_interval() {
    let cases = [
        target(normal(), -0.3, 0.2),
        target(dist::gamma(2.0, 1.0).unwrap(), 0.0, 0.05),
        target(dist::gamma(0.5, 2.0).unwrap(), 1.0, 3.0),
        target(dist::poisson(40.0).unwrap(), 10.5, 11.0),
        target(dist::binomial(8.0, 0.9).unwrap(), -5.0, 0.0),
        target(dist::epd(2.0).unwrap(), -30.0, -25.0),
        target(dist::inverse_gaussian(1.0, 4.0).unwrap(), 0.01, 0.2),
    ];
    for t in &cases {
        let b = ds(t, 5000, 15);
        for (v, &imp) in b.values.iter().zip(&b.imputed) {
            assert!(imp || t.contains(*v), "{} {v}", t.base().family_name);
        }
        if t.kind() == Kind::Discrete {
            assert!(b.values.iter().all(|v| v.fract() == 0.0));
        }
    }
}

#[test]
fn gamma_below_unit_shape_uses_epd_route() {
    let t = above(dist::gamma(0.5, 2.0).unwrap(), 0.3);
    let b = ds(&t, 20_000, 16);
    assert_eq!(b.n_imputed(), 0);
    assert!(ks_one_sample(&b.values, |x| trunc_cdf(&t, x)).passes(ALPHA));
}

#[test]
fn its_examples() {
    let a = 2.0;
    let t = above(dist::exponential(1.0).unwrap(), a);
    let mut r1 = RngStream::new(17);
    let mut r2 = RngStream::new(17);
    for _ in 0..1000 {
        let x = its_sample(&t, &mut r1, &ImputationPolicy::default()).unwrap().value;
        let u = r2.uniform();
        let expect = a - (-u).ln_1p();
        assert!(
            (x - expect).abs() < 1e-12 * expect.max(1.0) + 1e-14 / (1.0 - u),
            "{x} {expect}"
        );
    }
    let t = above(normal(), 10.0);
    let mut rng = RngStream::new(1);
    let r = its_sample(&t, &mut rng, &ImputationPolicy::with_mode(ImputeMode::Error));
    assert!(matches!(r, Err(Error::TruncationOverflow { .. })));
    let d = its_sample(&t, &mut rng, &ImputationPolicy::default()).unwrap();
    assert!(d.imputed && d.value == 10.0);
}

#[test]
fn its_and_ds_agree() {
    let t = above(normal(), 1.0);
    let a = its_batch(&t, 10_000, &mut RngStream::new(18), &ImputationPolicy::default()).unwrap();
    let b = ds(&t, 10_000, 19);
    assert_eq!(a.n_imputed(), 0);
    assert!(ks_two_sample(&a.values, &b.values).passes(ALPHA));
}

#[test]
fn hit_or_miss_examples() {
    let policy = ImputationPolicy::default();
    let h = HitOrMiss::new(&above(normal(), 0.0)).unwrap();
    let (b, trials) = h.batch(10_000, &mut RngStream::new(20), &policy).unwrap();
    assert!(b.values.iter().all(|&x| x > 0.0));
    let mean = trials.iter().sum::<u64>() as f64 / trials.len() as f64;
    assert!((mean - 2.0).abs() < 0.05, "{mean}");
    assert_eq!(b.proposals, trials.iter().sum::<u64>());

    let h = HitOrMiss::new(&above(dist::poisson(5.0).unwrap(), 4.0)).unwrap();
    let (_, trials) = h.batch(10_000, &mut RngStream::new(21), &policy).unwrap();
    let mean = trials.iter().sum::<u64>() as f64 / trials.len() as f64;
    // 1 / P(X >= 5) = 1.78728864785216...
    assert!((mean - 1.787_288_647_852_16).abs() < 0.05, "{mean}");

    let t = above(normal(), 6.0);
    let mut rng = RngStream::new(22);
    let d = hit_or_miss_sample(&t, &mut rng, 100).unwrap();
    assert!(d.draw.imputed);
    assert_eq!(d.trials, 100);
}

#[test]
fn alternate_route_reports_envelope_proposals() {
    let t = TruncatedTarget::untruncated(dist::gamma(0.25, 1.0).unwrap()).unwrap();
    let mut rng = RngStream::new(23);
    let d = ds_sample(&t, &mut rng, &ImputationPolicy::default()).unwrap();
    assert!(d.value >= 0.0 && d.proposals >= 1 && !d.imputed);
}

mod invariants {
    use super::*;
    use proptest::prelude::*;

    fn family(k: usize) -> DistributionDescriptor {
        match k {
            0 => normal(),
            1 => dist::poisson(7.0).unwrap(),
            2 => dist::gamma(2.5, 1.0).unwrap(),
            3 => dist::binomial(40.0, 0.3).unwrap(),
            4 => dist::negative_binomial(3.0, 0.4).unwrap(),
            _ => dist::inverse_gaussian(1.0, 2.0).unwrap(),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn batches_stay_in_interval_and_account(
            k in 0usize..6,
            lo in -5.0f64..60.0,
            width in prop_oneof![Just(f64::INFINITY), 0.5f64..20.0],
            seed in any::<u64>(),
        ) {
            let d = family(k);
            let Ok(iv) = TruncationInterval::new(lo, lo + width) else { return Ok(()) };
            let Ok(t) = TruncatedTarget::new(d, iv) else { return Ok(()) };
            let b = ds(&t, 200, seed);
            prop_assert_eq!(b.len(), 200);
            for (v, &imp) in b.values.iter().zip(&b.imputed) {
                prop_assert!(imp || t.contains(*v), "{} outside", v);
            }
            prop_assert_eq!(b.accepts as usize, b.len() - b.n_imputed());
            prop_assert!(b.accepts <= b.proposals);
            if let Some(r) = b.acceptance_rate() {
                prop_assert!(r > 0.0 && r <= 1.0);
            }
            prop_assert_eq!(&b, &ds(&t, 200, seed));
        }
    }
}
