use trunclc::distributions::{self as dist, check_log_concavity, epd_to_gamma, FamilySpec, ParamSpec, Registry};
use trunclc::quadrature::integrate;
use trunclc::special::log_sum_exp;
use trunclc::{ds_sample_batch, DistributionDescriptor, ImputationPolicy, Kind, ParamSet, RngStream, TruncatedTarget};

fn continuous_cases() -> Vec<DistributionDescriptor> {
    vec![
        dist::normal(0.0, 1.0).unwrap(),
        dist::normal(-3.0, 0.25).unwrap(),
        dist::gamma(1.0, 1.0).unwrap(),
        dist::gamma(2.5, 0.5).unwrap(),
        dist::gamma(7.0, 3.0).unwrap(),
        dist::exponential(2.0).unwrap(),
        dist::inverse_gaussian(1.0, 2.0).unwrap(),
        dist::inverse_gaussian(3.0, 30.0).unwrap(),
        dist::epd(1.0).unwrap(),
        dist::epd(2.0).unwrap(),
        dist::epd(4.0).unwrap(),
    ]
}

fn discrete_cases() -> Vec<DistributionDescriptor> {
    vec![
        dist::poisson(0.5).unwrap(),
        dist::poisson(12.0).unwrap(),
        dist::poisson(300.0).unwrap(),
        dist::binomial(20.0, 0.3).unwrap(),
        dist::binomial(500.0, 0.9).unwrap(),
        dist::negative_binomial(1.0, 0.4).unwrap(),
        dist::negative_binomial(6.5, 0.7).unwrap(),
        dist::geometric(0.1).unwrap(),
        dist::geometric(0.85).unwrap(),
    ]
}

fn probes(d: &DistributionDescriptor) -> Vec<f64> {
    (0..20)
        .map(|i| d.mu - 5.0 * d.sigma + 10.0 * d.sigma * i as f64 / 19.0)
        .map(|x| if d.kind == Kind::Discrete { x.floor() } else { x })
        .filter(|x| d.support.contains(*x) && *x > d.support.lower)
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn continuous_tails_match_quadrature() {
    for d in continuous_cases() {
        // first point past which f has dropped e^-80 below its value at `from`
        let edge = |from: f64, dir: f64| {
            let top = d.log_pdf(from);
            let mut step = 1e-3 * d.sigma;
            loop {
                let t = from + dir * step;
                if !d.support.contains(t) {
                    return if dir < 0.0 { d.support.lower } else { d.support.upper };
                }
                if d.log_pdf(t) < top - 80.0 {
                    return t;
                }
                step *= 1.5;
            }
        };
        for x in probes(&d) {
            let lo = edge(x.min(d.mode), -1.0);
            let hi = edge(x.max(d.mode), 1.0);
            // ln ∫_a^b f, integrating f scaled by its peak on [a, b] and
            // split at that peak
            let ln_q = |a: f64, b: f64| {
                let m = d.mode.clamp(a, b);
                let s = d.log_pdf(m);
                let g = |t: f64| (d.log_pdf(t) - s).exp();
                (integrate(g, a, m, 1e-14, 5000).0 + integrate(g, m, b, 1e-14, 5000).0).ln() + s
            };
            let (cdf, sf) = (ln_q(lo, x), ln_q(x, hi));
            assert!(
                rel(d.log_cdf(x).exp(), cdf.exp()) < 1e-10 || (d.log_cdf(x) - cdf).abs() < 1e-10,
                "{} F({x}): {} vs {cdf}",
                d.family_name,
                d.log_cdf(x)
            );
            assert!(
                (d.log_sf(x) - sf).abs() < 1e-10 * sf.abs().max(1.0) || rel(d.log_sf(x).exp(), sf.exp()) < 1e-10,
                "{} S({x}): {} vs {sf}",
                d.family_name,
                d.log_sf(x)
            );
        }
    }
}

#[test]
fn discrete_tails_match_summation() {
    for d in discrete_cases() {
        for x in probes(&d) {
            let lower: Vec<f64> = (0..=x as i64).map(|k| d.log_pdf(k as f64)).collect();
            let top = (d.mu + 200.0 * d.sigma + 200.0).min(d.support.upper) as i64;
            let upper: Vec<f64> = (x as i64 + 1..=top).map(|k| d.log_pdf(k as f64)).collect();
            let (lc, ls) = (log_sum_exp(&lower), log_sum_exp(&upper));
            assert!(
                rel(d.log_cdf(x).exp(), lc.exp()) < 1e-10,
                "{} {} F({x})",
                d.family_name,
                d.params
            );
            if ls.is_finite() {
                assert!(
                    rel(d.log_sf(x).exp(), ls.exp()) < 1e-10,
                    "{} {} S({x})",
                    d.family_name,
                    d.params
                );
            }
        }
    }
}

#[test]
fn gamma_half_shape_has_closed_form_cdf() {
    // gamma(1/2, 1): F(x) = erf(sqrt(x))
    let d = dist::gamma(0.5, 1.0).unwrap();
    for &x in &[1e-6, 0.01, 0.5, 2.0, 9.0, 30.0] {
        let sf = libm::erfc(f64::sqrt(x));
        assert!(rel(d.log_sf(x).exp(), sf) < 1e-12, "{x}");
        assert!(rel(d.log_cdf(x).exp(), 1.0 - sf) < 1e-12, "{x}");
    }
}

#[test]
fn cdf_and_survival_sum_to_one() {
    for d in continuous_cases().into_iter().chain(discrete_cases()) {
        for x in probes(&d) {
            let (f, s) = (d.log_cdf(x).exp(), d.log_sf(x).exp());
            if f > 1e-300 && s > 1e-300 {
                assert!(
                    (f + s - 1.0).abs() <= 1e-12,
                    "{} at {x}: {}",
                    d.family_name,
                    f + s - 1.0
                );
            }
        }
    }
}

#[test]
fn cdf_is_nondecreasing() {
    for d in continuous_cases().into_iter().chain(discrete_cases()) {
        let xs = probes(&d);
        for w in xs.windows(2) {
            assert!(d.log_cdf(w[0]) <= d.log_cdf(w[1]), "{} {:?}", d.family_name, w);
        }
    }
}

#[test]
fn geometric_lack_of_memory() {
    for &p in &[0.1, 0.5, 0.9] {
        let d = dist::geometric(p).unwrap();
        for x in 0..=50 {
            for h in 0..=50 {
                let (x, h) = (x as f64, h as f64);
                // on {0, 1, ...}: P(X > x + h | X > x) = (1 - p)^h = P(X >= h)
                let lhs = d.log_sf(x + h) - d.log_sf(x);
                let rhs = d.log_sf(h - 1.0);
                assert!((lhs - rhs).abs() < 1e-10, "p={p} x={x} h={h}");
            }
        }
    }
}

#[test]
fn exponential_lack_of_memory() {
    for &l in &[0.1, 1.0, 7.0] {
        let d = dist::exponential(l).unwrap();
        for x in 0..=50 {
            for h in 0..=50 {
                let (x, h) = (x as f64 * 0.7, h as f64 * 1.3);
                let lhs = d.log_sf(x + h) - d.log_sf(x);
                assert!((lhs - d.log_sf(h)).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn mode_is_the_argmax() {
    let mut cases = continuous_cases();
    cases.extend(discrete_cases());
    for &l in &[0.3, 1.0, 4.0, 4.5, 100.0] {
        cases.push(dist::poisson(l).unwrap());
    }
    for &(n, p) in &[(1.0, 0.2), (9.0, 0.5), (10.0, 0.5), (40.0, 0.97)] {
        cases.push(dist::binomial(n, p).unwrap());
        cases.push(dist::negative_binomial(n, p).unwrap());
    }
    for &(m, l) in &[(0.1, 10.0), (1.0, 0.2), (5.0, 1.0)] {
        cases.push(dist::inverse_gaussian(m, l).unwrap());
    }
    for d in cases {
        let delta = match d.kind {
            Kind::Discrete => 1.0,
            Kind::Continuous => 1e-6 * d.sigma,
        };
        let peak = d.log_pdf(d.mode);
        assert!(peak.is_finite());
        assert!(d.support.contains(d.mode));
        for x in [d.mode - delta, d.mode + delta] {
            // integer Poisson rates tie at lambda - 1 and lambda
            assert!(
                peak >= d.log_pdf(x) - 1e-12,
                "{} {} mode {}",
                d.family_name,
                d.params,
                d.mode
            );
        }
    }
}

#[test]
fn built_in_families_are_log_concave() {
    for d in discrete_cases() {
        let hi = (d.mu + 30.0 * d.sigma).min(d.support.upper);
        let r = check_log_concavity(&d, 0.0, hi, 0);
        assert!(r.log_concave, "{} {} {:?}", d.family_name, d.params, r.violation);
    }
    for d in continuous_cases() {
        let lo = d.support.lower.max(d.mu - 10.0 * d.sigma).max(1e-9);
        let mut hi = d.mu + 10.0 * d.sigma;
        if d.family_name == "inverse_gaussian" {
            // concave only below 2 lambda / 3
            hi = hi.min(2.0 * d.params.get("lambda").unwrap() / 3.0);
        }
        let lo = if d.support.lower == f64::NEG_INFINITY {
            d.mu - 10.0 * d.sigma
        } else {
            lo
        };
        let r = check_log_concavity(&d, lo, hi, 2000);
        assert!(r.log_concave, "{} {} {:?}", d.family_name, d.params, r.violation);
    }
}

#[test]
fn inverse_gaussian_tail_is_log_convex() {
    let d = dist::inverse_gaussian(1.0, 1.0).unwrap();
    let r = check_log_concavity(&d, 1.0, 50.0, 2000);
    assert!(!r.log_concave);
}

#[test]
fn quantiles_invert_cdfs() {
    for d in continuous_cases() {
        for &p in &[1e-6, 0.01, 0.3, 0.5, 0.77, 0.99, 1.0 - 1e-9] {
            let x = d.quantile(p).unwrap();
            let f = d.log_cdf(x).exp();
            assert!(
                (f - p).abs() < 1e-12 + 1e-9 * p.min(1.0 - p),
                "{} p={p} F={f}",
                d.family_name
            );
        }
    }
    for d in discrete_cases() {
        for &p in &[1e-6, 0.01, 0.3, 0.5, 0.77, 0.99, 1.0 - 1e-9] {
            let x = d.quantile(p).unwrap();
            assert!(d.log_cdf(x).exp() >= p, "{} p={p}", d.family_name);
            if x > d.support.lower {
                assert!(d.log_cdf(x - 1.0).exp() < p, "{} p={p}", d.family_name);
            }
        }
    }
}

#[test]
fn epd_two_through_gamma_map_has_half_mean() {
    let d = dist::epd(2.0).unwrap();
    let t = TruncatedTarget::untruncated(d).unwrap();
    let mut rng = RngStream::new(5);
    let b = ds_sample_batch(&t, 100_000, &mut rng, &ImputationPolicy::default()).unwrap();
    let ys: Vec<f64> = b.values.iter().map(|&x| epd_to_gamma(x, 2.0)).collect();
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    // gamma(1/2, 1): mean 1/2, sd sqrt(1/2)
    let se = 0.5f64.sqrt() / (ys.len() as f64).sqrt();
    assert!((mean - 0.5).abs() < 4.0 * se, "{mean}");
}

#[test]
fn user_registered_family() {
    // a logistic law, registered from its three functions
    #[derive(Debug)]
    struct Logistic;
    impl trunclc::descriptor::Density for Logistic {
        fn log_pdf(&self, x: f64) -> f64 {
            -x - 2.0 * (-x).exp().ln_1p()
        }
        fn log_cdf(&self, x: f64) -> f64 {
            -(-x).exp().ln_1p()
        }
        fn log_sf(&self, x: f64) -> f64 {
            -x.exp().ln_1p()
        }
    }
    let mut reg = Registry::builtin();
    reg.register(FamilySpec::new("logistic", vec![], |p: &ParamSet| {
        Ok(DistributionDescriptor {
            family_name: "logistic".into(),
            params: p.clone(),
            kind: Kind::Continuous,
            support: trunclc::Support::REAL_LINE,
            mode: 0.0,
            mu: 0.0,
            sigma: std::f64::consts::PI / 3f64.sqrt(),
            density: std::sync::Arc::new(Logistic),
            alternate: None,
        })
    }));
    let d = reg.build("logistic", &ParamSet::new()).unwrap();
    assert!(!d.has_quantile());
    assert!(check_log_concavity(&d, -20.0, 20.0, 500).log_concave);
    let t = TruncatedTarget::new(d, trunclc::TruncationInterval::above(30.0).unwrap()).unwrap();
    let mut rng = RngStream::new(2);
    let b = ds_sample_batch(&t, 1000, &mut rng, &ImputationPolicy::default()).unwrap();
    assert_eq!(b.n_imputed(), 0);
    assert!(b.values.iter().all(|&x| x > 30.0));
    assert!(reg.build("logistic", &ParamSet::new().with("s", 1.0)).is_err());
    let _ = ParamSpec::new("s", dist::Constraint::Positive);
}
