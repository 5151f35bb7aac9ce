//! Cross-module invariants: measure-zoo consistency (CDF/quantile/sampler
//! agreement), Lipschitz certification of every registry entry, and
//! gradient-moment range checks.

use heavytail_core::lipschitz::{self, parse_lipschitz};
use heavytail_core::measure::{self, ks_statistic, parse_measure, Measure1d};
use heavytail_core::montecarlo::{estimate_gradient_moment, EstimationPlan};
use heavytail_core::rng;
use proptest::prelude::*;
use std::sync::Arc;

fn builtins() -> Vec<Arc<dyn Measure1d>> {
    vec![
        parse_measure("pareto:lambda=5").unwrap(),
        parse_measure("pareto:lambda=3.5").unwrap(),
        parse_measure("laplace:rate=1").unwrap(),
        parse_measure("laplace:rate=2").unwrap(),
        parse_measure("extremal:alpha=0.8,cheeger=1").unwrap(),
        parse_measure("extremal:alpha=0.75,cheeger=0.33").unwrap(),
        parse_measure("uniform:lo=0,hi=1").unwrap(),
    ]
}

#[test]
fn cdf_inverts_quantile_on_random_probabilities() {
    for m in builtins() {
        for i in 0..1000u64 {
            let p = rng::uniform01(99, i);
            let err = (m.cdf(m.quantile(p)) - p).abs();
            assert!(err <= 1e-8, "{}: p={p}, err={err}", m.name());
        }
    }
}

#[test]
fn quantile_is_nondecreasing() {
    for m in builtins() {
        let mut prev = f64::NEG_INFINITY;
        for i in 1..=999 {
            let q = m.quantile(i as f64 / 1000.0);
            assert!(q >= prev, "{} at p={}", m.name(), i as f64 / 1000.0);
            prev = q;
        }
    }
}

#[test]
fn sampler_matches_cdf_in_kolmogorov_distance() {
    // seed-fixed sanity gate for the inverse-transform path, not a test
    // of the generator
    for m in builtins() {
        let d = ks_statistic(m.as_ref(), 2024, 100_000).unwrap();
        assert!(d < 0.01, "{}: KS distance {d}", m.name());
    }
}

#[test]
fn quantile_complement_agrees_with_quantile() {
    for m in builtins() {
        for i in 0..200u64 {
            let u = 0.5 * rng::uniform01(123, i);
            let a = m.quantile_complement(u);
            let b = m.quantile(1.0 - u);
            assert!(
                (a - b).abs() <= 1e-9 * a.abs().max(1.0),
                "{}: u={u}",
                m.name()
            );
        }
    }
}

#[test]
fn density_integrates_to_one() {
    use heavytail_core::quad;
    for m in builtins() {
        let s = m.support();
        let z = quad::integrate(|x| m.density(x), s.lo, s.hi, 1e-12).unwrap();
        assert!((z - 1.0).abs() <= 1e-8, "{}: {z}", m.name());
    }
}

proptest! {
    #[test]
    fn pareto_quantile_cdf_roundtrip(lambda in 1.1f64..20.0, p in 1e-6f64..0.999999) {
        let m = measure::Pareto::new(lambda).unwrap();
        let err = (m.cdf(m.quantile(p)) - p).abs();
        prop_assert!(err <= 1e-8, "err={err}");
    }

    #[test]
    fn laplace_tail_is_cdf_complement(rate in 0.1f64..10.0, x in -20.0f64..20.0) {
        let m = measure::Laplace::new(rate).unwrap();
        let err = (m.upper_tail(x) + m.cdf(x) - 1.0).abs();
        prop_assert!(err <= 1e-12, "err={err}");
    }

    #[test]
    fn truncation_is_idempotent_and_short(values in prop::collection::vec(-10.0f64..10.0, 1..32)) {
        let once = heavytail_core::quantile::truncate_half(&values);
        let twice = heavytail_core::quantile::truncate_half(&once);
        prop_assert_eq!(&once, &twice);
        for (a, b) in values.iter().zip(&once) {
            prop_assert!((a - b).abs() <= a.abs());
            prop_assert!(b.abs() <= 0.5);
        }
    }
}

#[test]
fn registry_functions_certify_their_declared_constants() {
    let cases: Vec<(&str, usize)> = vec![
        ("identity", 1),
        ("max", 6),
        ("activation:m=2", 1),
        ("scaled_sum:p=1.5", 9),
        ("scaled_sum:p=2", 4),
        ("l2_norm", 3),
        ("linear:w=0.6/0.8", 2),
        ("dist_box:box=0..1 x 0..1,cap=4", 2),
    ];
    for (spec, n) in cases {
        let f = parse_lipschitz(spec, n).unwrap();
        let violation = lipschitz::certify_pairs(f.as_ref(), 31, 10_000);
        assert!(violation <= 1e-12, "{spec}: pair violation {violation}");
        let (fd, dual) = lipschitz::certify_gradient(f.as_ref(), 32, 1000, 1e-6, 1e-5);
        assert!(fd <= 1e-4, "{spec}: finite-difference error {fd}");
        assert!(dual <= 1e-12, "{spec}: dual-norm excess {dual}");
    }
}

#[test]
fn bruteforce_at_the_cell_cap_reproduces_the_flat_certificate() {
    // 2^24 subsets; the power-law functional is flat on upper half-lines,
    // so the exhaustive maximum must land on the certificate value
    let m = parse_measure("pareto:lambda=5").unwrap();
    let est = heavytail_core::cheeger::grid_bruteforce(m.as_ref(), 0.8, 24).unwrap();
    let expect = 4f64.powf(-0.8);
    assert!(
        (est.value - expect).abs() <= 1e-12 * expect,
        "{} vs {expect}",
        est.value
    );
}

#[test]
fn euclidean_gradient_moments_stay_in_unit_interval() {
    let measure = parse_measure("pareto:lambda=5").unwrap();
    for (spec, n) in [
        ("max", 8),
        ("l2_norm", 8),
        ("linear:w=0.6/0.8", 2),
        ("activation:m=2", 1),
        ("scaled_sum:p=2", 8),
    ] {
        let f = parse_lipschitz(spec, n).unwrap();
        let plan = EstimationPlan::new(measure.clone(), n, f, 12_800, 77, 32).unwrap();
        let est = estimate_gradient_moment(&plan, 2.0).unwrap();
        assert!(
            (0.0..=1.0 + 1e-12).contains(&est.mean),
            "{spec}: E|grad|^2 = {}",
            est.mean
        );
    }
}
