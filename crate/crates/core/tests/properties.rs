use std::cmp::Ordering;

use dispersal_core::closed_forms::label_distribution_exact;
use dispersal_core::interval::CertifiedInterval;
use dispersal_core::model::{compare_to_threshold, threshold};
use dispersal_core::qproduct::{log_series_tail_bound, LogProduct};
use dispersal_core::*;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;

fn at(l: f64, p: f64) -> ModelParams {
    ModelParams::new(l, p).unwrap()
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap()
}

fn encloses(i: CertifiedInterval, v: &BigRational) -> bool {
    exact(i.lo()) <= *v && *v <= exact(i.hi())
}

fn lambda() -> impl Strategy<Value = f64> {
    (-2.0f64..1.5).prop_map(|e| 10f64.powf(e))
}

fn tree_threshold(d: u32, l: f64) -> f64 {
    threshold(Topology::TreeDispersion(d), l).unwrap()
}

proptest! {
    #[test]
    fn interval_arithmetic_encloses_exact(a in -1e3f64..1e3, b in 1e-3f64..1e3) {
        let (x, y) = (CertifiedInterval::point(a), CertifiedInterval::point(b));
        let (ra, rb) = (exact(a), exact(b));
        prop_assert!(encloses(x + y, &(&ra + &rb)));
        prop_assert!(encloses(x - y, &(&ra - &rb)));
        prop_assert!(encloses(x * y, &(&ra * &rb)));
        prop_assert!(encloses(x / y, &(&ra / &rb)));
    }

    #[test]
    fn regime_flips_at_threshold(l in lambda(), d in 2u32..6) {
        let topo = Topology::TreeDispersion(d);
        let t = tree_threshold(d, l);
        let below = at(l, t * (1.0 - 1e-12));
        let above = at(l, (t * (1.0 + 1e-12)).min(1.0 - 1e-16));
        prop_assert_eq!(classify(&below, topo), Regime::SubcriticalFiniteMean);
        if above.p() > t {
            prop_assert_eq!(classify(&above, topo), Regime::SupercriticalSurvival);
        }
    }

    #[test]
    fn regime_is_monotone_in_p(l in lambda(), p1 in 0.001f64..0.999, p2 in 0.001f64..0.999) {
        let (lo, hi) = if p1 < p2 { (p1, p2) } else { (p2, p1) };
        for topo in [Topology::TreeDispersion(2), Topology::TreeDispersion(3), Topology::FreeDispersion] {
            let rank = |r| match r {
                Regime::SubcriticalFiniteMean => 0,
                Regime::CriticalInfiniteMean => 1,
                Regime::SupercriticalSurvival => 2,
            };
            prop_assert!(rank(classify(&at(l, lo), topo)) <= rank(classify(&at(l, hi), topo)));
        }
    }

    #[test]
    fn offspring_pmf_is_normalised(l in lambda(), p in 0.001f64..0.999, d in 2u32..7) {
        let pmf = offspring_pmf(&at(l, p), d).unwrap();
        prop_assert!((pmf.total() - 1.0).abs() < 1e-12);
        prop_assert!(pmf.probs.iter().all(|q| (0.0..=1.0).contains(q)));
        let law = survivor_law(&at(l, p));
        prop_assert!((law.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn offspring_mean_below_one_iff_subcritical(l in lambda(), d in 2u32..4) {
        let t = tree_threshold(d, l);
        let below = offspring_pmf(&at(l, t - 1e-6), d).unwrap();
        prop_assert!(below.mean() < 1.0);
        if t + 1e-6 < 1.0 {
            let above = offspring_pmf(&at(l, t + 1e-6), d).unwrap();
            prop_assert!(above.mean() > 1.0);
        }
    }

    #[test]
    fn label_distribution_sums_to_one(n in 1u32..200, d in 2u32..10) {
        let q = label_distribution(n, d);
        prop_assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        if n <= 40 {
            let e = label_distribution_exact(n, d);
            prop_assert_eq!(e.iter().cloned().fold(BigRational::from_integer(0.into()), |a, b| a + b), BigRational::one());
            for (x, y) in q.iter().zip(&e) {
                prop_assert!((x - y.to_f64().unwrap()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn log_series_agrees_with_bracket(l in lambda(), u in 0.01f64..0.95) {
        let p = u / (l + 1.0);
        let params = at(l, p);
        let bracket = product_bounds(&params, TailBound::FREE, 200).unwrap();
        let series = product_log_series(&params, 400).unwrap();
        let slack = bracket.width() + log_series_tail_bound(&params, 400) * bracket.hi() + 1e-13 * bracket.hi();
        prop_assert!((series - bracket.mid()).abs() <= slack, "{} vs {}", series, bracket);
    }

    #[test]
    fn product_lower_bound_grows_with_m(l in lambda(), p in 0.01f64..0.99, m in 0u32..200) {
        let mut acc = LogProduct::new(&at(l, p));
        acc.extend_to(m);
        let lo = acc.log_truncated().lo();
        acc.extend_to(m + 1);
        prop_assert!(acc.log_truncated().lo() >= lo);
    }

    #[test]
    fn means_increase_in_p(l in lambda(), u1 in 0.01f64..0.98, u2 in 0.01f64..0.98) {
        let (a, b) = if u1 < u2 { (u1, u2) } else { (u2, u1) };
        prop_assume!(b - a > 1e-6);
        let t2 = tree_threshold(2, l);
        let t3 = tree_threshold(3, l);
        let ts = 1.0 / (1.0 + l);
        let e2 = |u: f64| mean_time_tree2(&at(l, u * t2)).finite().unwrap();
        let e3 = |u: f64| mean_time_tree3(&at(l, u * t3)).finite().unwrap();
        let es = |u: f64| mean_time_free(&at(l, u * ts)).finite().unwrap();
        prop_assert!(e2(a) < e2(b));
        prop_assert!(e3(a) < e3(b));
        prop_assert!(es(a) < es(b));
        prop_assert!(mean_time_no_dispersion(&at(l, a), 256).hi() < mean_time_no_dispersion(&at(l, b), 256).lo());
    }

    #[test]
    fn free_dispersion_never_shorter(l in lambda(), u in 0.0001f64..0.9999) {
        let p = u / (l + 1.0);
        let c = compare_free(&at(l, p), DEFAULT_M_MAX);
        prop_assert!(c.is_ok(), "{:?}", c);
        prop_assert_ne!(c.unwrap().verdict, ComparisonVerdict::DispersionShorter);
    }

    #[test]
    fn verdict_matches_region(l in lambda(), p in 0.001f64..0.999) {
        let params = at(l, p);
        let region = region_at(&params, Topology::TreeDispersion(2), DEFAULT_M_MAX).unwrap();
        match compare_to_threshold(&params, Topology::TreeDispersion(2)).unwrap() {
            Ordering::Greater => prop_assert_eq!(region, Region::White),
            Ordering::Equal => prop_assert_eq!(region, Region::Gray),
            Ordering::Less => prop_assert_ne!(region, Region::White),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn simulation_is_reproducible(seed in any::<u64>(), d in 2u32..5) {
        let mut config = SimConfig::new(at(0.5, 0.4), Topology::TreeDispersion(d));
        config.replicates = 200;
        config.seed = seed;
        prop_assert_eq!(simulate(&config).unwrap(), simulate(&config).unwrap());
    }
}
