mod oracle;

use dispersal_core::qproduct::{log_series_tail_bound, product_bounds_geometric};
use dispersal_core::*;
use oracle::Fixed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn at(l: f64, p: f64) -> ModelParams {
    ModelParams::new(l, p).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn oracle_elementary_functions() {
    let two = Fixed::int(2);
    assert!(rel(oracle::ln(&two).to_f64(), std::f64::consts::LN_2) < 1e-16);
    let x = Fixed::f64(3.75);
    let back = oracle::exp(&oracle::ln(&x));
    assert!((back.sub(&x)).0.bits() < 40, "exp(ln x) drifted");
    assert!(rel(oracle::exp(&Fixed::int(-3)).to_f64(), (-3.0f64).exp()) < 1e-15);
}

#[test]
fn oracle_matches_known_constants() {
    // prod (1 + 2^-k) - 1
    let ea = oracle::mean_no_dispersion(1.0, 0.5).to_f64();
    assert_eq!(ea, 3.7684620580627434);
    let e3 = oracle::mean_tree3(1.0, 0.2).to_f64();
    // The float 0.2 sits slightly above 1/5.
    assert!(rel(e3, 1.547945266813821) < 1e-16, "{e3:.17}");
    let e2 = oracle::mean_tree2(1.0, 0.1).to_f64();
    assert!(rel(e2, 1.2287349926839397) < 1e-16);
    let es = oracle::mean_free(1.0, 0.25).to_f64();
    assert!(rel(es, 1.0 + 2.0 * 1.5f64.ln()) < 1e-15);
}

#[test]
fn no_dispersion_mean_encloses_oracle() {
    for &(l, p) in &[
        (1.0, 0.5),
        (0.5, 0.6),
        (3.0, 0.9),
        (0.05, 0.2),
        (10.0, 1e-4),
    ] {
        let e = mean_time_no_dispersion(&at(l, p), 4096);
        let truth = oracle::mean_no_dispersion(l, p).to_f64();
        assert!(
            e.lo() <= truth && truth <= e.hi(),
            "({l}, {p}): {e} vs {truth}"
        );
        assert!(e.width() <= 1e-12 * truth, "({l}, {p}): {e}");
    }
}

#[test]
fn product_bounds_enclose_oracle() {
    let f = oracle::q_product(1.0, 0.5).to_f64();
    let b = product_bounds(&at(1.0, 0.5), TailBound::TREE2, 64).unwrap();
    assert!(b.contains(f) && (f - 4.7684620580627434).abs() < 1e-15);
    let g = product_bounds_geometric(&at(0.5, 0.3), 300);
    assert!(g.contains(oracle::q_product(0.5, 0.3).to_f64()));
}

#[test]
fn log_series_examples() {
    let b = product_bounds(&at(1.0, 0.25), TailBound::FREE, 60).unwrap();
    let s = product_log_series(&at(1.0, 0.25), 60).unwrap();
    assert!(b.lo() - 1e-14 <= s && s <= b.hi() + 1e-14);
    let truth = oracle::q_product(0.5, 0.3).to_f64();
    let s = product_log_series(&at(0.5, 0.3), 40).unwrap();
    assert!(rel(s, truth) < 1e-14);
    assert!(log_series_tail_bound(&at(0.5, 0.3), 40) < 1e-30);
    let s = product_log_series(&at(1e-12, 0.4), 10).unwrap();
    assert!((s - 1.0).abs() < 1e-11);
}

#[test]
fn closed_forms_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let l = 10f64.powf(rng.random_range(-2.0..1.5));
        let u: f64 = rng.random_range(0.001..0.999);
        let p2 = u * 2.0 / (l + 2.0);
        let p3 = u * 3.0 / (2.0 * l + 3.0);
        let ps = u / (l + 1.0);
        let e2 = mean_time_tree2(&at(l, p2)).finite().unwrap();
        let e3 = mean_time_tree3(&at(l, p3)).finite().unwrap();
        let es = mean_time_free(&at(l, ps)).finite().unwrap();
        // Near the pole the log argument amplifies the input rounding.
        let tol = 1e-13 / (1.0 - u);
        assert!(
            rel(e2, oracle::mean_tree2(l, p2).to_f64()) < tol,
            "d2 {l} {p2}"
        );
        assert!(
            rel(e3, oracle::mean_tree3(l, p3).to_f64()) < tol,
            "d3 {l} {p3}"
        );
        assert!(
            rel(es, oracle::mean_free(l, ps).to_f64()) < tol,
            "star {l} {ps}"
        );
    }
}

#[test]
fn excess_intervals_enclose_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..200 {
        let l = 10f64.powf(rng.random_range(-2.0..1.5));
        let u: f64 = rng.random_range(0.0..0.999);
        let p = (u * 2.0 / (l + 2.0)).max(1e-9);
        let e = closed_forms::tree2_excess(&at(l, p)).unwrap();
        let truth = oracle::mean_tree2(l, p).sub(&Fixed::int(1)).to_f64();
        assert!(
            e.lo() <= truth && truth <= e.hi(),
            "{l} {p}: {e} vs {truth}"
        );
    }
}

#[test]
fn tiny_p_separation_is_second_order() {
    // E_A and E_3 agree to first order in p at small p.
    let (l, p) = (0.2, 1e-6);
    let a = oracle::mean_no_dispersion(l, p);
    let d3 = oracle::mean_tree3(l, p);
    let gap = d3.sub(&a).to_f64();
    assert!(gap > 0.0 && gap < 1e-12, "{gap}");
    assert_eq!(
        compare_d3(&at(l, p), DEFAULT_M_MAX).unwrap().verdict,
        ComparisonVerdict::NoDispersionShorter
    );
}

#[test]
fn strict_verdicts_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut strict = 0;
    for i in 0..200 {
        let l = 10f64.powf(rng.random_range(-1.5..1.0));
        let u: f64 = rng.random_range(0.01..0.99);
        let (topo, p) = match i % 3 {
            0 => (Topology::TreeDispersion(2), u * 2.0 / (l + 2.0)),
            1 => (Topology::TreeDispersion(3), u * 3.0 / (2.0 * l + 3.0)),
            _ => (Topology::FreeDispersion, u / (l + 1.0)),
        };
        let c = compare(&at(l, p), topo, DEFAULT_M_MAX).unwrap();
        let a = oracle::mean_no_dispersion(l, p);
        let d = match topo {
            Topology::TreeDispersion(2) => oracle::mean_tree2(l, p),
            Topology::TreeDispersion(3) => oracle::mean_tree3(l, p),
            _ => oracle::mean_free(l, p),
        };
        match c.verdict {
            ComparisonVerdict::NoDispersionShorter => assert!(a < d, "{topo} {l} {p}"),
            ComparisonVerdict::DispersionShorter => assert!(d < a, "{topo} {l} {p}"),
            ComparisonVerdict::Indeterminate(_) => continue,
        }
        strict += 1;
        assert!(c.no_dispersion.contains(a.to_f64()));
    }
    assert!(strict >= 195, "only {strict} strict verdicts");
}

#[test]
fn crossings_match_oracle_roots() {
    let c = trace_crossings(0.5, Topology::TreeDispersion(2), 1e-9)
        .unwrap()
        .pair()
        .unwrap();
    for (found, p) in [(c.p_l, 0.388184220004325), (c.p_u, 0.756133911341248)] {
        assert!((found - p).abs() < 1e-9, "{found} vs {p}");
        let below =
            oracle::mean_tree2(0.5, p - 1e-7).sub(&oracle::mean_no_dispersion(0.5, p - 1e-7));
        let above =
            oracle::mean_tree2(0.5, p + 1e-7).sub(&oracle::mean_no_dispersion(0.5, p + 1e-7));
        assert!(below.0.sign() != above.0.sign());
    }
    let c = trace_crossings(0.2, Topology::TreeDispersion(3), 1e-9)
        .unwrap()
        .pair()
        .unwrap();
    assert!((c.p_l - 0.581379975590632).abs() < 1e-9);
    assert!((c.p_u - 0.804630101347415).abs() < 1e-9);
}

#[test]
fn crossings_are_stable_under_refinement() {
    let coarse = trace_crossings(0.5, Topology::TreeDispersion(2), 5e-3)
        .unwrap()
        .pair()
        .unwrap();
    let fine = trace_crossings(0.5, Topology::TreeDispersion(2), 1e-6)
        .unwrap()
        .pair()
        .unwrap();
    assert!((coarse.p_l - fine.p_l).abs() <= 5e-3 + 1e-6);
    assert!((coarse.p_u - fine.p_u).abs() <= 5e-3 + 1e-6);
    let finer = trace_crossings(0.5, Topology::TreeDispersion(2), 1e-8)
        .unwrap()
        .pair()
        .unwrap();
    assert!((finer.p_l - fine.p_l).abs() < 1e-6 && (finer.p_u - fine.p_u).abs() < 1e-6);
}

#[test]
fn large_lambda_line_reports_what_it_finds() {
    match trace_crossings(100.0, Topology::TreeDispersion(2), 5e-3) {
        Ok(c) => assert!(c.points.windows(2).all(|w| w[0] < w[1])),
        Err(e) => assert_eq!(e, ComparatorError::NoCrossing),
    }
}
