use std::f64::consts::PI;

use rand::Rng;
use systolic::diameter::*;
use systolic::fuchsian::*;
use systolic::hplane::{distance, UhpPoint};
use systolic::hyptrig::{bavard_bounds, main_inequality_slack};
use systolic::systole::compute_systole;

mod common;

#[test]
fn refinement_nests_intervals() {
    let mut surfaces = vec![("bolza".to_string(), bolza_surface())];
    surfaces.extend(common::random_surfaces(41, 2).into_iter().map(|(c, s)| (c.to_string(), s)));
    for (c, s) in surfaces {
        let coarse = estimate_diameter(&s, 16).unwrap();
        let fine = estimate_diameter(&s, 32).unwrap();
        assert!(fine.lower >= coarse.lower - 1e-9, "{c}: {coarse:?} {fine:?}");
        assert!(fine.upper <= coarse.upper + 1e-9, "{c}: {coarse:?} {fine:?}");
        assert!(fine.sample_count > coarse.sample_count);
        assert_eq!(fine.unsettled_samples, 0);
    }
}

#[test]
fn interval_shape() {
    let s = bolza_surface();
    let e = estimate_diameter(&s, 12).unwrap();
    let h = e.covering_radius;
    assert!((h - e.r_dom / 12.0).abs() < 1e-15);
    assert!(e.lower <= e.upper);
    assert!(e.upper >= e.lower + 2.0 * h);
    assert!(e.upper <= e.lower + 2.0 * h + 1e-6);
    assert!(e.lower >= e.r_dom - 1e-9);
    assert!(estimate_diameter(&s, 1).is_err());
}

#[test]
fn upper_bound_respects_bavard_floor() {
    let floor = bavard_bounds(2).unwrap().diam_lower;
    for (c, s) in common::random_surfaces(42, 100) {
        let e = estimate_diameter(&s, 8).unwrap();
        assert!(e.upper >= floor - 1e-9, "{c}: {e:?}");
    }
}

#[test]
fn quotient_distance_is_lipschitz() {
    let mut rng = common::rng(43);
    for (c, s) in common::random_surfaces(44, 3) {
        let (cu, cv) = s.center().to_disk();
        let mut near = |r: f64| {
            let (a, t) = (rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..r));
            UhpPoint::from_disk(cu + t * a.cos(), cv + t * a.sin()).unwrap()
        };
        for _ in 0..20 {
            let (x, y) = (near(0.5), near(0.5));
            let x2 = UhpPoint::from_disk(x.to_disk().0 + 0.01, x.to_disk().1).unwrap();
            let a = quotient_distance(&s, x, y).unwrap();
            let b = quotient_distance(&s, x2, y).unwrap();
            assert!((a - b).abs() <= distance(x, x2) + 1e-9, "{c}");
            assert!((a - quotient_distance(&s, y, x).unwrap()).abs() <= 1e-10);
        }
    }
}

#[test]
fn displacement_along_a_systolic_axis_is_the_systole() {
    let mut surfaces = vec![bolza_surface()];
    surfaces.extend(common::random_surfaces(45, 3).into_iter().map(|(_, s)| s));
    for s in surfaces {
        let sys = compute_systole(&s).unwrap();
        let p = common::point_on_axis(&sys.element);
        let m = minimal_displacement(&s, p).unwrap();
        assert!((m.displacement - sys.length).abs() <= 1e-8, "{} vs {}", m.displacement, sys.length);
    }
}

#[test]
fn sampled_lower_bound_respects_the_main_inequality() {
    for (c, s) in common::random_surfaces(46, 5) {
        let sys = compute_systole(&s).unwrap().length;
        let e = estimate_diameter(&s, 16).unwrap();
        assert!(main_inequality_slack(sys, e.upper) >= 0.0, "{c}");
        assert!(main_inequality_slack(sys, e.lower) >= -sampling_slack_tolerance(e.lower, e.covering_radius));
    }
}

#[test]
fn domain_at_another_center() {
    let s = bolza_surface();
    let p = UhpPoint::from_disk(0.2, -0.1).unwrap();
    let dom = dirichlet_domain(&s, p).unwrap();
    assert!((dom.area() - 4.0 * PI).abs() <= 0.04 * PI);
    assert!(dom.circumradius() >= s.domain().unwrap().inradius());
}

#[test]
fn grid_for_gap_meets_the_gap() {
    let s = bolza_surface();
    let n = grid_for_gap(&s, 0.2).unwrap();
    let e = estimate_diameter(&s, n).unwrap();
    assert!(e.upper - e.lower <= 0.2);
    assert!(grid_for_gap(&s, 0.0).is_err());
}
