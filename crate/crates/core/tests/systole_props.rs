use systolic::fuchsian::*;
use systolic::hyptrig::{bavard_bounds, jenni_sys_upper};
use systolic::systole::*;

mod common;

#[test]
fn certificate_survives_a_larger_radius() {
    for (c, s) in common::random_surfaces(31, 20) {
        let r = compute_systole(&s).unwrap();
        let cert = &r.certificate;
        assert!(r.certified_radius >= cert.l0 + 2.0 * cert.r_dom);
        let wider = enumerate_ball(&s, s.center(), 1.25 * r.certified_radius).unwrap();
        let shortest = wider
            .elements
            .iter()
            .filter_map(|e| e.element.translation_length())
            .fold(f64::INFINITY, f64::min);
        assert!((shortest - r.length).abs() <= 1e-9, "{c}: {} then {shortest}", r.length);
    }
}

#[test]
fn random_systoles_obey_the_genus_two_bounds() {
    let bavard = bavard_bounds(2).unwrap().sys_upper;
    for (c, s) in common::random_surfaces(32, 100) {
        let r = compute_systole(&s).unwrap();
        assert!(r.length <= jenni_sys_upper() + 1e-9, "{c}: {}", r.length);
        assert!(r.length <= bavard + 1e-9);
        // The three gluing curves are closed geodesics too.
        assert!(c.lengths().iter().all(|l| r.length <= l + 1e-9));
        let from_word = r.word.eval(s.generators()).translation_length().unwrap();
        assert!((from_word - r.length).abs() <= 1e-12, "{c}");
    }
}

#[test]
fn full_twist_leaves_the_spectrum_unchanged() {
    let base = FNCoords::new([1.3, 2.1, 2.4], [0.4, 0.7, 0.2]).unwrap();
    let s0 = surface_from_fn(&base).unwrap();
    let lengths0 = shortest_spectrum(&s0, 4.0).unwrap();
    assert!(!lengths0.is_empty());
    for k in 0..3 {
        let mut t = base.twists();
        t[k] += base.lengths()[k];
        let s1 = surface_from_fn(&FNCoords::new(base.lengths(), t).unwrap()).unwrap();
        let lengths1 = shortest_spectrum(&s1, 4.0).unwrap();
        assert_eq!(lengths0.len(), lengths1.len(), "twist {k}");
        for ((l0, m0), (l1, m1)) in lengths0.iter().zip(&lengths1) {
            assert!((l0 - l1).abs() <= 1e-8, "twist {k}: {l0} vs {l1}");
            assert_eq!(m0, m1);
        }
        let a = compute_systole(&s0).unwrap().length;
        let b = compute_systole(&s1).unwrap().length;
        assert!((a - b).abs() <= 1e-8);
    }
}

#[test]
fn spectrum_starts_at_the_systole() {
    for (c, s) in common::random_surfaces(33, 5) {
        let sys = compute_systole(&s).unwrap().length;
        let choice = shortest_spectrum(&s, sys + 0.5).unwrap();
        assert!((choice[0].0 - sys).abs() <= 1e-9, "{c}");
        assert!(choice.windows(2).all(|w| w[0].0 < w[1].0));
        assert!(shortest_spectrum(&s, 0.9 * sys).unwrap().is_empty());
    }
}

#[test]
fn user_bound_is_used_when_smaller() {
    let s = bolza_surface();
    let (l0, src) = systole_upper_bound(&s, Some(3.0)).unwrap();
    assert_eq!((l0, src), (3.0, BoundSource::User));
    let (l0, src) = systole_upper_bound(&s, Some(5.0)).unwrap();
    assert!(l0 <= jenni_sys_upper() + 1e-12 && src != BoundSource::User);
    assert!(systole_upper_bound(&s, Some(-1.0)).is_err());
}
