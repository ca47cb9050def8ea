use std::f64::consts::PI;

use systolic::fuchsian::*;
use systolic::hplane::distance;

mod common;

#[test]
fn gluing_lengths_recovered_on_random_surfaces() {
    for (c, s) in common::random_surfaces(21, 100) {
        assert!(s.relator_residual() <= 1e-8, "{c}: residual {:e}", s.relator_residual());
        for ((w, _), want) in s.gluing_curves().iter().zip(c.lengths()) {
            let l = w.eval(s.generators()).translation_length().unwrap();
            assert!((l - want).abs() <= 1e-8, "{c}: {w} has length {l}, want {want}");
        }
    }
}

#[test]
fn domains_have_gauss_bonnet_area() {
    let mut surfaces: Vec<(String, SurfaceModel)> =
        common::random_surfaces(22, 20).into_iter().map(|(c, s)| (c.to_string(), s)).collect();
    surfaces.push(("bolza".into(), bolza_surface()));
    for (c, s) in surfaces {
        let area = s.domain().unwrap().area();
        assert!((area / (4.0 * PI) - 1.0).abs() <= 0.01, "{c}: area {area}");
    }
}

#[test]
fn bolza_domain_is_a_regular_octagon() {
    let s = bolza_surface();
    let dom = s.domain().unwrap();
    let sides = dom.side_lengths();
    assert_eq!(sides.len(), 8);
    for l in &sides {
        assert!((l - sides[0]).abs() <= 1e-6);
    }
    for a in dom.angles() {
        assert!((a - PI / 4.0).abs() <= 1e-9);
    }
}

#[test]
fn balls_are_discrete_and_deduplicated() {
    let mut surfaces = vec![bolza_surface()];
    surfaces.extend(common::random_surfaces(23, 4).into_iter().map(|(_, s)| s));
    for s in &surfaces {
        let ball = enumerate_ball(s, s.center(), 5.0).unwrap();
        assert!(!ball.is_empty());
        for (i, e) in ball.elements.iter().enumerate() {
            assert!(e.displacement >= 1e-6);
            assert!(e.displacement <= ball.radius + 1e-9);
            assert!((distance(s.center(), e.element.apply(s.center())) - e.displacement).abs() <= 1e-9);
            for f in &ball.elements[i + 1..] {
                assert!(!e.element.approx_eq(&f.element, 1e-7));
            }
        }
    }
}

#[test]
fn cyclic_permutations_share_length() {
    let s = common::random_surfaces(24, 1).remove(0).1;
    let ball = enumerate_ball(&s, s.center(), 4.5).unwrap();
    for e in ball.elements.iter().filter(|e| e.word.len() >= 2).take(300) {
        let l = e.element.translation_length().unwrap();
        for k in 1..e.word.len() {
            let lk = e.word.rotate(k).eval(s.generators()).translation_length().unwrap();
            assert!((lk - l).abs() <= 1e-9, "{}: {l} vs {lk}", e.word);
        }
    }
}

#[test]
fn balls_grow_monotonically() {
    for (_, s) in common::random_surfaces(25, 5) {
        let p = s.center();
        let small = enumerate_ball(&s, p, 3.0).unwrap();
        let large = enumerate_ball(&s, p, 4.0).unwrap();
        assert!(small.len() <= large.len());
        for e in &small.elements {
            assert!(large.contains(&e.element, 1e-9));
        }
    }
}

#[test]
fn ball_words_evaluate_to_their_elements() {
    let s = common::random_surfaces(26, 1).remove(0).1;
    for e in enumerate_ball(&s, s.center(), 4.0).unwrap().elements {
        assert!(e.word.eval(s.generators()).approx_eq(&e.element, 1e-8), "{}", e.word);
    }
}

#[test]
fn invalid_lengths_are_rejected() {
    assert!("2,2,-1,0,0,0".parse::<FNCoords>().is_err());
    assert!(FNCoords::new([0.0, 1.0, 1.0], [0.0; 3]).is_err());
    assert!(FNCoords::new([1.0, 1.0, 1.0], [f64::NAN, 0.0, 0.0]).is_err());
}
