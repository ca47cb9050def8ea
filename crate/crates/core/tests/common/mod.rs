#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use systolic::fuchsian::{surface_from_fn, FNCoords, SurfaceModel};
use systolic::hplane::{BoundaryPoint, Isometry, UhpPoint};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Lengths uniform in [0.5, 3], each twist uniform in [0, length).
pub fn random_fn(rng: &mut impl Rng) -> FNCoords {
    let lengths = [0; 3].map(|_| rng.gen_range(0.5..=3.0));
    let twists = lengths.map(|l: f64| rng.gen_range(0.0..l));
    FNCoords::new(lengths, twists).unwrap()
}

pub fn random_surfaces(seed: u64, n: usize) -> Vec<(FNCoords, SurfaceModel)> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| {
            let c = random_fn(&mut r);
            (c, surface_from_fn(&c).unwrap())
        })
        .collect()
}

/// Top of the axis of a hyperbolic element.
pub fn point_on_axis(g: &Isometry) -> UhpPoint {
    let (p, q) = g.fixed_points().expect("hyperbolic");
    match (p, q) {
        (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => UhpPoint::new(0.5 * (u + v), 0.5 * (u - v).abs()).unwrap(),
        (BoundaryPoint::Finite(u), BoundaryPoint::Infinity) | (BoundaryPoint::Infinity, BoundaryPoint::Finite(u)) => {
            UhpPoint::new(u, 1.0).unwrap()
        }
        _ => unreachable!("distinct fixed points"),
    }
}
