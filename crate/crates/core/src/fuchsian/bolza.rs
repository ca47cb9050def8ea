use std::f64::consts::{FRAC_PI_4, SQRT_2};

use super::{Provenance, SurfaceModel};
use crate::hplane::{rotation_about, Isometry, UhpPoint};

/// The Bolza surface: the regular octagon with angles π/4, centered at `i`,
/// with opposite sides identified.
///
/// The side pairings are `a_k = R(kπ/4) T R(−kπ/4)` for `k = 0..4`, where
/// `T` translates along the imaginary axis by twice the inradius
/// `arccosh(1+√2)`. They satisfy
/// `a0 a1⁻¹ a2 a3⁻¹ a0⁻¹ a1 a2⁻¹ a3 = 1`, and the returned generators
/// `g1 = a0⁻¹, g2 = a1, g3 = a1 a0⁻¹ a2⁻¹, g4 = a3 a2⁻¹` turn it into the
/// standard relator `[g1,g2][g3,g4] = 1`.
pub fn bolza_surface() -> SurfaceModel {
    let r = (1.0 + SQRT_2).acosh();
    let t = Isometry::from_entries(r.exp(), 0.0, 0.0, (-r).exp());
    let a: Vec<Isometry> = (0..4)
        .map(|k| {
            let rot = rotation_about(UhpPoint::I, k as f64 * FRAC_PI_4).expect("angle in range");
            rot.conjugate(&t)
        })
        .collect();
    let gens = vec![
        a[0].inverse(),
        a[1],
        a[1] * a[0].inverse() * a[2].inverse(),
        a[3] * a[2].inverse(),
    ];
    SurfaceModel::new(gens, Provenance::Bolza, UhpPoint::I, Vec::new())
        .expect("the Bolza presentation is exact up to rounding")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyptrig::jenni_sys_upper;

    #[test]
    fn side_pairing_relation_and_lengths() {
        let s = bolza_surface();
        assert!(s.relator_residual() <= 1e-8);
        let g = s.generators();
        // g1 and g2 are side pairings: translation length is twice the inradius.
        for gk in &g[..2] {
            assert!((gk.translation_length().unwrap() - jenni_sys_upper()).abs() < 1e-9);
        }
        // a2 and a3 recovered from the basis are side pairings too.
        let a2 = g[2].inverse() * g[1] * g[0];
        let a3 = g[3] * g[2].inverse() * g[1] * g[0];
        for a in [a2, a3] {
            assert!((a.translation_length().unwrap() - jenni_sys_upper()).abs() < 1e-9);
            assert!((a.displacement(UhpPoint::I) - jenni_sys_upper()).abs() < 1e-9);
        }
    }
}
