use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Letter, Provenance, SurfaceModel, Word};
use crate::error::{Error, Result};
use crate::hplane::{frame_at, Isometry, UhpPoint};
use crate::minkowski;

/// Fenchel–Nielsen coordinates of a genus-2 surface glued from two pairs
/// of pants along three curves. Twists are displacements in length units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFn", into = "RawFn")]
pub struct FNCoords {
    lengths: [f64; 3],
    twists: [f64; 3],
}

#[derive(Serialize, Deserialize)]
struct RawFn {
    lengths: [f64; 3],
    twists: [f64; 3],
}

impl TryFrom<RawFn> for FNCoords {
    type Error = Error;
    fn try_from(r: RawFn) -> Result<Self> {
        FNCoords::new(r.lengths, r.twists)
    }
}

impl From<FNCoords> for RawFn {
    fn from(c: FNCoords) -> Self {
        RawFn { lengths: c.lengths, twists: c.twists }
    }
}

impl FNCoords {
    pub fn new(lengths: [f64; 3], twists: [f64; 3]) -> Result<Self> {
        if let Some(l) = lengths.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(Error::Domain(format!("gluing lengths must be positive, got {l}")));
        }
        if let Some(t) = twists.iter().find(|t| !t.is_finite()) {
            return Err(Error::Domain(format!("twist {t} is not finite")));
        }
        Ok(FNCoords { lengths, twists })
    }

    pub fn lengths(&self) -> [f64; 3] {
        self.lengths
    }

    pub fn twists(&self) -> [f64; 3] {
        self.twists
    }
}

impl fmt::Display for FNCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [l1, l2, l3] = self.lengths;
        let [t1, t2, t3] = self.twists;
        write!(f, "{l1},{l2},{l3},{t1},{t2},{t3}")
    }
}

impl FromStr for FNCoords {
    type Err = Error;

    /// Parses `l1,l2,l3,t1,t2,t3`.
    fn from_str(s: &str) -> Result<Self> {
        let vals = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Domain(format!("cannot parse '{s}': {e}")))?;
        if vals.len() != 6 {
            return Err(Error::Domain(format!("expected six numbers l1,l2,l3,t1,t2,t3, got {}", vals.len())));
        }
        FNCoords::new([vals[0], vals[1], vals[2]], [vals[3], vals[4], vals[5]])
    }
}

type M2 = [[f64; 2]; 2];

fn mul(a: &M2, b: &M2) -> M2 {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

fn inv(a: &M2) -> M2 {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    [[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]]
}

fn to_iso(m: &M2) -> Isometry {
    Isometry::from_unnormalized(m[0][0], m[0][1], m[1][0], m[1][1])
}

fn translate(len: f64) -> M2 {
    let e = (0.5 * len).exp();
    [[e, 0.0], [0.0, 1.0 / e]]
}

const QUARTER_TURN: M2 = [
    [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2],
    [-std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2],
];

// Reflection in the imaginary axis, z ↦ −z̄, as an anti-Möbius matrix.
const MIRROR: M2 = [[1.0, 0.0], [0.0, -1.0]];

/// Builds the surface with the given Fenchel–Nielsen coordinates.
///
/// A right-angled hexagon with alternate sides `ℓ1/2, ℓ2/2, ℓ3/2` is laid
/// out by a moving frame; doubling it across the seams gives one pair of
/// pants, whose boundary translations are products of reflections in the
/// seams. The second pants is the mirror image across the `ℓ1/2` side, and
/// the two are glued by stable letters carrying the twists.
///
/// Gluing curves of the result: `g1⁻¹ g4` (length `ℓ1`), `g4` (length
/// `ℓ2`) and `g1` (length `ℓ3`).
pub fn surface_from_fn(fn_coords: &FNCoords) -> Result<SurfaceModel> {
    let [a1, a2, a3] = fn_coords.lengths.map(|l| 0.5 * l);
    let seam = |opp: f64, x: f64, y: f64| {
        let c = (opp.cosh() + x.cosh() * y.cosh()) / (x.sinh() * y.sinh());
        c.acosh()
    };
    let s12 = seam(a3, a1, a2);
    let s23 = seam(a1, a2, a3);
    let s31 = seam(a2, a3, a1);
    let sides = [a1, s12, a2, s23, a3, s31];
    if sides.iter().any(|s| !s.is_finite() || *s <= 0.0) {
        return Err(Error::Construction(format!(
            "degenerate hexagon for lengths {:?}",
            fn_coords.lengths
        )));
    }

    // Frame k sits at the start of side k, looking along it. Walking from
    // both ends halves the accumulated rounding.
    let step = |len: f64| mul(&translate(len), &QUARTER_TURN);
    let mut frames: Vec<M2> = vec![[[1.0, 0.0], [0.0, 1.0]]; 7];
    for k in 0..3 {
        frames[k + 1] = mul(&frames[k], &step(sides[k]));
    }
    for k in (3..6).rev() {
        frames[k] = mul(&frames[k + 1], &inv(&step(sides[k])));
    }
    let closure = to_iso(&mul(&frames[3], &step(sides[3])))
        .compose(&to_iso(&frames[4]).inverse())
        .deviation_from_identity();
    if !(closure <= 1e-6) {
        return Err(Error::Construction(format!("hexagon does not close (residual {closure:e})")));
    }

    // Move the hexagon so its vertex centroid is at i; this keeps matrix
    // entries, and hence rounding in long products, small.
    let mut acc = [0.0; 3];
    for f in &frames[..6] {
        let v = to_iso(f).apply(UhpPoint::I).to_hyperboloid();
        for i in 0..3 {
            acc[i] += v[i];
        }
    }
    let centroid = UhpPoint::from_hyperboloid(&minkowski::normalize_timelike(&acc));
    let [ra, rb, rc, rd] = frame_at(centroid).inverse().entries();
    let recenter = [[ra, rb], [rc, rd]];
    let frames: Vec<M2> = frames.iter().map(|f| mul(&recenter, f)).collect();

    let refl: Vec<M2> = (0..6).map(|k| mul(&mul(&frames[k], &MIRROR), &inv(&frames[k]))).collect();
    let prod = |x: usize, y: usize| mul(&refl[x], &refl[y]);
    let b = prod(1, 3);
    let c = prod(3, 5);
    let twist = |k: usize, t: f64| mul(&mul(&frames[k], &translate(t)), &inv(&frames[k]));
    let [t1, t2, t3] = fn_coords.twists;
    let tau1_inv = inv(&twist(0, t1));
    let stable2 = mul(&mul(&twist(2, t2), &prod(2, 0)), &tau1_inv);
    let stable3 = mul(&mul(&twist(4, t3), &prod(4, 0)), &tau1_inv);
    let gens = vec![to_iso(&c), to_iso(&stable3).inverse(), to_iso(&stable2).inverse(), to_iso(&b).inverse()];

    let g = |k: u8, inverse: bool| Letter::new(k, inverse);
    let gluing = vec![
        Word(vec![g(0, true), g(3, false)]),
        Word(vec![g(3, false)]),
        Word(vec![g(0, false)]),
    ];
    SurfaceModel::new(gens, Provenance::FromFN(*fn_coords), UhpPoint::I, gluing)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let c: FNCoords = "0.1, 2,2,0,0,0".parse().unwrap();
        assert_eq!(c.lengths(), [0.1, 2.0, 2.0]);
        assert_eq!(c.to_string().parse::<FNCoords>().unwrap(), c);
        assert!("2,2,-1,0,0,0".parse::<FNCoords>().is_err());
        assert!("2,2,1,0,0".parse::<FNCoords>().is_err());
        assert!("2,2,x,0,0,0".parse::<FNCoords>().is_err());
    }

    #[test]
    fn symmetric_pants_recover_lengths() {
        let s = surface_from_fn(&FNCoords::new([2.0; 3], [0.0; 3]).unwrap()).unwrap();
        assert!(s.relator_residual() <= 1e-8);
        for (_, l) in s.gluing_curves() {
            assert!((l - 2.0).abs() < 1e-8, "{l}");
        }
    }

    #[test]
    fn twisted_lengths_recovered() {
        let c = FNCoords::new([0.7, 1.9, 2.6], [0.3, 1.1, 2.0]).unwrap();
        let s = surface_from_fn(&c).unwrap();
        assert!(s.relator_residual() <= 1e-8);
        for ((w, l), want) in s.gluing_curves().iter().zip(c.lengths()) {
            assert!((l - want).abs() < 1e-8, "{w}: {l} vs {want}");
            let direct = w.eval(s.generators()).translation_length().unwrap();
            assert!((direct - want).abs() < 1e-8);
        }
    }

    #[test]
    fn overflowing_lengths_fail_cleanly() {
        let c = FNCoords::new([1e-300, 2000.0, 2000.0], [0.0; 3]).unwrap();
        assert!(matches!(surface_from_fn(&c), Err(Error::Construction(_))));
    }
}
