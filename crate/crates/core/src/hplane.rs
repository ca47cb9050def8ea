//! Upper half-plane model of the hyperbolic plane.
//!
//! Points are `x + iy` with `y > 0`; isometries are real unimodular
//! matrices acting by Möbius transformation. Matrices are stored with
//! non-negative trace, so `g` and `-g` (the same isometry) have one
//! representation and equality is entrywise.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyptrig::{BigonConfig, Side};
use crate::minkowski::Vec3;
use crate::tol;

/// A point of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint", into = "RawPoint")]
pub struct UhpPoint {
    x: f64,
    y: f64,
}

#[derive(Serialize, Deserialize)]
struct RawPoint {
    x: f64,
    y: f64,
}

impl TryFrom<RawPoint> for UhpPoint {
    type Error = Error;
    fn try_from(r: RawPoint) -> Result<Self> {
        UhpPoint::new(r.x, r.y)
    }
}

impl From<UhpPoint> for RawPoint {
    fn from(p: UhpPoint) -> Self {
        RawPoint { x: p.x, y: p.y }
    }
}

impl UhpPoint {
    /// The point `i`.
    pub const I: UhpPoint = UhpPoint { x: 0.0, y: 1.0 };

    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() && y > 0.0 {
            Ok(UhpPoint { x, y })
        } else {
            Err(Error::InvalidPoint { x, y })
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// Image in the Poincaré disk under the Cayley map `z ↦ (z - i)/(z + i)`.
    pub fn to_disk(self) -> (f64, f64) {
        let den = self.x * self.x + (self.y + 1.0) * (self.y + 1.0);
        let re = (self.x * self.x + self.y * self.y - 1.0) / den;
        let im = -2.0 * self.x / den;
        (re, im)
    }

    /// Inverse of [`UhpPoint::to_disk`]; rejects points off the open disk.
    pub fn from_disk(u: f64, v: f64) -> Result<Self> {
        let r2 = u * u + v * v;
        if !(r2 < 1.0) {
            return Err(Error::Domain(format!("({u}, {v}) is not in the open unit disk")));
        }
        // z = i (1 + w) / (1 - w)
        let den = (1.0 - u) * (1.0 - u) + v * v;
        let x = -2.0 * v / den;
        let y = (1.0 - r2) / den;
        UhpPoint::new(x, y)
    }

    pub(crate) fn to_hyperboloid(self) -> Vec3 {
        let (x, y) = (self.x, self.y);
        let r2 = x * x + y * y;
        [(1.0 + r2) / (2.0 * y), x / y, (r2 - 1.0) / (2.0 * y)]
    }

    pub(crate) fn from_hyperboloid(v: &Vec3) -> Self {
        let y = 1.0 / (v[0] - v[2]);
        UhpPoint { x: v[1] * y, y }
    }
}

impl fmt::Display for UhpPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.x, self.y)
    }
}

/// Hyperbolic distance between two points.
pub fn distance(p: UhpPoint, q: UhpPoint) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    let chord = (dx * dx + dy * dy).sqrt();
    2.0 * (chord / (2.0 * (p.y * q.y).sqrt())).asinh()
}

/// A point on the boundary of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundaryPoint {
    Finite(f64),
    Infinity,
}

impl BoundaryPoint {
    // Null vector in the hyperboloid model pointing at this ideal point.
    pub(crate) fn to_null_vector(self) -> Vec3 {
        match self {
            BoundaryPoint::Finite(x) => [1.0 + x * x, 2.0 * x, x * x - 1.0],
            BoundaryPoint::Infinity => [1.0, 0.0, 1.0],
        }
    }
}

/// Orientation-preserving isometry of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct Isometry {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl TryFrom<[f64; 4]> for Isometry {
    type Error = Error;
    fn try_from(e: [f64; 4]) -> Result<Self> {
        Isometry::new(e[0], e[1], e[2], e[3])
    }
}

impl From<Isometry> for [f64; 4] {
    fn from(g: Isometry) -> Self {
        g.entries()
    }
}

/// Conjugacy type of an isometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IsometryKind {
    Hyperbolic,
    Parabolic,
    Elliptic,
    Identity,
}

/// Classification of an isometry by its trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsometryClass {
    pub kind: IsometryKind,
    /// Present iff `kind` is hyperbolic; satisfies `2 cosh(ℓ/2) = |trace|`.
    pub translation_length: Option<f64>,
    /// `| |trace| - 2 |` lies within ten classification bands.
    pub marginal: bool,
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    /// Builds an isometry from row-major entries, rejecting matrices whose
    /// determinant is not 1.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        let scale = [a, b, c, d].iter().fold(1.0f64, |m, v| m.max(v.abs()));
        if !det.is_finite() || (det - 1.0).abs() > tol::DET_TOL * scale * scale {
            return Err(Error::NotUnimodular { det });
        }
        Ok(Self::from_entries(a, b, c, d))
    }

    /// Sign-normalising constructor for matrices already known to be unimodular.
    pub(crate) fn from_entries(a: f64, b: f64, c: f64, d: f64) -> Self {
        let tr = a + d;
        let flip = tr < 0.0 || (tr == 0.0 && (c < 0.0 || (c == 0.0 && b > 0.0)));
        if flip {
            Isometry { a: -a, b: -b, c: -c, d: -d }
        } else {
            Isometry { a, b, c, d }
        }
    }

    /// Divides by `sqrt(det)`; used for products of reflections and
    /// conjugations by non-normalised frames.
    pub(crate) fn from_unnormalized(a: f64, b: f64, c: f64, d: f64) -> Self {
        let det = a * d - b * c;
        let s = det.abs().sqrt();
        Self::from_entries(a / s, b / s, c / s, d / s)
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry::from_entries(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
    }

    pub fn inverse(&self) -> Isometry {
        Isometry::from_entries(self.d, -self.b, -self.c, self.a)
    }

    /// `self ∘ other ∘ self⁻¹`.
    pub fn conjugate(&self, other: &Isometry) -> Isometry {
        self.compose(other).compose(&self.inverse())
    }

    pub fn apply(&self, p: UhpPoint) -> UhpPoint {
        // (a z + b)/(c z + d) with z = x + iy
        let (x, y) = (p.x, p.y);
        let nr = self.a * x + self.b;
        let ni = self.a * y;
        let dr = self.c * x + self.d;
        let di = self.c * y;
        let den = dr * dr + di * di;
        UhpPoint {
            x: (nr * dr + ni * di) / den,
            y: y / den,
        }
    }

    /// Hyperbolic distance between `p` and its image.
    pub fn displacement(&self, p: UhpPoint) -> f64 {
        distance(p, self.apply(p))
    }

    /// Trace of the normalised matrix (always `>= 0`).
    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// Largest entrywise deviation from the identity matrix.
    pub fn deviation_from_identity(&self) -> f64 {
        (self.a - 1.0)
            .abs()
            .max(self.b.abs())
            .max(self.c.abs())
            .max((self.d - 1.0).abs())
    }

    /// Entrywise equality up to `tol` (signs are already normalised).
    pub fn approx_eq(&self, other: &Isometry, tol: f64) -> bool {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .all(|(x, y)| (x - y).abs() <= tol)
    }

    pub fn classify(&self) -> IsometryClass {
        let t = self.trace().abs();
        let gap = t - 2.0;
        let marginal = gap.abs() <= tol::MARGINAL_FACTOR * tol::TRACE_BAND;
        let kind = if self.deviation_from_identity() <= tol::IDENTITY_TOL {
            IsometryKind::Identity
        } else if gap > tol::TRACE_BAND {
            IsometryKind::Hyperbolic
        } else if gap < -tol::TRACE_BAND {
            IsometryKind::Elliptic
        } else {
            IsometryKind::Parabolic
        };
        let translation_length = match kind {
            IsometryKind::Hyperbolic => Some(length_from_trace(t)),
            _ => None,
        };
        IsometryClass {
            kind,
            translation_length,
            marginal,
        }
    }

    /// Translation length when hyperbolic.
    pub fn translation_length(&self) -> Option<f64> {
        self.classify().translation_length
    }

    /// Translation length from the trace, without classification; only
    /// meaningful for elements known to be hyperbolic.
    pub(crate) fn raw_translation_length(&self) -> f64 {
        length_from_trace(self.trace().abs().max(2.0))
    }

    /// Repelling and attracting fixed points of a hyperbolic element.
    pub fn fixed_points(&self) -> Option<(BoundaryPoint, BoundaryPoint)> {
        if self.classify().kind != IsometryKind::Hyperbolic {
            return None;
        }
        let Isometry { a, b, c, d } = *self;
        // c z^2 + (d - a) z - b = 0; the attracting point has |c z + d| > 1.
        if c.abs() <= 1e-300 {
            let finite = BoundaryPoint::Finite(b / (d - a));
            return Some(if a.abs() > d.abs() {
                (finite, BoundaryPoint::Infinity)
            } else {
                (BoundaryPoint::Infinity, finite)
            });
        }
        let disc = ((d - a) * (d - a) + 4.0 * b * c).max(0.0).sqrt();
        // Numerically stable root pair.
        let q = -0.5 * ((d - a) + (d - a).signum() * disc);
        let (r1, r2) = if q != 0.0 { (q / c, -b / q) } else { ((a - d) / (2.0 * c), (a - d) / (2.0 * c)) };
        let deriv = |z: f64| (c * z + d).abs();
        Some(if deriv(r1) > deriv(r2) {
            (BoundaryPoint::Finite(r2), BoundaryPoint::Finite(r1))
        } else {
            (BoundaryPoint::Finite(r1), BoundaryPoint::Finite(r2))
        })
    }

    /// Linear action on the hyperboloid model (also valid on normals).
    pub(crate) fn act(&self, v: &Vec3) -> Vec3 {
        // The point corresponds to the symmetric matrix S = [[t+z, x],[x, t-z]],
        // transforming as S ↦ g S gᵀ.
        let (p, q, r) = (v[0] + v[2], v[1], v[0] - v[2]);
        let Isometry { a, b, c, d } = *self;
        let p2 = a * a * p + 2.0 * a * b * q + b * b * r;
        let q2 = a * c * p + (a * d + b * c) * q + b * d * r;
        let r2 = c * c * p + 2.0 * c * d * q + d * d * r;
        [0.5 * (p2 + r2), q2, 0.5 * (p2 - r2)]
    }
}

fn length_from_trace(t: f64) -> f64 {
    2.0 * (0.5 * t).acosh()
}

impl Mul for Isometry {
    type Output = Isometry;
    fn mul(self, rhs: Isometry) -> Isometry {
        self.compose(&rhs)
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Hyperbolic translation by `distance` along the geodesic from `from` to `to`.
pub fn translation_along(from: BoundaryPoint, to: BoundaryPoint, distance: f64) -> Result<Isometry> {
    if !(distance > 0.0 && distance.is_finite()) {
        return Err(Error::Domain(format!("translation distance must be positive, got {distance}")));
    }
    // M sends 0 to `from` and ∞ to `to`.
    let m = match (from, to) {
        (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) => {
            if !(u.is_finite() && v.is_finite()) || u == v {
                return Err(Error::Domain(format!("degenerate axis endpoints {u}, {v}")));
            }
            [v, u, 1.0, 1.0]
        }
        (BoundaryPoint::Infinity, BoundaryPoint::Finite(v)) if v.is_finite() => [v, 1.0, 1.0, 0.0],
        (BoundaryPoint::Finite(u), BoundaryPoint::Infinity) if u.is_finite() => [1.0, u, 0.0, 1.0],
        _ => return Err(Error::Domain("degenerate axis endpoints".into())),
    };
    let e = (0.5 * distance).exp();
    let [ma, mb, mc, md] = m;
    let det = ma * md - mb * mc;
    // M diag(e, 1/e) M⁻¹ with M⁻¹ = adj(M)/det
    let (a, b, c, d) = (ma * e, mb / e, mc * e, md / e);
    Ok(Isometry::from_unnormalized(
        (a * md - b * mc) / det,
        (-a * mb + b * ma) / det,
        (c * md - d * mc) / det,
        (-c * mb + d * ma) / det,
    ))
}

/// Counter-clockwise rotation by `angle` radians about `center`.
pub fn rotation_about(center: UhpPoint, angle: f64) -> Result<Isometry> {
    let two_pi = 2.0 * std::f64::consts::PI;
    if !(angle.is_finite() && angle > -two_pi && angle < two_pi) {
        return Err(Error::Domain(format!("rotation angle {angle} outside (-2π, 2π)")));
    }
    let (c, s) = ((0.5 * angle).cos(), (0.5 * angle).sin());
    let r = Isometry::from_entries(c, s, -s, c);
    Ok(frame_at(center).conjugate(&r))
}

/// The isometry `z ↦ y z + x`, taking `i` to `p`.
pub(crate) fn frame_at(p: UhpPoint) -> Isometry {
    let s = p.y.sqrt();
    Isometry::from_entries(s, p.x / s, 0.0, 1.0 / s)
}

/// Holonomy of the closed curve made of two arcs of length `d` meeting at
/// the configuration's angles.
///
/// The curve is developed with a moving frame: walk `d`, turn by the
/// exterior angle at the second vertex, walk `d`, turn by the exterior
/// angle at the first vertex. Opposite-side configurations turn the other
/// way at the first vertex.
pub fn bigon_holonomy(cfg: &BigonConfig) -> IsometryClass {
    let walk = translation_along(BoundaryPoint::Finite(0.0), BoundaryPoint::Infinity, cfg.d())
        .expect("arm length validated by BigonConfig");
    let pi = std::f64::consts::PI;
    let turn_second = pi - cfg.beta();
    let turn_first = match cfg.side() {
        Side::Same => pi - cfg.alpha(),
        Side::Opposite => -(pi - cfg.alpha()),
    };
    let rot = |phi: f64| rotation_about(UhpPoint::I, phi).expect("exterior angle in range");
    let g = walk * rot(turn_second) * walk * rot(turn_first);
    g.classify()
}
