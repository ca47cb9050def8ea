// Hyperboloid-model helpers. Points satisfy <X,X> = -1 with X[0] > 0;
// geodesic lines are represented by unit spacelike normals N, the line
// being {X : <X,N> = 0} and the half-plane {X : <X,N> <= 0}.

pub(crate) type Vec3 = [f64; 3];

pub(crate) const ORIGIN: Vec3 = [1.0, 0.0, 0.0];

#[inline]
pub(crate) fn dot(a: &Vec3, b: &Vec3) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Minkowski-orthogonal complement of `a` and `b`: `<r,a> = <r,b> = 0`.
#[inline]
pub(crate) fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    let c = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    [-c[0], c[1], c[2]]
}

pub(crate) fn normalize_spacelike(n: &Vec3) -> Vec3 {
    let s = dot(n, n).sqrt();
    [n[0] / s, n[1] / s, n[2] / s]
}

/// Scales a timelike vector onto the upper sheet of the hyperboloid.
pub(crate) fn normalize_timelike(v: &Vec3) -> Vec3 {
    let s = (-dot(v, v)).sqrt() * v[0].signum();
    [v[0] / s, v[1] / s, v[2] / s]
}

/// Hyperbolic distance between two points of the hyperboloid, computed
/// from the chord length so that short distances keep full precision.
pub(crate) fn distance(a: &Vec3, b: &Vec3) -> f64 {
    let d = sub(a, b);
    let chord2 = dot(&d, &d).max(0.0);
    2.0 * (0.5 * chord2.sqrt()).asinh()
}
