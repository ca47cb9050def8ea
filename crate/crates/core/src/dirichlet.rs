//! Dirichlet fundamental polygons and the tiling they generate.
//!
//! All polygon work happens in a frame where the polygon center sits at
//! the hyperboloid origin. Polygons are convex and stored projectively:
//! each edge is a line normal, each vertex the intersection of two
//! consecutive edges.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fuchsian::{Letter, Word};
use crate::hplane::{frame_at, Isometry, UhpPoint};
use crate::minkowski::{self, Vec3, ORIGIN};
use crate::tol;

// Half-width of the initial Klein-model square; it contains the whole disk.
const START_HALF_WIDTH: f64 = 2.0;
const MAX_BOOTSTRAP_RADIUS: f64 = 60.0;
const BOOTSTRAP_CAP: usize = 2_000_000;
const BOOTSTRAP_TOL: f64 = 1e-6;

/// Outcome of cutting a polygon by a half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Clip {
    Redundant,
    Cut,
    Empty,
}

/// Convex polygon in the Klein chart, stored as edges with labels.
#[derive(Debug, Clone)]
pub(crate) struct Polygon {
    normals: Vec<Vec3>,
    labels: Vec<Option<usize>>,
    // Vertex k joins edge k and edge k+1; scaled to t = 1.
    vertices: Vec<Vec3>,
}

fn intersect(a: &Vec3, b: &Vec3) -> Vec3 {
    let v = minkowski::cross(a, b);
    [1.0, v[1] / v[0], v[2] / v[0]]
}

impl Polygon {
    /// A large square containing the whole hyperbolic plane.
    pub(crate) fn start() -> Self {
        let w = START_HALF_WIDTH;
        let normals = vec![[w, 1.0, 0.0], [w, 0.0, 1.0], [w, -1.0, 0.0], [w, 0.0, -1.0]];
        let mut p = Polygon { labels: vec![None; 4], normals, vertices: Vec::new() };
        p.recompute();
        p
    }

    fn recompute(&mut self) {
        let n = self.normals.len();
        self.vertices = (0..n).map(|k| intersect(&self.normals[k], &self.normals[(k + 1) % n])).collect();
    }

    pub(crate) fn len(&self) -> usize {
        self.normals.len()
    }

    pub(crate) fn labels(&self) -> &[Option<usize>] {
        &self.labels
    }

    pub(crate) fn normals(&self) -> &[Vec3] {
        &self.normals
    }

    /// Keeps the part where `<X, normal> <= 0`.
    pub(crate) fn clip(&mut self, normal: Vec3, label: usize) -> Clip {
        let normal = minkowski::normalize_spacelike(&normal);
        if self.normals.iter().any(|m| (0..3).all(|i| (m[i] - normal[i]).abs() <= 1e-9 * (1.0 + normal[0].abs()))) {
            return Clip::Redundant;
        }
        let n = self.vertices.len();
        let side: Vec<f64> = self.vertices.iter().map(|v| minkowski::dot(v, &normal)).collect();
        let out: Vec<bool> = side.iter().map(|s| *s > tol::SIDE_TOL).collect();
        let count = out.iter().filter(|o| **o).count();
        if count == 0 {
            return Clip::Redundant;
        }
        if count == n {
            return Clip::Empty;
        }
        let i0 = (0..n).find(|&k| out[k] && !out[(k + n - 1) % n]).expect("mixed signs");
        let j0 = (i0 + count - 1) % n;
        let mut normals = Vec::with_capacity(n - count + 2);
        let mut labels = Vec::with_capacity(n - count + 2);
        let mut idx = (j0 + 1) % n;
        loop {
            normals.push(self.normals[idx]);
            labels.push(self.labels[idx]);
            if idx == i0 {
                break;
            }
            idx = (idx + 1) % n;
        }
        normals.push(normal);
        labels.push(Some(label));
        self.normals = normals;
        self.labels = labels;
        self.recompute();
        self.drop_degenerate_edges();
        Clip::Cut
    }

    // Removes edges whose two endpoints coincide (a cut through a vertex).
    fn drop_degenerate_edges(&mut self) {
        loop {
            let n = self.normals.len();
            if n <= 3 {
                return;
            }
            let bad = (0..n).find(|&m| {
                let a = &self.vertices[(m + n - 1) % n];
                let b = &self.vertices[m];
                !((a[1] - b[1]).hypot(a[2] - b[2]) >= 1e-13)
            });
            match bad {
                Some(m) => {
                    self.normals.remove(m);
                    self.labels.remove(m);
                    self.recompute();
                }
                None => return,
            }
        }
    }

    /// Bounded by lines of the group only, with every vertex inside the plane.
    pub(crate) fn is_closed(&self) -> bool {
        self.labels.iter().all(Option::is_some)
            && self.vertices.iter().all(|v| v[1] * v[1] + v[2] * v[2] < 1.0 - 1e-12)
    }

    /// Vertices on the hyperboloid (only meaningful when closed).
    pub(crate) fn points(&self) -> Vec<Vec3> {
        self.vertices.iter().map(minkowski::normalize_timelike).collect()
    }

    pub(crate) fn circumradius_from(&self, x: &Vec3) -> f64 {
        self.points().iter().map(|v| minkowski::distance(x, v)).fold(0.0, f64::max)
    }

    /// Interior angles, vertex k first.
    pub(crate) fn angles(&self) -> Vec<f64> {
        let n = self.normals.len();
        let unit: Vec<Vec3> = self.normals.iter().map(minkowski::normalize_spacelike).collect();
        (0..n)
            .map(|k| {
                let c = minkowski::dot(&unit[k], &unit[(k + 1) % n]).clamp(-1.0, 1.0);
                PI - c.acos()
            })
            .collect()
    }

    pub(crate) fn area(&self) -> f64 {
        (self.len() as f64 - 2.0) * PI - self.angles().iter().sum::<f64>()
    }
}

/// One side of a Dirichlet domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    /// Maps the partner face onto this face; the face lies on the bisector
    /// between the center and its image under this element.
    pub pairing: Isometry,
    pub word: Word,
    pub partner: usize,
    frame_pairing: Isometry,
    normal: Vec3,
}

/// Dirichlet fundamental polygon of a surface group around a center point.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletDomain {
    center: UhpPoint,
    frame: Isometry,
    faces: Vec<Face>,
    vertices: Vec<UhpPoint>,
    frame_vertices: Vec<Vec3>,
    angles: Vec<f64>,
    circumradius: f64,
    inradius: f64,
    area: f64,
}

struct Node {
    m: Isometry,
    parent: usize,
    letter: Letter,
}

impl DirichletDomain {
    /// Builds the Dirichlet domain of the group generated by `generators`
    /// around `center`.
    ///
    /// Group elements are enumerated by a breadth-first search over words,
    /// pruned at a radius that grows until the clipped polygon closes up,
    /// its sides pair off under the group and its area equals
    /// `expected_area`. The polygon always contains the true domain, so
    /// equal area means it is the true domain.
    pub fn build(generators: &[Isometry], center: UhpPoint, expected_area: f64, exec: Exec) -> Result<Self> {
        let frame = frame_at(center).inverse();
        let letters = Letter::all(generators.len() as u8);
        let letter_mats: Vec<Isometry> = letters
            .iter()
            .map(|l| {
                let g = generators[l.generator as usize];
                frame.conjugate(&if l.inverse { g.inverse() } else { g })
            })
            .collect();
        let longest = letter_mats.iter().map(displacement_at_origin).fold(0.0, f64::max);
        let mut radius = longest;
        let mut last_problem = String::new();
        while radius <= MAX_BOOTSTRAP_RADIUS {
            match Self::attempt(&letters, &letter_mats, radius, expected_area, exec)? {
                Ok((nodes, poly)) => return Ok(Self::assemble(center, frame, &nodes, &poly)),
                Err(problem) => last_problem = problem,
            }
            radius *= 1.25;
        }
        Err(Error::DomainNotClosed(format!(
            "no valid polygon from words of displacement <= {MAX_BOOTSTRAP_RADIUS}: {last_problem}"
        )))
    }

    #[allow(clippy::type_complexity)]
    fn attempt(
        letters: &[Letter],
        letter_mats: &[Isometry],
        radius: f64,
        expected_area: f64,
        exec: Exec,
    ) -> Result<std::result::Result<(Vec<Node>, Polygon), String>> {
        let mut nodes = vec![Node { m: Isometry::IDENTITY, parent: 0, letter: letters[0] }];
        let mut index = PointIndex::new(BOOTSTRAP_TOL);
        index.insert(&ORIGIN);
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let batches = exec.map(&frontier, |&i| {
                let m = nodes[i].m;
                letter_mats
                    .iter()
                    .enumerate()
                    .filter_map(|(j, l)| {
                        let c = m * *l;
                        (displacement_at_origin(&c) <= radius).then_some((i, j, c))
                    })
                    .collect::<Vec<_>>()
            });
            let mut next = Vec::new();
            for (parent, j, m) in batches.into_iter().flatten() {
                if index.insert(&orbit_point(&m)).1 {
                    next.push(nodes.len());
                    nodes.push(Node { m, parent, letter: letters[j] });
                    if nodes.len() > BOOTSTRAP_CAP {
                        return Err(Error::ElementCap { cap: BOOTSTRAP_CAP });
                    }
                }
            }
            frontier = next;
        }

        let mut order: Vec<(f64, usize)> = (1..nodes.len()).map(|i| (displacement_at_origin(&nodes[i].m), i)).collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut poly = Polygon::start();
        let mut rho = f64::INFINITY;
        for &(d, i) in &order {
            if d < 1e-6 {
                return Err(Error::Construction(format!(
                    "group element with displacement {d:e}: the group is not discrete"
                )));
            }
            if d > 2.0 * rho + tol::RADIUS_EPS {
                break;
            }
            let normal = bisector_normal(&nodes[i].m);
            match poly.clip(normal, i) {
                Clip::Empty => return Ok(Err("polygon became empty".into())),
                Clip::Cut if poly.is_closed() => rho = poly.circumradius_from(&ORIGIN),
                _ => {}
            }
        }
        if !poly.is_closed() {
            return Ok(Err("polygon is not closed".into()));
        }
        for l in poly.labels() {
            let inv = nodes[l.expect("closed")].m.inverse();
            let partner = index.find(&orbit_point(&inv));
            if !poly.labels().iter().any(|x| x.is_some() && *x == partner) {
                return Ok(Err("unpaired side".into()));
            }
        }
        let area = poly.area();
        if (area - expected_area).abs() > tol::AREA_REL_TOL * expected_area {
            return Ok(Err(format!("area {area} differs from {expected_area}")));
        }
        Ok(Ok((nodes, poly)))
    }

    fn assemble(center: UhpPoint, frame: Isometry, nodes: &[Node], poly: &Polygon) -> Self {
        let word_of = |mut i: usize| {
            let mut w = Vec::new();
            while i != 0 {
                w.push(nodes[i].letter);
                i = nodes[i].parent;
            }
            w.reverse();
            Word(w)
        };
        let labels: Vec<usize> = poly.labels().iter().map(|l| l.expect("closed")).collect();
        let frame_inv = frame.inverse();
        let mut faces: Vec<Face> = labels
            .iter()
            .zip(poly.normals())
            .map(|(&i, n)| Face {
                pairing: frame_inv.conjugate(&nodes[i].m),
                word: word_of(i),
                partner: usize::MAX,
                frame_pairing: nodes[i].m,
                normal: minkowski::normalize_spacelike(n),
            })
            .collect();
        let mut index = PointIndex::new(BOOTSTRAP_TOL);
        for f in &faces {
            index.insert(&orbit_point(&f.frame_pairing));
        }
        for f in faces.iter_mut() {
            f.partner = index.find(&orbit_point(&f.frame_pairing.inverse())).expect("pairing checked");
        }
        let frame_vertices = poly.points();
        let vertices = frame_vertices
            .iter()
            .map(|v| frame_inv.apply(UhpPoint::from_hyperboloid(v)))
            .collect();
        let inradius = faces
            .iter()
            .map(|f| 0.5 * displacement_at_origin(&f.frame_pairing))
            .fold(f64::INFINITY, f64::min);
        DirichletDomain {
            center,
            frame,
            faces,
            vertices,
            angles: poly.angles(),
            circumradius: poly.circumradius_from(&ORIGIN),
            inradius,
            area: poly.area(),
            frame_vertices,
        }
    }

    pub fn center(&self) -> UhpPoint {
        self.center
    }

    /// Isometry taking the center to `i`.
    pub fn frame(&self) -> Isometry {
        self.frame
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face_pairings(&self) -> Vec<Isometry> {
        self.faces.iter().map(|f| f.pairing).collect()
    }

    /// Vertices in counter-clockwise order; vertex k joins face k and face k+1.
    pub fn vertices(&self) -> &[UhpPoint] {
        &self.vertices
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn side_lengths(&self) -> Vec<f64> {
        let n = self.frame_vertices.len();
        (0..n)
            .map(|k| minkowski::distance(&self.frame_vertices[(k + n - 1) % n], &self.frame_vertices[k]))
            .collect()
    }

    /// Largest distance from the center to a point of the domain.
    pub fn circumradius(&self) -> f64 {
        self.circumradius
    }

    /// Hyperbolic distance below which two orbit points of the center are
    /// treated as equal. Distinct orbit points are at least twice the
    /// inradius apart, so this leaves a wide margin for rounding that
    /// accumulates along long products.
    pub(crate) fn orbit_tolerance(&self) -> f64 {
        (0.02 * self.inradius).min(1e-3)
    }

    /// Distance from the center to the nearest side.
    pub fn inradius(&self) -> f64 {
        self.inradius
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    /// Largest signed distance from `p` past any side; `<= 0` inside.
    pub fn signed_excess(&self, p: UhpPoint) -> f64 {
        let x = self.to_frame(p);
        self.frame_excess(&x)
    }

    /// Exact distance from a frame point to the domain (0 inside).
    pub(crate) fn frame_distance(&self, p: &Vec3) -> f64 {
        let n = self.faces.len();
        let mut best = f64::INFINITY;
        let mut outside = false;
        for k in 0..n {
            let nk = &self.faces[k].normal;
            let s = minkowski::dot(p, nk);
            if s <= 0.0 {
                continue;
            }
            outside = true;
            // Foot of the perpendicular on the line of side k.
            let foot = [p[0] - s * nk[0], p[1] - s * nk[1], p[2] - s * nk[2]];
            let prev = &self.faces[(k + n - 1) % n].normal;
            let next = &self.faces[(k + 1) % n].normal;
            let d = if minkowski::dot(&foot, prev) <= 0.0 && minkowski::dot(&foot, next) <= 0.0 {
                s.asinh()
            } else {
                let a = minkowski::distance(p, &self.frame_vertices[(k + n - 1) % n]);
                let b = minkowski::distance(p, &self.frame_vertices[k]);
                a.min(b)
            };
            best = best.min(d);
        }
        if outside {
            best
        } else {
            0.0
        }
    }

    pub(crate) fn frame_excess(&self, x: &Vec3) -> f64 {
        self.faces
            .iter()
            .map(|f| minkowski::dot(x, &f.normal).asinh())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub(crate) fn frame_vertices(&self) -> &[Vec3] {
        &self.frame_vertices
    }

    pub(crate) fn to_frame(&self, p: UhpPoint) -> Vec3 {
        self.frame.apply(p).to_hyperboloid()
    }

    pub(crate) fn frame_pairing(&self, k: usize) -> Isometry {
        self.faces[k].frame_pairing
    }

    /// Moves a frame point into the domain. Returns the reduced point and
    /// the faces used, so that `x = s_{k1} s_{k2} … · reduced`.
    pub(crate) fn reduce(&self, x: &Vec3) -> Result<(Vec3, Vec<usize>)> {
        let mut q = *x;
        let mut used = Vec::new();
        for _ in 0..10_000 {
            let (k, s) = self
                .faces
                .iter()
                .enumerate()
                .map(|(k, f)| (k, minkowski::dot(&q, &f.normal)))
                .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
            if s <= 1e-12 {
                return Ok((q, used));
            }
            q = self.frame_pairing(k).inverse().act(&q);
            used.push(k);
        }
        Err(Error::Internal("point reduction did not terminate".into()))
    }

    /// Frame element and word for a sequence of faces.
    pub(crate) fn face_product(&self, faces: &[usize]) -> (Isometry, Word) {
        faces.iter().fold((Isometry::IDENTITY, Word::identity()), |(m, w), &k| {
            (m * self.frame_pairing(k), w.concat(&self.faces[k].word))
        })
    }

    /// Breadth-first search over tiles `h·D`, children `h·s_k`. A child is
    /// visited only if `keep` accepts its frame matrix; the root (identity)
    /// is always visited.
    pub(crate) fn tile_bfs<F>(&self, keep: F, cap: usize, exec: Exec) -> Result<Tiles>
    where
        F: Fn(&Isometry) -> bool + Sync + Send,
    {
        let mut tiles = Tiles { mats: vec![Isometry::IDENTITY], parent: vec![(usize::MAX, 0)] };
        let mut index = PointIndex::new(self.orbit_tolerance());
        index.insert(&ORIGIN);
        let mut frontier = vec![0usize];
        let nf = self.faces.len();
        while !frontier.is_empty() {
            let batches = exec.map(&frontier, |&i| {
                let h = tiles.mats[i];
                (0..nf)
                    .filter_map(|k| {
                        let c = h * self.frame_pairing(k);
                        let key = orbit_point(&c);
                        (index.find(&key).is_none() && keep(&c)).then_some((i, k, c, key))
                    })
                    .collect::<Vec<_>>()
            });
            let mut next = Vec::new();
            for (parent, k, m, key) in batches.into_iter().flatten() {
                if !index.insert(&key).1 {
                    continue;
                }
                next.push(tiles.mats.len());
                tiles.mats.push(m);
                tiles.parent.push((parent, k));
                if tiles.mats.len() > cap {
                    return Err(Error::ElementCap { cap });
                }
            }
            frontier = next;
        }
        Ok(tiles)
    }
}

/// Result of a tile search: frame matrices with parent links.
pub(crate) struct Tiles {
    pub(crate) mats: Vec<Isometry>,
    parent: Vec<(usize, usize)>,
}

impl Tiles {
    /// Faces multiplied along the path from the root to tile `i`.
    pub(crate) fn faces_of(&self, mut i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        while i != 0 {
            let (p, k) = self.parent[i];
            out.push(k);
            i = p;
        }
        out.reverse();
        out
    }
}

pub(crate) fn displacement_at_origin(m: &Isometry) -> f64 {
    minkowski::distance(&ORIGIN, &m.act(&ORIGIN))
}

/// Unit normal of the bisector between the origin and `m·O`, oriented so
/// the origin's side is negative.
pub(crate) fn bisector_normal(m: &Isometry) -> Vec3 {
    minkowski::normalize_spacelike(&minkowski::sub(&m.act(&ORIGIN), &ORIGIN))
}

/// Spatial hash of hyperboloid points, bucketed in geodesic polar
/// coordinates around the origin. Two points are the same when their
/// hyperbolic distance is below the tolerance.
///
/// Cells are much wider than the tolerance, so a lookup only probes the
/// neighbouring cells when the point lies within the tolerance of a cell
/// boundary.
#[derive(Debug)]
pub(crate) struct PointIndex {
    tol: f64,
    // 4 sinh²(tol/2), the squared Minkowski chord at distance tol.
    chord2: f64,
    cells: HashMap<(i64, i64), Vec<usize>, BuildHasherDefault<FxHasher>>,
    pts: Vec<Vec3>,
}

const INDEX_CELL: f64 = 0.1;

impl PointIndex {
    pub(crate) fn new(tol: f64) -> Self {
        assert!(tol < 0.5 * INDEX_CELL);
        let chord2 = 4.0 * (0.5 * tol).sinh().powi(2);
        PointIndex { tol, chord2, cells: HashMap::default(), pts: Vec::new() }
    }

    // Angular cells in ring j; a cell spans at least INDEX_CELL at the
    // inner radius of the ring below.
    fn sectors(j: i64) -> i64 {
        let inner = ((j - 1) as f64 * INDEX_CELL).max(0.0);
        ((2.0 * PI * inner.sinh() / INDEX_CELL).floor() as i64).max(1)
    }

    fn polar(p: &Vec3) -> (f64, f64) {
        (minkowski::distance(&ORIGIN, p), p[2].atan2(p[1]))
    }

    fn sector_of(j: i64, phi: f64) -> (i64, f64) {
        let m = Self::sectors(j);
        let u = (phi + PI) / (2.0 * PI) * m as f64;
        let k = u.floor();
        ((k as i64).rem_euclid(m), u - k)
    }

    fn key(p: &Vec3) -> (i64, i64) {
        let (r, phi) = Self::polar(p);
        let j = (r / INDEX_CELL).floor() as i64;
        (j, Self::sector_of(j, phi).0)
    }

    fn same(&self, a: &Vec3, b: &Vec3) -> bool {
        let d = minkowski::sub(a, b);
        minkowski::dot(&d, &d) < self.chord2
    }

    fn probe(&self, key: (i64, i64), p: &Vec3) -> Option<usize> {
        self.cells.get(&key)?.iter().copied().find(|&i| self.same(&self.pts[i], p))
    }

    pub(crate) fn find(&self, p: &Vec3) -> Option<usize> {
        let (r, phi) = Self::polar(p);
        let j = (r / INDEX_CELL).floor() as i64;
        let frac_r = r / INDEX_CELL - j as f64;
        let tol_r = self.tol / INDEX_CELL;
        let mut rings = [j, j, j];
        if frac_r < tol_r && j > 0 {
            rings[1] = j - 1;
        }
        if frac_r > 1.0 - tol_r {
            rings[2] = j + 1;
        }
        for (n, &jj) in rings.iter().enumerate() {
            if n > 0 && jj == j {
                continue;
            }
            let m = Self::sectors(jj);
            let (k, frac) = Self::sector_of(jj, phi);
            if let Some(i) = self.probe((jj, k), p) {
                return Some(i);
            }
            if m == 1 {
                continue;
            }
            // Angular width of the tolerance at the smallest radius in play.
            let inner = (r - self.tol).max(1e-300);
            let tol_k = (self.tol / inner.sinh()) / (2.0 * PI) * m as f64;
            if frac < tol_k {
                if let Some(i) = self.probe((jj, (k - 1).rem_euclid(m)), p) {
                    return Some(i);
                }
            }
            if frac > 1.0 - tol_k {
                if let Some(i) = self.probe((jj, (k + 1).rem_euclid(m)), p) {
                    return Some(i);
                }
            }
        }
        None
    }

    /// Returns the id of `p` and whether it was newly inserted.
    pub(crate) fn insert(&mut self, p: &Vec3) -> (usize, bool) {
        if let Some(i) = self.find(p) {
            return (i, false);
        }
        let i = self.pts.len();
        self.pts.push(*p);
        self.cells.entry(Self::key(p)).or_default().push(i);
        (i, true)
    }
}

/// Multiply-rotate hasher for small integer keys.
#[derive(Default)]
pub(crate) struct FxHasher(u64);

impl Hasher for FxHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(b as u64);
        }
    }

    fn write_u64(&mut self, v: u64) {
        self.0 = (self.0.rotate_left(5) ^ v).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
    }

    fn write_i64(&mut self, v: i64) {
        self.write_u64(v as u64);
    }
}

/// Image of the origin, the key identifying a group element in frame coordinates.
pub(crate) fn orbit_point(m: &Isometry) -> Vec3 {
    m.act(&ORIGIN)
}
