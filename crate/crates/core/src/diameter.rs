//! Dirichlet domains, distances on the quotient and certified diameter
//! intervals.
//!
//! The eccentricity `ecc(x) = max_z d_X(x, z)` of a point equals the
//! circumradius of the Dirichlet domain centered at `x`, and the diameter
//! is the largest eccentricity. Eccentricities are computed exactly at a
//! set of sample points covering the fundamental domain within `h`; since
//! `ecc` is 1-Lipschitz the diameter lies in `[max ecc, max ecc + h]`.
//! The reported interval is `[max ecc, max ecc + 2h]`, a fixed width that
//! refines predictably with the grid.

use serde::{Deserialize, Serialize};

use crate::dirichlet::{Clip, DirichletDomain, Polygon};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fuchsian::{enumerate_ball_with, BallElement, BallOptions, SurfaceModel};
use crate::hplane::{frame_at, Isometry, UhpPoint};
use crate::minkowski::{self, Vec3, ORIGIN};
use crate::systole::systole_upper_bound;
use crate::tol;

/// Default number of sampling rings.
pub const DEFAULT_GRID: usize = 64;

// Rounds of vertex certification before a sample is left unsettled.
const MAX_ROUNDS: usize = 200;

// Orbit points closer to a vertex than the sample by less than this count
// as equidistant.
const TIE: f64 = 1e-7;

/// Dirichlet domain of the surface group around `center`.
pub fn dirichlet_domain(s: &SurfaceModel, center: UhpPoint) -> Result<DirichletDomain> {
    if center == s.center() {
        return s.domain().cloned();
    }
    DirichletDomain::build(s.generators(), center, s.area(), Exec::default())
}

/// Distance on the surface between the projections of `x` and `y`.
pub fn quotient_distance(s: &SurfaceModel, x: UhpPoint, y: UhpPoint) -> Result<f64> {
    let dom = s.domain()?;
    let (qx, _) = dom.reduce(&dom.to_frame(x))?;
    let (qy, _) = dom.reduce(&dom.to_frame(y))?;
    // Any image of y closer to x than qy lies in a tile meeting this ball.
    let radius = minkowski::distance(&qx, &qy) + tol::RADIUS_EPS;
    let tiles = dom.tile_bfs(
        |h| dom.frame_distance(&h.inverse().act(&qx)) <= radius,
        tol::DEFAULT_ELEMENT_CAP,
        Exec::Sequential,
    )?;
    Ok(tiles
        .mats
        .iter()
        .map(|h| minkowski::distance(&qx, &h.act(&qy)))
        .fold(f64::INFINITY, f64::min))
}

/// The element moving `p` least, with its displacement.
pub fn minimal_displacement(s: &SurfaceModel, p: UhpPoint) -> Result<BallElement> {
    let (mut radius, _) = systole_upper_bound(s, None)?;
    loop {
        let ball = enumerate_ball_with(s, p, radius, &BallOptions { verify: false, ..BallOptions::default() })?;
        if let Some(e) = ball.elements.into_iter().next() {
            return Ok(e);
        }
        radius *= 1.5;
    }
}

/// Certified enclosure of the diameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiamEstimate {
    pub lower: f64,
    pub upper: f64,
    pub sample_count: usize,
    /// Every point of the surface is within this distance of a sample.
    pub covering_radius: f64,
    pub grid_resolution: usize,
    /// Circumradius of the fundamental domain the samples cover.
    pub r_dom: f64,
    /// Samples whose eccentricity is only bounded from above; they raise
    /// `upper` if needed but never `lower`.
    pub unsettled_samples: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct DiamOptions {
    /// Number of sampling rings; the covering radius is `r_dom / grid_resolution`.
    pub grid_resolution: usize,
    pub exec: Exec,
    pub cap: usize,
}

impl Default for DiamOptions {
    fn default() -> Self {
        DiamOptions { grid_resolution: DEFAULT_GRID, exec: Exec::default(), cap: tol::DEFAULT_ELEMENT_CAP }
    }
}

pub fn estimate_diameter(s: &SurfaceModel, grid_resolution: usize) -> Result<DiamEstimate> {
    estimate_diameter_with(s, &DiamOptions { grid_resolution, ..DiamOptions::default() })
}

/// Smallest grid resolution whose interval width `2h` is at most `gap`.
pub fn grid_for_gap(s: &SurfaceModel, gap: f64) -> Result<usize> {
    if !(gap > 0.0 && gap.is_finite()) {
        return Err(Error::Domain(format!("gap must be positive, got {gap}")));
    }
    let r_dom = s.domain()?.circumradius();
    Ok(((2.0 * r_dom / gap).ceil() as usize).max(2))
}

/// How far the main inequality may dip below zero at `lower` when the true
/// diameter can be up to `2h` larger: `3(cosh(lower + 2h) − cosh(lower))`.
pub fn sampling_slack_tolerance(lower: f64, h: f64) -> f64 {
    3.0 * ((lower + 2.0 * h).cosh() - lower.cosh())
}

/// Estimates the diameter from exact eccentricities at sample points.
///
/// Samples sit on geodesic circles of radius `r_i = i·r_dom/n` around the
/// domain center, `m_i` equally spaced points per circle with `m_i` the
/// least power of two giving arc spacing at most `r_dom/n`. Every point of
/// the domain is within `h = r_dom/n` of a sample. From `n = 16` on,
/// doubling `n` keeps all previous samples.
///
/// Circles are processed outwards. Each sample's Dirichlet domain is
/// seeded with the sides of a sample on an earlier circle, which is
/// usually almost right, and then certified.
pub fn estimate_diameter_with(s: &SurfaceModel, opts: &DiamOptions) -> Result<DiamEstimate> {
    let n = opts.grid_resolution;
    if n < 2 {
        return Err(Error::Domain(format!("grid resolution must be at least 2, got {n}")));
    }
    let dom = s.domain()?;
    let r_dom = dom.circumradius();
    let h = r_dom / n as f64;
    // Samples just outside the domain are kept up to a distance that does
    // not depend on n, so finer grids contain coarser ones.
    let band = h.max(r_dom / 16.0);
    let rings: Vec<Vec<Option<Vec3>>> = polar_grid(r_dom, n)
        .into_iter()
        .map(|ring| ring.into_iter().map(|x| (dom.frame_distance(&x) <= band).then_some(x)).collect())
        .collect();

    // Tiles touching the domain, at a side or at a vertex.
    let verts = dom.frame_vertices();
    let touching = dom.tile_bfs(
        |h| {
            let h_inv = h.inverse();
            verts.iter().any(|v| dom.frame_distance(&h_inv.act(v)) <= 1e-9)
        },
        opts.cap,
        Exec::Sequential,
    )?;
    let ctx = Sampler { dom, cap: opts.cap, touching: touching.mats[1..].to_vec() };
    let mut done: Vec<Vec<Option<SampleDomain>>> = Vec::with_capacity(rings.len());
    let root_seed: Vec<Isometry> = Vec::new();
    for ring in &rings {
        let jobs: Vec<(usize, Vec3)> = ring.iter().enumerate().filter_map(|(j, x)| x.map(|x| (j, x))).collect();
        let results = opts.exec.map(&jobs, |(j, x)| {
            let seed = parent(&done, *j, ring.len()).map_or(&root_seed[..], |p| &p.faces[..]);
            ctx.eccentricity(x, seed)
        });
        let mut row: Vec<Option<SampleDomain>> = (0..ring.len()).map(|_| None).collect();
        for ((j, _), r) in jobs.into_iter().zip(results) {
            row[j] = Some(r?);
        }
        done.push(row);
    }

    let all: Vec<&SampleDomain> = done.iter().flatten().flatten().collect();
    let lower = all.iter().filter_map(|e| e.low).fold(0.0, f64::max);
    let settled_max = all.iter().filter(|e| e.low.is_some()).map(|e| e.value).fold(0.0, f64::max);
    let loose = all.iter().filter(|e| e.low.is_none()).map(|e| e.value + h).fold(0.0, f64::max);
    let unsettled = all.iter().filter(|e| e.low.is_none()).count();
    if unsettled == all.len() {
        return Err(Error::DomainNotClosed(
            "no sample eccentricity could be certified; raise the element cap".into(),
        ));
    }
    Ok(DiamEstimate {
        lower,
        upper: (settled_max + 2.0 * h).max(loose),
        sample_count: all.len(),
        covering_radius: h,
        grid_resolution: n,
        r_dom,
        unsettled_samples: unsettled,
    })
}

/// Sample on the nearest earlier nonempty circle closest in angle to
/// sample `j` of `m`.
fn parent(done: &[Vec<Option<SampleDomain>>], j: usize, m: usize) -> Option<&SampleDomain> {
    let ring = done.iter().rev().find(|r| r.iter().any(Option::is_some))?;
    let mp = ring.len();
    let centre = (j * mp + m / 2) / m % mp;
    (0..=mp / 2).find_map(|off| {
        ring[(centre + off) % mp]
            .as_ref()
            .or_else(|| ring[(centre + mp - off % mp) % mp].as_ref())
    })
}

/// Sample points in frame coordinates, grouped by circle.
fn polar_grid(r_dom: f64, n: usize) -> Vec<Vec<Vec3>> {
    let mut out = vec![vec![minkowski::ORIGIN]];
    for i in 1..=n {
        let r = r_dom * i as f64 / n as f64;
        let dr = r_dom / n as f64;
        let m = (2.0 * std::f64::consts::PI * r.sinh() / dr).ceil().max(1.0) as usize;
        let m = m.next_power_of_two();
        let (ch, sh) = (r.cosh(), r.sinh());
        out.push(
            (0..m)
                .map(|j| {
                    let phi = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                    [ch, sh * phi.cos(), sh * phi.sin()]
                })
                .collect(),
        );
    }
    out
}

/// Cuts the polygon (in the frame `to_x` centered at the sample) by the
/// bisector between the sample and its image under the frame element `g`.
fn cut(poly: &mut Polygon, elems: &mut Vec<Isometry>, to_x: &Isometry, g: Isometry) -> Result<()> {
    let p = to_x.conjugate(&g).act(&ORIGIN);
    if minkowski::distance(&p, &ORIGIN) <= tol::RADIUS_EPS {
        return Ok(());
    }
    match poly.clip(minkowski::sub(&p, &ORIGIN), elems.len()) {
        Clip::Empty => Err(Error::Internal("sample domain became empty".into())),
        Clip::Cut => {
            elems.push(g);
            Ok(())
        }
        Clip::Redundant => Ok(()),
    }
}

/// An ideal point (as a null vector) in the closure of an unbounded
/// polygon: an end of some side line, or any point when no side line
/// meets the circle at infinity.
fn open_direction(poly: &Polygon) -> Option<Vec3> {
    let ns = poly.normals();
    let inside = |xi: &Vec3| {
        ns.iter().all(|n| minkowski::dot(xi, n) <= 1e-12 * (n[0].abs() + n[1].abs() + n[2].abs()))
    };
    let mut any_line = false;
    for n in ns {
        let r = n[1].hypot(n[2]);
        if !(n[0].abs() < r) {
            continue;
        }
        any_line = true;
        let phi = n[2].atan2(n[1]);
        let delta = (n[0] / r).acos();
        for theta in [phi + delta, phi - delta] {
            let xi = [1.0, theta.cos(), theta.sin()];
            if inside(&xi) {
                return Some(xi);
            }
        }
    }
    (!any_line).then_some([1.0, 1.0, 0.0])
}

/// The point at distance `d` from `x` on the ray towards the boundary point `xi`.
fn geodesic_towards(x: &Vec3, xi: &Vec3, d: f64) -> Vec3 {
    let a = minkowski::dot(xi, x);
    let t = [0, 1, 2].map(|i| (xi[i] + a * x[i]) / -a);
    minkowski::normalize_timelike(&[0, 1, 2].map(|i| d.cosh() * x[i] + d.sinh() * t[i]))
}

/// Dirichlet domain of one sample point.
struct SampleDomain {
    /// Circumradius of the polygon, an upper bound on the eccentricity.
    value: f64,
    /// Lower bound on the eccentricity, within `TIE` of `value`, once the
    /// farthest vertex is certified.
    low: Option<f64>,
    /// Frame elements whose bisectors bound the domain.
    faces: Vec<Isometry>,
}

struct Sampler<'a> {
    dom: &'a DirichletDomain,
    cap: usize,
    touching: Vec<Isometry>,
}

impl Sampler<'_> {
    /// Dirichlet domain at the frame point `x`, starting from the bisectors
    /// of `seed`.
    ///
    /// Cutting by bisectors of any set of group elements leaves a polygon
    /// containing the true domain, so its circumradius bounds the
    /// eccentricity from above. When no orbit point of `x` is closer than
    /// `x` to the farthest vertex, that vertex is at surface distance
    /// equal to the circumradius and the bound is attained. Otherwise the
    /// closer orbit points cut the vertex off and the test repeats.
    fn eccentricity(&self, x: &Vec3, seed: &[Isometry]) -> Result<SampleDomain> {
        // The polygon is kept in a frame centered at x, where its vertices
        // stay well inside the Klein disk.
        let to_x = frame_at(UhpPoint::from_hyperboloid(x)).inverse();
        let from_x = to_x.inverse();
        let mut poly = Polygon::start();
        let mut elems: Vec<Isometry> = Vec::new();
        for g in seed.iter().chain(&self.touching) {
            cut(&mut poly, &mut elems, &to_x, *g)?;
        }
        let (q, faces) = self.dom.reduce(x)?;
        let (k, _) = self.dom.face_product(&faces);
        let k_inv = k.inverse();
        // ecc(x) <= d(x, center) + r_dom, so points farther than this are
        // never in the domain.
        let beyond = minkowski::distance(x, &ORIGIN) + self.dom.circumradius() + 1.0;
        for _ in 0..MAX_ROUNDS {
            let (probe, rho) = if poly.is_closed() {
                let pts = poly.points();
                pts.iter()
                    .map(|v| (*v, minkowski::distance(&ORIGIN, v)))
                    .fold((pts[0], f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a })
            } else {
                let xi = open_direction(&poly)
                    .ok_or_else(|| Error::Internal("unbounded sample domain without an ideal point".into()))?;
                (geodesic_towards(&ORIGIN, &xi, beyond), beyond)
            };
            let (p0, p_faces) = self.dom.reduce(&from_x.act(&probe))?;
            let (kp, _) = self.dom.face_product(&p_faces);
            // q itself is an orbit point, so a search out to d(p0, q)
            // already finds a closer point when there is one.
            let reach = (rho - tol::RADIUS_EPS).min(minkowski::distance(&p0, &q) + tol::RADIUS_EPS);
            let near: Vec<(Isometry, f64)> = self
                .tiles_near(&q, &p0, reach)?
                .into_iter()
                .map(|h| (h, minkowski::distance(&h.act(&q), &p0)))
                .collect();
            // Orbit points closer by less than TIE cannot be cut off
            // reliably; they still bound the eccentricity from below.
            let (closer, ties): (Vec<_>, Vec<_>) = near.into_iter().partition(|(_, d)| *d < rho - TIE);
            if closer.is_empty() {
                if !poly.is_closed() {
                    return Err(Error::Internal("open sample domain with no closer orbit point".into()));
                }
                let low = ties.iter().map(|(_, d)| *d).fold(rho, f64::min);
                let faces = poly.labels().iter().map(|l| elems[l.expect("closed")]).collect();
                return Ok(SampleDomain { value: rho, low: Some(low), faces });
            }
            for (h, _) in closer {
                cut(&mut poly, &mut elems, &to_x, kp * h * k_inv)?;
            }
        }
        if !poly.is_closed() {
            return Err(Error::DomainNotClosed("sample domain did not close".into()));
        }
        let faces = poly.labels().iter().map(|l| elems[l.expect("closed")]).collect();
        Ok(SampleDomain { value: poly.circumradius_from(&ORIGIN), low: None, faces })
    }

    /// Tiles `h` with `h·q` strictly within `radius` of `v`, for `q` and
    /// `v` in the domain.
    fn tiles_near(&self, q: &Vec3, v: &Vec3, radius: f64) -> Result<Vec<Isometry>> {
        let tiles = self.dom.tile_bfs(
            |h| self.dom.frame_distance(&h.inverse().act(v)) <= radius,
            self.cap,
            Exec::Sequential,
        )?;
        Ok(tiles
            .mats
            .into_iter()
            .filter(|h| minkowski::distance(&h.act(q), v) < radius)
            .collect())
    }
}
