//! Systole and short length spectrum of a surface group.
//!
//! Every closed geodesic of length `ℓ` lifts to an axis meeting the
//! Dirichlet domain, and the corresponding element moves the domain
//! center by at most `ℓ + 2·r_dom`. Enumerating the group ball of that
//! radius therefore sees every geodesic up to length `ℓ`.

use serde::{Deserialize, Serialize};

use crate::dirichlet::{orbit_point, PointIndex};
use crate::error::{Error, Result};
use crate::fuchsian::{enumerate_ball_with, BallElement, BallOptions, SurfaceModel, Word};
use crate::hplane::Isometry;
use crate::hyptrig::{bavard_bounds, jenni_sys_upper};
use crate::minkowski::{self, Vec3};
use crate::tol;

/// Which a-priori bound fixed the enumeration radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSource {
    User,
    Jenni,
    Bavard,
    /// A known element of the group: a side pairing or gluing curve.
    KnownElement,
}

/// Why the enumeration radius is enough.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SysCertificate {
    /// Circumradius of the Dirichlet domain at the basepoint.
    pub r_dom: f64,
    /// A-priori upper bound on the systole.
    pub l0: f64,
    pub l0_source: BoundSource,
    pub ball_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SysResult {
    pub length: f64,
    pub word: Word,
    pub element: Isometry,
    /// Displacement radius of the enumerated ball.
    pub certified_radius: f64,
    pub certificate: SysCertificate,
}

#[derive(Debug, Clone, Copy)]
pub struct SystoleOptions {
    /// Extra upper bound on the systole, used if smaller than the built-in ones.
    pub upper_bound: Option<f64>,
    /// Multiplier (at least 1) on the `2·r_dom` part of the radius.
    pub radius_slack: f64,
    pub ball: BallOptions,
}

impl Default for SystoleOptions {
    fn default() -> Self {
        SystoleOptions { upper_bound: None, radius_slack: 1.0, ball: BallOptions::default() }
    }
}

/// Smallest available a-priori systole bound and where it came from.
pub fn systole_upper_bound(s: &SurfaceModel, user: Option<f64>) -> Result<(f64, BoundSource)> {
    let mut best = (bavard_bounds(s.genus())?.sys_upper, BoundSource::Bavard);
    let mut offer = |l: f64, src| {
        if l < best.0 {
            best = (l, src);
        }
    };
    if s.genus() == 2 {
        offer(jenni_sys_upper(), BoundSource::Jenni);
    }
    if let Ok(dom) = s.domain() {
        for f in dom.faces() {
            offer(f.pairing.raw_translation_length(), BoundSource::KnownElement);
        }
    }
    for (_, l) in s.gluing_curves() {
        offer(*l, BoundSource::KnownElement);
    }
    if let Some(u) = user {
        if !(u > 0.0 && u.is_finite()) {
            return Err(Error::Domain(format!("systole bound must be positive, got {u}")));
        }
        offer(u, BoundSource::User);
    }
    Ok(best)
}

pub fn compute_systole(s: &SurfaceModel) -> Result<SysResult> {
    compute_systole_with(s, &SystoleOptions::default())
}

pub fn compute_systole_with(s: &SurfaceModel, opts: &SystoleOptions) -> Result<SysResult> {
    if !(opts.radius_slack >= 1.0 && opts.radius_slack.is_finite()) {
        return Err(Error::Domain(format!("radius slack must be at least 1, got {}", opts.radius_slack)));
    }
    let dom = s.domain()?;
    let r_dom = dom.circumradius();
    let (l0, l0_source) = systole_upper_bound(s, opts.upper_bound)?;
    let radius = l0 + 2.0 * r_dom * opts.radius_slack;
    let ball = enumerate_ball_with(s, s.center(), radius, &opts.ball)?;

    let lengths = opts.ball.exec.map(&ball.elements, |e| e.element.raw_translation_length());
    let shortest = lengths.iter().copied().fold(f64::INFINITY, f64::min);
    if !shortest.is_finite() {
        return Err(Error::Internal(format!("empty group ball at radius {radius}")));
    }
    // Among (near-)ties prefer the shortest word, then enumeration order.
    let best: &BallElement = ball
        .elements
        .iter()
        .zip(&lengths)
        .filter(|(_, l)| **l <= shortest + 1e-9)
        .map(|(e, _)| e)
        .min_by_key(|e| e.word.len())
        .expect("nonempty");
    let element = best.word.eval(s.generators());
    let length = element.raw_translation_length();
    Ok(SysResult {
        length,
        word: best.word.clone(),
        element,
        certified_radius: radius,
        certificate: SysCertificate { r_dom, l0, l0_source, ball_size: ball.len() },
    })
}

/// Lengths of primitive closed geodesics up to `cutoff`, one entry per
/// length with the number of unoriented free homotopy classes realizing it.
pub fn shortest_spectrum(s: &SurfaceModel, cutoff: f64) -> Result<Vec<(f64, usize)>> {
    shortest_spectrum_with(s, cutoff, &BallOptions::default())
}

pub fn shortest_spectrum_with(s: &SurfaceModel, cutoff: f64, opts: &BallOptions) -> Result<Vec<(f64, usize)>> {
    if !(cutoff > 0.0 && cutoff.is_finite()) {
        return Err(Error::Domain(format!("cutoff must be positive, got {cutoff}")));
    }
    let dom = s.domain()?;
    let r_dom = dom.circumradius();
    let ball = enumerate_ball_with(s, s.center(), cutoff + 2.0 * r_dom, opts)?;
    let frame = dom.frame();
    let verts = dom.frame_vertices();

    // Candidates: elements short enough whose axis meets the domain. Every
    // class has such representatives, and they are linked to one another
    // by conjugation with tiles adjacent to the domain.
    let cand: Vec<(Isometry, f64)> = opts
        .exec
        .map(&ball.elements, |e| {
            let l = e.element.raw_translation_length();
            if l > cutoff + tol::LENGTH_CLUSTER_TOL {
                return None;
            }
            let g = frame.conjugate(&e.element);
            let n = axis_normal(&g)?;
            let (lo, hi) = verts
                .iter()
                .map(|v| minkowski::dot(v, &n))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s), hi.max(s)));
            (lo <= 1e-9 && hi >= -1e-9).then_some((g, l))
        })
        .into_iter()
        .flatten()
        .collect();

    let mut index = PointIndex::new(dom.orbit_tolerance());
    for (g, _) in &cand {
        index.insert(&orbit_point(g));
    }
    let lookup = |m: &Isometry| index.find(&orbit_point(m));
    let neighbours: Vec<Isometry> = ball
        .elements
        .iter()
        .filter(|e| e.displacement <= 2.0 * r_dom + 1e-6)
        .map(|e| frame.conjugate(&e.element))
        .collect();

    let mut uf = UnionFind::new(cand.len());
    let mut primitive = vec![true; cand.len()];
    for (i, (g, l)) in cand.iter().enumerate() {
        if let Some(j) = lookup(&g.inverse()) {
            uf.union(i, j);
        }
        for f in &neighbours {
            if let Some(j) = lookup(&f.inverse().conjugate(g)) {
                uf.union(i, j);
            }
        }
        let mut power = *g;
        for _ in 2..=((cutoff + tol::LENGTH_CLUSTER_TOL) / l).floor() as usize {
            power = power * *g;
            if let Some(j) = lookup(&power) {
                primitive[j] = false;
            }
        }
    }

    let mut classes: Vec<(f64, usize)> = Vec::new();
    let mut seen = vec![false; cand.len()];
    for i in 0..cand.len() {
        let r = uf.find(i);
        if seen[r] {
            continue;
        }
        seen[r] = true;
        if primitive[r] {
            classes.push((cand[r].1, r));
        }
    }
    classes.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, usize)> = Vec::new();
    for (l, _) in classes {
        match out.last_mut() {
            Some((l0, m)) if l - *l0 <= tol::LENGTH_CLUSTER_TOL => *m += 1,
            _ => out.push((l, 1)),
        }
    }
    Ok(out)
}

/// Unit normal of the axis of a hyperbolic element, in hyperboloid coordinates.
pub(crate) fn axis_normal(g: &Isometry) -> Option<Vec3> {
    let (p, q) = g.fixed_points()?;
    let n = minkowski::cross(&p.to_null_vector(), &q.to_null_vector());
    Some(minkowski::normalize_spacelike(&n))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    // The smaller index becomes the root, so roots are deterministic.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::{bolza_surface, surface_from_fn, FNCoords};

    #[test]
    fn bolza_systole_and_certificate() {
        let s = bolza_surface();
        let r = compute_systole(&s).unwrap();
        assert!((r.length - jenni_sys_upper()).abs() < 1e-6);
        assert!(r.certified_radius >= r.certificate.l0 + 2.0 * r.certificate.r_dom);
        assert!((r.word.eval(s.generators()).raw_translation_length() - r.length).abs() <= 1e-12);
    }

    #[test]
    fn bolza_spectrum_has_twelve_systoles() {
        let choice = shortest_spectrum(&bolza_surface(), 3.06).unwrap();
        assert_eq!(choice.len(), 1);
        assert!((choice[0].0 - jenni_sys_upper()).abs() < 1e-9);
        assert_eq!(choice[0].1, 12);
        assert!(shortest_spectrum(&bolza_surface(), 3.0).unwrap().is_empty());
    }

    #[test]
    fn short_gluing_curve_is_the_systole() {
        let s = surface_from_fn(&"0.1,2,2,0,0,0".parse::<FNCoords>().unwrap()).unwrap();
        let r = compute_systole(&s).unwrap();
        assert!((r.length - 0.1).abs() < 1e-8, "{}", r.length);
    }

    #[test]
    fn slack_below_one_is_rejected() {
        let opts = SystoleOptions { radius_slack: 0.5, ..SystoleOptions::default() };
        assert!(matches!(compute_systole_with(&bolza_surface(), &opts), Err(Error::Domain(_))));
    }
}
