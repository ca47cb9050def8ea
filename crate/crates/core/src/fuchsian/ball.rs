use serde::{Deserialize, Serialize};

use super::{SurfaceModel, Word};
use crate::dirichlet::{orbit_point, PointIndex};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hplane::{Isometry, UhpPoint};
use crate::minkowski::{self, ORIGIN};
use crate::tol;

/// An element of a group ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallElement {
    pub element: Isometry,
    pub word: Word,
    /// Distance from the basepoint to its image.
    pub displacement: f64,
}

/// All non-identity group elements moving the basepoint at most `radius`,
/// sorted by displacement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupBall {
    pub elements: Vec<BallElement>,
    pub radius: f64,
    pub basepoint: UhpPoint,
}

impl GroupBall {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &Isometry, tol: f64) -> bool {
        self.elements.iter().any(|e| e.element.approx_eq(g, tol))
    }
}

/// Knobs for [`enumerate_ball_with`].
#[derive(Debug, Clone, Copy)]
pub struct BallOptions {
    /// Maximum number of tiles visited before giving up.
    pub cap: usize,
    pub exec: Exec,
    /// Re-run the search with an independent pruning rule and require the
    /// same result.
    pub verify: bool,
}

impl Default for BallOptions {
    fn default() -> Self {
        BallOptions { cap: tol::DEFAULT_ELEMENT_CAP, exec: Exec::default(), verify: true }
    }
}

/// Every group element `g ≠ id` with `d(basepoint, g·basepoint) <= radius`.
pub fn enumerate_ball(s: &SurfaceModel, basepoint: UhpPoint, radius: f64) -> Result<GroupBall> {
    enumerate_ball_with(s, basepoint, radius, &BallOptions::default())
}

/// [`enumerate_ball`] with explicit options.
///
/// The search walks the tiling by copies `h·D` of the Dirichlet domain
/// through its side pairings. With the basepoint moved into `D`, an element
/// `h` can only qualify if `h·D` meets the ball, and the tiles meeting a
/// ball form a connected set, so pruning tiles that certainly miss the ball
/// loses nothing. Two sound prunes are available: the exact distance from
/// the basepoint to `h·D`, and the distance to `h·center` minus the
/// circumradius. The first drives the search; the second is the optional
/// cross-check.
pub fn enumerate_ball_with(
    s: &SurfaceModel,
    basepoint: UhpPoint,
    radius: f64,
    opts: &BallOptions,
) -> Result<GroupBall> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Domain(format!("ball radius must be positive, got {radius}")));
    }
    let dom = s.domain()?;
    let (q, reduction) = dom.reduce(&dom.to_frame(basepoint))?;
    let (k, k_word) = dom.face_product(&reduction);

    let primary = |h: &Isometry| dom.frame_distance(&h.inverse().act(&q)) <= radius + tol::RADIUS_EPS;
    let tiles = dom.tile_bfs(primary, opts.cap, opts.exec)?;
    let accept = |h: &Isometry| {
        let d = minkowski::distance(&q, &h.act(&q));
        (d <= radius + tol::RADIUS_EPS).then_some(d)
    };
    let hits: Vec<(usize, f64)> = opts
        .exec
        .map_range(tiles.mats.len(), |i| (i, accept(&tiles.mats[i])))
        .into_iter()
        .skip(1)
        .filter_map(|(i, d)| d.map(|d| (i, d)))
        .collect();

    if opts.verify {
        let reach = radius + dom.circumradius() + tol::RADIUS_EPS;
        let check = dom.tile_bfs(|h| minkowski::distance(&q, &h.act(&ORIGIN)) <= reach, opts.cap, opts.exec)?;
        let mut index = PointIndex::new(dom.orbit_tolerance());
        for &(i, _) in &hits {
            index.insert(&orbit_point(&tiles.mats[i]));
        }
        let mut matched = 0usize;
        for h in check.mats.iter().skip(1) {
            if accept(h).is_some() {
                if index.find(&orbit_point(h)).is_none() {
                    return Err(Error::Internal(format!(
                        "ball enumeration passes disagree at radius {radius}"
                    )));
                }
                matched += 1;
            }
        }
        if matched != hits.len() {
            return Err(Error::Internal(format!("ball enumeration passes disagree at radius {radius}")));
        }
    }

    let frame_inv = dom.frame().inverse();
    let k_inv = k.inverse();
    let k_word_inv = k_word.inverse();
    let mut elements: Vec<BallElement> = hits
        .into_iter()
        .map(|(i, d)| {
            let (_, h_word) = dom.face_product(&tiles.faces_of(i));
            let g = k * tiles.mats[i] * k_inv;
            BallElement {
                element: frame_inv.conjugate(&g),
                word: k_word.concat(&h_word).concat(&k_word_inv),
                displacement: d,
            }
        })
        .collect();
    elements.sort_by(|a, b| a.displacement.total_cmp(&b.displacement));
    Ok(GroupBall { elements, radius, basepoint })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::bolza_surface;
    use crate::hyptrig::jenni_sys_upper;

    #[test]
    fn bolza_side_pairings_at_their_radius() {
        let s = bolza_surface();
        let r = s.generators()[0].displacement(s.center());
        let ball = enumerate_ball(&s, s.center(), r).unwrap();
        assert_eq!(ball.len(), 8);
        for e in &ball.elements {
            assert!((e.displacement - jenni_sys_upper()).abs() < 1e-9);
            assert!(e.word.eval(s.generators()).approx_eq(&e.element, 1e-9));
        }
        assert!(enumerate_ball(&s, s.center(), 0.9 * r).unwrap().is_empty());
    }

    #[test]
    fn cap_is_reported() {
        let s = bolza_surface();
        let opts = BallOptions { cap: 10, ..BallOptions::default() };
        assert!(matches!(
            enumerate_ball_with(&s, s.center(), 8.0, &opts),
            Err(Error::ElementCap { cap: 10 })
        ));
    }
}
