//! Closed-form trigonometry of bigons and the systole/diameter bounds built on it.
//!
//! Everything here is a pure function of a few reals. Bounds are given both
//! in cosh scale (as they are naturally stated) and in length scale.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// Which side of the curve the two vertex angles open toward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Same,
    Opposite,
}

impl Side {
    pub fn toggled(self) -> Side {
        match self {
            Side::Same => Side::Opposite,
            Side::Opposite => Side::Same,
        }
    }
}

/// Two arcs of common length `d` meeting at angles `alpha` and `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BigonConfig {
    alpha: f64,
    beta: f64,
    d: f64,
    side: Side,
}

impl BigonConfig {
    /// Accepts any angles in `(0, 2π)`; the narrower `(0, π]` range is
    /// enforced by the operations that need it.
    pub fn new(alpha: f64, beta: f64, d: f64, side: Side) -> Result<Self> {
        for (name, a) in [("alpha", alpha), ("beta", beta)] {
            if !(a > 0.0 && a < 2.0 * PI) {
                return Err(Error::Domain(format!("{name} = {a} outside (0, 2π)")));
            }
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::Domain(format!("arm length d = {d} must be positive")));
        }
        Ok(BigonConfig { alpha, beta, d, side })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn theta(&self) -> f64 {
        0.5 * (self.alpha + self.beta)
    }
}

/// Result of the bigon length formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BigonLength {
    Geodesic(f64),
    /// The free homotopy class holds no closed geodesic (holonomy not hyperbolic).
    NoGeodesic,
}

impl BigonLength {
    pub fn length(&self) -> Option<f64> {
        match self {
            BigonLength::Geodesic(l) => Some(*l),
            BigonLength::NoGeodesic => None,
        }
    }
}

fn bigon_rhs(alpha: f64, beta: f64, d: f64, side: Side) -> f64 {
    let (ca, sa) = ((0.5 * alpha).cos(), (0.5 * alpha).sin());
    let (cb, sb) = ((0.5 * beta).cos(), (0.5 * beta).sin());
    let sign = match side {
        Side::Same => -1.0,
        Side::Opposite => 1.0,
    };
    sign * ca * cb + sa * sb * d.cosh()
}

/// `cosh(L/2)` for the closed curve of the configuration. Angles must lie in `(0, π]`.
pub fn bigon_cosh_half(cfg: &BigonConfig) -> Result<f64> {
    for (name, a) in [("alpha", cfg.alpha), ("beta", cfg.beta)] {
        if a > PI {
            return Err(Error::Domain(format!("{name} = {a} exceeds π")));
        }
    }
    Ok(bigon_rhs(cfg.alpha, cfg.beta, cfg.d, cfg.side))
}

/// Length of the closed geodesic homotopic to the bigon, if there is one.
///
/// The threshold matches the trace band used to classify isometries, so
/// this agrees with the holonomy classification on the nose.
pub fn bigon_geodesic_length(cfg: &BigonConfig) -> Result<BigonLength> {
    let rhs = bigon_cosh_half(cfg)?;
    if rhs > 1.0 + 0.5 * tol::TRACE_BAND {
        Ok(BigonLength::Geodesic(2.0 * rhs.acosh()))
    } else {
        Ok(BigonLength::NoGeodesic)
    }
}

fn check_theta_d(theta: f64, d: f64) -> Result<()> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::Domain(format!("theta = {theta} outside (0, π)")));
    }
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::Domain(format!("d = {d} must be positive")));
    }
    Ok(())
}

/// Upper bound on `cosh(L/2)` over all configurations with half angle sum `theta`.
pub fn extremal_bound(theta: f64, d: f64, side: Side) -> Result<f64> {
    check_theta_d(theta, d)?;
    let (c2, s2) = ((0.5 * theta).cos().powi(2), (0.5 * theta).sin().powi(2));
    Ok(match side {
        Side::Same => -c2 + s2 * d.cosh(),
        Side::Opposite => c2 + s2 * d.cosh(),
    })
}

/// Brings an arbitrary pair of angles with `alpha + beta < 2π` into
/// `(0, π]`: an angle above `π` is replaced by its complement and the side
/// flips. Returns `(alpha, beta, side)` with `alpha <= beta`.
pub fn fold_angles(alpha: f64, beta: f64, side: Side) -> Result<(f64, f64, Side)> {
    let (mut a, mut b) = if alpha <= beta { (alpha, beta) } else { (beta, alpha) };
    if !(a > 0.0 && b < 2.0 * PI && a + b < 2.0 * PI) {
        return Err(Error::Domain(format!(
            "angles ({alpha}, {beta}) need 0 < α, β and α + β < 2π"
        )));
    }
    let mut s = side;
    if b > PI {
        b = 2.0 * PI - b;
        s = s.toggled();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
    }
    Ok((a, b, s))
}

/// Actual `cosh(L/2)` of a configuration with possibly one reflex angle.
pub fn folded_cosh_half(alpha: f64, beta: f64, d: f64, side: Side) -> Result<f64> {
    let (a, b, s) = fold_angles(alpha, beta, side)?;
    bigon_cosh_half(&BigonConfig::new(a, b, d, s)?)
}

/// `f(x) = −cos(x)cos(θ−x) + sin(x)sin(θ−x)cosh(d)`, increasing on `[0, θ/2]`.
pub fn monotone_f(x: f64, theta: f64, d: f64) -> Result<f64> {
    check_theta_d(theta, d)?;
    if !(x >= 0.0 && x <= 0.5 * theta) {
        return Err(Error::Domain(format!("x = {x} outside [0, θ/2]")));
    }
    Ok(-x.cos() * (theta - x).cos() + x.sin() * (theta - x).sin() * d.cosh())
}

/// `3cosh(diam) − 1 − 4cosh(sys/2)`; non-negative on every closed surface.
pub fn main_inequality_slack(sys: f64, diam: f64) -> f64 {
    3.0 * diam.cosh() - 1.0 - 4.0 * (0.5 * sys).cosh()
}

/// `3cosh(diam) + 1 − 4cosh(sys/2)`.
pub fn weak_inequality_slack(sys: f64, diam: f64) -> f64 {
    3.0 * diam.cosh() + 1.0 - 4.0 * (0.5 * sys).cosh()
}

/// `3cosh²(diam) + 1 − 4cosh²(sys/2)`, the consequence of Bavard's two bounds.
pub fn combined_bavard_slack(sys: f64, diam: f64) -> f64 {
    3.0 * diam.cosh().powi(2) + 1.0 - 4.0 * (0.5 * sys).cosh().powi(2)
}

/// `(3/4)cosh(diam) − 1/4 − cosh(sys/2)`.
pub fn pants_case_slack(sys: f64, diam: f64) -> f64 {
    0.75 * diam.cosh() - 0.25 - (0.5 * sys).cosh()
}

/// `(1/2)cosh(diam) + 1/2 − cosh(sys/2)`.
pub fn torus_case_slack(sys: f64, diam: f64) -> f64 {
    0.5 * diam.cosh() + 0.5 - (0.5 * sys).cosh()
}

/// `cosh(diam)` at which the torus and pants slacks coincide for the given
/// systole, located by bisection. Below it the torus case is the stronger one.
pub fn torus_pants_crossover(sys: f64) -> f64 {
    let gap = |diam: f64| torus_case_slack(sys, diam) - pants_case_slack(sys, diam);
    let (mut lo, mut hi) = (0.0f64, 10.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).cosh()
}

fn check_genus(genus: u64, min: u64) -> Result<f64> {
    if genus < min {
        return Err(Error::InvalidGenus(genus));
    }
    Ok(genus as f64)
}

fn bavard_angle(g: f64) -> f64 {
    PI / (12.0 * g - 6.0)
}

/// Bavard's genus-`g` bounds in both scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BavardBounds {
    pub diam_lower_cosh: f64,
    pub diam_lower: f64,
    pub sys_upper_cosh: f64,
    pub sys_upper: f64,
}

/// Bavard's lower bound on diameter and upper bound on systole.
///
/// `sys_upper_cosh` bounds `cosh(sys/2)`; `sys_upper` is a length.
pub fn bavard_bounds(genus: u64) -> Result<BavardBounds> {
    let x = bavard_angle(check_genus(genus, 2)?);
    let diam_lower_cosh = 1.0 / (3f64.sqrt() * x.tan());
    let sys_upper_cosh = 1.0 / (2.0 * x.sin());
    Ok(BavardBounds {
        diam_lower_cosh,
        diam_lower: diam_lower_cosh.acosh(),
        sys_upper_cosh,
        sys_upper: 2.0 * sys_upper_cosh.acosh(),
    })
}

/// Upper bound on `sys/diam` in genus `g`, always below 2.
pub fn ratio_upper_bound(genus: u64) -> Result<f64> {
    let s = bavard_angle(check_genus(genus, 2)?).sin();
    Ok(2.0 * (1.0 / (2.0 * s)).acosh() / (2.0 / (3.0 * s) + 1.0 / 3.0).acosh())
}

/// Maximal genus-2 systole, `2·arccosh(1+√2)`.
pub fn jenni_sys_upper() -> f64 {
    2.0 * (1.0 + SQRT_2).acosh()
}

/// Genus-2 ratio bound from Jenni's systole bound; below 8/5.
pub fn genus2_ratio_bound() -> f64 {
    jenni_sys_upper() / ((5.0 + 4.0 * SQRT_2) / 3.0).acosh()
}

/// Constant that the large-genus expansion of [`ratio_upper_bound`] converges to.
pub fn asymptotic_constant() -> f64 {
    (4.0f64 / 3.0).ln()
}

/// `2(1 − c/log g)`.
pub fn asymptotic_ratio_model(genus: u64, constant: f64) -> Result<f64> {
    let g = check_genus(genus, 3)?;
    Ok(2.0 * (1.0 - constant / g.ln()))
}

/// The constant `c` for which the model matches the exact bound at `genus`.
pub fn fitted_asymptotic_constant(genus: u64) -> Result<f64> {
    let g = check_genus(genus, 2)?;
    Ok((2.0 - ratio_upper_bound(genus)?) * g.ln() / 2.0)
}

/// All genus-level bounds in one record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub genus: u64,
    pub bavard_diam_lower_cosh: f64,
    pub bavard_diam_lower: f64,
    pub bavard_sys_upper_cosh: f64,
    pub bavard_sys_upper: f64,
    pub ratio_upper: f64,
    pub fitted_constant: f64,
    /// Model value with the limiting constant; only defined from genus 3.
    pub asymptotic_ratio_model: Option<f64>,
    pub jenni_sys_upper: Option<f64>,
}

impl BoundsReport {
    pub fn new(genus: u64) -> Result<Self> {
        let b = bavard_bounds(genus)?;
        Ok(BoundsReport {
            genus,
            bavard_diam_lower_cosh: b.diam_lower_cosh,
            bavard_diam_lower: b.diam_lower,
            bavard_sys_upper_cosh: b.sys_upper_cosh,
            bavard_sys_upper: b.sys_upper,
            ratio_upper: ratio_upper_bound(genus)?,
            fitted_constant: fitted_asymptotic_constant(genus)?,
            asymptotic_ratio_model: if genus >= 3 {
                Some(asymptotic_ratio_model(genus, asymptotic_constant())?)
            } else {
                None
            },
            jenni_sys_upper: (genus == 2).then(jenni_sys_upper),
        })
    }

    /// Smallest known upper bound on the systole (length scale).
    pub fn sys_upper(&self) -> f64 {
        self.jenni_sys_upper
            .map_or(self.bavard_sys_upper, |j| j.min(self.bavard_sys_upper))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(a: f64, b: f64, d: f64, s: Side) -> BigonConfig {
        BigonConfig::new(a, b, d, s).unwrap()
    }

    #[test]
    fn bigon_length_examples() {
        let l = bigon_geodesic_length(&cfg(PI, PI, 1.0, Side::Same)).unwrap();
        assert!((l.length().unwrap() - 2.0).abs() < 1e-12);
        for d in [0.3, 2.0, 4.5] {
            let c = bigon_cosh_half(&cfg(PI / 2.0, PI / 2.0, d, Side::Opposite)).unwrap();
            assert!((c - (0.5 + 0.5 * d.cosh())).abs() < 1e-12);
        }
        let c = bigon_cosh_half(&cfg(2.0 * PI / 3.0, 2.0 * PI / 3.0, 2.0, Side::Same)).unwrap();
        assert!((c - (-0.25 + 0.75 * 2f64.cosh())).abs() < 1e-12);
        let r = bigon_geodesic_length(&cfg(PI / 2.0, PI / 2.0, 0.5, Side::Same)).unwrap();
        assert_eq!(r, BigonLength::NoGeodesic);
    }

    #[test]
    fn bigon_domain_errors() {
        assert!(BigonConfig::new(0.0, 1.0, 1.0, Side::Same).is_err());
        assert!(BigonConfig::new(1.0, 1.0, 0.0, Side::Same).is_err());
        assert!(bigon_geodesic_length(&cfg(4.0, 1.0, 1.0, Side::Same)).is_err());
    }

    #[test]
    fn extremal_examples() {
        for d in [0.5, 1.0, 3.0] {
            let s = extremal_bound(2.0 * PI / 3.0, d, Side::Same).unwrap();
            assert!((s - (-0.25 + 0.75 * d.cosh())).abs() < 1e-12);
            let o = extremal_bound(PI / 2.0, d, Side::Opposite).unwrap();
            assert!((o - (0.5 + 0.5 * d.cosh())).abs() < 1e-12);
            let near = extremal_bound(PI - 1e-9, d, Side::Same).unwrap();
            assert!((near - d.cosh()).abs() < 1e-8);
        }
        assert!(extremal_bound(PI, 1.0, Side::Same).is_err());
    }

    #[test]
    fn monotone_f_endpoints() {
        let (t, d) = (1.9, 1.3);
        assert!((monotone_f(0.0, t, d).unwrap() + t.cos()).abs() < 1e-15);
        let end = monotone_f(t / 2.0, t, d).unwrap();
        assert!((end - extremal_bound(t, d, Side::Same).unwrap()).abs() < 1e-14);
        assert!(monotone_f(t, t, d).is_err());
    }

    #[test]
    fn folding_reflex_angle() {
        let (a, b, s) = fold_angles(1.0, 4.0, Side::Same).unwrap();
        assert_eq!(s, Side::Opposite);
        assert!((a - 1.0).abs() < 1e-15 && (b - (2.0 * PI - 4.0)).abs() < 1e-15);
        assert!(fold_angles(3.0, 3.5, Side::Same).is_err());
        // The folded opposite-side value equals the same-side formula at the
        // original angles.
        let c = folded_cosh_half(1.0, 4.0, 2.0, Side::Same).unwrap();
        assert!((c - bigon_rhs(1.0, 4.0, 2.0, Side::Same)).abs() < 1e-12);
    }

    #[test]
    fn main_slack_examples() {
        let s = jenni_sys_upper();
        let d = ((5.0 + 4.0 * SQRT_2) / 3.0).acosh();
        assert!(main_inequality_slack(s, d).abs() < 1e-12);
        assert!((weak_inequality_slack(s, d) - 2.0).abs() < 1e-12);
        let d = 2.2;
        assert!((main_inequality_slack(1e-12, d) - (3.0 * d.cosh() - 5.0)).abs() < 1e-12);
        assert!(main_inequality_slack(3.0571, 2.2) > 0.0);
        assert!(combined_bavard_slack(s, 2.448452) > 0.0);
        assert!(torus_case_slack(s, 2.448452) > 0.0);
    }

    #[test]
    fn crossover_is_at_cosh_three() {
        for sys in [0.1, 1.0, 3.0] {
            assert!((torus_pants_crossover(sys) - 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn genus_two_constants() {
        let b = bavard_bounds(2).unwrap();
        assert!((b.diam_lower_cosh - 3.274316).abs() < 1e-6);
        assert!((b.diam_lower - 1.855077).abs() < 1e-6);
        assert!((b.sys_upper - 3.438214).abs() < 1e-6);
        assert!((ratio_upper_bound(2).unwrap() - 1.631816).abs() < 1e-6);
        let g2 = genus2_ratio_bound();
        assert!(g2 < 1.6 && (g2 - 1.575594).abs() < 1e-6);
        assert!(g2 < ratio_upper_bound(2).unwrap());
        assert!(matches!(bavard_bounds(1), Err(Error::InvalidGenus(1))));
    }

    #[test]
    fn bounds_increase_with_genus() {
        let mut prev = bavard_bounds(2).unwrap();
        let mut prev_ratio = ratio_upper_bound(2).unwrap();
        for g in 3..200 {
            let b = bavard_bounds(g).unwrap();
            assert!(b.diam_lower_cosh > prev.diam_lower_cosh);
            assert!(b.sys_upper_cosh > prev.sys_upper_cosh);
            let r = ratio_upper_bound(g).unwrap();
            assert!(r > prev_ratio && r < 2.0);
            prev = b;
            prev_ratio = r;
        }
    }

    #[test]
    fn asymptotic_model_examples() {
        let g = 1_000_000u64;
        let c = (16.0 / PI).ln();
        let m = asymptotic_ratio_model(g, c).unwrap();
        assert!((m - 2.0 * (1.0 - 1.6279 / 13.8155)).abs() < 1e-4);
        assert_eq!(asymptotic_ratio_model(g, 0.0).unwrap(), 2.0);
        assert!(asymptotic_ratio_model(2, 0.0).is_err());
        let fits: Vec<f64> = [1_000u64, 10_000, 100_000, 1_000_000]
            .iter()
            .map(|&g| fitted_asymptotic_constant(g).unwrap())
            .collect();
        let expect = [0.23293, 0.24449, 0.25205, 0.25736];
        for (f, e) in fits.iter().zip(expect) {
            assert!((f - e).abs() < 1e-5, "{f} vs {e}");
        }
    }

    #[test]
    fn report_fields() {
        let r = BoundsReport::new(2).unwrap();
        assert!(r.jenni_sys_upper.is_some() && r.asymptotic_ratio_model.is_none());
        assert!((r.sys_upper() - jenni_sys_upper()).abs() < 1e-15);
        let r = BoundsReport::new(5).unwrap();
        assert!(r.jenni_sys_upper.is_none() && r.asymptotic_ratio_model.is_some());
        assert!(r.bavard_diam_lower_cosh > 3.0 && r.ratio_upper < 2.0);
    }
}
