//! Reflection geometry at a single mirror point.
//!
//! Circle sizes are carried as signed reciprocal diameters `u = 1/d`, measured
//! along the sample's left normal: `u > 0` puts the tangent circle on the side
//! of `normal`, `u < 0` on the other side, and `u = 0` is the degenerate circle
//! (a straight line, i.e. a point at infinity). In this form the mirror
//! equation reads `u1 + u2 = 2κ` with signed κ.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{CurveSample, KAPPA_FLOOR};
use crate::numeric::normalize_angle;
use crate::vec2::Vec2;

/// |u2| below this is a focus at infinity.
pub const U_FLOOR: f64 = 1e-10;

/// Relative band used to decide that a radiant sits on a named circle.
const ON_CIRCLE_REL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub kappa_floor: f64,
    pub u_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            kappa_floor: KAPPA_FLOOR,
            u_floor: U_FLOOR,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OpticsError {
    #[error("degenerate source: radiant coincides with the mirror point at t = {t}")]
    DegenerateSource { t: f64 },
    #[error("flat sample at t = {t} (curvature {kappa:e})")]
    Flat { t: f64, kappa: f64 },
}

/// A light source: a point of the plane or a direction at infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Radiant {
    Finite(Vec2),
    /// `theta_src` is the direction from the mirror toward the source, in
    /// `[0, 2π)`; incident light travels along `theta_src + π`.
    AtInfinity { theta_src: f64 },
}

impl Radiant {
    pub fn finite(x: f64, y: f64) -> Self {
        Radiant::Finite(Vec2::new(x, y))
    }

    pub fn at_infinity(theta_src: f64) -> Self {
        Radiant::AtInfinity {
            theta_src: normalize_angle(theta_src),
        }
    }

    pub fn at_infinity_degrees(degrees: f64) -> Self {
        Self::at_infinity(degrees.to_radians())
    }

    pub fn is_at_infinity(&self) -> bool {
        matches!(self, Radiant::AtInfinity { .. })
    }
}

/// Incident and reflected ray at a mirror point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RayGeometry {
    /// Signed angle from the sample normal to the toward-source direction.
    pub phi: f64,
    /// Direction angle of P→S (the source direction at infinity).
    pub sigma1: f64,
    /// ‖PS‖, absent at infinity.
    pub distance: Option<f64>,
    /// Signed reciprocal diameter of the tangent circle through the radiant.
    pub u1: f64,
    pub toward_source: Vec2,
    pub incident_dir: Vec2,
    pub reflected_dir: Vec2,
}

impl RayGeometry {
    pub fn cos_phi(&self) -> f64 {
        self.phi.cos()
    }
}

pub fn ray_geometry(sample: &CurveSample, radiant: &Radiant) -> Result<RayGeometry, OpticsError> {
    let n = sample.normal;
    let (w, distance, u1) = match *radiant {
        Radiant::Finite(src) => {
            let c = src - sample.pos;
            let d = c.norm();
            if !(d > 1e-12 * (1.0 + sample.pos.norm())) {
                return Err(OpticsError::DegenerateSource { t: sample.t });
            }
            (c / d, Some(d), c.dot(n) / (d * d))
        }
        Radiant::AtInfinity { theta_src } => (Vec2::from_angle(theta_src), None, 0.0),
    };
    let incident = -w;
    let reflected = incident - n * (2.0 * incident.dot(n));
    Ok(RayGeometry {
        phi: n.cross(w).atan2(n.dot(w)),
        sigma1: w.angle(),
        distance,
        u1,
        toward_source: w,
        incident_dir: incident,
        reflected_dir: reflected,
    })
}

/// Mirror equation in reciprocal form: `u1 + u2 = 2κ`.
#[inline]
pub fn mirror_focus(u1: f64, kappa: f64) -> f64 {
    2.0 * kappa - u1
}

/// The tangent circle containing the focus of reflected light.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FocalCircle {
    pub contact: Vec2,
    pub u1: f64,
    pub u2: f64,
    /// Signed radius `1/(2 u2)` along the normal; `None` for a focus at infinity.
    pub radius: Option<f64>,
    pub center: Option<Vec2>,
    /// Signed distance from the mirror point to the focus along the reflected ray.
    pub focal_distance: Option<f64>,
    /// Chord angle, filled in by the envelope engine.
    pub delta: Option<f64>,
    /// dR/ds, filled in by the envelope engine.
    pub radius_s: Option<f64>,
}

fn require_curved(sample: &CurveSample, tol: &Tolerances) -> Result<(), OpticsError> {
    if sample.kappa.abs() < tol.kappa_floor {
        Err(OpticsError::Flat {
            t: sample.t,
            kappa: sample.kappa,
        })
    } else {
        Ok(())
    }
}

pub fn focal_circle(
    sample: &CurveSample,
    radiant: &Radiant,
    tol: &Tolerances,
) -> Result<FocalCircle, OpticsError> {
    require_curved(sample, tol)?;
    let ray = ray_geometry(sample, radiant)?;
    Ok(focal_circle_from_ray(sample, &ray, tol))
}

pub(crate) fn focal_circle_from_ray(
    sample: &CurveSample,
    ray: &RayGeometry,
    tol: &Tolerances,
) -> FocalCircle {
    let u2 = mirror_focus(ray.u1, sample.kappa);
    let finite = u2.abs() >= tol.u_floor;
    let radius = finite.then(|| 0.5 / u2);
    FocalCircle {
        contact: sample.pos,
        u1: ray.u1,
        u2,
        radius,
        center: radius.map(|r| sample.pos + sample.normal * r),
        focal_distance: finite.then(|| ray.toward_source.dot(sample.normal) / u2),
        delta: None,
        radius_s: None,
    }
}

/// A circle with unsigned radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Circle {
    pub center: Vec2,
    pub radius: f64,
}

impl Circle {
    pub fn diameter(&self) -> f64 {
        2.0 * self.radius
    }

    pub fn contains_on_boundary(&self, p: Vec2, tol: f64) -> bool {
        (p.distance(self.center) - self.radius).abs() <= tol
    }
}

/// Tangent circle of diameter r/2 on the concave side.
pub fn discriminant_circle(sample: &CurveSample, tol: &Tolerances) -> Result<Circle, OpticsError> {
    require_curved(sample, tol)?;
    let signed_radius = 0.25 / sample.kappa;
    Ok(Circle {
        center: sample.pos + sample.normal * signed_radius,
        radius: signed_radius.abs(),
    })
}

/// Where the radiant sits relative to the circles of curvature `C_r` and
/// discrimination `C_{r/2}` at a mirror point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiantClass {
    /// Concave side, outside `C_r`.
    OutsideCr,
    OnCr,
    /// Inside `C_r` but outside the discriminant circle.
    BetweenCrAndDiscriminant,
    AtInfinity,
    /// On the tangent line (a finite point with `u1 = 0`).
    OnTangentLine,
    OnDiscriminant,
    InsideDiscriminant,
    ConvexSide,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FocusClass {
    InsideCr,
    OnCr,
    /// Concave side, outside `C_r`.
    OutsideCr,
    OnDiscriminant,
    AtInfinity,
    /// Reflected rays diverge; the focus is on the convex side.
    VirtualConvexSide,
    InsideDiscriminant,
}

impl RadiantClass {
    pub fn focus(self) -> FocusClass {
        match self {
            RadiantClass::OutsideCr => FocusClass::InsideCr,
            RadiantClass::OnCr => FocusClass::OnCr,
            RadiantClass::BetweenCrAndDiscriminant => FocusClass::OutsideCr,
            RadiantClass::AtInfinity | RadiantClass::OnTangentLine => FocusClass::OnDiscriminant,
            RadiantClass::OnDiscriminant => FocusClass::AtInfinity,
            RadiantClass::InsideDiscriminant => FocusClass::VirtualConvexSide,
            RadiantClass::ConvexSide => FocusClass::InsideDiscriminant,
        }
    }
}

/// Classify a radiant at a mirror point.
///
/// With `q = u1/κ` (orientation-free), `C_r` is `q = 1` and the discriminant
/// circle is `q = 2`; the focus has `u2/κ = 2 − q`.
pub fn classify_radiant(
    sample: &CurveSample,
    radiant: &Radiant,
    tol: &Tolerances,
) -> Result<RadiantClass, OpticsError> {
    require_curved(sample, tol)?;
    if radiant.is_at_infinity() {
        return Ok(RadiantClass::AtInfinity);
    }
    let ray = ray_geometry(sample, radiant)?;
    Ok(classify_ratio(ray.u1 / sample.kappa))
}

fn classify_ratio(q: f64) -> RadiantClass {
    let near = |target: f64| (q - target).abs() <= ON_CIRCLE_REL * target.abs().max(1.0);
    if near(0.0) {
        RadiantClass::OnTangentLine
    } else if near(1.0) {
        RadiantClass::OnCr
    } else if near(2.0) {
        RadiantClass::OnDiscriminant
    } else if q < 0.0 {
        RadiantClass::ConvexSide
    } else if q < 1.0 {
        RadiantClass::OutsideCr
    } else if q < 2.0 {
        RadiantClass::BetweenCrAndDiscriminant
    } else {
        RadiantClass::InsideDiscriminant
    }
}

/// A caustic point, or the marker for a focus at infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CausticPoint {
    Finite(Vec2),
    AtInfinity,
}

impl CausticPoint {
    pub fn finite(self) -> Option<Vec2> {
        match self {
            CausticPoint::Finite(p) => Some(p),
            CausticPoint::AtInfinity => None,
        }
    }
}

/// Focus of reflected light at the sample: `E = P + D2 · reflected`, with a
/// negative `D2` extending the reflected ray backwards (virtual focus).
pub fn caustic_point(
    sample: &CurveSample,
    radiant: &Radiant,
    tol: &Tolerances,
) -> Result<CausticPoint, OpticsError> {
    require_curved(sample, tol)?;
    let ray = ray_geometry(sample, radiant)?;
    let fc = focal_circle_from_ray(sample, &ray, tol);
    Ok(match fc.focal_distance {
        Some(d2) => CausticPoint::Finite(sample.pos + ray.reflected_dir * d2),
        None => CausticPoint::AtInfinity,
    })
}

/// Angle between two unit vectors folded into `[0, π]`.
pub fn unsigned_angle(a: Vec2, b: Vec2) -> f64 {
    a.cross(b).abs().atan2(a.dot(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::ParametricCurve;
    use std::f64::consts::{FRAC_PI_3, PI, TAU};

    fn circle_at(theta: f64) -> CurveSample {
        ParametricCurve::unit_circle().frenet_sample(theta).unwrap()
    }

    #[test]
    fn radial_ray() {
        let r = ray_geometry(&circle_at(0.0), &Radiant::finite(0.0, 0.0)).unwrap();
        assert!(r.phi.abs() < 1e-15);
        assert!((r.distance.unwrap() - 1.0).abs() < 1e-15);
        assert!((r.u1 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn incidence_angle_for_parallel_light() {
        // cos φ = cos θ for light along +x hitting the unit circle at angle θ
        for &theta in &[0.1, 0.7, 1.3, -0.4, 2.5] {
            let r = ray_geometry(&circle_at(theta), &Radiant::at_infinity(PI)).unwrap();
            assert!((r.phi.cos() - theta.cos()).abs() < 1e-14);
            let folded = crate::numeric::wrap_angle(theta).abs();
            assert!((r.phi.abs() - folded).abs() < 1e-12, "{theta}: {}", r.phi);
        }
    }

    #[test]
    fn rim_radiant_circle_has_diameter_two() {
        let r = ray_geometry(&circle_at(2.0 * FRAC_PI_3), &Radiant::finite(1.0, 0.0)).unwrap();
        assert!((1.0 / r.u1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn coincident_radiant_is_degenerate() {
        let err = ray_geometry(&circle_at(0.0), &Radiant::finite(1.0, 0.0)).unwrap_err();
        assert!(matches!(err, OpticsError::DegenerateSource { .. }));
    }

    #[test]
    fn mirror_focus_examples() {
        assert!((1.0 / mirror_focus(0.5, 1.0) - 2.0 / 3.0).abs() < 1e-15);
        let k = 0.37;
        assert!((0.5 / mirror_focus(0.0, k) - 1.0 / (4.0 * k)).abs() < 1e-15);
        let d2 = 1.0 / mirror_focus(1.0 / (5.0 * PI / 4.0), 1.0 / PI);
        assert!((d2 - 5.0 * PI / 6.0).abs() < 1e-12);
    }

    #[test]
    fn focal_circle_examples() {
        let tol = Tolerances::default();
        let s = circle_at(0.8);
        let fc = focal_circle(&s, &Radiant::at_infinity(PI), &tol).unwrap();
        assert!((fc.radius.unwrap() - 0.25).abs() < 1e-15);
        let want = Vec2::from_angle(0.8) * 0.75;
        assert!(fc.center.unwrap().distance(want) < 1e-15);

        let fc = focal_circle(&s, &Radiant::finite(1.0, 0.0), &tol).unwrap();
        assert!((fc.radius.unwrap() - 1.0 / 3.0).abs() < 1e-14);

        let p = ParametricCurve::parabola(1.0).frenet_sample(0.0).unwrap();
        let fc = focal_circle(&p, &Radiant::at_infinity(1.0), &tol).unwrap();
        assert!((fc.radius.unwrap() - 0.125).abs() < 1e-15);
        assert!(fc.center.unwrap().distance(Vec2::new(0.0, 0.125)) < 1e-15);
    }

    #[test]
    fn focus_at_infinity_has_no_radius() {
        let tol = Tolerances::default();
        // (1/2, 0) is on the discriminant circle of the unit circle at θ = 0
        let fc = focal_circle(&circle_at(0.0), &Radiant::finite(0.5, 0.0), &tol).unwrap();
        assert!(fc.radius.is_none() && fc.center.is_none());
        let e = caustic_point(&circle_at(0.0), &Radiant::finite(0.5, 0.0), &tol).unwrap();
        assert_eq!(e, CausticPoint::AtInfinity);
    }

    #[test]
    fn discriminant_examples() {
        let tol = Tolerances::default();
        assert!((discriminant_circle(&circle_at(1.0), &tol).unwrap().diameter() - 0.5).abs() < 1e-15);
        let p = ParametricCurve::parabola(1.0).frenet_sample(0.0).unwrap();
        assert!((discriminant_circle(&p, &tol).unwrap().diameter() - 0.25).abs() < 1e-15);
        // curvature 1/π: diameter π/2
        let big = ParametricCurve::circle(PI).frenet_sample(0.3).unwrap();
        assert!((discriminant_circle(&big, &tol).unwrap().diameter() - PI / 2.0).abs() < 1e-13);
        let line = ParametricCurve::expression("t", "0", 0.0, 1.0, false)
            .unwrap()
            .frenet_sample(0.5)
            .unwrap();
        assert!(matches!(discriminant_circle(&line, &tol), Err(OpticsError::Flat { .. })));
    }

    #[test]
    fn classification_examples() {
        let tol = Tolerances::default();
        let s = circle_at(0.0);
        let c = classify_radiant(&s, &Radiant::at_infinity(2.0), &tol).unwrap();
        assert_eq!(c.focus(), FocusClass::OnDiscriminant);
        // C_r has diameter r = 1 and passes through the origin
        let c = classify_radiant(&s, &Radiant::finite(0.0, 0.0), &tol).unwrap();
        assert_eq!(c, RadiantClass::OnCr);
        let r = ray_geometry(&s, &Radiant::finite(0.0, 0.0)).unwrap();
        assert!((1.0 / mirror_focus(r.u1, s.kappa) - 1.0).abs() < 1e-14);
        // inside the discriminant circle
        let c = classify_radiant(&s, &Radiant::finite(0.9, 0.0), &tol).unwrap();
        assert_eq!(c.focus(), FocusClass::VirtualConvexSide);
        let r = ray_geometry(&s, &Radiant::finite(0.9, 0.0)).unwrap();
        assert!(mirror_focus(r.u1, s.kappa) < 0.0);
        let c = classify_radiant(&s, &Radiant::finite(3.0, 0.5), &tol).unwrap();
        assert_eq!(c, RadiantClass::ConvexSide);
        let c = classify_radiant(&s, &Radiant::finite(1.0, 2.0), &tol).unwrap();
        assert_eq!(c, RadiantClass::OnTangentLine);
    }

    #[test]
    fn caustic_point_examples() {
        let tol = Tolerances::default();
        for i in 0..32 {
            let th = i as f64 * TAU / 32.0 + 0.01;
            let e = caustic_point(&circle_at(th), &Radiant::at_infinity(PI), &tol)
                .unwrap()
                .finite()
                .unwrap();
            let want = Vec2::new(
                0.75 * th.cos() - 0.25 * (3.0 * th).cos(),
                0.75 * th.sin() - 0.25 * (3.0 * th).sin(),
            );
            assert!(e.distance(want) < 1e-14);
        }
        let par = ParametricCurve::parabola(1.0);
        for &t in &[-2.0, -0.5, 0.3, 1.7] {
            let s = par.frenet_sample(t).unwrap();
            let e = caustic_point(&s, &Radiant::at_infinity(PI / 2.0), &tol).unwrap();
            assert!(e.finite().unwrap().distance(Vec2::new(0.0, 0.25)) < 1e-13);
            let e = caustic_point(&s, &Radiant::at_infinity(PI), &tol).unwrap();
            let want = Vec2::new(0.5 * (3.0 * t - 4.0 * t * t * t), 3.0 * t * t);
            assert!(e.finite().unwrap().distance(want) < 1e-12);
        }
    }
}
