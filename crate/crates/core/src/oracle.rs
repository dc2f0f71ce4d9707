//! Independent reference computations.
//!
//! Nothing here goes through focal circles: reflected rays are rebuilt from
//! curve derivatives, envelopes come from intersecting neighbouring members of
//! a family, and the closed-form curves are evaluated directly.

use std::f64::consts::{PI, TAU};

use thiserror::Error;

use crate::curve::{CurveError, ParametricCurve};
use crate::numeric::{self, wrap_angle};
use crate::optics::Radiant;
use crate::vec2::Vec2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("no envelope: every pair of neighbouring lines is parallel")]
    NoEnvelope,
    #[error("a family needs at least 3 members, got {0}")]
    TooFewMembers(usize),
    #[error("empty point set")]
    Empty,
    #[error("unknown reference curve kind `{0}`")]
    UnknownKind(String),
    #[error("`{kind}` takes {expected} parameters, got {got}")]
    InvalidParams {
        kind: String,
        expected: usize,
        got: usize,
    },
    #[error("degenerate separation {0:e} between the curves")]
    DegenerateSeparation(f64),
}

/// Step used for neighbouring-member intersections.
pub const FAMILY_STEP: f64 = 1e-3;
/// Agreement between successive step halvings, relative to `1 + |X|²`.
const ADAPTIVE_TOL: f64 = 1e-11;

/// A one-parameter family of lines, `t ↦ (point, unit direction)`.
pub struct LineFamily<'a> {
    pub params: Vec<f64>,
    line: Box<dyn Fn(f64) -> Option<(Vec2, Vec2)> + 'a>,
}

impl<'a> LineFamily<'a> {
    pub fn new(params: Vec<f64>, line: impl Fn(f64) -> Option<(Vec2, Vec2)> + 'a) -> Self {
        LineFamily {
            params,
            line: Box::new(line),
        }
    }

    pub fn line(&self, t: f64) -> Option<(Vec2, Vec2)> {
        (self.line)(t)
    }
}

/// Tangent lines of a curve.
pub fn tangent_line_family<'a>(curve: &'a ParametricCurve, params: Vec<f64>) -> LineFamily<'a> {
    LineFamily::new(params, move |t| {
        let d = curve.evaluate(t, 1).ok()?;
        let n = d[1].norm();
        (n > 0.0).then(|| (d[0], d[1] / n))
    })
}

/// Reflected rays of a mirror, rebuilt from position and velocity only.
pub fn reflected_ray_family<'a>(
    curve: &'a ParametricCurve,
    radiant: Radiant,
    params: Vec<f64>,
) -> LineFamily<'a> {
    LineFamily::new(params, move |t| {
        let d = curve.evaluate(t, 1).ok()?;
        let (p, v) = (d[0], d[1]);
        let speed = v.norm();
        if speed == 0.0 {
            return None;
        }
        let normal = Vec2::new(-v.y, v.x) / speed;
        let incident = match radiant {
            Radiant::AtInfinity { theta_src } => Vec2::new(-theta_src.cos(), -theta_src.sin()),
            Radiant::Finite(src) => {
                let c = p - src;
                let len = c.norm();
                if len == 0.0 {
                    return None;
                }
                c / len
            }
        };
        Some((p, incident - normal * (2.0 * incident.dot(normal))))
    })
}

fn intersect_lines(a: (Vec2, Vec2), b: (Vec2, Vec2)) -> Option<Vec2> {
    let den = a.1.cross(b.1);
    if den.abs() < 1e-14 {
        return None;
    }
    let k = (b.0 - a.0).cross(b.1) / den;
    Some(a.0 + a.1 * k)
}

/// One envelope point per parameter; `None` where neighbouring lines are parallel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvelopePoint {
    pub t: f64,
    pub point: Option<Vec2>,
}

// X(h) = L(t − h) ∩ L(t + h) is even in h, so (4X(h/2) − X(h))/3 is O(h⁴).
fn line_limit(family: &LineFamily, t: f64, h: f64) -> Option<Vec2> {
    let x_h = intersect_lines(family.line(t - h)?, family.line(t + h)?)?;
    let x_h2 = intersect_lines(family.line(t - 0.5 * h)?, family.line(t + 0.5 * h)?)?;
    Some((x_h2 * 4.0 - x_h) / 3.0)
}

/// Halve the step until two successive extrapolations agree.
fn adaptive_line_limit(family: &LineFamily, t: f64, h: f64) -> Option<Vec2> {
    let mut h = h;
    let mut prev = line_limit(family, t, h)?;
    for _ in 0..12 {
        h *= 0.5;
        let Some(next) = line_limit(family, t, h) else { return Some(prev) };
        let settled = next.distance(prev) < ADAPTIVE_TOL * (1.0 + next.norm_squared());
        prev = next;
        if settled {
            break;
        }
    }
    Some(prev)
}

/// Envelope of a line family as the limit of neighbouring intersections,
/// Richardson-extrapolated over the steps `h` and `h/2`, with `h` halved
/// where the result has not settled (near asymptotes).
pub fn envelope_of_lines_with_step(family: &LineFamily, h: f64) -> Result<Vec<EnvelopePoint>, OracleError> {
    if family.params.len() < 3 {
        return Err(OracleError::TooFewMembers(family.params.len()));
    }
    let out: Vec<EnvelopePoint> = family
        .params
        .iter()
        .map(|&t| EnvelopePoint {
            t,
            point: adaptive_line_limit(family, t, h * t.abs().max(1.0)),
        })
        .collect();
    if out.iter().all(|p| p.point.is_none()) {
        return Err(OracleError::NoEnvelope);
    }
    Ok(out)
}

pub fn envelope_of_lines(family: &LineFamily) -> Result<Vec<EnvelopePoint>, OracleError> {
    envelope_of_lines_with_step(family, FAMILY_STEP)
}

fn intersect_circles(c1: Vec2, r1: f64, c2: Vec2, r2: f64) -> Option<(Vec2, Vec2)> {
    let d = c1.distance(c2);
    if d == 0.0 {
        return None;
    }
    let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let h2 = r1 * r1 - a * a;
    if h2 < 0.0 {
        return None;
    }
    let u = (c2 - c1) / d;
    let base = c1 + u * a;
    let off = u.perp() * h2.sqrt();
    Some((base + off, base - off))
}

/// The two limit points of intersections of neighbouring circles in a family
/// `t ↦ (center, radius)`, matched by proximity and Richardson-extrapolated.
pub fn circle_family_limits(
    family: impl Fn(f64) -> Option<(Vec2, f64)>,
    t: f64,
    h: f64,
) -> Option<(Vec2, Vec2)> {
    let (c0, r0) = family(t)?;
    let (c1, r1) = family(t + h)?;
    let (c2, r2) = family(t + 0.5 * h)?;
    let (a1, b1) = intersect_circles(c0, r0.abs(), c1, r1.abs())?;
    let (a2, b2) = intersect_circles(c0, r0.abs(), c2, r2.abs())?;
    let (a2, b2) = if a1.distance(a2) + b1.distance(b2) <= a1.distance(b2) + b1.distance(a2) {
        (a2, b2)
    } else {
        (b2, a2)
    };
    Some((a2 * 2.0 - a1, b2 * 2.0 - b1))
}

/// Closed-form reference curves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ReferenceCurve {
    /// Traced by a circle of radius `roll` rolling outside a circle of radius
    /// `base`: `(base + roll)e^{iθ} − roll·e^{i((base + roll)/roll·θ + phase)}`.
    Epicycloid { base: f64, roll: f64, phase: f64 },
    /// `center + rot(rotation)·scale·(cos³τ, sin³τ)`.
    Astroid { scale: f64, rotation: f64, center: Vec2 },
    /// Epicycloid with equal radii, cusp at `(−radius, 0)`.
    Cardioid { radius: f64 },
    /// `scale·(2cos t + cos 2t, 2sin t − sin 2t)`.
    Deltoid { scale: f64 },
    /// `½(3t − 4t³, 6t²)`, on `108x² = y(4y − 9)²`.
    Tschirnhausen,
    Circle { center: Vec2, radius: f64 },
}

impl ReferenceCurve {
    pub fn from_kind(kind: &str, params: &[f64]) -> Result<Self, OracleError> {
        let expect = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(OracleError::InvalidParams {
                    kind: kind.to_string(),
                    expected: n,
                    got: params.len(),
                })
            }
        };
        Ok(match kind {
            "epicycloid" => {
                expect(3)?;
                ReferenceCurve::Epicycloid {
                    base: params[0],
                    roll: params[1],
                    phase: params[2],
                }
            }
            "astroid" => {
                expect(4)?;
                ReferenceCurve::Astroid {
                    scale: params[0],
                    rotation: params[1],
                    center: Vec2::new(params[2], params[3]),
                }
            }
            "cardioid" => {
                expect(1)?;
                ReferenceCurve::Cardioid { radius: params[0] }
            }
            "deltoid" => {
                expect(1)?;
                ReferenceCurve::Deltoid { scale: params[0] }
            }
            "tschirnhausen" => {
                expect(0)?;
                ReferenceCurve::Tschirnhausen
            }
            "circle" => {
                expect(3)?;
                ReferenceCurve::Circle {
                    center: Vec2::new(params[0], params[1]),
                    radius: params[2],
                }
            }
            other => return Err(OracleError::UnknownKind(other.to_string())),
        })
    }

    pub fn eval(&self, t: f64) -> Vec2 {
        match *self {
            ReferenceCurve::Epicycloid { base, roll, phase } => {
                let k = (base + roll) / roll;
                Vec2::from_angle(t) * (base + roll) - Vec2::from_angle(k * t + phase) * roll
            }
            ReferenceCurve::Astroid { scale, rotation, center } => {
                let (s, c) = t.sin_cos();
                center + Vec2::new(c * c * c, s * s * s).rotate(rotation) * scale
            }
            ReferenceCurve::Cardioid { radius } => ReferenceCurve::Epicycloid {
                base: radius,
                roll: radius,
                phase: PI,
            }
            .eval(t),
            ReferenceCurve::Deltoid { scale } => {
                Vec2::new(2.0 * t.cos() + (2.0 * t).cos(), 2.0 * t.sin() - (2.0 * t).sin()) * scale
            }
            ReferenceCurve::Tschirnhausen => Vec2::new(1.5 * t - 2.0 * t * t * t, 3.0 * t * t),
            ReferenceCurve::Circle { center, radius } => center + Vec2::from_angle(t) * radius,
        }
    }

    /// Natural parameter range used for projections.
    pub fn default_range(&self) -> (f64, f64) {
        match self {
            ReferenceCurve::Tschirnhausen => (-3.0, 3.0),
            _ => (0.0, TAU),
        }
    }

    /// Distance from `p` to the curve over `range`: a coarse scan followed by
    /// golden-section refinement around the best scan point.
    pub fn distance_to(&self, p: Vec2, range: (f64, f64)) -> f64 {
        const SCAN: usize = 2048;
        let (a, b) = range;
        let step = (b - a) / SCAN as f64;
        let d2 = |t: f64| (self.eval(t) - p).norm_squared();
        let mut best = (a, d2(a));
        for i in 1..=SCAN {
            let t = a + i as f64 * step;
            let v = d2(t);
            if v < best.1 {
                best = (t, v);
            }
        }
        let lo = (best.0 - step).max(a);
        let hi = (best.0 + step).min(b);
        let (_, v) = numeric::golden_section_min(d2, lo, hi, 1e-13);
        v.min(best.1).sqrt()
    }
}

/// Evaluate a reference curve given by name and parameter list.
pub fn reference_eval(kind: &str, params: &[f64], t: f64) -> Result<Vec2, OracleError> {
    Ok(ReferenceCurve::from_kind(kind, params)?.eval(t))
}

/// Residual of the Tschirnhausen cubic `108x² − y(4y − 9)²`.
pub fn tschirnhausen_residual(p: Vec2) -> f64 {
    let q = 4.0 * p.y - 9.0;
    108.0 * p.x * p.x - p.y * q * q
}

/// The second endpoint of the chord in the rate check.
pub enum LemmaPartner<'a> {
    Fixed(Vec2),
    /// A moving point whose velocity is along the chord (for instance the
    /// caustic point, whose tangent is the reflected ray).
    Moving(Box<dyn Fn(f64) -> Option<Vec2> + 'a>),
}

impl LemmaPartner<'_> {
    fn at(&self, t: f64) -> Option<Vec2> {
        match self {
            LemmaPartner::Fixed(p) => Some(*p),
            LemmaPartner::Moving(f) => f(t),
        }
    }
}

/// `(measured dσ/ds, cos φ₁/d)` for the chord from `u(t)` to the partner.
/// The measured rate is a central difference of the unwrapped direction angle.
pub fn lemma1_rate_check(
    u: &ParametricCurve,
    w: &LemmaPartner,
    t: f64,
) -> Result<(f64, f64), OracleError> {
    let d = u.evaluate(t, 1)?;
    let (p, v) = (d[0], d[1]);
    let partner = w.at(t).ok_or(OracleError::DegenerateSeparation(0.0))?;
    let c = partner - p;
    let dist = c.norm();
    if !(dist > 1e-6) {
        return Err(OracleError::DegenerateSeparation(dist));
    }
    let speed = v.norm();
    let left_normal = Vec2::new(-v.y, v.x) / speed;
    let predicted = c.dot(left_normal) / (dist * dist);

    let sigma0 = c.angle();
    let sigma = |x: f64| -> f64 {
        let Ok(p) = u.position(x) else { return f64::NAN };
        let Some(q) = w.at(x) else { return f64::NAN };
        sigma0 + wrap_angle((q - p).angle() - sigma0)
    };
    let h = 1e-3 * t.abs().max(1.0) * dist.min(1.0);
    let measured = numeric::diff1(sigma, t, h) / speed;
    if !measured.is_finite() {
        return Err(OracleError::DegenerateSeparation(dist));
    }
    Ok((measured, predicted))
}

/// Largest distance from a point of `a` to the set `b`.
pub fn directed_hausdorff(a: &[Vec2], b: &[Vec2]) -> Result<f64, OracleError> {
    if a.is_empty() || b.is_empty() {
        return Err(OracleError::Empty);
    }
    Ok(a.iter()
        .map(|p| b.iter().map(|q| p.distance(*q)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max))
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff_distance(a: &[Vec2], b: &[Vec2]) -> Result<f64, OracleError> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

/// Largest distance from the points to a reference curve, projecting each
/// point onto the curve.
pub fn max_distance_to_curve(points: &[Vec2], curve: &ReferenceCurve, range: (f64, f64)) -> Result<f64, OracleError> {
    if points.is_empty() {
        return Err(OracleError::Empty);
    }
    Ok(points
        .iter()
        .map(|&p| curve.distance_to(p, range))
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::Tolerances;

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (i as f64 + 0.5) * (b - a) / n as f64).collect()
    }

    #[test]
    fn tangents_of_a_circle_envelope_the_circle() {
        let c = ParametricCurve::unit_circle();
        let env = envelope_of_lines(&tangent_line_family(&c, grid(0.0, TAU, 200))).unwrap();
        for p in env {
            assert!((p.point.unwrap().norm() - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn reflected_rays_envelope_the_coffee_cup() {
        let c = ParametricCurve::unit_circle();
        let fam = reflected_ray_family(&c, Radiant::at_infinity(PI), grid(0.0, TAU, 256));
        let cup = ReferenceCurve::from_kind("epicycloid", &[0.5, 0.25, 0.0]).unwrap();
        for p in envelope_of_lines(&fam).unwrap() {
            assert!(p.point.unwrap().distance(cup.eval(p.t)) < 1e-6);
        }
    }

    #[test]
    fn parabola_side_light_gives_tschirnhausen() {
        let par = ParametricCurve::parabola(1.0);
        let fam = reflected_ray_family(&par, Radiant::at_infinity(PI), grid(-3.0, 3.0, 300));
        for p in envelope_of_lines(&fam).unwrap() {
            let q = p.point.unwrap();
            assert!(tschirnhausen_residual(q).abs() < 1e-6 * (1.0 + q.norm_squared()), "{q:?}");
        }
    }

    #[test]
    fn richardson_consistency() {
        let e = ParametricCurve::ellipse(2.0, 1.0);
        let fam = reflected_ray_family(&e, Radiant::finite(0.3, 0.2), grid(0.0, TAU, 64));
        let a = envelope_of_lines_with_step(&fam, FAMILY_STEP).unwrap();
        let b = envelope_of_lines_with_step(&fam, 0.5 * FAMILY_STEP).unwrap();
        for (p, q) in a.iter().zip(&b) {
            let (p, q) = (p.point.unwrap(), q.point.unwrap());
            if p.norm() < 10.0 {
                assert!(p.distance(q) < 1e-8, "{p:?} {q:?}");
            }
        }
    }

    #[test]
    fn parallel_family_has_no_envelope() {
        let fam = LineFamily::new(vec![0.0, 1.0, 2.0], |t| Some((Vec2::new(0.0, t), Vec2::new(1.0, 0.0))));
        assert_eq!(envelope_of_lines(&fam), Err(OracleError::NoEnvelope));
        let fam = LineFamily::new(vec![0.0, 1.0], |t| Some((Vec2::new(0.0, t), Vec2::new(1.0, 0.0))));
        assert_eq!(envelope_of_lines(&fam), Err(OracleError::TooFewMembers(2)));
    }

    #[test]
    fn circle_limits_recover_both_envelopes() {
        use crate::envelope::{beta_for_family, CircleFamily};
        let e = ParametricCurve::ellipse(2.0, 1.0);
        let radiant = Radiant::finite(0.4, 0.1);
        let tol = Tolerances::default();
        let fam = |t: f64| {
            let s = e.frenet_sample(t).ok()?;
            let fc = crate::optics::focal_circle(&s, &radiant, &tol).ok()?;
            Some((fc.center?, fc.radius?))
        };
        for &t in &[0.3, 1.2, 2.8, 4.4] {
            let (a, b) = circle_family_limits(fam, t, 1e-4).unwrap();
            let s = e.frenet_sample(t).unwrap();
            let beta = beta_for_family(&s, &CircleFamily::Focal(radiant), &tol).unwrap().beta;
            let (alpha_hit, beta_hit) = if a.distance(s.pos) < b.distance(s.pos) { (a, b) } else { (b, a) };
            assert!(alpha_hit.distance(s.pos) < 1e-5);
            assert!(beta_hit.distance(beta) < 1e-5, "{beta_hit:?} vs {beta:?}");
        }
    }

    #[test]
    fn reference_examples() {
        let p = reference_eval("tschirnhausen", &[], 1.0).unwrap();
        assert_eq!(p, Vec2::new(-0.5, 3.0));
        assert_eq!(tschirnhausen_residual(p), 0.0);
        let cup = reference_eval("epicycloid", &[0.5, 0.25, 0.0], 0.7).unwrap();
        let want = Vec2::new(0.75 * 0.7f64.cos() - 0.25 * 2.1f64.cos(), 0.75 * 0.7f64.sin() - 0.25 * 2.1f64.sin());
        assert!(cup.distance(want) < 1e-15);
        let card = reference_eval("cardioid", &[1.0 / 3.0], PI).unwrap();
        assert!(card.distance(Vec2::new(-1.0 / 3.0, 0.0)) < 1e-15);
        assert!(matches!(reference_eval("spiral", &[], 0.0), Err(OracleError::UnknownKind(_))));
        assert!(matches!(reference_eval("circle", &[1.0], 0.0), Err(OracleError::InvalidParams { .. })));
    }

    #[test]
    fn lemma1_examples() {
        let c = ParametricCurve::unit_circle();
        let (m, p) = lemma1_rate_check(&c, &LemmaPartner::Fixed(Vec2::ZERO), 0.8).unwrap();
        assert!((m - 1.0).abs() < 1e-9 && (p - 1.0).abs() < 1e-15);
        let (m, p) = lemma1_rate_check(&c, &LemmaPartner::Fixed(Vec2::new(3.0, 0.0)), PI / 2.0).unwrap();
        assert!((m - p).abs() < 1e-5);

        // caustic point as a partner moving along the chord
        let e = ParametricCurve::ellipse(2.0, 1.0);
        let tol = Tolerances::default();
        let radiant = Radiant::at_infinity(1.0);
        let w = LemmaPartner::Moving(Box::new(|t| {
            crate::caustic::caustic_at(&e, &radiant, t, &tol).ok()?.finite()
        }));
        for &t in &[0.4, 2.0, 3.3] {
            let (m, p) = lemma1_rate_check(&e, &w, t).unwrap();
            assert!((m - p).abs() < 1e-5, "{m} {p}");
        }
        assert!(matches!(
            lemma1_rate_check(&c, &LemmaPartner::Fixed(Vec2::new(1.0, 0.0)), 0.0),
            Err(OracleError::DegenerateSeparation(_))
        ));
    }

    #[test]
    fn hausdorff_examples() {
        let n = 64;
        let a: Vec<Vec2> = (0..n).map(|i| Vec2::from_angle(TAU * i as f64 / n as f64)).collect();
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        let b: Vec<Vec2> = a.iter().map(|p| p.rotate(TAU / n as f64 * 0.5)).collect();
        let chord = 2.0 * (PI / n as f64).sin();
        assert!(hausdorff_distance(&a, &b).unwrap() <= chord);
        assert_eq!(hausdorff_distance(&a, &[]), Err(OracleError::Empty));
    }

    #[test]
    fn projection_distance() {
        let ast = ReferenceCurve::Astroid { scale: 4.0, rotation: 0.3, center: Vec2::new(0.1, -0.2) };
        for &t in &[0.0, 0.01, 1.0, 2.0, 4.7] {
            let p = ast.eval(t);
            assert!(ast.distance_to(p, ast.default_range()) < 1e-9);
        }
        let circ = ReferenceCurve::Circle { center: Vec2::ZERO, radius: 1.0 };
        assert!((circ.distance_to(Vec2::new(0.0, 1.5), circ.default_range()) - 0.5).abs() < 1e-12);
    }
}
