//! The second envelope β of a family of circles tangent to a curve.
//!
//! A circle of signed radius `R(s)` tangent at `α(s)` (center `α + R·N`)
//! meets the infinitesimally next circle at `α(s)` and at
//! `β = α + R(1 + cos 2δ)·N + R sin 2δ·T`, where the chord angle δ satisfies
//! `tan δ = R′/(Rκ − 1)`.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;
use thiserror::Error;

use crate::curve::{CurveError, CurveSample, ParametricCurve};
use crate::optics::{self, OpticsError, Radiant, Tolerances};
use crate::vec2::Vec2;

const CHORD_INDETERMINATE: f64 = 1e-12;
const ALPHA_CONTACT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvelopeError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Optics(#[from] OpticsError),
    #[error("focus at infinity at t = {t}")]
    FocusAtInfinity { t: f64 },
    #[error("indeterminate chord angle (osculating circle with stationary radius)")]
    IndeterminateChordAngle,
}

/// A family of circles tangent to the curve, one per curve point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CircleFamily {
    /// Focal circles of a radiant.
    Focal(Radiant),
    /// Fixed signed radius along the normal.
    ConstantRadius(f64),
    /// Osculating circles, `R = 1/κ`.
    Osculating,
}

/// Radius of the family member at a point and its arc-length derivative.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadiusProfile {
    pub radius: f64,
    pub radius_s: f64,
}

fn require_curved(sample: &CurveSample, tol: &Tolerances) -> Result<(), EnvelopeError> {
    if sample.kappa.abs() < tol.kappa_floor {
        return Err(OpticsError::Flat {
            t: sample.t,
            kappa: sample.kappa,
        }
        .into());
    }
    Ok(())
}

/// `(R, dR/ds)` for a family at a sample, in closed form.
pub fn radius_profile_at(
    sample: &CurveSample,
    family: &CircleFamily,
    tol: &Tolerances,
) -> Result<RadiusProfile, EnvelopeError> {
    let k = sample.kappa;
    match *family {
        CircleFamily::ConstantRadius(radius) => Ok(RadiusProfile {
            radius,
            radius_s: 0.0,
        }),
        CircleFamily::Osculating => {
            require_curved(sample, tol)?;
            Ok(RadiusProfile {
                radius: 1.0 / k,
                radius_s: -sample.kappa_s / (k * k),
            })
        }
        CircleFamily::Focal(radiant) => {
            require_curved(sample, tol)?;
            let ray = optics::ray_geometry(sample, &radiant)?;
            // du1/ds from dP/ds = T and dN/ds = −κT
            let u1_s = match radiant {
                Radiant::AtInfinity { .. } => 0.0,
                Radiant::Finite(src) => {
                    let c = src - sample.pos;
                    let (cn, ct, c2) = (c.dot(sample.normal), c.dot(sample.tangent), c.norm_squared());
                    (2.0 * cn * ct - k * ct * c2) / (c2 * c2)
                }
            };
            let u2 = optics::mirror_focus(ray.u1, k);
            if u2.abs() < tol.u_floor {
                return Err(EnvelopeError::FocusAtInfinity { t: sample.t });
            }
            let u2_s = 2.0 * sample.kappa_s - u1_s;
            Ok(RadiusProfile {
                radius: 0.5 / u2,
                radius_s: -u2_s / (2.0 * u2 * u2),
            })
        }
    }
}

/// `(R, dR/ds)` of the focal circle of `radiant` at parameter `t`.
pub fn radius_profile(
    curve: &ParametricCurve,
    radiant: &Radiant,
    t: f64,
    tol: &Tolerances,
) -> Result<RadiusProfile, EnvelopeError> {
    let sample = curve.frame_at(t, 0.0)?;
    radius_profile_at(&sample, &CircleFamily::Focal(*radiant), tol)
}

/// dR/ds by a five-point stencil with arc-length step `h_s`.
pub fn radius_s_finite_difference(
    curve: &ParametricCurve,
    family: &CircleFamily,
    t: f64,
    h_s: f64,
    tol: &Tolerances,
) -> Result<f64, EnvelopeError> {
    let speed = curve.speed(t)?;
    let h = h_s / speed;
    let radius = |x: f64| {
        curve
            .frame_at(x, 0.0)
            .map_err(EnvelopeError::from)
            .and_then(|s| radius_profile_at(&s, family, tol))
            .map(|p| p.radius)
    };
    for k in [-2.0, -1.0, 1.0, 2.0] {
        radius(t + k * h)?;
    }
    Ok(crate::numeric::diff1(|x| radius(x).unwrap_or(f64::NAN), t, h) / speed)
}

/// Chord angle δ = atan2(R′, Rκ − 1) reduced to `(−π/2, π/2]`.
pub fn chord_angle(radius: f64, radius_s: f64, kappa: f64) -> Result<f64, EnvelopeError> {
    let x = radius * kappa - 1.0;
    if x.abs() < CHORD_INDETERMINATE && radius_s.abs() < CHORD_INDETERMINATE {
        return Err(EnvelopeError::IndeterminateChordAngle);
    }
    let mut delta = radius_s.atan2(x);
    if delta > FRAC_PI_2 {
        delta -= std::f64::consts::PI;
    } else if delta <= -FRAC_PI_2 {
        delta += std::f64::consts::PI;
    }
    Ok(delta)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BetaSample {
    pub t: f64,
    pub s: f64,
    pub beta: Vec2,
    pub delta: f64,
    pub radius: f64,
    /// β coincides with α here: the member is the osculating circle while its
    /// radius is still changing.
    pub is_alpha_contact: bool,
}

/// Second envelope point for a family member of the given profile.
pub fn second_envelope(sample: &CurveSample, profile: RadiusProfile, delta: f64) -> BetaSample {
    let (s2, c2) = (2.0 * delta).sin_cos();
    let r = profile.radius;
    let beta = sample.pos + sample.normal * (r * (1.0 + c2)) + sample.tangent * (r * s2);
    BetaSample {
        t: sample.t,
        s: sample.s,
        beta,
        delta,
        radius: r,
        is_alpha_contact: (r * sample.kappa - 1.0).abs() < ALPHA_CONTACT_TOL
            && profile.radius_s.abs() > ALPHA_CONTACT_TOL,
    }
}

/// Profile, chord angle and β for any circle family.
pub fn beta_for_family(
    sample: &CurveSample,
    family: &CircleFamily,
    tol: &Tolerances,
) -> Result<BetaSample, EnvelopeError> {
    let profile = radius_profile_at(sample, family, tol)?;
    let delta = chord_angle(profile.radius, profile.radius_s, sample.kappa)?;
    Ok(second_envelope(sample, profile, delta))
}

/// β for radiants at infinity from the aberrancy `a`:
/// `β = α + (N − a·T) / (2κ(1 + a²))`.
pub fn beta_infinity(sample: &CurveSample, tol: &Tolerances) -> Result<BetaSample, EnvelopeError> {
    require_curved(sample, tol)?;
    let a = sample
        .aberrancy
        .ok_or(OpticsError::Flat {
            t: sample.t,
            kappa: sample.kappa,
        })?;
    let k = sample.kappa;
    let scale = 1.0 / (2.0 * k * (1.0 + a * a));
    Ok(BetaSample {
        t: sample.t,
        s: sample.s,
        beta: sample.pos + (sample.normal - sample.tangent * a) * scale,
        delta: -a.atan(),
        radius: 0.25 / k,
        is_alpha_contact: false,
    })
}
