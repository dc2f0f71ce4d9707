//! Caustic envelopes: components, asymptotes, cusps and the rolling-circle
//! construction.
//!
//! The caustic point of a mirror sample sits on its focal circle at direction
//! angle `ω = 3π/2 + 3γ − 2σ₁` from the center, so `E = center + R(cos ω, sin ω)`
//! with the signed radius `R`. As `s` advances, ω turns at the rate
//! `3κ − 2u1`, and the caustic touches β exactly where
//! `ω − γ − π/2 + 2δ ≡ 0 (mod 2π)`; those touch points are its cusps.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;
use thiserror::Error;

use crate::curve::{CurveError, CurveSample, ParametricCurve, SampledCurve};
use crate::envelope::{self, CircleFamily, EnvelopeError};
use crate::numeric::{self, unwrap_angles, wrap_angle};
use crate::optics::{self, CausticPoint, OpticsError, Radiant, Tolerances};
use crate::vec2::Vec2;

/// Parameter tolerance for cusp refinement.
pub const CUSP_T_TOL: f64 = 1e-10;
/// Gate on the contact condition and on ‖E − β‖ for reported cusps.
pub const CUSP_GATE: f64 = 1e-6;
/// A trace point closer than this to the contact point counts as touching β.
pub const CONTACT_COINCIDENCE: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CausticError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Optics(#[from] OpticsError),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
    #[error("no radiants given")]
    NoRadiants,
    #[error("radiants do not share a focal-circle family (only radiants at infinity may be combined)")]
    MixedFamilies,
}

/// A line through `point` with unit `direction`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Line {
    pub point: Vec2,
    pub direction: Vec2,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CausticSample {
    pub t: f64,
    pub s: f64,
    pub point: CausticPoint,
    pub component_id: usize,
    pub is_cusp: bool,
    /// Set on the first or last sample of a component that ends at an asymptote.
    pub asymptote: Option<Line>,
}

/// The reflected line at a parameter where the focus runs off to infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Asymptote {
    pub t: f64,
    pub line: Line,
    /// Component ids on either side, in parameter order.
    pub before: Option<usize>,
    pub after: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CausticComponent {
    pub id: usize,
    pub samples: Vec<CausticSample>,
    /// The component wraps around a closed mirror with no break.
    pub closed: bool,
}

impl CausticComponent {
    pub fn points(&self) -> Vec<Vec2> {
        self.samples.iter().filter_map(|s| s.point.finite()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cusp {
    pub component_id: usize,
    pub t: f64,
    pub point: Vec2,
    /// |wrap(ω − γ − π/2 + 2δ)| at the cusp.
    pub contact_residual: f64,
    /// ‖E − β‖ at the cusp.
    pub beta_gap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CausticTrace {
    pub radiant: Radiant,
    pub components: Vec<CausticComponent>,
    pub asymptotes: Vec<Asymptote>,
    /// Grid samples whose focus is at infinity or undefined (flat mirror,
    /// radiant on the mirror). Their `component_id` is that of the preceding
    /// component.
    pub undefined: Vec<CausticSample>,
    pub cusps: Vec<Cusp>,
}

impl CausticTrace {
    pub fn all_points(&self) -> Vec<Vec2> {
        self.components.iter().flat_map(|c| c.points()).collect()
    }
}

/// Caustic point at an arbitrary parameter.
pub fn caustic_at(
    curve: &ParametricCurve,
    radiant: &Radiant,
    t: f64,
    tol: &Tolerances,
) -> Result<CausticPoint, CausticError> {
    let sample = curve.frame_at(t, 0.0)?;
    Ok(optics::caustic_point(&sample, radiant, tol)?)
}

fn finite_caustic(curve: &ParametricCurve, radiant: &Radiant, t: f64, tol: &Tolerances) -> Option<Vec2> {
    caustic_at(curve, radiant, t, tol).ok().and_then(CausticPoint::finite)
}

fn u2_at(curve: &ParametricCurve, radiant: &Radiant, t: f64) -> f64 {
    curve
        .frame_at(t, 0.0)
        .ok()
        .and_then(|s| optics::ray_geometry(&s, radiant).ok().map(|r| optics::mirror_focus(r.u1, s.kappa)))
        .unwrap_or(f64::NAN)
}

fn reflected_line(curve: &ParametricCurve, radiant: &Radiant, t: f64) -> Option<Line> {
    let s = curve.frame_at(t, 0.0).ok()?;
    let ray = optics::ray_geometry(&s, radiant).ok()?;
    Some(Line {
        point: s.pos,
        direction: ray.reflected_dir,
    })
}

/// Sample the caustic over a grid and split it into components.
///
/// A component ends wherever `u2` changes sign or vanishes (the focus passes
/// through infinity); the reflected line there is recorded as an asymptote of
/// both neighbours.
pub fn trace_caustic(
    curve: &ParametricCurve,
    sampled: &SampledCurve,
    radiant: &Radiant,
    tol: &Tolerances,
) -> CausticTrace {
    let samples = &sampled.samples;
    let n = samples.len();
    let period = curve.period().unwrap_or(0.0);

    // per-sample u2 and caustic point; None where undefined
    let data: Vec<Option<(f64, Vec2)>> = samples
        .iter()
        .map(|s| {
            if s.kappa.abs() < tol.kappa_floor {
                return None;
            }
            let ray = optics::ray_geometry(s, radiant).ok()?;
            let fc = optics::focal_circle_from_ray(s, &ray, tol);
            let d2 = fc.focal_distance?;
            Some((fc.u2, s.pos + ray.reflected_dir * d2))
        })
        .collect();

    // step i joins sample i to i+1 (mod n when periodic)
    let steps = if sampled.periodic { n } else { n - 1 };
    let mut joined = vec![false; steps];
    let mut asymptote_at: Vec<Option<f64>> = vec![None; steps];
    for i in 0..steps {
        let j = (i + 1) % n;
        let (ta, mut tb) = (samples[i].t, samples[j].t);
        if tb < ta {
            tb += period;
        }
        match (data[i], data[j]) {
            (Some((ua, _)), Some((ub, _))) if ua.signum() == ub.signum() => joined[i] = true,
            (Some(_), Some(_)) => {
                let f = |t: f64| u2_at(curve, radiant, t);
                asymptote_at[i] = numeric::find_root(f, ta, tb, 1e-14 * (1.0 + tb.abs()));
            }
            _ => {}
        }
    }

    // runs of joined samples
    let mut runs: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    for i in 0..n {
        if data[i].is_none() {
            if !current.is_empty() {
                runs.push(std::mem::take(&mut current));
            }
            continue;
        }
        current.push(i);
        if i + 1 < n && !joined[i] {
            runs.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        runs.push(current);
    }
    let mut closed_first = false;
    if sampled.periodic && joined[n - 1] && !runs.is_empty() {
        if runs.len() == 1 {
            closed_first = true;
        } else if runs[0][0] == 0 && runs.last().map(|r| *r.last().unwrap()) == Some(n - 1) {
            let mut last = runs.pop().unwrap();
            last.extend(runs.remove(0));
            runs.push(last);
        }
    }
    runs.sort_by(|a, b| samples[a[0]].t.total_cmp(&samples[b[0]].t));

    let mut component_of = vec![None; n];
    let mut components: Vec<CausticComponent> = runs
        .iter()
        .enumerate()
        .map(|(id, run)| {
            for &i in run {
                component_of[i] = Some(id);
            }
            CausticComponent {
                id,
                samples: run
                    .iter()
                    .map(|&i| CausticSample {
                        t: samples[i].t,
                        s: samples[i].s,
                        point: CausticPoint::Finite(data[i].unwrap().1),
                        component_id: id,
                        is_cusp: false,
                        asymptote: None,
                    })
                    .collect(),
                closed: closed_first,
            }
        })
        .collect();

    let mut asymptotes = Vec::new();
    let mut undefined = Vec::new();
    let mut last_component = 0;
    for i in 0..n {
        if let Some(c) = component_of[i] {
            last_component = c;
        }
        if data[i].is_none() {
            undefined.push(CausticSample {
                t: samples[i].t,
                s: samples[i].s,
                point: CausticPoint::AtInfinity,
                component_id: last_component,
                is_cusp: false,
                asymptote: None,
            });
            // a grid point exactly on a crossing: isolated, with u2 changing
            // sign across it
            let prev = (i > 0 || sampled.periodic).then(|| data[(i + n - 1) % n]).flatten();
            let next = (i + 1 < n || sampled.periodic).then(|| data[(i + 1) % n]).flatten();
            let crossing = matches!((prev, next), (Some((ua, _)), Some((ub, _))) if ua.signum() != ub.signum());
            let curved = samples[i].kappa.abs() >= tol.kappa_floor;
            if crossing && curved && optics::ray_geometry(&samples[i], radiant).is_ok() {
                let before = if i > 0 || sampled.periodic { component_of[(i + n - 1) % n] } else { None };
                let after = if i + 1 < n || sampled.periodic { component_of[(i + 1) % n] } else { None };
                if let Some(line) = reflected_line(curve, radiant, samples[i].t) {
                    asymptotes.push(Asymptote { t: samples[i].t, line, before, after });
                }
            }
        }
        if i < steps {
            if let Some(t) = asymptote_at[i] {
                if let Some(line) = reflected_line(curve, radiant, t) {
                    let t = if t >= curve.domain().1 && period > 0.0 { t - period } else { t };
                    asymptotes.push(Asymptote {
                        t,
                        line,
                        before: component_of[i],
                        after: component_of[(i + 1) % n],
                    });
                }
            }
        }
    }
    for a in &asymptotes {
        if let Some(c) = a.before {
            if let Some(last) = components[c].samples.last_mut() {
                last.asymptote = Some(a.line);
            }
        }
        if let Some(c) = a.after {
            if let Some(first) = components[c].samples.first_mut() {
                first.asymptote = Some(a.line);
            }
        }
    }
    let mut cusps = Vec::new();
    for comp in &mut components {
        let found = find_cusps(curve, radiant, comp, tol);
        for cusp in &found {
            let nearest = comp
                .samples
                .iter_mut()
                .min_by(|a, b| param_gap(a.t, cusp.t, period).total_cmp(&param_gap(b.t, cusp.t, period)));
            if let Some(s) = nearest {
                s.is_cusp = true;
            }
        }
        cusps.extend(found);
    }
    CausticTrace {
        radiant: *radiant,
        components,
        asymptotes,
        undefined,
        cusps,
    }
}

fn param_gap(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).abs();
    if period > 0.0 {
        d.min(period - d % period)
    } else {
        d
    }
}

/// ‖dE/ds‖ at `t` by central differences.
pub fn caustic_speed(curve: &ParametricCurve, radiant: &Radiant, t: f64, tol: &Tolerances) -> Option<f64> {
    let h = 1e-5 * t.abs().max(1.0);
    let a = finite_caustic(curve, radiant, t - h, tol)?;
    let b = finite_caustic(curve, radiant, t + h, tol)?;
    let speed = curve.speed(t).ok()?;
    Some(a.distance(b) / (2.0 * h * speed))
}

/// Signed angle `wrap(ω − γ − π/2 + 2δ)`: zero where the caustic point is the
/// contact point of the focal circle with β.
pub fn contact_condition(sample: &CurveSample, radiant: &Radiant, tol: &Tolerances) -> Result<f64, CausticError> {
    let b = envelope::beta_for_family(sample, &CircleFamily::Focal(*radiant), tol)?;
    let omega = omega_angle(sample, radiant)?;
    Ok(wrap_angle(omega - sample.gamma - FRAC_PI_2 + 2.0 * b.delta))
}

fn cusp_gates(curve: &ParametricCurve, radiant: &Radiant, t: f64, tol: &Tolerances) -> Option<(Vec2, f64, f64)> {
    let sample = curve.frame_at(t, 0.0).ok()?;
    let e = optics::caustic_point(&sample, radiant, tol).ok()?.finite()?;
    let b = envelope::beta_for_family(&sample, &CircleFamily::Focal(*radiant), tol).ok()?;
    let contact = contact_condition(&sample, radiant, tol).ok()?;
    Some((e, contact.abs(), e.distance(b.beta)))
}

/// Cusps of one component: local minima of the caustic speed, refined by
/// golden section and kept only where the caustic touches β.
pub fn find_cusps(
    curve: &ParametricCurve,
    radiant: &Radiant,
    component: &CausticComponent,
    tol: &Tolerances,
) -> Vec<Cusp> {
    let samples = &component.samples;
    let m = samples.len();
    if m < 3 {
        return Vec::new();
    }
    let period = curve.period().unwrap_or(0.0);
    let pts: Vec<Option<Vec2>> = samples.iter().map(|s| s.point.finite()).collect();
    let step = |a: usize, b: usize| {
        let mut dt = samples[b].t - samples[a].t;
        if dt <= 0.0 {
            dt += period;
        }
        dt
    };
    let rate = |i: usize| -> Option<(f64, f64, f64)> {
        let (p, q) = if component.closed {
            ((i + m - 1) % m, (i + 1) % m)
        } else if i == 0 || i + 1 == m {
            return None;
        } else {
            (i - 1, i + 1)
        };
        let dt = step(p, q);
        let v = pts[p]?.distance(pts[q]?) / dt;
        Some((v, step(p, i), step(i, q)))
    };
    let rates: Vec<Option<(f64, f64, f64)>> = (0..m).map(rate).collect();
    let neighbour = |i: usize, d: isize| -> Option<f64> {
        let j = i as isize + d;
        let j = if component.closed { j.rem_euclid(m as isize) as usize } else if j < 0 || j >= m as isize { return None } else { j as usize };
        rates[j].map(|r| r.0)
    };

    let mut cusps: Vec<Cusp> = Vec::new();
    for i in 0..m {
        let Some((v, back, fwd)) = rates[i] else { continue };
        let prev = neighbour(i, -1).unwrap_or(f64::INFINITY);
        let next = neighbour(i, 1).unwrap_or(f64::INFINITY);
        if !(v < prev && v <= next) {
            continue;
        }
        let t0 = samples[i].t;
        let speed2 = |t: f64| {
            caustic_speed(curve, radiant, t, tol)
                .map(|v| v * v)
                .unwrap_or(f64::INFINITY)
        };
        let (t, _) = numeric::golden_section_min(speed2, t0 - back, t0 + fwd, CUSP_T_TOL);
        let t = if period > 0.0 && t >= curve.domain().1 {
            t - period
        } else if period > 0.0 && t < curve.domain().0 {
            t + period
        } else {
            t
        };
        let Some((point, contact, gap)) = cusp_gates(curve, radiant, t, tol) else { continue };
        if contact >= CUSP_GATE || gap >= CUSP_GATE {
            continue;
        }
        if cusps.iter().any(|c| param_gap(c.t, t, period) < 1e-8) {
            continue;
        }
        cusps.push(Cusp {
            component_id: component.id,
            t,
            point,
            contact_residual: contact,
            beta_gap: gap,
        });
    }
    cusps.sort_by(|a, b| a.t.total_cmp(&b.t));
    cusps
}

/// ω = 3π/2 + 3γ − 2σ₁, the direction from the focal-circle center to the
/// caustic point (with the signed radius), on the branch of the sample's γ.
pub fn omega_angle(sample: &CurveSample, radiant: &Radiant) -> Result<f64, CausticError> {
    let ray = optics::ray_geometry(sample, radiant)?;
    Ok(1.5 * PI + 3.0 * sample.gamma - 2.0 * ray.sigma1)
}

/// ω along a sampled curve, unwrapped. Samples where the ray is undefined
/// yield NaN and are left out of the unwrapping.
pub fn omega_series(sampled: &SampledCurve, radiant: &Radiant) -> Vec<f64> {
    let raw: Vec<Option<f64>> = sampled
        .samples
        .iter()
        .map(|s| omega_angle(s, radiant).ok())
        .collect();
    let defined: Vec<f64> = raw.iter().flatten().copied().collect();
    let mut unwrapped = unwrap_angles(&defined).into_iter();
    raw.iter()
        .map(|o| o.map_or(f64::NAN, |_| unwrapped.next().unwrap()))
        .collect()
}

/// `(measured dω/ds, 3κ − 2u1)` at `t`, the former by finite differences.
pub fn omega_rate(
    curve: &ParametricCurve,
    radiant: &Radiant,
    t: f64,
    _tol: &Tolerances,
) -> Result<(f64, f64), CausticError> {
    let sample = curve.frame_at(t, 0.0)?;
    let ray = optics::ray_geometry(&sample, radiant)?;
    let omega0 = omega_angle(&sample, radiant)?;
    let h = 1e-3 * t.abs().max(1.0);
    for k in [-2.0, -1.0, 1.0, 2.0] {
        omega_angle(&curve.frame_at(t + k * h, 0.0)?, radiant)?;
    }
    let omega = |x: f64| {
        curve
            .frame_at(x, 0.0)
            .ok()
            .and_then(|s| omega_angle(&s, radiant).ok())
            .map_or(f64::NAN, |w| omega0 + wrap_angle(w - omega0))
    };
    let measured = numeric::diff1(omega, t, h) / sample.speed;
    Ok((measured, 3.0 * sample.kappa - 2.0 * ray.u1))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TracePoint {
    pub radiant: usize,
    pub omega: f64,
    pub point: Vec2,
}

/// One position of the rolling focal circle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RollingFrame {
    pub t: f64,
    pub s: f64,
    pub center: Vec2,
    /// Signed radius along the mirror normal.
    pub radius: f64,
    /// Contact point with β.
    pub contact: Vec2,
    pub gamma: f64,
    pub delta: f64,
    /// ω of the first radiant.
    pub omega: f64,
    pub traces: Vec<TracePoint>,
    pub beta_arclen: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RollingTrace {
    pub radiants: Vec<Radiant>,
    pub frames: Vec<RollingFrame>,
    pub periodic: bool,
}

/// Focal circles rolling on β, carrying one trace point per radiant.
///
/// All radiants must share the focal-circle family: any number of radiants
/// at infinity, or a single finite radiant.
pub fn rolling_frames(
    sampled: &SampledCurve,
    radiants: &[Radiant],
    tol: &Tolerances,
) -> Result<RollingTrace, CausticError> {
    let first = *radiants.first().ok_or(CausticError::NoRadiants)?;
    if radiants.len() > 1 && !radiants.iter().all(Radiant::is_at_infinity) {
        return Err(CausticError::MixedFamilies);
    }
    let family = CircleFamily::Focal(first);
    let omegas: Vec<Vec<f64>> = radiants.iter().map(|r| omega_series(sampled, r)).collect();
    let mut frames: Vec<RollingFrame> = Vec::with_capacity(sampled.samples.len());
    let mut arclen = 0.0;
    for (i, sample) in sampled.samples.iter().enumerate() {
        let Ok(b) = envelope::beta_for_family(sample, &family, tol) else { continue };
        let center = sample.pos + sample.normal * b.radius;
        let traces: Vec<TracePoint> = omegas
            .iter()
            .enumerate()
            .filter(|(_, w)| w[i].is_finite())
            .map(|(j, w)| TracePoint {
                radiant: j,
                omega: w[i],
                point: center + Vec2::from_angle(w[i]) * b.radius,
            })
            .collect();
        if traces.len() != radiants.len() {
            continue;
        }
        if let Some(prev) = frames.last() {
            arclen += prev.contact.distance(b.beta);
        }
        frames.push(RollingFrame {
            t: sample.t,
            s: sample.s,
            center,
            radius: b.radius,
            contact: b.beta,
            gamma: sample.gamma,
            delta: b.delta,
            omega: traces[0].omega,
            traces,
            beta_arclen: arclen,
        });
    }
    Ok(RollingTrace {
        radiants: radiants.to_vec(),
        frames,
        periodic: sampled.periodic,
    })
}

/// A parameter where a trace point meets the contact point, with the caustic
/// speed there.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NoSlipEntry {
    pub radiant: usize,
    pub t: f64,
    pub point: Vec2,
    /// ‖E − β‖ at the located parameter.
    pub gap: f64,
    /// ‖dE/ds‖ there; zero when the circle rolls without slipping.
    pub velocity: f64,
}

/// Locate contact coincidences between consecutive frames (by root-finding
/// the contact condition) and report the caustic speed at each.
pub fn no_slip_report(curve: &ParametricCurve, rolling: &RollingTrace, tol: &Tolerances) -> Vec<NoSlipEntry> {
    let frames = &rolling.frames;
    let period = curve.period().unwrap_or(0.0);
    let mut pairs: Vec<(usize, usize)> = (1..frames.len()).map(|k| (k - 1, k)).collect();
    if rolling.periodic && frames.len() > 2 {
        pairs.push((frames.len() - 1, 0));
    }
    let mut out = Vec::new();
    for (j, radiant) in rolling.radiants.iter().enumerate() {
        let g_frame = |f: &RollingFrame| wrap_angle(f.traces[j].omega - f.gamma - FRAC_PI_2 + 2.0 * f.delta);
        let g = |t: f64| {
            curve
                .frame_at(t, 0.0)
                .ok()
                .and_then(|s| contact_condition(&s, radiant, tol).ok())
                .unwrap_or(f64::NAN)
        };
        for &(a, b) in &pairs {
            let (fa, fb) = (&frames[a], &frames[b]);
            let (ga, gb) = (g_frame(fa), g_frame(fb));
            if ga.signum() == gb.signum() && ga != 0.0 || (ga - gb).abs() > PI {
                continue;
            }
            let (ta, mut tb) = (fa.t, fb.t);
            if tb <= ta {
                tb += period;
            }
            let Some(t) = numeric::find_root(g, ta, tb, 1e-13) else { continue };
            let Some((point, _, gap)) = cusp_gates(curve, radiant, t, tol) else { continue };
            if gap >= CONTACT_COINCIDENCE {
                continue;
            }
            let Some(velocity) = caustic_speed(curve, radiant, t, tol) else { continue };
            let t = if period > 0.0 && t >= curve.domain().1 { t - period } else { t };
            out.push(NoSlipEntry {
                radiant: j,
                t,
                point,
                gap,
                velocity,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Grid;
    use std::f64::consts::TAU;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn full(curve: &ParametricCurve, n: usize) -> SampledCurve {
        let (a, b) = curve.domain();
        curve.sample_grid(Grid { t_min: a, t_max: b, n }).unwrap()
    }

    fn coffee_cup(theta: f64) -> Vec2 {
        Vec2::new(
            0.75 * theta.cos() - 0.25 * (3.0 * theta).cos(),
            0.75 * theta.sin() - 0.25 * (3.0 * theta).sin(),
        )
    }

    #[test]
    fn coffee_cup_trace() {
        let c = ParametricCurve::unit_circle();
        let sampled = full(&c, 1024);
        let trace = trace_caustic(&c, &sampled, &Radiant::at_infinity(PI), &tol());
        assert_eq!(trace.components.len(), 1);
        assert!(trace.components[0].closed);
        assert!(trace.asymptotes.is_empty());
        for s in &trace.components[0].samples {
            assert!(s.point.finite().unwrap().distance(coffee_cup(s.t)) < 1e-12);
        }
        let cusps = find_cusps(&c, &Radiant::at_infinity(PI), &trace.components[0], &tol());
        assert_eq!(cusps.len(), 2, "{cusps:?}");
        assert!(cusps.iter().any(|k| k.point.distance(Vec2::new(0.5, 0.0)) < 1e-9));
        assert!(cusps.iter().any(|k| k.point.distance(Vec2::new(-0.5, 0.0)) < 1e-9));
        let flagged = trace.components[0].samples.iter().filter(|s| s.is_cusp).count();
        assert_eq!(flagged, 2);
    }

    #[test]
    fn interior_radiant_component_counts() {
        let c = ParametricCurve::unit_circle();
        let sampled = full(&c, 1024);
        let one = trace_caustic(&c, &sampled, &Radiant::finite(0.25, 0.0), &tol());
        assert_eq!(one.components.len(), 1);
        assert!(one.components[0].closed);
        let cusps = find_cusps(&c, &one.radiant, &one.components[0], &tol());
        assert_eq!(cusps.len(), 4, "{cusps:?}");

        let two = trace_caustic(&c, &sampled, &Radiant::finite(0.75, 0.0), &tol());
        assert_eq!(two.components.len(), 2);
        assert_eq!(two.asymptotes.len(), 2);
        // crossings where cos θ = (1 + 2c²)/(3c)
        let theta = ((1.0 + 2.0 * 0.5625) / 2.25f64).acos();
        for a in &two.asymptotes {
            let d = param_gap(a.t, theta, TAU).min(param_gap(a.t, TAU - theta, TAU));
            assert!(d < 1e-10, "{}", a.t);
            assert!(a.before.is_some() && a.after.is_some() && a.before != a.after);
        }
        for comp in &two.components {
            assert!(comp.samples.first().unwrap().asymptote.is_some());
            assert!(comp.samples.last().unwrap().asymptote.is_some());
        }
    }

    #[test]
    fn ellipse_radiant_between_envelopes_has_two_components() {
        let e = ParametricCurve::ellipse(2.0, 1.0);
        let sampled = full(&e, 2048);
        let trace = trace_caustic(&e, &sampled, &Radiant::finite(1.9, 0.0), &tol());
        assert_eq!(trace.components.len(), 2);
    }

    #[test]
    fn oblique_parabola_light_has_no_cusps() {
        let p = ParametricCurve::parabola(1.0);
        let sampled = full(&p, 1024);
        for theta in [0.0, 0.4, 2.0] {
            let trace = trace_caustic(&p, &sampled, &Radiant::at_infinity(theta), &tol());
            for comp in &trace.components {
                assert!(find_cusps(&p, &trace.radiant, comp, &tol()).is_empty());
            }
        }
    }

    #[test]
    fn omega_rates() {
        let c = ParametricCurve::unit_circle();
        let (m, p) = omega_rate(&c, &Radiant::finite(1.0, 0.0), 1.1, &tol()).unwrap();
        assert!((m - 2.0).abs() < 1e-9 && (p - 2.0).abs() < 1e-12);
        let e = ParametricCurve::ellipse(2.0, 1.0);
        for &t in &[0.3, 1.7, 4.0] {
            for r in [Radiant::at_infinity(1.3), Radiant::finite(0.5, 0.4)] {
                let (m, p) = omega_rate(&e, &r, t, &tol()).unwrap();
                assert!((m - p).abs() < 1e-8, "{m} vs {p}");
            }
        }
    }

    #[test]
    fn rolling_frames_reproduce_caustic_points() {
        let e = ParametricCurve::ellipse(2.0, 1.0);
        let sampled = full(&e, 512);
        for radiants in [
            vec![Radiant::at_infinity(0.3), Radiant::at_infinity(1.0), Radiant::at_infinity(2.5)],
            vec![Radiant::finite(0.5, 0.2)],
        ] {
            let rolling = rolling_frames(&sampled, &radiants, &tol()).unwrap();
            assert!(!rolling.frames.is_empty());
            for f in &rolling.frames {
                assert!((f.contact.distance(f.center) - f.radius.abs()).abs() < 1e-8);
                for tp in &f.traces {
                    let e_pt = caustic_at(&e, &radiants[tp.radiant], f.t, &tol()).unwrap().finite().unwrap();
                    assert!(tp.point.distance(e_pt) < 1e-9);
                    assert!((tp.point.distance(f.center) - f.radius.abs()).abs() < 1e-8);
                }
            }
        }
        let err = rolling_frames(&sampled, &[Radiant::finite(0.0, 0.0), Radiant::at_infinity(0.0)], &tol());
        assert_eq!(err, Err(CausticError::MixedFamilies));
        assert_eq!(rolling_frames(&sampled, &[], &tol()), Err(CausticError::NoRadiants));
    }

    #[test]
    fn directions_at_infinity_keep_fixed_separation() {
        let d = ParametricCurve::deltoid();
        let sampled = full(&d, 512);
        let rolling = rolling_frames(&sampled, &[Radiant::at_infinity(0.2), Radiant::at_infinity(0.7)], &tol()).unwrap();
        for f in &rolling.frames {
            let diff = wrap_angle(f.traces[1].omega - f.traces[0].omega);
            assert!((diff - wrap_angle(-2.0 * 0.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn no_slip_at_contacts() {
        let c = ParametricCurve::unit_circle();
        let sampled = full(&c, 256);
        let rolling = rolling_frames(&sampled, &[Radiant::at_infinity(PI)], &tol()).unwrap();
        let report = no_slip_report(&c, &rolling, &tol());
        assert_eq!(report.len(), 2, "{report:?}");
        assert!(report.iter().all(|e| e.velocity < 1e-6));

        let e = ParametricCurve::ellipse(2.0, 1.0);
        let sampled = full(&e, 1024);
        let rolling = rolling_frames(&sampled, &[Radiant::at_infinity(75f64.to_radians())], &tol()).unwrap();
        let report = no_slip_report(&e, &rolling, &tol());
        assert!(!report.is_empty());
        assert!(report.iter().all(|e| e.velocity < 1e-5), "{report:?}");
    }

    #[test]
    fn parabola_frames_pivot_about_focus() {
        let p = ParametricCurve::parabola(2.0);
        let sampled = full(&p, 64);
        let rolling = rolling_frames(&sampled, &[Radiant::at_infinity(FRAC_PI_2)], &tol()).unwrap();
        let focus = Vec2::new(0.0, 0.125);
        for f in &rolling.frames {
            assert!((f.center.distance(focus) - f.radius.abs()).abs() < 1e-12);
        }
    }
}
