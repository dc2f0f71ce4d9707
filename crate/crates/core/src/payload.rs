//! The geometry payload computed for a scene.
//!
//! Point layers are arrays of `[t, x, y]`; a point at infinity is written as
//! `[t, "at_infinity", "at_infinity"]` so no non-finite number ever reaches the
//! output. Field order is fixed, so identical scenes serialize to identical
//! bytes.

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use thiserror::Error;

use crate::caustic::{self, CausticError, CausticTrace, NoSlipEntry, RollingFrame};
use crate::curve::Grid;
use crate::envelope::{self, CircleFamily};
use crate::optics;
use crate::scene::{Layer, RadiantDoc, Scene};
use crate::vec2::Vec2;

pub const AT_INFINITY: &str = "at_infinity";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PayloadError {
    #[error(transparent)]
    Caustic(#[from] CausticError),
}

/// A parameter with a point that may be at infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TPoint {
    pub t: f64,
    pub point: Option<Vec2>,
}

impl Serialize for TPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(3))?;
        seq.serialize_element(&self.t)?;
        match self.point {
            Some(p) => {
                seq.serialize_element(&p.x)?;
                seq.serialize_element(&p.y)?;
            }
            None => {
                seq.serialize_element(AT_INFINITY)?;
                seq.serialize_element(AT_INFINITY)?;
            }
        }
        seq.end()
    }
}

/// A point serialized as `[x, y]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Xy(pub Vec2);

impl Serialize for Xy {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.0.x, self.0.y].serialize(serializer)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiantSeries {
    pub radiant: usize,
    pub points: Vec<TPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentEntry {
    pub id: usize,
    pub closed: bool,
    pub samples: Vec<TPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CausticEntry {
    pub radiant: usize,
    pub components: Vec<ComponentEntry>,
    /// Grid parameters where the caustic point is at infinity or undefined.
    pub at_infinity: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CircleEntry {
    pub t: f64,
    pub center: Xy,
    /// Signed radius along the mirror normal.
    #[serde(rename = "R")]
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FocalCircleSeries {
    pub radiant: usize,
    pub circles: Vec<CircleEntry>,
    /// Parameters whose focal circle degenerates to a line.
    pub at_infinity: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CuspEntry {
    pub radiant: usize,
    pub component: usize,
    pub t: f64,
    pub point: Xy,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoteEntry {
    pub radiant: usize,
    pub t: f64,
    pub point: Xy,
    pub direction: Xy,
    /// Component ids on either side.
    pub between: [Option<usize>; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceEntry {
    pub radiant: usize,
    pub omega: f64,
    pub point: Xy,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameEntry {
    pub s: f64,
    pub t: f64,
    pub center: Xy,
    #[serde(rename = "R")]
    pub radius: f64,
    pub omega: f64,
    pub contact: Xy,
    pub traces: Vec<TraceEntry>,
    pub beta_arclen: f64,
}

impl From<&RollingFrame> for FrameEntry {
    fn from(f: &RollingFrame) -> Self {
        FrameEntry {
            s: f.s,
            t: f.t,
            center: Xy(f.center),
            radius: f.radius,
            omega: f.omega,
            contact: Xy(f.contact),
            traces: f
                .traces
                .iter()
                .map(|tp| TraceEntry {
                    radiant: tp.radiant,
                    omega: tp.omega,
                    point: Xy(tp.point),
                })
                .collect(),
            beta_arclen: f.beta_arclen,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NoSlipRow {
    pub radiant: usize,
    pub t: f64,
    pub point: Xy,
    pub gap: f64,
    pub velocity: f64,
}

impl From<&NoSlipEntry> for NoSlipRow {
    fn from(e: &NoSlipEntry) -> Self {
        NoSlipRow {
            radiant: e.radiant,
            t: e.t,
            point: Xy(e.point),
            gap: e.gap,
            velocity: e.velocity,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Layers {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<TPoint>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<RadiantSeries>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caustic: Option<Vec<CausticEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub focal_circles: Option<Vec<FocalCircleSeries>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discriminant_circles: Option<Vec<CircleEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rolling_frames: Option<Vec<FrameEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub no_slip: Option<Vec<NoSlipRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cusps: Option<Vec<CuspEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asymptotes: Option<Vec<AsymptoteEntry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Payload {
    pub curve: String,
    pub grid: Grid,
    pub radiants: Vec<RadiantDoc>,
    pub layers: Layers,
}

impl Payload {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("payload serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("payload serializes")
    }
}

/// Run every computation the scene's output list asks for.
pub fn compute(scene: &Scene) -> Result<Payload, PayloadError> {
    let samples = &scene.sampled.samples;
    let tol = &scene.tolerances;
    let mut layers = Layers::default();

    if scene.wants(Layer::Alpha) {
        layers.alpha = Some(
            samples
                .iter()
                .map(|s| TPoint { t: s.t, point: Some(s.pos) })
                .collect(),
        );
    }

    if scene.wants(Layer::Beta) {
        layers.beta = Some(
            scene
                .radiants
                .iter()
                .enumerate()
                .map(|(i, r)| RadiantSeries {
                    radiant: i,
                    points: samples
                        .iter()
                        .map(|s| TPoint {
                            t: s.t,
                            point: envelope::beta_for_family(s, &CircleFamily::Focal(*r), tol)
                                .ok()
                                .map(|b| b.beta),
                        })
                        .collect(),
                })
                .collect(),
        );
    }

    let needs_trace = [Layer::Caustic, Layer::Cusps, Layer::Asymptotes]
        .iter()
        .any(|l| scene.wants(*l));
    let traces: Vec<CausticTrace> = if needs_trace {
        scene
            .radiants
            .iter()
            .map(|r| caustic::trace_caustic(&scene.curve, &scene.sampled, r, tol))
            .collect()
    } else {
        Vec::new()
    };

    if scene.wants(Layer::Caustic) {
        layers.caustic = Some(
            traces
                .iter()
                .enumerate()
                .map(|(i, tr)| CausticEntry {
                    radiant: i,
                    components: tr
                        .components
                        .iter()
                        .map(|c| ComponentEntry {
                            id: c.id,
                            closed: c.closed,
                            samples: c
                                .samples
                                .iter()
                                .map(|s| TPoint {
                                    t: s.t,
                                    point: s.point.finite(),
                                })
                                .collect(),
                        })
                        .collect(),
                    at_infinity: tr.undefined.iter().map(|s| s.t).collect(),
                })
                .collect(),
        );
    }

    if scene.wants(Layer::Cusps) {
        layers.cusps = Some(
            traces
                .iter()
                .enumerate()
                .flat_map(|(i, tr)| {
                    tr.cusps.iter().map(move |c| CuspEntry {
                        radiant: i,
                        component: c.component_id,
                        t: c.t,
                        point: Xy(c.point),
                    })
                })
                .collect(),
        );
    }

    if scene.wants(Layer::Asymptotes) {
        layers.asymptotes = Some(
            traces
                .iter()
                .enumerate()
                .flat_map(|(i, tr)| {
                    tr.asymptotes.iter().map(move |a| AsymptoteEntry {
                        radiant: i,
                        t: a.t,
                        point: Xy(a.line.point),
                        direction: Xy(a.line.direction),
                        between: [a.before, a.after],
                    })
                })
                .collect(),
        );
    }

    if scene.wants(Layer::FocalCircles) {
        layers.focal_circles = Some(
            scene
                .radiants
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let mut circles = Vec::new();
                    let mut at_infinity = Vec::new();
                    for s in samples {
                        match optics::focal_circle(s, r, tol) {
                            Ok(fc) => match (fc.center, fc.radius) {
                                (Some(c), Some(radius)) => circles.push(CircleEntry {
                                    t: s.t,
                                    center: Xy(c),
                                    radius,
                                }),
                                _ => at_infinity.push(s.t),
                            },
                            Err(_) => at_infinity.push(s.t),
                        }
                    }
                    FocalCircleSeries {
                        radiant: i,
                        circles,
                        at_infinity,
                    }
                })
                .collect(),
        );
    }

    if scene.wants(Layer::DiscriminantCircles) {
        layers.discriminant_circles = Some(
            samples
                .iter()
                .filter(|s| s.kappa.abs() >= tol.kappa_floor)
                .map(|s| {
                    let radius = 0.25 / s.kappa;
                    CircleEntry {
                        t: s.t,
                        center: Xy(s.pos + s.normal * radius),
                        radius,
                    }
                })
                .collect(),
        );
    }

    if scene.wants(Layer::RollingFrames) {
        let rolling = caustic::rolling_frames(&scene.sampled, &scene.radiants, tol)?;
        let report = caustic::no_slip_report(&scene.curve, &rolling, tol);
        layers.rolling_frames = Some(rolling.frames.iter().map(FrameEntry::from).collect());
        layers.no_slip = Some(report.iter().map(NoSlipRow::from).collect());
    }

    Ok(Payload {
        curve: scene.curve.to_string(),
        grid: scene.grid(),
        radiants: scene.document.radiants.clone(),
        layers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::load_scene;

    #[test]
    fn tpoint_serialization() {
        let a = TPoint { t: 0.5, point: Some(Vec2::new(1.0, -2.0)) };
        assert_eq!(serde_json::to_string(&a).unwrap(), "[0.5,1.0,-2.0]");
        let b = TPoint { t: 0.5, point: None };
        assert_eq!(
            serde_json::to_string(&b).unwrap(),
            r#"[0.5,"at_infinity","at_infinity"]"#
        );
    }

    #[test]
    fn coffee_cup_payload_matches_formula() {
        let scene = load_scene(
            r#"
            outputs = ["caustic", "cusps", "rolling_frames"]
            [curve]
            kind = "circle"
            [grid]
            n = 256
            [[radiant]]
            kind = "infinity"
            direction_deg = 180
            "#,
        )
        .unwrap();
        let p = compute(&scene).unwrap();
        let caustic = &p.layers.caustic.as_ref().unwrap()[0];
        assert_eq!(caustic.components.len(), 1);
        for s in &caustic.components[0].samples {
            let q = s.point.unwrap();
            let t = s.t;
            let want = Vec2::new(0.75 * t.cos() - 0.25 * (3.0 * t).cos(), 0.75 * t.sin() - 0.25 * (3.0 * t).sin());
            assert!(q.distance(want) < 1e-9);
        }
        assert_eq!(p.layers.cusps.as_ref().unwrap().len(), 2);
        assert_eq!(p.layers.rolling_frames.as_ref().unwrap().len(), 256);
        assert!(p.layers.alpha.is_none());
        let json = p.to_json();
        assert!(!json.contains("NaN") && !json.contains("inf,"));
        assert_eq!(json, compute(&scene).unwrap().to_json());
    }

    #[test]
    fn mixed_radiants_cannot_roll() {
        let scene = load_scene(
            r#"
            outputs = ["rolling_frames"]
            [curve]
            kind = "circle"
            [grid]
            n = 64
            [[radiant]]
            kind = "finite"
            x = 0.1
            y = 0.0
            [[radiant]]
            kind = "infinity"
            direction_deg = 0
            "#,
        )
        .unwrap();
        assert_eq!(
            compute(&scene),
            Err(PayloadError::Caustic(CausticError::MixedFamilies))
        );
    }
}
