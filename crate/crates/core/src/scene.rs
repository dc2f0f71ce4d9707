//! Scene documents: a curve, one or more radiants, a grid and the requested
//! output layers.
//!
//! Documents are TOML (or the same structure as JSON). Angles are in degrees.
//!
//! ```toml
//! outputs = ["alpha", "beta", "caustic", "cusps"]
//!
//! [curve]
//! kind = "circle"
//! radius = 1.0
//!
//! [grid]
//! n = 1024
//!
//! [[radiant]]
//! kind = "infinity"
//! direction_deg = 180.0
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{CatalogCurve, CurveError, Grid, ParametricCurve, SampledCurve};
use crate::optics::{Radiant, Tolerances};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SceneError {
    #[error("invalid scene document: {0}")]
    Document(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("scene has no radiants")]
    NoRadiants,
    #[error("invalid radiant {index}: {reason}")]
    Radiant { index: usize, reason: String },
}

fn one() -> f64 {
    1.0
}

fn default_n() -> usize {
    1024
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveDoc {
    Circle {
        #[serde(default = "one")]
        radius: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
    },
    Parabola {
        #[serde(default = "one")]
        b: f64,
    },
    Deltoid,
    Involute,
    Expression {
        x: String,
        y: String,
        t_min: f64,
        t_max: f64,
        #[serde(default)]
        closed: bool,
    },
}

impl CurveDoc {
    pub fn build(&self) -> Result<ParametricCurve, CurveError> {
        match self {
            CurveDoc::Circle { radius } => ParametricCurve::catalog(CatalogCurve::Circle { radius: *radius }),
            CurveDoc::Ellipse { a, b } => ParametricCurve::catalog(CatalogCurve::Ellipse { a: *a, b: *b }),
            CurveDoc::Parabola { b } => ParametricCurve::catalog(CatalogCurve::Parabola { b: *b }),
            CurveDoc::Deltoid => ParametricCurve::catalog(CatalogCurve::Deltoid),
            CurveDoc::Involute => ParametricCurve::catalog(CatalogCurve::Involute),
            CurveDoc::Expression {
                x,
                y,
                t_min,
                t_max,
                closed,
            } => ParametricCurve::expression(x, y, *t_min, *t_max, *closed),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    #[serde(default = "default_n")]
    pub n: usize,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
}

impl Default for GridDoc {
    fn default() -> Self {
        GridDoc {
            n: default_n(),
            t_min: None,
            t_max: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RadiantDoc {
    /// Direction from the mirror toward the source, in degrees.
    Infinity { direction_deg: f64 },
    Finite { x: f64, y: f64 },
}

impl RadiantDoc {
    pub fn to_radiant(self) -> Radiant {
        match self {
            RadiantDoc::Infinity { direction_deg } => Radiant::at_infinity_degrees(direction_deg),
            RadiantDoc::Finite { x, y } => Radiant::finite(x, y),
        }
    }

    fn is_finite(&self) -> bool {
        match *self {
            RadiantDoc::Infinity { direction_deg } => direction_deg.is_finite(),
            RadiantDoc::Finite { x, y } => x.is_finite() && y.is_finite(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct TolerancesDoc {
    pub kappa_floor: Option<f64>,
    pub u_floor: Option<f64>,
}

/// Output layers a scene may request.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    Alpha,
    Beta,
    Caustic,
    FocalCircles,
    DiscriminantCircles,
    RollingFrames,
    Cusps,
    Asymptotes,
}

impl Layer {
    pub const ALL: [Layer; 8] = [
        Layer::Alpha,
        Layer::Beta,
        Layer::Caustic,
        Layer::FocalCircles,
        Layer::DiscriminantCircles,
        Layer::RollingFrames,
        Layer::Cusps,
        Layer::Asymptotes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Layer::Alpha => "alpha",
            Layer::Beta => "beta",
            Layer::Caustic => "caustic",
            Layer::FocalCircles => "focal_circles",
            Layer::DiscriminantCircles => "discriminant_circles",
            Layer::RollingFrames => "rolling_frames",
            Layer::Cusps => "cusps",
            Layer::Asymptotes => "asymptotes",
        }
    }
}

fn default_outputs() -> Vec<Layer> {
    vec![Layer::Alpha, Layer::Beta, Layer::Caustic, Layer::Cusps, Layer::Asymptotes]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneDocument {
    pub curve: CurveDoc,
    #[serde(default)]
    pub grid: GridDoc,
    #[serde(rename = "radiant", alias = "radiants", default)]
    pub radiants: Vec<RadiantDoc>,
    #[serde(default)]
    pub tolerances: TolerancesDoc,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<Layer>,
}

impl SceneDocument {
    pub fn from_toml(text: &str) -> Result<Self, SceneError> {
        toml::from_str(text).map_err(|e| SceneError::Document(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, SceneError> {
        serde_json::from_str(text).map_err(|e| SceneError::Document(e.to_string()))
    }

    /// JSON when the text starts with `{`, TOML otherwise.
    pub fn parse(text: &str) -> Result<Self, SceneError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_toml(text)
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scene documents serialize")
    }
}

/// A validated scene with its curve sampled on the (refined) grid.
#[derive(Clone, Debug)]
pub struct Scene {
    pub document: SceneDocument,
    pub curve: ParametricCurve,
    pub radiants: Vec<Radiant>,
    pub sampled: SampledCurve,
    pub tolerances: Tolerances,
    pub outputs: Vec<Layer>,
}

impl Scene {
    pub fn grid(&self) -> Grid {
        self.sampled.grid
    }

    pub fn wants(&self, layer: Layer) -> bool {
        self.outputs.contains(&layer)
    }
}

/// Validate a document: build the curve, check radiants and tolerances, and
/// sample the grid (refining until γ unwraps).
pub fn build_scene(document: SceneDocument) -> Result<Scene, SceneError> {
    if document.radiants.is_empty() {
        return Err(SceneError::NoRadiants);
    }
    for (index, r) in document.radiants.iter().enumerate() {
        if !r.is_finite() {
            return Err(SceneError::Radiant {
                index,
                reason: "coordinates must be finite".into(),
            });
        }
    }
    let mut tolerances = Tolerances::default();
    if let Some(k) = document.tolerances.kappa_floor {
        tolerances.kappa_floor = k;
    }
    if let Some(u) = document.tolerances.u_floor {
        tolerances.u_floor = u;
    }
    if !(tolerances.kappa_floor > 0.0 && tolerances.u_floor > 0.0) {
        return Err(SceneError::Document("tolerances must be positive".into()));
    }
    let curve = document.curve.build()?.with_kappa_floor(tolerances.kappa_floor);
    let (a, b) = curve.domain();
    let grid = Grid {
        t_min: document.grid.t_min.unwrap_or(a),
        t_max: document.grid.t_max.unwrap_or(b),
        n: document.grid.n,
    };
    let sampled = curve.sample_grid(grid)?;
    let radiants = document.radiants.iter().map(|r| r.to_radiant()).collect();
    let mut outputs = document.outputs.clone();
    outputs.sort();
    outputs.dedup();
    Ok(Scene {
        document,
        curve,
        radiants,
        sampled,
        tolerances,
        outputs,
    })
}

/// Parse and validate a scene document (TOML or JSON).
pub fn load_scene(text: &str) -> Result<Scene, SceneError> {
    build_scene(SceneDocument::parse(text)?)
}

/// A catalog entry as served to clients.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveDescriptor {
    pub kind: &'static str,
    pub formula: &'static str,
    pub parameters: Vec<ParameterDescriptor>,
    pub domain: [f64; 2],
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParameterDescriptor {
    pub name: &'static str,
    pub default: f64,
}

pub fn catalog_descriptors() -> Vec<CurveDescriptor> {
    let entry = |c: CatalogCurve, formula, parameters: Vec<(&'static str, f64)>| {
        let (a, b) = c.default_domain();
        CurveDescriptor {
            kind: c.name(),
            formula,
            parameters: parameters
                .into_iter()
                .map(|(name, default)| ParameterDescriptor { name, default })
                .collect(),
            domain: [a, b],
            closed: c.is_closed(),
        }
    };
    vec![
        entry(CatalogCurve::Circle { radius: 1.0 }, "(radius cos t, radius sin t)", vec![("radius", 1.0)]),
        entry(CatalogCurve::Ellipse { a: 2.0, b: 1.0 }, "(a cos t, b sin t)", vec![("a", 2.0), ("b", 1.0)]),
        entry(CatalogCurve::Parabola { b: 1.0 }, "(t, b t^2)", vec![("b", 1.0)]),
        entry(CatalogCurve::Deltoid, "(2 cos t + cos 2t, 2 sin t - sin 2t)", vec![]),
        entry(CatalogCurve::Involute, "(cos t + t sin t, sin t - t cos t)", vec![]),
    ]
}
