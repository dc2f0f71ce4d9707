//! Caustic envelopes of plane mirror curves.
//!
//! Light from a radiant (a point source, possibly at infinity) reflected by a
//! smooth mirror curve α focuses, at each mirror point, on a circle tangent to
//! α: the focal circle. The family of focal circles has α as one envelope and a
//! second envelope β. The caustic is traced by a point on each focal circle as
//! the circles roll on β without slipping.
//!
//! The crate is organised bottom-up:
//!
//! * [`curve`]: regular plane curves, Frenet data, curvature, arc length.
//! * [`optics`]: reflection geometry, the mirror equation, focal circles.
//! * [`envelope`]: chord angle and the second envelope β.
//! * [`caustic`]: caustic components, cusps, rolling-circle frames.
//! * [`oracle`]: independent reference computations.
//! * [`scene`], [`payload`], [`svg`], [`verify`]: documents, output and checks.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x < y)` also rejects NaN

pub mod caustic;
pub mod curve;
pub mod envelope;
pub mod expr;
pub mod numeric;
pub mod oracle;
pub mod optics;
pub mod payload;
pub mod scene;
pub mod svg;
pub mod verify;
mod vec2;

pub use curve::{CatalogCurve, CurveError, CurveSample, Grid, ParametricCurve, SampledCurve};
pub use optics::{Radiant, Tolerances};
pub use vec2::Vec2;
