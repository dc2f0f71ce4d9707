//! Regular plane curves: evaluation, Frenet data, curvature and arc length.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{parse_expression, EvalError, Expr, ParseError};
use crate::numeric::{self, wrap_angle};
use crate::vec2::Vec2;

/// Curvature magnitude below which curvature-dependent quantities are undefined.
pub const KAPPA_FLOOR: f64 = 1e-8;

/// Speed below which a parameter value is treated as a singular point.
const SPEED_FLOOR: f64 = 1e-10;

/// Closed curves must return to their start within this distance.
const CLOSURE_TOL: f64 = 1e-9;

const ARC_TOL: f64 = 1e-11;

/// Grids are refined at most to this many points while unwrapping γ.
const MAX_GRID_POINTS: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("parameter {t} lies outside the domain [{t_min}, {t_max}]")]
    OutOfDomain { t: f64, t_min: f64, t_max: f64 },
    #[error("derivative order {0} is not supported (maximum 3)")]
    OrderTooHigh(usize),
    #[error("curve is not regular at t = {t} (speed {speed:e})")]
    Irregular { t: f64, speed: f64 },
    #[error("arc length {s} is outside [0, {total}]")]
    ArcLengthOutOfRange { s: f64, total: f64 },
    #[error("curve marked closed but its endpoints differ by {gap:e}")]
    NotClosed { gap: f64 },
    #[error("invalid curve parameter: {0}")]
    InvalidParameter(String),
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("in {coordinate} coordinate: {source}")]
    Parse {
        coordinate: &'static str,
        source: ParseError,
    },
    #[error("evaluation failed at t = {t}: {source}")]
    Eval { t: f64, source: EvalError },
}

/// Named curves with closed-form derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CatalogCurve {
    /// ⟨ρ cos t, ρ sin t⟩
    Circle { radius: f64 },
    /// ⟨a cos t, b sin t⟩
    Ellipse { a: f64, b: f64 },
    /// ⟨t, b t²⟩
    Parabola { b: f64 },
    /// ⟨2cos t + cos 2t, 2sin t − sin 2t⟩
    Deltoid,
    /// Involute of the unit circle, ⟨cos t + t sin t, sin t − t cos t⟩
    Involute,
}

impl CatalogCurve {
    pub fn name(&self) -> &'static str {
        match self {
            CatalogCurve::Circle { .. } => "circle",
            CatalogCurve::Ellipse { .. } => "ellipse",
            CatalogCurve::Parabola { .. } => "parabola",
            CatalogCurve::Deltoid => "deltoid",
            CatalogCurve::Involute => "involute",
        }
    }

    pub fn default_domain(&self) -> (f64, f64) {
        match self {
            CatalogCurve::Parabola { .. } => (-3.0, 3.0),
            CatalogCurve::Involute => (0.5, 6.0),
            _ => (0.0, TAU),
        }
    }

    pub fn is_closed(&self) -> bool {
        !matches!(self, CatalogCurve::Parabola { .. } | CatalogCurve::Involute)
    }

    fn derivative(&self, t: f64, order: usize) -> Vec2 {
        let (s, c) = t.sin_cos();
        match *self {
            CatalogCurve::Circle { radius: r } => match order {
                0 => Vec2::new(r * c, r * s),
                1 => Vec2::new(-r * s, r * c),
                2 => Vec2::new(-r * c, -r * s),
                _ => Vec2::new(r * s, -r * c),
            },
            CatalogCurve::Ellipse { a, b } => match order {
                0 => Vec2::new(a * c, b * s),
                1 => Vec2::new(-a * s, b * c),
                2 => Vec2::new(-a * c, -b * s),
                _ => Vec2::new(a * s, -b * c),
            },
            CatalogCurve::Parabola { b } => match order {
                0 => Vec2::new(t, b * t * t),
                1 => Vec2::new(1.0, 2.0 * b * t),
                2 => Vec2::new(0.0, 2.0 * b),
                _ => Vec2::ZERO,
            },
            CatalogCurve::Deltoid => {
                let (s2, c2) = (2.0 * t).sin_cos();
                match order {
                    0 => Vec2::new(2.0 * c + c2, 2.0 * s - s2),
                    1 => Vec2::new(-2.0 * s - 2.0 * s2, 2.0 * c - 2.0 * c2),
                    2 => Vec2::new(-2.0 * c - 4.0 * c2, -2.0 * s + 4.0 * s2),
                    _ => Vec2::new(2.0 * s + 8.0 * s2, -2.0 * c + 8.0 * c2),
                }
            }
            CatalogCurve::Involute => match order {
                0 => Vec2::new(c + t * s, s - t * c),
                1 => Vec2::new(t * c, t * s),
                2 => Vec2::new(c - t * s, s + t * c),
                _ => Vec2::new(-2.0 * s - t * c, 2.0 * c - t * s),
            },
        }
    }

    pub fn validate(&self) -> Result<(), CurveError> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(CurveError::InvalidParameter(format!("{name} must be positive, got {v}")))
            }
        };
        match *self {
            CatalogCurve::Circle { radius } => positive("radius", radius),
            CatalogCurve::Ellipse { a, b } => positive("a", a).and(positive("b", b)),
            CatalogCurve::Parabola { b } if b.is_finite() && b != 0.0 => Ok(()),
            CatalogCurve::Parabola { b } => Err(CurveError::InvalidParameter(format!(
                "parabola coefficient must be non-zero, got {b}"
            ))),
            CatalogCurve::Deltoid | CatalogCurve::Involute => Ok(()),
        }
    }
}

/// A curve given by one expression per coordinate; derivatives are obtained
/// symbolically.
#[derive(Clone, Debug)]
pub struct ExpressionCurve {
    pub x_text: String,
    pub y_text: String,
    /// Position and derivatives of orders 1–3, per coordinate.
    x: [Expr; 4],
    y: [Expr; 4],
}

impl ExpressionCurve {
    pub fn parse(x_text: &str, y_text: &str) -> Result<Self, CurveError> {
        let x = parse_expression(x_text).map_err(|source| CurveError::Parse {
            coordinate: "x",
            source,
        })?;
        let y = parse_expression(y_text).map_err(|source| CurveError::Parse {
            coordinate: "y",
            source,
        })?;
        let tower = |e: Expr| {
            let d1 = e.derivative();
            let d2 = d1.derivative();
            let d3 = d2.derivative();
            [e, d1, d2, d3]
        };
        Ok(ExpressionCurve {
            x_text: x_text.to_string(),
            y_text: y_text.to_string(),
            x: tower(x),
            y: tower(y),
        })
    }

    fn derivative(&self, t: f64, order: usize) -> Result<Vec2, CurveError> {
        let ev = |e: &Expr| e.eval(t).map_err(|source| CurveError::Eval { t, source });
        Ok(Vec2::new(ev(&self.x[order])?, ev(&self.y[order])?))
    }
}

#[derive(Clone, Debug)]
pub enum CurveSource {
    Catalog(CatalogCurve),
    Expression(Box<ExpressionCurve>),
}

/// An immutable regular plane curve on a closed parameter interval.
#[derive(Clone, Debug)]
pub struct ParametricCurve {
    source: CurveSource,
    t_min: f64,
    t_max: f64,
    closed: bool,
    analytic: bool,
    kappa_floor: f64,
}

/// Frenet data of a curve at one parameter value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurveSample {
    pub t: f64,
    /// Arc length from the start of the domain.
    pub s: f64,
    pub pos: Vec2,
    /// Unit tangent.
    pub tangent: Vec2,
    /// Unit normal, the tangent rotated by +π/2.
    pub normal: Vec2,
    /// Signed curvature, positive when the curve bends toward `normal`.
    pub kappa: f64,
    /// dκ/ds.
    pub kappa_s: f64,
    /// Direction angle of the tangent.
    pub gamma: f64,
    /// −κ′(s)/(3κ²); `None` on flat samples.
    pub aberrancy: Option<f64>,
    /// ‖α′(t)‖.
    pub speed: f64,
}

impl CurveSample {
    pub fn is_flat(&self) -> bool {
        self.aberrancy.is_none()
    }
}

/// Uniform parameter grid request.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub t_min: f64,
    pub t_max: f64,
    pub n: usize,
}

/// A curve sampled on a grid, with unwrapped γ and accumulated arc length.
#[derive(Clone, Debug)]
pub struct SampledCurve {
    pub grid: Grid,
    pub samples: Vec<CurveSample>,
    /// The grid covers a whole period of a closed curve (cell-centred points,
    /// last sample adjacent to the first).
    pub periodic: bool,
    /// Grid steps `i → i+1` (mod n when periodic) that straddle a cusp of the curve.
    pub cusp_steps: Vec<usize>,
}

impl ParametricCurve {
    fn from_catalog(kind: CatalogCurve) -> Self {
        let (t_min, t_max) = kind.default_domain();
        ParametricCurve {
            closed: kind.is_closed(),
            source: CurveSource::Catalog(kind),
            t_min,
            t_max,
            analytic: true,
            kappa_floor: KAPPA_FLOOR,
        }
    }

    pub fn catalog(kind: CatalogCurve) -> Result<Self, CurveError> {
        kind.validate()?;
        Ok(Self::from_catalog(kind))
    }

    pub fn circle(radius: f64) -> Self {
        Self::from_catalog(CatalogCurve::Circle { radius })
    }

    pub fn unit_circle() -> Self {
        Self::circle(1.0)
    }

    pub fn ellipse(a: f64, b: f64) -> Self {
        Self::from_catalog(CatalogCurve::Ellipse { a, b })
    }

    pub fn parabola(b: f64) -> Self {
        Self::from_catalog(CatalogCurve::Parabola { b })
    }

    pub fn deltoid() -> Self {
        Self::from_catalog(CatalogCurve::Deltoid)
    }

    pub fn involute() -> Self {
        Self::from_catalog(CatalogCurve::Involute)
    }

    /// Expression-defined curve on `[t_min, t_max]`.
    pub fn expression(
        x: &str,
        y: &str,
        t_min: f64,
        t_max: f64,
        closed: bool,
    ) -> Result<Self, CurveError> {
        if !(t_min.is_finite() && t_max.is_finite() && t_min < t_max) {
            return Err(CurveError::InvalidParameter(format!(
                "domain [{t_min}, {t_max}] is empty"
            )));
        }
        let curve = ParametricCurve {
            source: CurveSource::Expression(Box::new(ExpressionCurve::parse(x, y)?)),
            t_min,
            t_max,
            closed,
            analytic: true,
            kappa_floor: KAPPA_FLOOR,
        };
        if closed {
            let gap = curve.raw(t_min, 0)?.distance(curve.raw(t_max, 0)?);
            if !(gap < CLOSURE_TOL) {
                return Err(CurveError::NotClosed { gap });
            }
        }
        Ok(curve)
    }

    /// Restrict an open curve to a new parameter interval.
    pub fn with_domain(mut self, t_min: f64, t_max: f64) -> Result<Self, CurveError> {
        if self.closed {
            return Err(CurveError::InvalidParameter(
                "the domain of a closed curve is one period".into(),
            ));
        }
        if !(t_min.is_finite() && t_max.is_finite() && t_min < t_max) {
            return Err(CurveError::InvalidParameter(format!(
                "domain [{t_min}, {t_max}] is empty"
            )));
        }
        self.t_min = t_min;
        self.t_max = t_max;
        Ok(self)
    }

    /// Use finite differences even where analytic derivatives exist.
    pub fn finite_differences(mut self) -> Self {
        self.analytic = false;
        self
    }

    pub fn with_kappa_floor(mut self, floor: f64) -> Self {
        self.kappa_floor = floor;
        self
    }

    pub fn source(&self) -> &CurveSource {
        &self.source
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.t_min, self.t_max)
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn kappa_floor(&self) -> f64 {
        self.kappa_floor
    }

    pub fn period(&self) -> Option<f64> {
        self.closed.then_some(self.t_max - self.t_min)
    }

    fn reduce(&self, t: f64) -> Result<f64, CurveError> {
        if !t.is_finite() {
            return Err(self.out_of_domain(t));
        }
        if self.closed {
            let p = self.t_max - self.t_min;
            return Ok(self.t_min + (t - self.t_min).rem_euclid(p));
        }
        let slack = 1e-12 * (1.0 + self.t_min.abs().max(self.t_max.abs()));
        if t < self.t_min - slack || t > self.t_max + slack {
            return Err(self.out_of_domain(t));
        }
        Ok(t.clamp(self.t_min, self.t_max))
    }

    fn out_of_domain(&self, t: f64) -> CurveError {
        CurveError::OutOfDomain {
            t,
            t_min: self.t_min,
            t_max: self.t_max,
        }
    }

    /// Exact derivative of the underlying map, ignoring the domain.
    fn raw(&self, t: f64, order: usize) -> Result<Vec2, CurveError> {
        match &self.source {
            CurveSource::Catalog(c) => Ok(c.derivative(t, order)),
            CurveSource::Expression(e) => e.derivative(t, order),
        }
    }

    fn position_unchecked(&self, t: f64) -> Vec2 {
        // NaN propagates into the stencils and is caught by the regularity checks
        self.raw(t, 0).unwrap_or(Vec2::new(f64::NAN, f64::NAN))
    }

    /// Finite-difference derivative of the position map.
    pub fn fd_derivative(&self, t: f64, order: usize) -> Vec2 {
        let scale = t.abs().max(1.0);
        let f = |x: f64| self.position_unchecked(x);
        match order {
            0 => f(t),
            1 => numeric::diff1(f, t, 1e-3 * scale),
            2 => numeric::diff2(f, t, 1e-3 * scale),
            _ => numeric::diff3(f, t, 5e-3 * scale),
        }
    }

    fn derivative_unchecked(&self, t: f64, order: usize) -> Result<Vec2, CurveError> {
        if self.analytic || order == 0 {
            self.raw(t, order)
        } else {
            let v = self.fd_derivative(t, order);
            if v.is_finite() {
                Ok(v)
            } else {
                // surface the evaluation error from the offending stencil point
                self.raw(t, 0)?;
                Err(CurveError::Irregular { t, speed: f64::NAN })
            }
        }
    }

    /// Position and derivatives up to `order` (with respect to t).
    pub fn evaluate(&self, t: f64, order: usize) -> Result<Vec<Vec2>, CurveError> {
        if order > 3 {
            return Err(CurveError::OrderTooHigh(order));
        }
        let t = self.reduce(t)?;
        (0..=order).map(|k| self.derivative_unchecked(t, k)).collect()
    }

    pub fn position(&self, t: f64) -> Result<Vec2, CurveError> {
        let t = self.reduce(t)?;
        self.raw(t, 0)
    }

    pub fn speed(&self, t: f64) -> Result<f64, CurveError> {
        let t = self.reduce(t)?;
        Ok(self.derivative_unchecked(t, 1)?.norm())
    }

    /// Frenet data at `t` with a caller-supplied arc-length value.
    pub(crate) fn frame_at(&self, t: f64, s: f64) -> Result<CurveSample, CurveError> {
        let t = self.reduce(t)?;
        let pos = self.raw(t, 0)?;
        let d1 = self.derivative_unchecked(t, 1)?;
        let d2 = self.derivative_unchecked(t, 2)?;
        let d3 = self.derivative_unchecked(t, 3)?;
        let speed = d1.norm();
        if !(speed > SPEED_FLOOR) {
            return Err(CurveError::Irregular { t, speed });
        }
        let tangent = d1 / speed;
        let normal = tangent.perp();
        let cross12 = d1.cross(d2);
        let speed2 = speed * speed;
        let kappa = cross12 / (speed2 * speed);
        let dkappa_dt =
            (d1.cross(d3) * speed2 - 3.0 * cross12 * d1.dot(d2)) / (speed2 * speed2 * speed);
        let kappa_s = dkappa_dt / speed;
        let aberrancy =
            (kappa.abs() >= self.kappa_floor).then(|| -kappa_s / (3.0 * kappa * kappa));
        Ok(CurveSample {
            t,
            s,
            pos,
            tangent,
            normal,
            kappa,
            kappa_s,
            gamma: tangent.angle(),
            aberrancy,
            speed,
        })
    }

    /// Frenet data at `t`, including arc length from the domain start.
    pub fn frenet_sample(&self, t: f64) -> Result<CurveSample, CurveError> {
        let t = self.reduce(t)?;
        let s = self.arc_length(self.t_min, t)?;
        self.frame_at(t, s)
    }

    fn speed_integral(&self, a: f64, b: f64) -> f64 {
        numeric::integrate(
            |x| {
                self.derivative_unchecked(x, 1)
                    .map(Vec2::norm)
                    .unwrap_or(f64::NAN)
            },
            a,
            b,
            ARC_TOL,
        )
    }

    /// Arc length between two parameters of the domain.
    pub fn arc_length(&self, t0: f64, t1: f64) -> Result<f64, CurveError> {
        for t in [t0, t1] {
            if !(t >= self.t_min - 1e-12 && t <= self.t_max + 1e-12) {
                return Err(self.out_of_domain(t));
            }
        }
        if t0 > t1 {
            return Err(CurveError::InvalidParameter(format!(
                "arc length needs t0 <= t1, got {t0} > {t1}"
            )));
        }
        let value = self.speed_integral(t0, t1);
        if value.is_finite() {
            Ok(value)
        } else {
            self.raw(t0, 0)?;
            self.raw(t1, 0)?;
            Err(CurveError::Irregular {
                t: t0,
                speed: f64::NAN,
            })
        }
    }

    pub fn total_length(&self) -> Result<f64, CurveError> {
        self.arc_length(self.t_min, self.t_max)
    }

    /// Parameter at arc length `s` from the domain start.
    pub fn t_at_arclength(&self, s: f64) -> Result<f64, CurveError> {
        let total = self.total_length()?;
        if !(s >= -1e-12 && s <= total + 1e-12) {
            return Err(CurveError::ArcLengthOutOfRange { s, total });
        }
        if s <= 0.0 {
            return Ok(self.t_min);
        }
        if s >= total {
            return Ok(self.t_max);
        }
        let (mut lo, mut hi) = (self.t_min, self.t_max);
        let mut t = self.t_min + (self.t_max - self.t_min) * s / total;
        let mut residual = self.speed_integral(self.t_min, t) - s;
        for _ in 0..100 {
            if residual.abs() < 1e-12 {
                break;
            }
            if residual > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let speed = self.derivative_unchecked(t, 1)?.norm();
            let mut next = t - residual / speed;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            residual += if next > t {
                self.speed_integral(t, next)
            } else {
                -self.speed_integral(next, t)
            };
            t = next;
            if hi - lo < 4.0 * f64::EPSILON * (1.0 + t.abs()) {
                break;
            }
        }
        Ok(t)
    }

    fn grid_params(&self, grid: &Grid, periodic: bool) -> Vec<f64> {
        let span = grid.t_max - grid.t_min;
        if periodic {
            let h = span / grid.n as f64;
            (0..grid.n)
                .map(|i| grid.t_min + (i as f64 + 0.5) * h)
                .collect()
        } else {
            let h = span / (grid.n - 1) as f64;
            (0..grid.n).map(|i| grid.t_min + i as f64 * h).collect()
        }
    }

    /// Whether `grid` spans exactly one period of this (closed) curve.
    pub fn grid_is_periodic(&self, grid: &Grid) -> bool {
        self.closed
            && ((grid.t_max - grid.t_min) - (self.t_max - self.t_min)).abs()
                < 1e-12 * (1.0 + (self.t_max - self.t_min).abs())
    }

    /// Whether the tangent reversal between two samples is a cusp: bisecting
    /// toward the larger turn never splits it below π/2.
    fn step_has_cusp(&self, a: &CurveSample, b: &CurveSample) -> bool {
        if a.tangent.dot(b.tangent) >= 0.0 {
            return false;
        }
        let (mut ta, mut tb) = (a.t, b.t);
        if tb < ta {
            tb += self.period().unwrap_or(0.0);
        }
        let (mut ga, mut gb) = (a.gamma, b.gamma);
        for _ in 0..60 {
            let tm = 0.5 * (ta + tb);
            if tm <= ta || tm >= tb {
                break;
            }
            let Ok(m) = self.frame_at(tm, 0.0) else { return true };
            let (left, right) = (wrap_angle(m.gamma - ga).abs(), wrap_angle(gb - m.gamma).abs());
            if left.max(right) < FRAC_PI_2 {
                return false;
            }
            if left >= right {
                tb = tm;
                gb = m.gamma;
            } else {
                ta = tm;
                ga = m.gamma;
            }
        }
        true
    }

    /// Sample the curve on `grid`, refining until consecutive tangent
    /// directions differ by less than π/2 (steps across a cusp excepted).
    pub fn sample_grid(&self, grid: Grid) -> Result<SampledCurve, CurveError> {
        if grid.n < 16 {
            return Err(CurveError::GridTooCoarse(format!(
                "n = {} (at least 16 points required)",
                grid.n
            )));
        }
        if !(grid.t_min < grid.t_max) {
            return Err(CurveError::InvalidParameter(format!(
                "grid interval [{}, {}] is empty",
                grid.t_min, grid.t_max
            )));
        }
        let periodic = self.grid_is_periodic(&grid);
        if !periodic {
            self.reduce(grid.t_min)?;
            self.reduce(grid.t_max)?;
        }
        let mut grid = grid;
        loop {
            let ts = self.grid_params(&grid, periodic);
            let mut frames = Vec::with_capacity(ts.len());
            for &t in &ts {
                frames.push(self.frame_at(t, 0.0)?);
            }
            let mut bad = false;
            let mut cusp_steps = Vec::new();
            let steps = if periodic { frames.len() } else { frames.len() - 1 };
            for i in 0..steps {
                let (a, b) = (&frames[i], &frames[(i + 1) % frames.len()]);
                if wrap_angle(b.gamma - a.gamma).abs() < FRAC_PI_2 {
                    continue;
                }
                if self.step_has_cusp(a, b) {
                    cusp_steps.push(i);
                } else {
                    bad = true;
                }
            }
            if bad {
                if grid.n * 2 > MAX_GRID_POINTS {
                    return Err(CurveError::GridTooCoarse(format!(
                        "tangent direction still jumps by more than π/2 at n = {}",
                        grid.n
                    )));
                }
                grid.n *= 2;
                continue;
            }
            let mut s = self.speed_integral(self.t_min, ts[0]);
            let raw_gamma: Vec<f64> = frames.iter().map(|f| f.gamma).collect();
            let gammas = numeric::unwrap_angles(&raw_gamma);
            for i in 0..frames.len() {
                if i > 0 {
                    s += self.speed_integral(ts[i - 1], ts[i]);
                }
                frames[i].s = s;
                frames[i].gamma = gammas[i];
            }
            return Ok(SampledCurve {
                grid,
                samples: frames,
                periodic,
                cusp_steps,
            });
        }
    }
}

impl fmt::Display for ParametricCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            CurveSource::Catalog(c) => write!(f, "{}", c.name()),
            CurveSource::Expression(e) => write!(f, "⟨{}, {}⟩", e.x_text, e.y_text),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn evaluate_examples() {
        let c = ParametricCurve::unit_circle();
        let v = c.evaluate(0.0, 1).unwrap();
        assert_eq!(v[0], Vec2::new(1.0, 0.0));
        assert_eq!(v[1], Vec2::new(0.0, 1.0));

        let p = ParametricCurve::parabola(1.0);
        let v = p.evaluate(1.0, 2).unwrap();
        assert_eq!(v[2], Vec2::new(0.0, 2.0));
    }

    #[test]
    fn evaluate_errors() {
        let p = ParametricCurve::parabola(1.0);
        assert!(matches!(p.evaluate(3.5, 1), Err(CurveError::OutOfDomain { .. })));
        assert!(matches!(p.evaluate(0.0, 4), Err(CurveError::OrderTooHigh(4))));
        // closed curves wrap
        let c = ParametricCurve::unit_circle();
        let a = c.position(0.3).unwrap();
        let b = c.position(0.3 + 3.0 * TAU).unwrap();
        assert!(a.distance(b) < 1e-12);
    }

    #[test]
    fn frenet_examples() {
        let c = ParametricCurve::unit_circle();
        for &t in &[0.0, 1.0, 4.0] {
            let s = c.frenet_sample(t).unwrap();
            assert!((s.kappa - 1.0).abs() < 1e-14);
            assert!(s.kappa_s.abs() < 1e-14);
            assert!(s.aberrancy.unwrap().abs() < 1e-14);
        }
        let p = ParametricCurve::parabola(1.0);
        let s = p.frenet_sample(0.5).unwrap();
        assert!((s.aberrancy.unwrap() - 1.0).abs() < 1e-12);

        let inv = ParametricCurve::involute();
        let s = inv.frenet_sample(2.0).unwrap();
        assert!((s.kappa - 0.5).abs() < 1e-13);
        assert!((s.aberrancy.unwrap() - 1.0 / 6.0).abs() < 1e-13);
    }

    #[test]
    fn orientation_flips_curvature_sign() {
        let cw = ParametricCurve::expression("cos(t)", "-sin(t)", 0.0, TAU, true).unwrap();
        let s = cw.frenet_sample(0.7).unwrap();
        assert!((s.kappa + 1.0).abs() < 1e-14);
        assert!(s.aberrancy.unwrap().abs() < 1e-14);
    }

    #[test]
    fn flat_samples_have_no_aberrancy() {
        let line = ParametricCurve::expression("t", "0", 0.0, 3.0, false).unwrap();
        let s = line.frenet_sample(1.0).unwrap();
        assert_eq!(s.kappa, 0.0);
        assert!(s.is_flat());
        let cubic = ParametricCurve::expression("t", "t^3", -1.0, 1.0, false).unwrap();
        assert!(cubic.frenet_sample(0.0).unwrap().is_flat());
        assert!(!cubic.frenet_sample(0.5).unwrap().is_flat());
    }

    #[test]
    fn arc_length_examples() {
        let c = ParametricCurve::unit_circle();
        assert!((c.arc_length(0.0, PI).unwrap() - PI).abs() < 1e-10);
        let seg = ParametricCurve::expression("t", "0", 0.0, 3.0, false).unwrap();
        assert!((seg.arc_length(0.0, 3.0).unwrap() - 3.0).abs() < 1e-12);
        assert!(c.arc_length(1.0, 0.5).is_err());
        assert!(seg.arc_length(0.0, 4.0).is_err());
    }

    #[test]
    fn inverse_arc_length_examples() {
        let c = ParametricCurve::unit_circle();
        assert!((c.t_at_arclength(PI / 2.0).unwrap() - PI / 2.0).abs() < 1e-10);
        assert_eq!(c.t_at_arclength(0.0).unwrap(), 0.0);
        let p = ParametricCurve::parabola(1.0);
        assert_eq!(p.t_at_arclength(0.0).unwrap(), -3.0);
        assert!(matches!(
            c.t_at_arclength(7.0),
            Err(CurveError::ArcLengthOutOfRange { .. })
        ));
    }

    #[test]
    fn closed_expression_must_close() {
        let err = ParametricCurve::expression("cos(t)", "sin(t)", 0.0, 3.0, true).unwrap_err();
        assert!(matches!(err, CurveError::NotClosed { .. }));
    }

    #[test]
    fn grid_rejects_coarse_and_singular() {
        let c = ParametricCurve::unit_circle();
        let g = Grid {
            t_min: 0.0,
            t_max: TAU,
            n: 4,
        };
        assert!(matches!(c.sample_grid(g), Err(CurveError::GridTooCoarse(_))));
        let cusp = ParametricCurve::expression("t^2", "t^3", -1.0, 1.0, false).unwrap();
        let g = Grid {
            t_min: -1.0,
            t_max: 1.0,
            n: 17,
        };
        assert!(matches!(cusp.sample_grid(g), Err(CurveError::Irregular { .. })));
    }

    #[test]
    fn grid_is_refined_until_tangent_turns_slowly() {
        // a tight circle sampled by 16 points over 8 turns needs refinement
        let c = ParametricCurve::expression("cos(8*t)", "sin(8*t)", 0.0, TAU, true).unwrap();
        let sampled = c
            .sample_grid(Grid {
                t_min: 0.0,
                t_max: TAU,
                n: 16,
            })
            .unwrap();
        assert!(sampled.grid.n >= 64);
        for w in sampled.samples.windows(2) {
            assert!((w[1].gamma - w[0].gamma).abs() < FRAC_PI_2);
        }
        let n = sampled.grid.n as f64;
        let turned = sampled.samples.last().unwrap().gamma - sampled.samples[0].gamma;
        assert!((turned - 8.0 * TAU * (n - 1.0) / n).abs() < 1e-9);
    }

    #[test]
    fn deltoid_grid_records_its_cusps() {
        let d = ParametricCurve::deltoid();
        let sampled = d
            .sample_grid(Grid {
                t_min: 0.0,
                t_max: TAU,
                n: 300,
            })
            .unwrap();
        assert!(sampled.periodic);
        assert_eq!(sampled.cusp_steps.len(), 3, "cusps at 0, 2π/3 and 4π/3");
        assert!((sampled.samples.last().unwrap().s - 16.0 + sampled.samples[0].s).abs() < 0.1);
    }
}
