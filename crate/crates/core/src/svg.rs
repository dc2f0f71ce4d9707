//! SVG rendering of a geometry payload.
//!
//! Each layer becomes a `<g>` with the layer name as its id. The y axis is
//! flipped so that figures read with y pointing up. Geometry far outside the
//! mirror's neighbourhood (caustic branches running off to an asymptote) is
//! clipped to a window around the mirror.

use std::fmt::Write;

use thiserror::Error;

use crate::payload::{CircleEntry, Payload, TPoint};
use crate::vec2::Vec2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SvgError {
    #[error("no finite geometry to render")]
    NoFiniteGeometry,
    #[error("the caustic lies entirely at infinity")]
    CausticAtInfinity,
}

/// Most circles drawn per circle layer.
const MAX_CIRCLES: usize = 48;

const PALETTE: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Clone, Copy, Debug)]
struct Bounds {
    min: Vec2,
    max: Vec2,
}

impl Bounds {
    fn of(points: impl IntoIterator<Item = Vec2>) -> Option<Bounds> {
        let mut it = points.into_iter().filter(|p| p.is_finite());
        let first = it.next()?;
        let mut b = Bounds { min: first, max: first };
        for p in it {
            b.min = Vec2::new(b.min.x.min(p.x), b.min.y.min(p.y));
            b.max = Vec2::new(b.max.x.max(p.x), b.max.y.max(p.y));
        }
        Some(b)
    }

    fn contains(&self, p: Vec2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    fn grown(&self, factor: f64) -> Bounds {
        let c = (self.min + self.max) * 0.5;
        let half = (self.max - self.min) * (0.5 * factor);
        let half = Vec2::new(half.x.max(1e-9), half.y.max(1e-9));
        Bounds {
            min: Vec2::new(c.x - half.x, c.y - half.y),
            max: Vec2::new(c.x + half.x, c.y + half.y),
        }
    }

    fn diagonal(&self) -> f64 {
        self.min.distance(self.max)
    }
}

fn xy(p: Vec2) -> String {
    format!("{:.6},{:.6}", p.x, -p.y)
}

fn finite_points(series: &[TPoint]) -> impl Iterator<Item = Vec2> + '_ {
    series.iter().filter_map(|p| p.point)
}

/// Split a point series into runs that stay inside the window.
fn runs_inside(series: &[TPoint], window: &Bounds) -> Vec<Vec<Vec2>> {
    let mut runs = Vec::new();
    let mut current = Vec::new();
    for p in series {
        match p.point {
            Some(q) if window.contains(q) => current.push(q),
            _ => {
                if current.len() > 1 {
                    runs.push(std::mem::take(&mut current));
                }
                current.clear();
            }
        }
    }
    if current.len() > 1 {
        runs.push(current);
    }
    runs
}

fn polyline(out: &mut String, pts: &[Vec2], color: &str, width: f64, closed: bool) {
    let tag = if closed { "polygon" } else { "polyline" };
    let coords: Vec<String> = pts.iter().map(|&p| xy(p)).collect();
    let _ = writeln!(
        out,
        r#"    <{tag} points="{}" fill="none" stroke="{color}" stroke-width="{width:.6}"/>"#,
        coords.join(" ")
    );
}

fn circle(out: &mut String, c: Vec2, r: f64, stroke: &str, width: f64, fill: &str) {
    let _ = writeln!(
        out,
        r#"    <circle cx="{:.6}" cy="{:.6}" r="{:.6}" fill="{fill}" stroke="{stroke}" stroke-width="{width:.6}"/>"#,
        c.x,
        -c.y,
        r.abs()
    );
}

fn stride_of(len: usize) -> usize {
    len.div_ceil(MAX_CIRCLES).max(1)
}

fn circle_group(out: &mut String, id: &str, circles: &[&CircleEntry], color: &str, width: f64) {
    let _ = writeln!(out, r#"  <g id="{id}">"#);
    for c in circles.iter().step_by(stride_of(circles.len())) {
        circle(out, c.center.0, c.radius, color, width, "none");
    }
    out.push_str("  </g>\n");
}

/// Clip the line through `p` with direction `d` to the window.
fn clip_line(p: Vec2, d: Vec2, w: &Bounds) -> Option<(Vec2, Vec2)> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for (pc, dc, min, max) in [(p.x, d.x, w.min.x, w.max.x), (p.y, d.y, w.min.y, w.max.y)] {
        if dc.abs() < 1e-300 {
            if pc < min || pc > max {
                return None;
            }
        } else {
            let (a, b) = ((min - pc) / dc, (max - pc) / dc);
            lo = lo.max(a.min(b));
            hi = hi.min(a.max(b));
        }
    }
    (lo < hi).then(|| (p + d * lo, p + d * hi))
}

/// Render the payload's layers as an SVG 1.1 document.
pub fn render_svg(payload: &Payload) -> Result<String, SvgError> {
    let layers = &payload.layers;

    if let Some(caustic) = &layers.caustic {
        let any = caustic
            .iter()
            .flat_map(|c| c.components.iter())
            .any(|c| c.samples.iter().any(|s| s.point.is_some()));
        if !any {
            return Err(SvgError::CausticAtInfinity);
        }
    }

    let mut all: Vec<Vec2> = Vec::new();
    if let Some(a) = &layers.alpha {
        all.extend(finite_points(a));
    }
    let anchor = Bounds::of(all.iter().copied());
    if let Some(b) = &layers.beta {
        all.extend(b.iter().flat_map(|s| finite_points(&s.points)));
    }
    if let Some(c) = &layers.caustic {
        all.extend(
            c.iter()
                .flat_map(|e| e.components.iter())
                .flat_map(|comp| finite_points(&comp.samples)),
        );
    }
    if let Some(c) = &layers.cusps {
        all.extend(c.iter().map(|c| c.point.0));
    }
    if let Some(f) = &layers.rolling_frames {
        all.extend(f.iter().map(|f| f.contact.0));
    }
    let raw = Bounds::of(all.iter().copied()).ok_or(SvgError::NoFiniteGeometry)?;
    // keep the view near the mirror when branches run off to infinity
    let window = match anchor {
        Some(a) => a.grown(3.0),
        None => raw.grown(1.0),
    };
    let view = Bounds::of(all.iter().copied().filter(|p| window.contains(*p))).unwrap_or(window);
    let view = view.grown(1.1);
    let width = 0.002 * view.diagonal();

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
        view.min.x,
        -view.max.y,
        view.max.x - view.min.x,
        view.max.y - view.min.y
    );
    let _ = writeln!(out, "  <title>{}</title>", escape(&payload.curve));

    if let Some(circles) = &layers.discriminant_circles {
        let refs: Vec<&CircleEntry> = circles.iter().collect();
        circle_group(&mut out, "discriminant_circles", &refs, "#bbbbbb", 0.5 * width);
    }
    if let Some(series) = &layers.focal_circles {
        let refs: Vec<&CircleEntry> = series.iter().flat_map(|s| s.circles.iter()).collect();
        circle_group(&mut out, "focal_circles", &refs, "#9edae5", 0.5 * width);
    }
    if let Some(a) = &layers.alpha {
        out.push_str("  <g id=\"alpha\">\n");
        for run in runs_inside(a, &window) {
            polyline(&mut out, &run, "#000000", width, false);
        }
        out.push_str("  </g>\n");
    }
    if let Some(b) = &layers.beta {
        out.push_str("  <g id=\"beta\">\n");
        for s in b {
            for run in runs_inside(&s.points, &window) {
                polyline(&mut out, &run, "#7f7f7f", width, false);
            }
        }
        out.push_str("  </g>\n");
    }
    if let Some(c) = &layers.caustic {
        out.push_str("  <g id=\"caustic\">\n");
        for entry in c {
            let color = PALETTE[entry.radiant % PALETTE.len()];
            for comp in &entry.components {
                let runs = runs_inside(&comp.samples, &window);
                let whole = runs.len() == 1 && runs[0].len() == comp.samples.len();
                for run in runs {
                    polyline(&mut out, &run, color, width, comp.closed && whole);
                }
            }
        }
        out.push_str("  </g>\n");
    }
    if let Some(a) = &layers.asymptotes {
        out.push_str("  <g id=\"asymptotes\">\n");
        for entry in a {
            if let Some((p, q)) = clip_line(entry.point.0, entry.direction.0, &view) {
                let _ = writeln!(
                    out,
                    r##"    <line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}" stroke="#555555" stroke-width="{width:.6}" stroke-dasharray="{:.6},{:.6}"/>"##,
                    p.x,
                    -p.y,
                    q.x,
                    -q.y,
                    4.0 * width,
                    3.0 * width
                );
            }
        }
        out.push_str("  </g>\n");
    }
    if let Some(frames) = &layers.rolling_frames {
        out.push_str("  <g id=\"rolling_frames\">\n");
        for f in frames.iter().step_by(stride_of(frames.len())) {
            circle(&mut out, f.center.0, f.radius, "#c5b0d5", 0.5 * width, "none");
            circle(&mut out, f.contact.0, 1.5 * width, "none", 0.0, "#8c564b");
            for tp in &f.traces {
                circle(&mut out, tp.point.0, 1.5 * width, "none", 0.0, PALETTE[tp.radiant % PALETTE.len()]);
            }
        }
        out.push_str("  </g>\n");
    }
    if let Some(cusps) = &layers.cusps {
        out.push_str("  <g id=\"cusps\">\n");
        for c in cusps {
            circle(&mut out, c.point.0, 3.0 * width, "#000000", 0.5 * width, "#ffdd00");
        }
        out.push_str("  </g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
