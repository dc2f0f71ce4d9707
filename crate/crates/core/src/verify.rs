//! Fixture verification: every acceptance criterion as a list of named
//! checks, each with a residual and the threshold it must stay under.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::caustic::{self, CausticTrace};
use crate::curve::{CurveSample, Grid, ParametricCurve, SampledCurve};
use crate::envelope::{self, CircleFamily, RadiusProfile};
use crate::optics::{self, Radiant, Tolerances};
use crate::oracle::{self, LemmaPartner, ReferenceCurve};
use crate::vec2::Vec2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("nothing to verify")]
    NothingToVerify,
    #[error("unknown fixture `{0}` (expected 1-8, a criterion name, or `all`)")]
    UnknownFixture(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// `None` when the computation itself failed.
    pub residual: Option<f64>,
    pub threshold: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl CheckResult {
    /// Passes when `residual < threshold`.
    pub fn below(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        let finite = residual.is_finite();
        CheckResult {
            name: name.into(),
            residual: finite.then_some(residual),
            threshold,
            passed: finite && residual < threshold,
            note: String::new(),
        }
    }

    /// Passes when `got == want`; the residual is the difference.
    pub fn count(name: impl Into<String>, got: usize, want: usize) -> Self {
        CheckResult {
            name: name.into(),
            residual: Some(got.abs_diff(want) as f64),
            threshold: 0.0,
            passed: got == want,
            note: format!("got {got}, want {want}"),
        }
    }

    pub fn failed(name: impl Into<String>, threshold: f64, note: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            residual: None,
            threshold,
            passed: false,
            note: note.into(),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub criteria: Vec<CriterionReport>,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Criterion ids and names.
pub const CRITERIA: [(u8, &str); 8] = [
    (1, "coffee-cup"),
    (2, "mirror-equation"),
    (3, "parabola"),
    (4, "deltoid"),
    (5, "circle-radiants"),
    (6, "oracle-equivalence"),
    (7, "rolling-invariants"),
    (8, "rate-lemma"),
];

/// Resolve a selection (`all`, ids or names) to criterion ids.
pub fn select(selection: &[&str]) -> Result<Vec<u8>, VerifyError> {
    let mut ids = Vec::new();
    for item in selection {
        let item = item.trim();
        if item == "all" {
            ids.extend(CRITERIA.iter().map(|c| c.0));
            continue;
        }
        let id = CRITERIA
            .iter()
            .find(|(id, name)| *name == item || id.to_string() == item)
            .map(|c| c.0)
            .ok_or_else(|| VerifyError::UnknownFixture(item.to_string()))?;
        ids.push(id);
    }
    ids.sort_unstable();
    ids.dedup();
    if ids.is_empty() {
        return Err(VerifyError::NothingToVerify);
    }
    Ok(ids)
}

pub fn run_verify(selection: &[&str]) -> Result<VerifyReport, VerifyError> {
    let criteria: Vec<CriterionReport> = select(selection)?.into_iter().map(run_criterion).collect();
    Ok(VerifyReport {
        passed: criteria.iter().all(|c| c.passed),
        criteria,
    })
}

pub fn run_criterion(id: u8) -> CriterionReport {
    let checks = match id {
        1 => coffee_cup(),
        2 => mirror_equation(),
        3 => parabola(),
        4 => deltoid(),
        5 => circle_radiants(),
        6 => oracle_equivalence(),
        7 => rolling_invariants(),
        8 => rate_lemma(),
        _ => vec![CheckResult::failed("unknown criterion", 0.0, format!("id {id}"))],
    };
    CriterionReport {
        id,
        name: CRITERIA.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1),
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn tol() -> Tolerances {
    Tolerances::default()
}

fn full_grid(curve: &ParametricCurve, n: usize) -> SampledCurve {
    let (t_min, t_max) = curve.domain();
    curve
        .sample_grid(Grid { t_min, t_max, n })
        .expect("catalog curves sample on their default domains")
}

fn max_over<T>(items: impl IntoIterator<Item = T>, f: impl Fn(T) -> f64) -> f64 {
    items
        .into_iter()
        .map(f)
        .fold(0.0, |a: f64, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

fn beta_residual(sampled: &SampledCurve, family: &CircleFamily, want: impl Fn(&CurveSample) -> Vec2) -> f64 {
    max_over(&sampled.samples, |s| {
        envelope::beta_for_family(s, family, &tol()).map_or(f64::NAN, |b| b.beta.distance(want(s)))
    })
}

fn coffee_cup_point(theta: f64) -> Vec2 {
    Vec2::new(
        0.75 * theta.cos() - 0.25 * (3.0 * theta).cos(),
        0.75 * theta.sin() - 0.25 * (3.0 * theta).sin(),
    )
}

fn coffee_cup() -> Vec<CheckResult> {
    let circle = ParametricCurve::unit_circle();
    let sampled = full_grid(&circle, 1024);
    let radiant = Radiant::at_infinity(PI);
    let trace = caustic::trace_caustic(&circle, &sampled, &radiant, &tol());
    let points: Vec<(f64, Vec2)> = trace
        .components
        .iter()
        .flat_map(|c| c.samples.iter())
        .filter_map(|s| s.point.finite().map(|p| (s.t, p)))
        .collect();
    let mut checks = vec![CheckResult::count("caustic samples", points.len(), 1024)];
    checks.push(CheckResult::below(
        "caustic vs closed form",
        max_over(&points, |(t, p)| p.distance(coffee_cup_point(*t))),
        1e-9,
    ));
    checks.push(CheckResult::below(
        "beta vs radius-1/2 circle",
        beta_residual(&sampled, &CircleFamily::Focal(radiant), |s| Vec2::from_angle(s.t) * 0.5),
        1e-9,
    ));
    checks
}

fn mirror_equation() -> Vec<CheckResult> {
    let d2 = |d1: f64, kappa: f64| 1.0 / optics::mirror_focus(1.0 / d1, kappa);
    let mut checks = vec![
        CheckResult::below("kappa 1/pi, d1 5pi/4", (d2(1.25 * PI, 1.0 / PI) - 5.0 * PI / 6.0).abs(), 1e-12),
        CheckResult::below("kappa 1, d1 2", (d2(2.0, 1.0) - 2.0 / 3.0).abs(), 1e-12),
    ];
    // the same numbers from mirror geometry: a radiant on the rim of the unit
    // circle has 1/u1 = 2 at every mirror point
    let circle = ParametricCurve::unit_circle();
    let residual = max_over([0.3, 1.0, 2.0, 4.0, 5.5], |t| {
        let s = circle.frenet_sample(t).expect("circle is regular");
        optics::focal_circle(&s, &Radiant::finite(1.0, 0.0), &tol())
            .map_or(f64::NAN, |fc| (1.0 / fc.u1 - 2.0).abs() + (1.0 / fc.u2 - 2.0 / 3.0).abs())
    });
    checks.push(CheckResult::below("rim radiant diameters", residual, 1e-12));
    checks
}

fn parabola() -> Vec<CheckResult> {
    let mut checks = Vec::new();
    for b in [0.25, 1.0, 2.0] {
        let curve = ParametricCurve::parabola(b);
        let sampled = full_grid(&curve, 1024);
        let focus = Vec2::new(0.0, 0.25 / b);
        checks.push(CheckResult::below(
            format!("beta at focus, b = {b}"),
            beta_residual(&sampled, &CircleFamily::Focal(Radiant::at_infinity(0.3)), |_| focus),
            1e-9,
        ));
    }
    let curve = ParametricCurve::parabola(1.0);
    let sampled = full_grid(&curve, 1024);
    let side = caustic::trace_caustic(&curve, &sampled, &Radiant::at_infinity(PI), &tol());
    let pts = side.all_points();
    checks.push(CheckResult::count("side light samples", pts.len(), 1024));
    checks.push(CheckResult::below(
        "side light on Tschirnhausen cubic",
        max_over(&pts, |p| oracle::tschirnhausen_residual(*p).abs()),
        1e-6,
    ));
    let axial = caustic::trace_caustic(&curve, &sampled, &Radiant::at_infinity(FRAC_PI_2), &tol());
    let pts = axial.all_points();
    checks.push(CheckResult::count("axial light samples", pts.len(), 1024));
    checks.push(CheckResult::below(
        "axial light collapses to focus",
        max_over(&pts, |p| p.distance(Vec2::new(0.0, 0.25))),
        1e-9,
    ));
    checks
}

/// Astroids fitted by least squares to the deltoid's caustics, one per
/// direction toward the source: `(direction, center x, center y, scale, rotation)`.
pub const DELTOID_ASTROIDS: [(f64, f64, f64, f64, f64); 8] = [
    (0.2, -0.921060994002885, 0.38941834230865024, 4.000000000000001, 1.4707963267948965),
    (0.5926990816987241, -0.3759281241809916, 0.9266488253107329, 4.0, 1.2744467859455346),
    (0.9853981633974482, 0.3894183423086506, 0.921060994002885, 4.000000000000001, 1.0780972450961723),
    (1.3780972450961724, 0.9266488253107327, 0.3759281241809908, 4.0, 0.8817477042468105),
    (1.7707963267948965, 0.921060994002885, -0.3894183423086506, 3.999999999999999, 0.6853981633974484),
    (2.163495408493621, 0.3759281241809911, -0.9266488253107331, 4.0, 0.4890486225480862),
    (2.556194490192345, -0.38941834230865086, -0.921060994002885, 4.000000000000001, 0.2926990816987241),
    (2.948893571891069, -0.9266488253107327, -0.3759281241809906, 4.000000000000001, 0.0963495408493622),
];

/// Implicit astroid residual `|x'|^{2/3} + |y'|^{2/3} − A^{2/3}` in the
/// astroid's own frame.
pub fn astroid_implicit_residual(p: Vec2, center: Vec2, scale: f64, rotation: f64) -> f64 {
    let q = (p - center).rotate(-rotation);
    q.x.abs().powf(2.0 / 3.0) + q.y.abs().powf(2.0 / 3.0) - scale.powf(2.0 / 3.0)
}

/// Deltoid β check with a pluggable second-envelope formula.
pub fn deltoid_beta_check_with(beta: impl Fn(&CurveSample, RadiusProfile, f64) -> Vec2) -> CheckResult {
    let curve = ParametricCurve::deltoid();
    let sampled = full_grid(&curve, 1024);
    let family = CircleFamily::Focal(Radiant::at_infinity(0.0));
    let residual = max_over(&sampled.samples, |s| {
        let Ok(profile) = envelope::radius_profile_at(s, &family, &tol()) else { return f64::NAN };
        let Ok(delta) = envelope::chord_angle(profile.radius, profile.radius_s, s.kappa) else { return f64::NAN };
        let t = s.t;
        let want = Vec2::new(4.0 * t.cos() - (4.0 * t).cos(), 4.0 * t.sin() - (4.0 * t).sin());
        beta(s, profile, delta).distance(want)
    });
    CheckResult::below("beta vs (4cos t - cos 4t, 4sin t - sin 4t)", residual, 1e-9)
}

fn deltoid() -> Vec<CheckResult> {
    let mut checks = vec![deltoid_beta_check_with(|s, p, d| envelope::second_envelope(s, p, d).beta)];
    let curve = ParametricCurve::deltoid();
    let sampled = full_grid(&curve, 1024);
    for (theta, cx, cy, scale, rotation) in DELTOID_ASTROIDS {
        let center = Vec2::new(cx, cy);
        let trace = caustic::trace_caustic(&curve, &sampled, &Radiant::at_infinity(theta), &tol());
        let pts = trace.all_points();
        let label = format!("direction {theta:.4}");
        checks.push(CheckResult::below(
            format!("{label}: fit residual"),
            max_over(&pts, |p| astroid_implicit_residual(*p, center, scale, rotation).abs()),
            1e-8,
        ));
        let astroid = ReferenceCurve::Astroid { scale, rotation, center };
        let near = oracle::max_distance_to_curve(&pts, &astroid, (0.0, TAU)).unwrap_or(f64::NAN);
        checks.push(
            CheckResult::below(format!("{label}: distance to astroid"), near, 1e-6)
                .with_note("largest distance from a traced point to the fitted astroid"),
        );
        // every part of the astroid is reached: no reference sample farther
        // from the trace than the longest trace chord
        let chord = max_over(pts.windows(2), |w| w[0].distance(w[1]));
        let reference: Vec<Vec2> = (0..2048).map(|i| astroid.eval(TAU * i as f64 / 2048.0)).collect();
        let coverage = oracle::directed_hausdorff(&reference, &pts).unwrap_or(f64::NAN);
        checks.push(CheckResult::below(format!("{label}: astroid covered"), coverage, chord));
    }
    checks
}

/// Indices of trace samples inside a window around the mirror, paired with
/// the oracle point for the same parameter.
fn paired_within_window(
    sampled: &SampledCurve,
    trace: &CausticTrace,
    oracle_pts: &[oracle::EnvelopePoint],
) -> (Vec<Vec2>, Vec<Vec2>) {
    let pos: Vec<Vec2> = sampled.samples.iter().map(|s| s.pos).collect();
    let (mut lo, mut hi) = (pos[0], pos[0]);
    for p in &pos {
        lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let center = (lo + hi) * 0.5;
    let half = (hi - lo) * 1.5;
    let inside = |p: Vec2| (p.x - center.x).abs() <= half.x && (p.y - center.y).abs() <= half.y;
    let index: std::collections::HashMap<u64, usize> = sampled
        .samples
        .iter()
        .enumerate()
        .map(|(i, s)| (s.t.to_bits(), i))
        .collect();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for s in trace.components.iter().flat_map(|c| c.samples.iter()) {
        let Some(p) = s.point.finite() else { continue };
        if !inside(p) {
            continue;
        }
        if let Some(q) = index.get(&s.t.to_bits()).and_then(|&i| oracle_pts[i].point) {
            a.push(p);
            b.push(q);
        }
    }
    (a, b)
}

/// Hausdorff distance between the traced caustic and the envelope of
/// reflected rays on the same grid, both restricted to the same samples.
pub fn oracle_distance(curve: &ParametricCurve, sampled: &SampledCurve, radiant: &Radiant) -> Result<(f64, usize), String> {
    let trace = caustic::trace_caustic(curve, sampled, radiant, &tol());
    let params: Vec<f64> = sampled.samples.iter().map(|s| s.t).collect();
    let family = oracle::reflected_ray_family(curve, *radiant, params);
    let env = oracle::envelope_of_lines(&family).map_err(|e| e.to_string())?;
    let (a, b) = paired_within_window(sampled, &trace, &env);
    let h = oracle::hausdorff_distance(&a, &b).map_err(|e| e.to_string())?;
    Ok((h, a.len()))
}

fn circle_radiants() -> Vec<CheckResult> {
    let circle = ParametricCurve::unit_circle();
    let sampled = full_grid(&circle, 1024);
    let rim = Radiant::finite(1.0, 0.0);
    let mut checks = vec![CheckResult::below(
        "rim radiant: beta on radius-1/3 circle",
        max_over(&sampled.samples, |s| {
            envelope::beta_for_family(s, &CircleFamily::Focal(rim), &tol())
                .map_or(f64::NAN, |b| (b.beta.norm() - 1.0 / 3.0).abs())
        }),
        1e-9,
    )];
    checks.push(match oracle_distance(&circle, &sampled, &rim) {
        Ok((h, n)) => CheckResult::below("rim radiant: trace vs envelope of lines", h, 1e-6)
            .with_note(format!("{n} paired samples")),
        Err(e) => CheckResult::failed("rim radiant: trace vs envelope of lines", 1e-6, e),
    });
    let inner = caustic::trace_caustic(&circle, &sampled, &Radiant::finite(0.25, 0.0), &tol());
    checks.push(CheckResult::count("radiant (0.25, 0): components", inner.components.len(), 1));
    checks.push(CheckResult::count("radiant (0.25, 0): cusps", inner.cusps.len(), 4));
    let outer = caustic::trace_caustic(&circle, &sampled, &Radiant::finite(0.75, 0.0), &tol());
    checks.push(CheckResult::count("radiant (0.75, 0): components", outer.components.len(), 2));
    checks
}

/// The randomized scenes of the oracle-equivalence criterion.
pub fn random_scenes(seed: u64, count: usize) -> Vec<(ParametricCurve, Radiant)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let curve = if k % 2 == 0 {
                ParametricCurve::ellipse(rng.gen_range(1.0..3.0), rng.gen_range(0.5..1.5))
            } else {
                ParametricCurve::involute()
            };
            let radiant = if rng.gen_bool(0.5) {
                Radiant::at_infinity(rng.gen_range(0.0..TAU))
            } else {
                Radiant::finite(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))
            };
            (curve, radiant)
        })
        .collect()
}

fn oracle_equivalence() -> Vec<CheckResult> {
    random_scenes(0x5EED, 10)
        .into_iter()
        .map(|(curve, radiant)| {
            let sampled = full_grid(&curve, 1024);
            let name = format!("{curve}, {radiant:?}");
            match oracle_distance(&curve, &sampled, &radiant) {
                Ok((h, n)) => CheckResult::below(name, h, 1e-5).with_note(format!("{n} paired samples")),
                Err(e) => CheckResult::failed(name, 1e-5, e),
            }
        })
        .collect()
}

fn rolling_invariants() -> Vec<CheckResult> {
    let circle = ParametricCurve::unit_circle();
    let ellipse = ParametricCurve::ellipse(2.0, 1.0);
    let deltoid = ParametricCurve::deltoid();
    let thirteen: Vec<Radiant> = (0..13).map(|k| Radiant::at_infinity(0.1 + TAU * k as f64 / 13.0)).collect();
    let scenes: Vec<(&str, &ParametricCurve, Vec<Radiant>)> = vec![
        ("circle, source at 180 deg", &circle, vec![Radiant::at_infinity(PI)]),
        ("circle, radiant (0.25, 0)", &circle, vec![Radiant::finite(0.25, 0.0)]),
        ("ellipse, source at 75 deg", &ellipse, vec![Radiant::at_infinity(75f64.to_radians())]),
        ("ellipse, radiant (0.5, 0.3)", &ellipse, vec![Radiant::finite(0.5, 0.3)]),
        ("deltoid, 13 directions", &deltoid, thirteen),
    ];
    let mut checks = Vec::new();
    for (label, curve, radiants) in scenes {
        let sampled = full_grid(curve, 1024);
        let rolling = match caustic::rolling_frames(&sampled, &radiants, &tol()) {
            Ok(r) => r,
            Err(e) => {
                checks.push(CheckResult::failed(format!("{label}: frames"), 0.0, e.to_string()));
                continue;
            }
        };
        let two_route = max_over(rolling.frames.iter().flat_map(|f| f.traces.iter().map(move |tp| (f, tp))), |(f, tp)| {
            caustic::caustic_at(curve, &radiants[tp.radiant], f.t, &tol())
                .ok()
                .and_then(|e| e.finite())
                .map_or(f64::NAN, |e| e.distance(tp.point))
        });
        checks.push(CheckResult::below(format!("{label}: rolling trace vs caustic point"), two_route, 1e-9));

        let report = caustic::no_slip_report(curve, &rolling, &tol());
        if report.is_empty() {
            checks.push(CheckResult::failed(format!("{label}: no-slip"), 1e-5, "no contact coincidences found"));
        } else {
            checks.push(
                CheckResult::below(format!("{label}: no-slip"), max_over(&report, |e| e.velocity), 1e-5)
                    .with_note(format!("{} contacts", report.len())),
            );
        }

        let rate = max_over(sampled.samples.iter().step_by(16), |s| {
            caustic::omega_rate(curve, &radiants[0], s.t, &tol()).map_or(f64::NAN, |(m, p)| (m - p).abs())
        });
        checks.push(CheckResult::below(format!("{label}: d omega/ds = 3 kappa - 2 u1"), rate, 1e-5));
    }
    checks
}

fn rate_lemma() -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1E44A);
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for k in 0..100 {
        let curve = ParametricCurve::ellipse(rng.gen_range(0.5..3.0), rng.gen_range(0.5..3.0));
        let t = rng.gen_range(0.0..TAU);
        let result = if k % 2 == 0 {
            let p = Vec2::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
            oracle::lemma1_rate_check(&curve, &LemmaPartner::Fixed(p), t)
        } else {
            // the caustic point moves along the reflected ray
            let radiant = Radiant::at_infinity(rng.gen_range(0.0..TAU));
            let partner = LemmaPartner::Moving(Box::new(|x| {
                caustic::caustic_at(&curve, &radiant, x, &tol()).ok()?.finite()
            }));
            oracle::lemma1_rate_check(&curve, &partner, t)
        };
        match result {
            Ok((m, p)) => worst = worst.max((m - p).abs()),
            Err(_) => failures += 1,
        }
    }
    let mut checks = vec![
        CheckResult::below("rate lemma, 100 configurations", worst, 1e-5),
        CheckResult::count("rate lemma evaluation failures", failures, 0),
    ];

    let ellipse = ParametricCurve::ellipse(2.0, 1.0);
    let involute = ParametricCurve::involute();
    let mut cor1: f64 = 0.0;
    for curve in [&ellipse, &involute] {
        let sampled = full_grid(curve, 512);
        for radius in [0.3, -0.7, 2.5] {
            cor1 = cor1.max(beta_residual(&sampled, &CircleFamily::ConstantRadius(radius), |s| {
                s.pos + s.normal * (2.0 * radius)
            }));
        }
    }
    checks.push(CheckResult::below("constant radius: beta = alpha + 2RN", cor1, 1e-9));

    let sampled = full_grid(&ellipse, 1024);
    checks.push(CheckResult::below(
        "osculating circles: beta = alpha",
        beta_residual(&sampled, &CircleFamily::Osculating, |s| s.pos),
        1e-8,
    ));

    // at infinity: cos 2δ, sin 2δ from the aberrancy, and the chord-angle β
    // against its closed form through the aberrancy
    let mut aberrancy_gap: f64 = 0.0;
    for curve in [&ellipse, &involute, &ParametricCurve::deltoid(), &ParametricCurve::parabola(0.6)] {
        let sampled = full_grid(curve, 512);
        let family = CircleFamily::Focal(Radiant::at_infinity(1.0));
        aberrancy_gap = aberrancy_gap.max(max_over(&sampled.samples, |s| {
            let (Some(a), Ok(b)) = (s.aberrancy, envelope::beta_for_family(s, &family, &tol())) else {
                return f64::NAN;
            };
            let (s2, c2) = (2.0 * b.delta).sin_cos();
            let d = 1.0 + a * a;
            let closed = envelope::beta_infinity(s, &tol()).map_or(f64::NAN, |c| c.beta.distance(b.beta));
            let scale = 1.0 + b.beta.distance(s.pos);
            (c2 - (1.0 - a * a) / d).abs().max((s2 + 2.0 * a / d).abs()).max(closed / scale)
        }));
    }
    checks.push(CheckResult::below("aberrancy identities for 2 delta", aberrancy_gap, 1e-10));
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection() {
        assert_eq!(select(&[]), Err(VerifyError::NothingToVerify));
        assert_eq!(select(&["3", "coffee-cup", "3"]).unwrap(), vec![1, 3]);
        assert_eq!(select(&["all"]).unwrap().len(), 8);
        assert!(matches!(select(&["9"]), Err(VerifyError::UnknownFixture(_))));
        assert_eq!(run_verify(&[]), Err(VerifyError::NothingToVerify));
    }

    #[test]
    fn perturbed_chord_formula_fails_the_deltoid_check() {
        let good = deltoid_beta_check_with(|s, p, d| envelope::second_envelope(s, p, d).beta);
        assert!(good.passed, "{good:?}");
        let bad = deltoid_beta_check_with(|s, p, d| {
            let (s2, c2) = (2.0 * d).sin_cos();
            s.pos + s.normal * (p.radius * (1.0 + 0.99 * c2)) + s.tangent * (p.radius * s2)
        });
        assert!(!bad.passed, "{bad:?}");
    }

    #[test]
    fn fixture_directions_are_distinct() {
        for w in DELTOID_ASTROIDS.windows(2) {
            assert!(w[1].0 > w[0].0);
        }
    }

    #[test]
    fn report_serializes_without_non_finite_numbers() {
        let report = run_verify(&["2"]).unwrap();
        assert!(report.passed, "{report:?}");
        let json = report.to_json();
        assert!(json.contains("\"mirror-equation\""));
        let failed = CheckResult::below("x", f64::NAN, 1.0);
        assert!(!failed.passed && failed.residual.is_none());
    }
}
