//! Small numerical toolkit: angle bookkeeping, finite-difference stencils,
//! adaptive quadrature, bracketed root finding and golden-section search.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Sub};

/// Reduce an angle to `(-π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut r = theta.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    r
}

/// Reduce an angle to `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Continuous unwrapping of a sequence of angles by accumulating wrapped
/// differences.
pub fn unwrap_angles(raw: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(raw.len());
    let mut prev_raw = match raw.first() {
        Some(&a) => a,
        None => return out,
    };
    let mut acc = prev_raw;
    out.push(acc);
    for &a in &raw[1..] {
        acc += wrap_angle(a - prev_raw);
        out.push(acc);
        prev_raw = a;
    }
    out
}

/// Values that finite-difference stencils can combine.
pub trait Linear: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {}
impl<T> Linear for T where T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T> {}

/// Five-point central first derivative, O(h⁴).
pub fn diff1<T: Linear>(f: impl Fn(f64) -> T, x: f64, h: f64) -> T {
    (f(x - 2.0 * h) - f(x + 2.0 * h) + (f(x + h) - f(x - h)) * 8.0) * (1.0 / (12.0 * h))
}

/// Five-point central second derivative, O(h⁴).
pub fn diff2<T: Linear>(f: impl Fn(f64) -> T, x: f64, h: f64) -> T {
    let outer = f(x - 2.0 * h) + f(x + 2.0 * h);
    let inner = f(x - h) + f(x + h);
    (inner * 16.0 - outer - f(x) * 30.0) * (1.0 / (12.0 * h * h))
}

/// Seven-point central third derivative, O(h⁴).
pub fn diff3<T: Linear>(f: impl Fn(f64) -> T, x: f64, h: f64) -> T {
    let a = f(x + h) - f(x - h);
    let b = f(x + 2.0 * h) - f(x - 2.0 * h);
    let c = f(x + 3.0 * h) - f(x - 3.0 * h);
    (b * 8.0 - a * 13.0 - c) * (1.0 / (8.0 * h * h * h))
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const GK_GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * GK_KRONROD_WEIGHTS[7];
    let mut gauss = fc * GK_GAUSS_WEIGHTS[3];
    for i in 0..7 {
        let dx = half * GK_NODES[i];
        let pair = f(center - dx) + f(center + dx);
        kronrod += GK_KRONROD_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            gauss += GK_GAUSS_WEIGHTS[i / 2] * pair;
        }
    }
    (kronrod * half, (kronrod - gauss).abs() * half)
}

/// Adaptive Gauss–Kronrod (7/15) quadrature to an absolute tolerance.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    fn recurse(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (value, err) = gauss_kronrod15(f, a, b);
        if err <= tol || depth >= 40 {
            return value;
        }
        let mid = 0.5 * (a + b);
        recurse(f, a, mid, 0.5 * tol, depth + 1) + recurse(f, mid, b, 0.5 * tol, depth + 1)
    }
    recurse(&f, a, b, abs_tol, 0)
}

/// Brent's method on a sign-changing bracket. Returns `None` when `f(a)` and
/// `f(b)` have the same strict sign.
pub fn find_root(f: impl Fn(f64) -> f64, a: f64, b: f64, x_tol: f64) -> Option<f64> {
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return None;
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * x_tol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Some(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Some(b)
}

/// Golden-section minimisation on `[a, b]`; returns `(argmin, min)`.
pub fn golden_section_min(f: impl Fn(f64) -> f64, a: f64, b: f64, x_tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > x_tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if b - a <= f64::EPSILON * (a.abs() + b.abs()) {
            break;
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    if fx <= fc.min(fd) {
        (x, fx)
    } else if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_is_half_open() {
        assert_eq!(wrap_angle(PI), PI);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-15);
        assert!((wrap_angle(3.0 * TAU + 0.5) - 0.5).abs() < 1e-12);
        assert!((normalize_angle(-0.5) - (TAU - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn unwrap_follows_a_rotating_angle() {
        let raw: Vec<f64> = (0..100).map(|i| wrap_angle(0.3 * i as f64)).collect();
        let un = unwrap_angles(&raw);
        for (i, a) in un.iter().enumerate() {
            assert!((a - 0.3 * i as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn stencils_on_exponential() {
        let x = 0.7;
        assert!((diff1(f64::exp, x, 1e-3) - x.exp()).abs() < 1e-12);
        assert!((diff2(f64::exp, x, 1e-3) - x.exp()).abs() < 1e-9);
        assert!((diff3(f64::exp, x, 5e-3) - x.exp()).abs() < 1e-7);
    }

    #[test]
    fn quadrature_reaches_tolerance() {
        let v = integrate(f64::sin, 0.0, PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-12);
        let g = integrate(|x| (-x * x).exp(), -8.0, 8.0, 1e-12);
        assert!((g - PI.sqrt()).abs() < 1e-11);
        assert_eq!(integrate(f64::cos, 1.0, 1.0, 1e-10), 0.0);
    }

    #[test]
    fn brent_and_golden() {
        let r = find_root(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        assert!(find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_none());
        let (x, fx) = golden_section_min(|x| (x - 0.3).powi(2), -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-9);
        assert!(fx < 1e-18);
    }
}
