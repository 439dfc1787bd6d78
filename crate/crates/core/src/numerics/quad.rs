//! Tanh-sinh quadrature with exact endpoint distances and a power-law tail
//! correction for slowly integrable endpoint singularities.

use super::{gauss_legendre01, Scalar, Tolerance};
use crate::error::{Error, Result};
use std::f64::consts::FRAC_PI_2;

/// A quadrature abscissa together with its exact distances to both endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub x: f64,
    pub from_a: f64,
    pub to_b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub levels: usize,
}

const T_MAX: f64 = 6.0;
const MAX_LEVEL: usize = 11;
const MIN_LEVEL: usize = 3;

// Distance to the nearer endpoint (on the half-width scale) and weight at t >= 0.
fn abscissa(t: f64) -> (f64, f64) {
    let u = FRAC_PI_2 * t.sinh();
    let e = (-2.0 * u).exp();
    let gap = 2.0 * e / (1.0 + e);
    let sech = 2.0 * (-u).exp() / (1.0 + e);
    (gap, FRAC_PI_2 * t.cosh() * sech * sech)
}

fn node(a: f64, b: f64, hw: f64, t: f64) -> (Node, f64) {
    let (gap, w) = abscissa(t.abs());
    let d = hw * gap;
    let n = if t >= 0.0 {
        Node { x: b - d, from_a: 2.0 * hw - d, to_b: d }
    } else {
        Node { x: a + d, from_a: d, to_b: 2.0 * hw - d }
    };
    (n, w * hw)
}

/// Integrates over `(a, b)` with node information; see [`quad_singular`].
pub fn quad_nodes<T, F>(f: F, a: f64, b: f64, tol: &Tolerance) -> Result<QuadResult<T>>
where
    T: Scalar,
    F: Fn(Node) -> T,
{
    quad_window(f, a, b, T_MAX, T_MAX, tol)
}

// Trapezoid in t on [-ta, tb] with half weights at the ends and the first
// Euler–Maclaurin correction; the mass beyond the window is added by `tail`.
fn quad_window<T, F>(f: F, a: f64, b: f64, ta: f64, tb: f64, tol: &Tolerance) -> Result<QuadResult<T>>
where
    T: Scalar,
    F: Fn(Node) -> T,
{
    if !(b > a) {
        return Err(Error::Parameter(format!("quadrature needs a < b (got {a}, {b})")));
    }
    let hw = 0.5 * (b - a);
    let eval = |t: f64| -> Result<T> {
        let (n, w) = node(a, b, hw, t);
        if n.from_a <= 0.0 || n.to_b <= 0.0 {
            return Ok(T::zero());
        }
        let v = f(n);
        if !v.finite() {
            return Err(Error::Divergent { x: if t < 0.0 { a } else { b } });
        }
        Ok(v * w)
    };
    let eta = 1e-3;
    let slope = |t: f64| -> Result<T> { Ok((eval(t + eta)? - eval(t - eta)?) * (0.5 / eta)) };
    let em = slope(tb)? - slope(-ta)?;
    let span = ta + tb;
    let mut n = 12usize;
    let mut h = span / n as f64;
    let mut sum = (eval(-ta)? + eval(tb)?) * 0.5;
    for j in 1..n {
        sum = sum + eval(-ta + j as f64 * h)?;
    }
    let mut prev = sum * h - em * (h * h / 12.0);
    let mut total = prev;
    for level in 1..=MAX_LEVEL {
        n *= 2;
        h = span / n as f64;
        for j in (1..n).step_by(2) {
            sum = sum + eval(-ta + j as f64 * h)?;
        }
        total = sum * h - em * (h * h / 12.0);
        let diff = (total - prev).modulus();
        if level >= MIN_LEVEL && tol.accepts(diff, total.modulus()) {
            let tails = tail(&f, a, b, hw, (ta, tb), total.modulus(), tol)?;
            return Ok(QuadResult { value: total + tails, error: diff, levels: level });
        }
        prev = total;
    }
    Err(Error::QuadratureNoConvergence { prev: prev.modulus(), last: total.modulus() })
}

// Contribution of the two end pieces beyond the window, assuming a local
// power law f ~ C d^p fitted on the two outermost nodes.
fn tail<T, F>(f: &F, a: f64, b: f64, hw: f64, window: (f64, f64), scale: f64, tol: &Tolerance) -> Result<T>
where
    T: Scalar,
    F: Fn(Node) -> T,
{
    let mut out = T::zero();
    for (side, t) in [(-1.0, window.0), (1.0, window.1)] {
        let (n1, _) = node(a, b, hw, side * t);
        let (n2, _) = node(a, b, hw, side * (t - 0.125));
        let (d1, d2) = if side < 0.0 { (n1.from_a, n2.from_a) } else { (n1.to_b, n2.to_b) };
        if d1 <= 0.0 || d2 <= 0.0 {
            continue;
        }
        let (f1, f2) = (f(n1), f(n2));
        let (m1, m2) = (f1.modulus(), f2.modulus());
        if m1 == 0.0 || m2 == 0.0 || !f1.finite() || !f2.finite() {
            continue;
        }
        let p = (m1 / m2).ln() / (d1 / d2).ln();
        let est = m1 * d1 / (p + 1.0).max(1e-300);
        if p <= -1.0 + 1e-6 {
            if m1 * d1 > tol.abs.max(tol.rel * scale) * 1e-6 || p < -1.0 - 1e-3 {
                return Err(Error::Divergent { x: if side < 0.0 { a } else { b } });
            }
            continue;
        }
        if est > 1e-3 * tol.abs.max(tol.rel * scale) {
            out = out + f1 * (d1 / (p + 1.0));
        }
    }
    Ok(out)
}

/// Tanh-sinh quadrature of `f` over `(a, b)`; endpoint singularities of
/// algebraic-logarithmic type are integrable and handled without weights.
pub fn quad_singular<T, F>(f: F, a: f64, b: f64, tol: &Tolerance) -> Result<QuadResult<T>>
where
    T: Scalar,
    F: Fn(f64) -> T,
{
    // stop the window where the abscissa can no longer resolve the distance
    let hw = 0.5 * (b - a);
    let cut = |e: f64| {
        let d = 1e-9 * e.abs();
        if d == 0.0 || d >= hw * 1e-3 {
            return T_MAX;
        }
        let u = 0.5 * (2.0 * hw / d).ln();
        (u / FRAC_PI_2).asinh().min(T_MAX)
    };
    quad_window(
        |n: Node| {
            if n.x <= a || n.x >= b {
                T::zero()
            } else {
                f(n.x)
            }
        },
        a,
        b,
        cut(a),
        cut(b),
        tol,
    )
}

/// Integral over `(a, b)` of an integrand that is only accurate away from
/// the endpoints, such as one built from `f(x)` with `x` near `b`: the range
/// is cut at distances `10^{−3}, 10^{−5}, 10^{−7}` times `b − a` from each end
/// and the two outer slabs are continued geometrically. A slab ratio above
/// 0.9 is reported as divergence at that end.
pub fn quad_truncated<F>(f: F, a: f64, b: f64, tol: &Tolerance) -> Result<QuadResult<f64>>
where
    F: Fn(f64) -> f64,
{
    let len = b - a;
    let (d1, d2, d3) = (1e-3 * len, 1e-5 * len, 1e-7 * len);
    let core = quad_singular(&f, a + d1, b - d1, tol)?;
    let mut value = core.value;
    let mut error = core.error;
    let scale = core.value.abs().max(tol.abs);
    for (end, sign) in [(a, 1.0), (b, -1.0)] {
        let slab = |lo: f64, hi: f64| -> Result<QuadResult<f64>> {
            let (x0, x1) = (end + sign * hi, end + sign * lo);
            quad_singular(&f, x0.min(x1), x0.max(x1), tol)
        };
        let p1 = slab(d2, d1)?;
        let p2 = slab(d3, d2)?;
        value += p1.value + p2.value;
        error += p1.error + p2.error;
        if p2.value.abs() <= tol.abs.max(tol.rel * scale) {
            continue;
        }
        let r = p2.value / p1.value;
        if !(r.abs() < 0.9) {
            return Err(Error::Divergent { x: end });
        }
        let tail = p2.value * r / (1.0 - r);
        value += tail;
        error += tail.abs();
    }
    Ok(QuadResult { value, error, levels: core.levels })
}

/// Integrates over `[lo, hi] ⊂ [a, b]` where `a` and `b` may be singular.
///
/// The pieces within `1e−3·(b − a)` of an endpoint are integrated on unit
/// windows in the log-distance to that endpoint, so `lo − a` may be as small
/// as the floating-point range allows. An open end at `a` or `b` is reached
/// by geometric continuation of the last windows.
pub fn quad_log<F>(f: F, a: f64, b: f64, lo: f64, hi: f64, tol: &Tolerance) -> Result<QuadResult<f64>>
where
    F: Fn(f64) -> f64,
{
    if !(a < b && a <= lo && lo <= hi && hi <= b) {
        return Err(Error::Parameter(format!("[{lo}, {hi}] is not inside [{a}, {b}]")));
    }
    let len = b - a;
    let d = 1e-3 * len;
    let mut out = QuadResult { value: 0.0, error: 0.0, levels: 0 };
    let (c0, c1) = (lo.max(a + d), hi.min(b - d));
    if c0 < c1 {
        let core = quad_singular(&f, c0, c1, tol)?;
        out = core;
    }
    let (gx, gw) = gauss_legendre01(20);
    for (end, sign) in [(a, 1.0), (b, -1.0)] {
        // distances from `end` covered by [lo, hi]
        let (t0, t1) = if sign > 0.0 { (lo - a, (hi - a).min(d)) } else { (b - hi, (b - lo).min(d)) };
        if !(t0 < t1) {
            continue;
        }
        let floor = (len * 1e-290).max(1e8 * f64::EPSILON * end.abs());
        let open = t0 == 0.0;
        let y_end = if open { floor.ln() } else { t0.ln() };
        let mut y = t1.ln();
        let mut sum = 0.0;
        let mut windows = Vec::new();
        let mut quiet = 0;
        let mut overflow = false;
        while y > y_end {
            if open && y - 1.0 < y_end {
                break;
            }
            let y0 = (y - 1.0).max(y_end);
            let mut w = 0.0;
            for (u, wu) in gx.iter().zip(&gw) {
                let t = (y0 + (y - y0) * u).exp();
                w += wu * f(end + sign * t) * t;
            }
            w *= y - y0;
            if !w.is_finite() || !(sum + w).is_finite() {
                overflow = true;
                break;
            }
            sum += w;
            windows.push(w);
            y = y0;
            // a decaying integrand is settled once the windows stop counting
            quiet = if w.abs() <= 1e-17 * sum.abs() { quiet + 1 } else { 0 };
            if quiet >= 3 {
                break;
            }
        }
        if open && windows.is_empty() && !overflow {
            // too close to the end for a single window
            let (x0, x1) = (end + sign * t1, end);
            let r = quad_singular(&f, x0.min(x1), x0.max(x1), tol)?;
            out.value += r.value;
            out.error += r.error;
            continue;
        }
        let last = windows.last().copied().unwrap_or(0.0);
        let growth = || -> Option<f64> {
            // averaged over several windows against rounding in x − end
            let m = (windows.len() - 1).min(10);
            let ratio = last / windows[windows.len() - 1 - m];
            (ratio > 0.0 && m > 0).then(|| ratio.powf(1.0 / m as f64))
        };
        if overflow {
            let diverging = open && windows.len() > 1 && growth().is_none_or(|r| r >= 1.0 - 1e-4);
            return Err(if diverging { Error::Divergent { x: end } } else { Error::Overflow { x: end } });
        }
        out.value += sum;
        if open && quiet < 3 && last != 0.0 {
            let r = growth().ok_or(Error::Divergent { x: end })?;
            if !(r < 1.0 - 1e-4) {
                return Err(Error::Divergent { x: end });
            }
            let tail = last * r / (1.0 - r);
            out.value += tail;
            out.error += tail.abs() * 1e-6;
        }
    }
    Ok(out)
}
