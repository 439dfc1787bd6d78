//! Hardy-type inequalities on an interval and the two-weight Muckenhoupt
//! constants.
//!
//! Trial functions are passed as `x ↦ (f(x), f′(x))`.

use crate::error::{Error, Result};
use crate::numerics::{golden_min, quad_log, quad_singular, Tolerance};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Variant {
    /// `∫|f′|² ≥ ¼∫|f|²/(x−a)²` for `f ∈ H¹₀`.
    Power,
    /// Same constant with the distance to the boundary.
    Distance,
    /// `∫|f′|² ≥ π²/(4L²) (∫|f|²/sin²(π(x−a)/L) + ∫|f|²)`.
    Sine,
    /// The refined inequality for `α_s f` on `[r0, r1]` with logarithmic
    /// weight `ln(R/(x − a))`; the interval passed to [`hardy_report`] is
    /// `[r0, r1]`.
    LogRefined { a: f64, s: f64, big_r: f64 },
    /// `∫|f′|² ≥ ¼∫|f|²/(x−a)²` with `f(a) = 0` only.
    HalfLine,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Power => "power",
            Variant::Distance => "distance",
            Variant::Sine => "sine",
            Variant::LogRefined { .. } => "log-refined",
            Variant::HalfLine => "halfline",
        }
    }
}

/// Both sides of an inequality `lhs ≥ constant · W + rest`.
///
/// `ratio = (lhs − rest)/W` is compared against `constant`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyReport {
    pub variant: Variant,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub constant: f64,
    pub satisfied: bool,
}

// ∫ g(x, x − a, b − x) over (a, b), split at the midpoint
fn integral<F: Fn(f64, f64, f64) -> f64>(g: F, a: f64, b: f64, tol: &Tolerance) -> Result<(f64, f64)> {
    let m = 0.5 * (a + b);
    let h = |x: f64| g(x, x - a, b - x);
    let (l, r) = (quad_singular(h, a, m, tol)?, quad_singular(h, m, b, tol)?);
    let v = l.value + r.value;
    if !v.is_finite() {
        return Err(Error::Divergent { x: a });
    }
    Ok((v, l.error + r.error))
}

// v²/t² without overflow or 0/0 in the intermediate squares
fn over_sq(v: f64, t: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    (v / t.sqrt()).powi(2) / t
}

// f(end) = 0, checked far inside the √t decay that finite energy forces
fn vanishes_at<F: Fn(f64) -> (f64, f64)>(f: &F, a: f64, b: f64, end: f64) -> Result<()> {
    let len = b - a;
    let sup = (1..200).map(|k| f(a + len * k as f64 / 200.0).0.abs()).fold(0.0f64, f64::max);
    let x = if end == a { a + 1e-14 * len } else { b - 1e-14 * len };
    let v = f(x).0.abs();
    if !(v <= 1e-4 * sup) || !v.is_finite() {
        return Err(Error::Inadmissible(format!("f does not vanish at x = {end} (|f| = {v:e} at distance {:e})", 1e-14 * len)));
    }
    Ok(())
}

fn energy<F: Fn(f64) -> (f64, f64)>(f: &F, a: f64, b: f64, tol: &Tolerance) -> Result<(f64, f64)> {
    integral(|x, _, _| f(x).1.powi(2), a, b, tol).map_err(|e| Error::Inadmissible(format!("∫|f′|² is not finite: {e}")))
}

/// Evaluates both sides of the chosen inequality on `[a, b]`.
pub fn hardy_report<F>(f: F, variant: Variant, a: f64, b: f64, tol: &Tolerance) -> Result<HardyReport>
where
    F: Fn(f64) -> (f64, f64),
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Parameter(format!("invalid interval ({a}, {b})")));
    }
    let len = b - a;
    let (lhs, lhs_err, w, w_err, rest, constant) = match variant {
        Variant::Power | Variant::Distance | Variant::Sine | Variant::HalfLine => {
            vanishes_at(&f, a, b, a)?;
            if variant != Variant::HalfLine {
                vanishes_at(&f, a, b, b)?;
            }
            let (lhs, le) = energy(&f, a, b, tol)?;
            let (w, we, constant) = match variant {
                Variant::Power | Variant::HalfLine => {
                    let (w, e) = integral(|x, ta, _| over_sq(f(x).0, ta), a, b, tol)?;
                    (w, e, 0.25)
                }
                Variant::Distance => {
                    let (w, e) = integral(|x, ta, tb| over_sq(f(x).0, ta.min(tb)), a, b, tol)?;
                    (w, e, 0.25)
                }
                _ => {
                    let (w, e) = integral(
                        |x, ta, tb| {
                            let v = f(x).0;
                            let s = (PI * ta.min(tb) / len).sin();
                            over_sq(v, s) + v * v
                        },
                        a,
                        b,
                        tol,
                    )?;
                    (w, e, PI * PI / (4.0 * len * len))
                }
            };
            (lhs, le, w, we, 0.0, constant)
        }
        Variant::LogRefined { a: sing, s, big_r } => {
            let r = log_refined_check(&f, sing, a, b, s, big_r, tol)?;
            (r.alpha_lhs, r.error, r.log_weight_integral, r.error, r.refined_rest, 0.25)
        }
    };
    if !(w > 0.0) {
        return Err(Error::Inadmissible("f vanishes identically".into()));
    }
    let rhs = constant * w + rest;
    let slack = lhs_err + constant * w_err + 1e3 * tol.rel * lhs.abs().max(rhs.abs());
    Ok(HardyReport { variant, lhs, rhs, ratio: (lhs - rest) / w, constant, satisfied: lhs >= rhs - slack })
}

/// Both sides of the two identities and the refined inequality on
/// `[r0, r1]`, with `t = x − a` and `ℓ = ln(R/t)`:
///
/// * `∫ tℓ |(f/(tℓ)^{½})′|² = ∫ (|f′|² − |f|²/(4t²) − |f|²/(4t²ℓ²)) − [|f|²/(2t)] + [|f|²/(2tℓ)]`
/// * `∫|α_s f|² = ∫ (|f′|² + (s² − ¼)|f|²/t²) − (s + ½)[|f|²/t]`
/// * `∫|α_s f|² ≥ s²∫|f|²/t² + ¼∫|f|²/(t²ℓ²) − s[|f|²/t] − [|f|²/(2tℓ)]`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRefinedCheck {
    pub log_lhs: f64,
    pub log_rhs: f64,
    pub alpha_lhs: f64,
    pub alpha_rhs: f64,
    /// `∫|f|²/(t²ℓ²)`.
    pub log_weight_integral: f64,
    /// Right side of the inequality without the `¼∫|f|²/(t²ℓ²)` term.
    pub refined_rest: f64,
    pub refined_rhs: f64,
    pub error: f64,
    pub identities_agree: bool,
    pub inequality_holds: bool,
}

pub fn log_refined_check<F>(f: F, a: f64, r0: f64, r1: f64, s: f64, big_r: f64, tol: &Tolerance) -> Result<LogRefinedCheck>
where
    F: Fn(f64) -> (f64, f64),
{
    if !(a < r0 && r0 < r1) {
        return Err(Error::Parameter(format!("need a < r0 < r1, got {a}, {r0}, {r1}")));
    }
    if !(big_r > r1 - a) {
        return Err(Error::Parameter(format!("R = {big_r} must exceed r1 − a = {}", r1 - a)));
    }
    let ell = |t: f64| (big_r / t).ln();
    let q = |g: &dyn Fn(f64) -> f64| quad_singular(g, r0, r1, tol);
    let weighted = q(&|x| {
        let (v, d) = f(x);
        let (t, l) = (x - a, ell(x - a));
        let w = t * l;
        let g = d / w.sqrt() - v * (l - 1.0) / (2.0 * w.powf(1.5));
        w * g * g
    })?;
    let energy = q(&|x| f(x).1.powi(2))?;
    let power = q(&|x| (f(x).0 / (x - a)).powi(2))?;
    let logw = q(&|x| {
        let t = x - a;
        (f(x).0 / (t * ell(t))).powi(2)
    })?;
    let alpha = q(&|x| {
        let (v, d) = f(x);
        (d - (s + 0.5) * v / (x - a)).powi(2)
    })?;
    // [g]_{r0}^{r1}
    let bracket = |g: &dyn Fn(f64) -> f64| g(r1) - g(r0);
    let over_t = bracket(&|x| f(x).0.powi(2) / (x - a));
    let over_tl = bracket(&|x| f(x).0.powi(2) / ((x - a) * ell(x - a)));
    let log_rhs = energy.value - 0.25 * power.value - 0.25 * logw.value - 0.5 * over_t + 0.5 * over_tl;
    let alpha_rhs = energy.value + (s * s - 0.25) * power.value - (s + 0.5) * over_t;
    let refined_rest = s * s * power.value - s * over_t - 0.5 * over_tl;
    let refined_rhs = refined_rest + 0.25 * logw.value;
    let error = weighted.error + energy.error + power.error + logw.error + alpha.error;
    let scale = energy.value.abs() + power.value.abs() + over_t.abs() + 1.0;
    let slack = error + 1e3 * tol.rel * scale;
    Ok(LogRefinedCheck {
        log_lhs: weighted.value,
        log_rhs,
        alpha_lhs: alpha.value,
        alpha_rhs,
        log_weight_integral: logw.value,
        refined_rest,
        refined_rhs,
        error,
        identities_agree: (weighted.value - log_rhs).abs() <= slack && (alpha.value - alpha_rhs).abs() <= slack,
        inequality_holds: alpha.value >= refined_rhs - slack,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MuckenhouptKind {
    /// `A = sup_c (∫_c^b u)^{1/p} (∫_a^c v^{1−p′})^{1/p′}`, for `∫_a^x f`.
    AForm,
    /// `B = sup_c (∫_a^c u)^{1/p} (∫_c^b v^{1−p′})^{1/p′}`, for `∫_x^b f`.
    BForm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Constant {
    Finite(f64),
    Infinite,
}

impl Constant {
    pub fn finite(&self) -> Option<f64> {
        match self {
            Constant::Finite(v) => Some(*v),
            Constant::Infinite => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuckenhouptResult {
    pub kind: MuckenhouptKind,
    pub p: f64,
    pub value: Constant,
    /// Bounds on the best constant of the inequality: `[A, p^{1/p} p′^{1/p′} A]`.
    pub bracket: Option<(f64, f64)>,
    /// Abscissa of the supremum; at a grid end when the supremum is a limit.
    pub sup_location: Option<f64>,
}

const GRID: usize = 64;

/// The Muckenhoupt constant of the weights `u`, `v` on `(a, b)`.
///
/// The supremum over `c` is searched on a 64-point grid in the logit of
/// `(c − a)/(b − a)`, reaching `1e−280` of the length toward `a` when
/// `a = 0`, and refined by golden section. For `p = 1` the `v` factor is the
/// sampled supremum of `1/v` over the relevant side.
pub fn muckenhoupt<U, V>(kind: MuckenhouptKind, u: U, v: V, p: f64, a: f64, b: f64, tol: &Tolerance) -> Result<MuckenhouptResult>
where
    U: Fn(f64) -> f64,
    V: Fn(f64) -> f64,
{
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Parameter(format!("p = {p} must lie in [1, ∞)")));
    }
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Parameter(format!("invalid interval ({a}, {b})")));
    }
    let len = b - a;
    let pp = if p == 1.0 { f64::INFINITY } else { p / (p - 1.0) };
    let w = |x: f64| v(x).powf(1.0 - pp);
    // None when the weights overflow before the integral settles
    let integrate = |g: &dyn Fn(f64) -> f64, lo: f64, hi: f64| -> Option<f64> {
        match quad_log(g, a, b, lo, hi, tol) {
            Ok(r) if r.value.is_finite() => Some(r.value),
            Err(Error::Divergent { .. }) => Some(f64::INFINITY),
            _ => None,
        }
    };
    let sup_inv_v = |lo: f64, hi: f64| -> f64 {
        (0..=200).map(|k| 1.0 / v(lo + (hi - lo) * (k as f64 + 0.5) / 201.0)).fold(0.0f64, f64::max)
    };
    // ln of the objective; +∞ when a factor diverges, NaN when unresolvable
    let objective = |c: f64| -> f64 {
        let (u_lo, u_hi, w_lo, w_hi) = match kind {
            MuckenhouptKind::AForm => (c, b, a, c),
            MuckenhouptKind::BForm => (a, c, c, b),
        };
        let iu = integrate(&u, u_lo, u_hi);
        let iw = if p == 1.0 { Some(sup_inv_v(w_lo, w_hi)) } else { integrate(&w, w_lo, w_hi) };
        let (Some(iu), Some(iw)) = (iu, iw) else { return f64::NAN };
        if iu == 0.0 || iw == 0.0 {
            return f64::NEG_INFINITY;
        }
        let exp_w = if p == 1.0 { 1.0 } else { 1.0 / pp };
        iu.ln() / p + iw.ln() * exp_w
    };
    let floor_a = (len * 1e-280).max(1e8 * f64::EPSILON * a.abs());
    let floor_b = (len * 1e-280).max(1e8 * f64::EPSILON * b.abs());
    let logit = |r: f64| (r / (1.0 - r)).ln();
    let (z0, z1) = (logit(floor_a / len), -logit(floor_b / len));
    let at = |z: f64| a + len / (1.0 + (-z).exp());
    let grid: Vec<(f64, f64)> = (0..GRID)
        .map(|k| z0 + (z1 - z0) * k as f64 / (GRID - 1) as f64)
        .map(|z| (z, objective(at(z))))
        .filter(|(_, v)| !v.is_nan())
        .collect();
    let infinite = MuckenhouptResult { kind, p, value: Constant::Infinite, bracket: None, sup_location: None };
    if grid.iter().any(|(_, v)| *v == f64::INFINITY) {
        return Ok(infinite);
    }
    let n = grid.len();
    if n < 3 {
        return Err(Error::Overflow { x: a });
    }
    let (zs, vals): (Vec<f64>, Vec<f64>) = grid.into_iter().unzip();
    let k = (0..n).max_by(|&i, &j| vals[i].total_cmp(&vals[j])).unwrap();
    if !vals[k].is_finite() {
        return Ok(MuckenhouptResult { kind, p, value: Constant::Finite(0.0), bracket: Some((0.0, 0.0)), sup_location: None });
    }
    // still growing at the edge of the grid: the supremum is unbounded
    if (k == 0 && vals[0] - vals[1] > 1e-6) || (k == n - 1 && vals[n - 1] - vals[n - 2] > 1e-6) {
        return Ok(infinite);
    }
    let (lo, hi) = (zs[k.saturating_sub(1)], zs[(k + 1).min(n - 1)]);
    let (zb, neg) = golden_min(|z| { let v = objective(at(z)); if v.is_nan() { f64::INFINITY } else { -v } }, lo, hi, 1e-10 * (z1 - z0));
    let (z, best) = if -neg > vals[k] { (zb, -neg) } else { (zs[k], vals[k]) };
    let value = best.exp();
    let factor = if p == 1.0 { 1.0 } else { p.powf(1.0 / p) * pp.powf(1.0 / pp) };
    Ok(MuckenhouptResult { kind, p, value: Constant::Finite(value), bracket: Some((value, factor * value)), sup_location: Some(at(z)) })
}
