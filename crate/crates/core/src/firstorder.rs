//! First-order factors of the Bessel expressions.
//!
//! `α_s = d/dx − (s+½)/(x−a)`, `β_s = d/dx + (s+½)/(b−x)`, and the two-point
//! `α_{s_a,s_b} = d/dx + φ` with
//! `φ = −(s_a+½)/(x−a) χ̃_a + (s_b+½)/(b−x) χ̃_b` built from smooth steps.
//! Adjoints are `−d/dx` plus the same multiplier.

use crate::error::{Error, Result};
use crate::numerics::{limit_extrapolate, Grid, Model, Tolerance};
use crate::problem::BesselProblem;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FirstOrderKind {
    AlphaAtA,
    BetaAtB,
    TwoPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirstOrderExpr {
    pub kind: FirstOrderKind,
    pub a: f64,
    pub b: f64,
    pub s_a: f64,
    pub s_b: f64,
    /// Step width, only used by the two-point expression.
    pub eps: f64,
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Parameter(format!("need a finite interval a < b (got {a}, {b})")));
    }
    Ok(())
}

impl FirstOrderExpr {
    pub fn alpha(a: f64, b: f64, s: f64) -> Result<Self> {
        check_interval(a, b)?;
        Ok(FirstOrderExpr { kind: FirstOrderKind::AlphaAtA, a, b, s_a: s, s_b: 0.0, eps: 0.0 })
    }

    pub fn beta(a: f64, b: f64, s: f64) -> Result<Self> {
        check_interval(a, b)?;
        Ok(FirstOrderExpr { kind: FirstOrderKind::BetaAtB, a, b, s_a: 0.0, s_b: s, eps: 0.0 })
    }

    pub fn two_point(a: f64, b: f64, s_a: f64, s_b: f64, eps: f64) -> Result<Self> {
        check_interval(a, b)?;
        if !(eps > 0.0 && eps < 0.5 * (b - a)) {
            return Err(Error::Parameter(format!("step width must lie in (0, (b−a)/2), got {eps}")));
        }
        Ok(FirstOrderExpr { kind: FirstOrderKind::TwoPoint, a, b, s_a, s_b, eps })
    }

    /// Two-point expression of a problem with the default step width `(b−a)/8`.
    pub fn for_problem(problem: &BesselProblem) -> Self {
        let eps = problem.length() / 8.0;
        FirstOrderExpr { kind: FirstOrderKind::TwoPoint, a: problem.a, b: problem.b, s_a: problem.s_a, s_b: problem.s_b, eps }
    }

    /// The multiplier `φ` in `d/dx + φ` and its derivative.
    pub fn phi(&self, x: f64) -> Result<(f64, f64)> {
        if !(x > self.a && x < self.b) {
            return Err(Error::Singularity { x });
        }
        let (ka, kb) = (self.s_a + 0.5, self.s_b + 0.5);
        let (ta, tb) = (x - self.a, self.b - x);
        Ok(match self.kind {
            FirstOrderKind::AlphaAtA => (-ka / ta, ka / (ta * ta)),
            FirstOrderKind::BetaAtB => (kb / tb, kb / (tb * tb)),
            FirstOrderKind::TwoPoint => {
                let (ca, dca) = step(x, Edge::Left, self.a, self.b, self.eps);
                let (cb, dcb) = step(x, Edge::Right, self.a, self.b, self.eps);
                let v = -ka / ta * ca + kb / tb * cb;
                let d = ka / (ta * ta) * ca - ka / ta * dca + kb / (tb * tb) * cb + kb / tb * dcb;
                (v, d)
            }
        })
    }
}

/// `(αf)(x)` or, with `adjoint`, `(α⁺f)(x)` from the value and derivative of `f`.
pub fn apply(expr: &FirstOrderExpr, f: (f64, f64), x: f64, adjoint: bool) -> Result<f64> {
    let (p, _) = expr.phi(x)?;
    let d = if adjoint { -f.1 } else { f.1 };
    Ok(d + p * f.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Edge {
    Left,
    Right,
}

fn bump(t: f64) -> (f64, f64) {
    if t <= 0.0 {
        (0.0, 0.0)
    } else {
        let e = (-1.0 / t).exp();
        (e, e / (t * t))
    }
}

// S(t) = B(1−t)/(B(t)+B(1−t)): 1 for t ≤ 0, 0 for t ≥ 1
fn transition(t: f64) -> (f64, f64) {
    let (p, dp) = bump(1.0 - t);
    let (q, dq) = bump(t);
    let den = p + q;
    if den == 0.0 {
        return (if t <= 0.0 { 1.0 } else { 0.0 }, 0.0);
    }
    // d/dt of p(1−t)/(p+q): numerator derivative is −dp
    let v = p / den;
    let d = (-dp * den - p * (dq - dp)) / (den * den);
    (v, d)
}

fn step(x: f64, edge: Edge, a: f64, b: f64, eps: f64) -> (f64, f64) {
    match edge {
        Edge::Left => {
            let (v, d) = transition((x - a - eps) / eps);
            (v, d / eps)
        }
        Edge::Right => {
            let (v, d) = transition((b - eps - x) / eps);
            (v, -d / eps)
        }
    }
}

/// Smooth step equal to 1 within `ε` of the chosen edge of `[a, b]` and 0
/// beyond `2ε`.
pub fn smooth_step(x: f64, edge: Edge, a: f64, b: f64, eps: f64) -> f64 {
    step(x, edge, a, b, eps).0
}

pub fn smooth_step_derivative(x: f64, edge: Edge, a: f64, b: f64, eps: f64) -> f64 {
    step(x, edge, a, b, eps).1
}

/// `q̃ = φ² − φ′ − (s_a²−¼)/(x−a)² − (s_b²−¼)/(b−x)²`.
pub fn qtilde(expr: &FirstOrderExpr, x: f64) -> Result<f64> {
    if expr.kind != FirstOrderKind::TwoPoint {
        return Err(Error::Parameter("q̃ is defined for the two-point expression only".into()));
    }
    if !(x > expr.a && x < expr.b) {
        return Err(Error::Singularity { x });
    }
    // grouped so that each singular part cancels exactly where its step is 1
    let (ka, kb) = (expr.s_a + 0.5, expr.s_b + 0.5);
    let (ta, tb) = (x - expr.a, expr.b - x);
    let (ca, dca) = step(x, Edge::Left, expr.a, expr.b, expr.eps);
    let (cb, dcb) = step(x, Edge::Right, expr.a, expr.b, expr.eps);
    let part = |k: f64, c: f64, dc: f64, t: f64| {
        if c == 1.0 && dc == 0.0 {
            0.0
        } else {
            k * (c - 1.0) * (k * (c + 1.0) - 1.0) / (t * t) + k * dc / t
        }
    };
    let cross = if ca * cb == 0.0 { 0.0 } else { 2.0 * ka * kb * ca * cb / (ta * tb) };
    Ok(part(ka, ca, dca, ta) + part(kb, cb, -dcb, tb) - cross)
}

/// Largest relative residuals of the factorizations on a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FactorizationResidual {
    /// `ω_{s_a} = α⁺α` with the singularity at `a`.
    pub alpha: f64,
    /// `η_{s_b} = β⁺β` with the singularity at `b`.
    pub beta: f64,
    /// `τ = α⁺_{s_a,s_b} α_{s_a,s_b} + q − q̃`.
    pub tau: f64,
}

// (d/dx + φ)f and its derivative, then (−d/dx + φ) of that
fn compose(expr: &FirstOrderExpr, f: (f64, f64, f64), x: f64) -> Result<f64> {
    let (p, dp) = expr.phi(x)?;
    let g = f.1 + p * f.0;
    let dg = f.2 + dp * f.0 + p * f.1;
    Ok(-dg + p * g)
}

/// Compares the second-order expressions with the composed first-order ones
/// for `f` given with analytic first and second derivatives.
pub fn factorization_residual<F>(problem: &BesselProblem, f: F, grid: &[f64]) -> Result<FactorizationResidual>
where
    F: Fn(f64) -> (f64, f64, f64),
{
    let (a, b) = (problem.a, problem.b);
    let alpha = FirstOrderExpr::alpha(a, b, problem.s_a)?;
    let beta = FirstOrderExpr::beta(a, b, problem.s_b)?;
    let two = FirstOrderExpr::for_problem(problem);
    let mut out = FactorizationResidual { alpha: 0.0, beta: 0.0, tau: 0.0 };
    for &x in grid {
        if !(x > a && x < b) {
            return Err(Error::Singularity { x });
        }
        let fx = f(x);
        let (ta, tb) = (x - a, b - x);
        let omega = -fx.2 + (problem.s_a * problem.s_a - 0.25) / (ta * ta) * fx.0;
        let eta = -fx.2 + (problem.s_b * problem.s_b - 0.25) / (tb * tb) * fx.0;
        let tau = -fx.2 + problem.potential(x) * fx.0;
        let rel = |lhs: f64, rhs: f64| (lhs - rhs).abs() / (1.0 + lhs.abs());
        out.alpha = out.alpha.max(rel(omega, compose(&alpha, fx, x)?));
        out.beta = out.beta.max(rel(eta, compose(&beta, fx, x)?));
        let composed = compose(&two, fx, x)? + (problem.q.eval(x) - qtilde(&two, x)?) * fx.0;
        out.tau = out.tau.max(rel(tau, composed));
    }
    Ok(out)
}

/// Weight in the boundary decay conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayMode {
    /// `f(x)/(x−a)^{½}` as `x ↓ a`.
    Sqrt,
    /// `f(x)/[(x−a) ln(R/(x−a))]^{½}` as `x ↓ a`.
    SqrtLog,
    /// `f(x)/(b−x)^{½}` as `x ↑ b`.
    RightSqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Vanishes,
    FiniteNonzero,
    Diverges,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayProbe {
    pub limit: f64,
    pub uncertainty: f64,
    pub verdict: Verdict,
}

const PROBE_POINTS: usize = 16;

/// Estimates the limit of `f/w` toward the endpoint of `mode`.
///
/// In `SqrtLog` mode the samples are extrapolated in `η = 1/ln(R/t)`, in
/// which the typical `ln^{−½}` approach is algebraic. `R` must exceed `b − a`.
pub fn decay_probe<F>(f: F, a: f64, b: f64, mode: DecayMode, r_scale: f64, tol: &Tolerance) -> Result<DecayProbe>
where
    F: Fn(f64) -> f64,
{
    check_interval(a, b)?;
    let len = b - a;
    if mode == DecayMode::SqrtLog && !(r_scale > len) {
        return Err(Error::Parameter(format!("log scale R = {r_scale} must exceed b − a = {len}")));
    }
    let mut pairs = Vec::with_capacity(PROBE_POINTS);
    for k in 0..PROBE_POINTS {
        let t = len / 16.0 * 0.1f64.powf(k as f64 * 0.75);
        let (x, w, abscissa) = match mode {
            DecayMode::Sqrt => (a + t, t.sqrt(), t),
            DecayMode::RightSqrt => (b - t, t.sqrt(), t),
            DecayMode::SqrtLog => {
                let l = (r_scale / t).ln();
                (a + t, (t * l).sqrt(), 1.0 / l)
            }
        };
        pairs.push((abscissa, f(x) / w));
    }
    let scale = pairs.iter().fold(0.0f64, |m, p| m.max(p.1.abs()));
    if scale == 0.0 {
        return Ok(DecayProbe { limit: 0.0, uncertainty: 0.0, verdict: Verdict::Vanishes });
    }
    let model = if mode == DecayMode::SqrtLog { Model::Algebraic } else { Model::AlgebraicLog };
    let ex = limit_extrapolate(&Grid::from_pairs(pairs)?, model, tol)?;
    if ex.diverges {
        return Ok(DecayProbe { limit: f64::INFINITY, uncertainty: f64::INFINITY, verdict: Verdict::Diverges });
    }
    let verdict = if ex.limit.abs() < 1e-6 * scale { Verdict::Vanishes } else { Verdict::FiniteNonzero };
    Ok(DecayProbe { limit: ex.limit, uncertainty: ex.uncertainty, verdict })
}
