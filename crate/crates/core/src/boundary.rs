//! Generalized boundary values at limit circle endpoints.
//!
//! With `(u, û)` the `λ = 0` frame at an endpoint, `g̃ = −W(u, g)` and
//! `g̃′ = W(û, g)` in the limit toward that endpoint. For a solution `y` of
//! `(τ − λ)y = 0` the same pair is obtained exactly, at any interior point,
//! from the `λ`-frame: `(W(y, u_λ), W(û_λ, y))`.

use crate::error::{Error, Result};
use crate::numerics::{limit_extrapolate, Grid, Model, Tolerance};
use crate::problem::{BesselProblem, Endpoint};
use crate::solutions::{local_frame_q0, transport_frame, volterra_frame, wronskian, Member, SolutionFrame};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

const LADDER: usize = 9;
const MIN_FIT: usize = 4;

/// `(g̃, g̃′)` at each endpoint; `None` at limit point endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryData {
    pub at_a: Option<(f64, f64)>,
    pub at_b: Option<(f64, f64)>,
}

impl BoundaryData {
    pub fn at(&self, e: Endpoint) -> Option<(f64, f64)> {
        match e {
            Endpoint::A => self.at_a,
            Endpoint::B => self.at_b,
        }
    }
}

/// The `λ = 0` frames at the limit circle endpoints.
#[derive(Debug, Clone)]
pub struct ReferenceFrames {
    pub at_a: Option<SolutionFrame>,
    pub at_b: Option<SolutionFrame>,
}

impl ReferenceFrames {
    pub fn at(&self, e: Endpoint) -> Option<&SolutionFrame> {
        match e {
            Endpoint::A => self.at_a.as_ref(),
            Endpoint::B => self.at_b.as_ref(),
        }
    }
}

pub fn reference_frames(problem: &BesselProblem, tol: &Tolerance) -> Result<ReferenceFrames> {
    let build = |e| -> Result<Option<SolutionFrame>> {
        if problem.is_limit_circle(e) {
            volterra_frame(problem, e, 0.0, tol).map(Some)
        } else {
            Ok(None)
        }
    };
    Ok(ReferenceFrames { at_a: build(Endpoint::A)?, at_b: build(Endpoint::B)? })
}

/// Distances `δ_k = (b−a) 2^{−k}/16`, `k = 0..8`.
pub fn ladder(problem: &BesselProblem) -> Vec<f64> {
    (0..LADDER).map(|k| problem.length() * 0.5f64.powi(k as i32) / 16.0).collect()
}

fn model_for(s: f64) -> Model {
    if s == 0.0 {
        Model::AlgebraicLog
    } else {
        Model::Algebraic
    }
}

fn extrapolate(e: Endpoint, mut pairs: Vec<(f64, f64)>, model: Model, tol: &Tolerance) -> Result<f64> {
    // nearest points first; far ladder points are dropped while the fit
    // is inconsistent, since several powers of δ compete there
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut first_err = None;
    for n in (MIN_FIT..=pairs.len()).rev() {
        let grid = Grid::from_pairs(pairs[..n].to_vec())?;
        match limit_extrapolate(&grid, model, tol) {
            Ok(ex) if ex.diverges => {
                return Err(Error::ModelMismatch(format!("boundary value at {e}: Wronskian diverges")));
            }
            Ok(ex) => return Ok(ex.limit),
            Err(Error::ModelMismatch(m)) => {
                first_err.get_or_insert(m);
            }
            Err(other) => return Err(other),
        }
    }
    Err(Error::ModelMismatch(format!("boundary value at {e}: {}", first_err.unwrap_or_default())))
}

// For solution-like `g`, `W(u, g)′ = −u τg` and `W(û, g)′ = −û τg` make the
// approach to the limit a combination of these powers of δ (with logarithms
// when s = 0).
fn solution_powers(s: f64) -> Vec<(f64, u32)> {
    if s == 0.0 {
        vec![(2.0, 0), (2.0, 1), (2.0, 2), (4.0, 0), (4.0, 1), (4.0, 2)]
    } else {
        let mut p = vec![2.0 - 2.0 * s, 2.0, 2.0 + 2.0 * s, 4.0 - 2.0 * s, 4.0];
        p.sort_by(f64::total_cmp);
        p.dedup_by(|x, y| (*x - *y).abs() < 1e-9);
        p.into_iter().map(|e| (e, 0)).collect()
    }
}

fn fixed_power_fit(pairs: &[(f64, f64)], powers: &[(f64, u32)], len: f64) -> (f64, f64) {
    let n = pairs.len();
    let cols = powers.len() + 1;
    let mut m = DMatrix::<f64>::zeros(n, cols);
    for (i, &(d, _)) in pairs.iter().enumerate() {
        let r = d / len;
        m[(i, 0)] = 1.0;
        for (j, &(e, k)) in powers.iter().enumerate() {
            m[(i, j + 1)] = r.powf(e) * (1.0 / r).ln().powi(k as i32);
        }
    }
    for j in 1..cols {
        let nj = m.column(j).norm();
        if nj > 0.0 {
            m.column_mut(j).scale_mut(1.0 / nj);
        }
    }
    let rhs = DVector::from_iterator(n, pairs.iter().map(|p| p.1));
    match m.clone().svd(true, true).solve(&rhs, 1e-14) {
        Ok(x) => ((&m * &x - &rhs).norm() / (n as f64).sqrt(), x[0]),
        Err(_) => (f64::INFINITY, f64::NAN),
    }
}

fn limit_of(problem: &BesselProblem, e: Endpoint, pairs: Vec<(f64, f64)>, scale: f64, tol: &Tolerance) -> Result<f64> {
    let s = problem.s(e);
    let (rms, limit) = fixed_power_fit(&pairs, &solution_powers(s), problem.length());
    if rms <= 100.0 * tol.rel.max(tol.abs) * scale.max(1.0) {
        return Ok(limit);
    }
    extrapolate(e, pairs, model_for(s), tol)
}

/// Boundary values of `g` (value and derivative) from Wronskian limits
/// against the reference frames.
///
/// Certified for `g` solving `(τ − λ) g = 0` near the endpoints; other `g`
/// go through a generic power-law extrapolation with lower accuracy.
pub fn boundary_values<G>(problem: &BesselProblem, g: G, frames: &ReferenceFrames, tol: &Tolerance) -> Result<BoundaryData>
where
    G: Fn(f64) -> (f64, f64),
{
    let one = |e: Endpoint| -> Result<Option<(f64, f64)>> {
        let Some(frame) = frames.at(e) else {
            return Ok(None);
        };
        let mut val = Vec::with_capacity(LADDER);
        let mut der = Vec::with_capacity(LADDER);
        for d in ladder(problem) {
            let x = problem.at_distance(e, d);
            let gx = g(x);
            let u = transport_frame(frame, Member::Principal, problem, x, tol)?;
            let uh = transport_frame(frame, Member::Nonprincipal, problem, x, tol)?;
            val.push((d, -wronskian(u, gx)));
            der.push((d, wronskian(uh, gx)));
        }
        let scale = val.iter().chain(&der).fold(0.0f64, |m, p| m.max(p.1.abs()));
        Ok(Some((limit_of(problem, e, val, scale, tol)?, limit_of(problem, e, der, scale, tol)?)))
    };
    Ok(BoundaryData { at_a: one(Endpoint::A)?, at_b: one(Endpoint::B)? })
}

/// Boundary values at `endpoint` from the quotient limits `g̃ = lim g/û₀`,
/// `g̃′ = lim (g − g̃ û₀)/u₀` with the one-singularity `q = 0` frame `(u₀, û₀)`.
///
/// Both limits are taken at once by fitting `g/û₀ = g̃ + g̃′ η + O(t²)` along
/// the ladder, `η = u₀/û₀`. Ladder points where `û₀` changes sign (`s = 0`,
/// `t ≥ 1`) are dropped.
pub fn boundary_value_quotient<G>(problem: &BesselProblem, g: G, endpoint: Endpoint, tol: &Tolerance) -> Result<(f64, f64)>
where
    G: Fn(f64) -> f64,
{
    let e = endpoint;
    let s = problem.s(e);
    if s >= 1.0 {
        return Err(Error::FrameUndefined(format!("no boundary values at the limit point endpoint {e}")));
    }
    let origin = problem.position(e);
    let len = problem.length();
    let mut rows = Vec::new();
    for d in ladder(problem) {
        let x = problem.at_distance(e, d);
        let f = local_frame_q0(s, e, origin, x)?;
        if f.u_hat.0 > 0.0 {
            let eta = f.u.0 / f.u_hat.0;
            let r = d / len;
            rows.push(([1.0, eta, r * r, eta * r * r, r.powi(4)], g(x) / f.u_hat.0));
        }
    }
    if rows.len() < 7 {
        return Err(Error::Parameter(format!("too few usable ladder points at {e} for the quotient form")));
    }
    let n = rows.len();
    let mut m = DMatrix::<f64>::zeros(n, 5);
    for (i, (c, _)) in rows.iter().enumerate() {
        for j in 0..5 {
            m[(i, j)] = c[j];
        }
    }
    let norms: Vec<f64> = (0..5).map(|j| m.column(j).norm()).collect();
    for (j, nj) in norms.iter().enumerate() {
        m.column_mut(j).scale_mut(1.0 / nj);
    }
    let rhs = DVector::from_iterator(n, rows.iter().map(|r| r.1));
    let x = m.clone().svd(true, true).solve(&rhs, 1e-14).map_err(|m| Error::ModelMismatch(m.to_string()))?;
    let rms = (&m * &x - &rhs).norm() / (n as f64).sqrt();
    let scale = rhs.amax().max(1.0);
    if rms > tol.rel.sqrt() * scale {
        return Err(Error::ModelMismatch(format!("quotient fit at {e}: residual {rms:.3e}")));
    }
    Ok((x[0] / norms[0], x[1] / norms[1]))
}

/// The `λ`-frame at a limit circle endpoint. Its nonprincipal member `θ = û_λ`
/// has boundary data `(1, 0)` there and its principal member `φ = u_λ` has
/// `(0, 1)`.
pub fn boundary_basis(problem: &BesselProblem, lambda: f64, endpoint: Endpoint, tol: &Tolerance) -> Result<SolutionFrame> {
    if !problem.is_limit_circle(endpoint) {
        return Err(Error::FrameUndefined(format!(
            "no boundary basis at the limit point endpoint {endpoint} (s = {})",
            problem.s(endpoint)
        )));
    }
    volterra_frame(problem, endpoint, lambda, tol)
}

/// Boundary data at `basis.endpoint` of the solution `y` of
/// `(τ − basis.lambda) y = 0`, given as value and derivative at `x`.
pub fn solution_data(
    problem: &BesselProblem,
    basis: &SolutionFrame,
    x: f64,
    y: (f64, f64),
    tol: &Tolerance,
) -> Result<(f64, f64)> {
    let theta = transport_frame(basis, Member::Nonprincipal, problem, x, tol)?;
    let phi = transport_frame(basis, Member::Principal, problem, x, tol)?;
    Ok((wronskian(y, phi), wronskian(theta, y)))
}
