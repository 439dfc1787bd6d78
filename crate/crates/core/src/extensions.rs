//! Endpoint classification and the self-adjoint extensions of the minimal
//! operator: separated and coupled boundary conditions, the Friedrichs and
//! Krein–von Neumann extensions, and the quadratic form.

use crate::error::{Error, Result};
use crate::firstorder::{qtilde, FirstOrderExpr};
use crate::numerics::{quad_truncated, Tolerance};
use crate::problem::{BesselProblem, Endpoint};
use crate::solutions::{transport_frame, volterra_frame, wronskian, Member};
use crate::specialfn::{digamma, gamma_real, rgamma, EULER_GAMMA};
use crate::spectra;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndpointKind {
    #[serde(rename = "LC")]
    LimitCircle,
    #[serde(rename = "LP")]
    LimitPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProblemClassification {
    pub at_a: EndpointKind,
    pub at_b: EndpointKind,
    /// Deficiency index, the number of limit circle endpoints.
    pub deficiency: usize,
}

pub fn classify(problem: &BesselProblem) -> ProblemClassification {
    let kind = |e| if problem.is_limit_circle(e) { EndpointKind::LimitCircle } else { EndpointKind::LimitPoint };
    let (at_a, at_b) = (kind(Endpoint::A), kind(Endpoint::B));
    let deficiency = [at_a, at_b].iter().filter(|k| **k == EndpointKind::LimitCircle).count();
    ProblemClassification { at_a, at_b, deficiency }
}

/// A self-adjoint extension.
///
/// `Separated` imposes `g̃ cos α + g̃′ sin α = 0` at `a` and the same with `β`
/// at `b`; an angle is present exactly at limit circle endpoints. `Coupled`
/// imposes `(g̃(b), g̃′(b))ᵀ = e^{iφ} R (g̃(a), g̃′(a))ᵀ` with `det R = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ExtensionSpec {
    Separated { alpha: Option<f64>, beta: Option<f64> },
    Coupled { phi: f64, r: [[f64; 2]; 2] },
    Friedrichs,
    KreinVonNeumann,
}

impl ExtensionSpec {
    /// Checks the spec against the endpoint classification.
    pub fn validate(&self, problem: &BesselProblem) -> Result<()> {
        let lc_a = problem.is_limit_circle(Endpoint::A);
        let lc_b = problem.is_limit_circle(Endpoint::B);
        match *self {
            ExtensionSpec::Separated { alpha, beta } => {
                for (angle, lc, e) in [(alpha, lc_a, Endpoint::A), (beta, lc_b, Endpoint::B)] {
                    match angle {
                        Some(t) if !lc => {
                            return Err(Error::Parameter(format!("angle {t} given at the limit point endpoint {e}")));
                        }
                        None if lc => {
                            return Err(Error::Parameter(format!("limit circle endpoint {e} needs an angle")));
                        }
                        Some(t) if !(0.0..PI).contains(&t) => {
                            return Err(Error::Parameter(format!("angle at {e} must lie in [0, π), got {t}")));
                        }
                        _ => {}
                    }
                }
                Ok(())
            }
            ExtensionSpec::Coupled { phi, r } => {
                if !(lc_a && lc_b) {
                    return Err(Error::Parameter("coupled conditions need both endpoints limit circle".into()));
                }
                if !(0.0..2.0 * PI).contains(&phi) {
                    return Err(Error::Parameter(format!("phase must lie in [0, 2π), got {phi}")));
                }
                let det = r[0][0] * r[1][1] - r[0][1] * r[1][0];
                let norm = r.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
                if !((det - 1.0).abs() <= 1e-10 * norm.max(1.0).powi(2)) {
                    return Err(Error::Parameter(format!("coupling matrix must have det 1, got {det}")));
                }
                Ok(())
            }
            ExtensionSpec::Friedrichs | ExtensionSpec::KreinVonNeumann => Ok(()),
        }
    }
}

/// `g̃ = 0` at every limit circle endpoint; no condition at limit point ones.
pub fn friedrichs_spec(problem: &BesselProblem) -> ExtensionSpec {
    let angle = |e| if problem.is_limit_circle(e) { Some(0.0) } else { None };
    ExtensionSpec::Separated { alpha: angle(Endpoint::A), beta: angle(Endpoint::B) }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KreinMode {
    AngleAtA,
    AngleAtB,
    Matrix,
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KreinData {
    pub mode: KreinMode,
    /// `cot` of the boundary angle in the angle modes.
    pub cot_value: Option<f64>,
    /// The angle itself, in `(0, π)`.
    pub angle: Option<f64>,
    pub r_k: Option<[[f64; 2]; 2]>,
}

impl KreinData {
    fn angle_at(e: Endpoint, cot: f64) -> Self {
        let mode = if e == Endpoint::A { KreinMode::AngleAtA } else { KreinMode::AngleAtB };
        KreinData { mode, cot_value: Some(cot), angle: Some(1f64.atan2(cot)), r_k: None }
    }

    fn matrix(r: [[f64; 2]; 2]) -> Self {
        KreinData { mode: KreinMode::Matrix, cot_value: None, angle: None, r_k: Some(r) }
    }

    fn trivial() -> Self {
        KreinData { mode: KreinMode::Trivial, cot_value: None, angle: None, r_k: None }
    }

    pub fn spec(&self) -> ExtensionSpec {
        match self.mode {
            KreinMode::AngleAtA => ExtensionSpec::Separated { alpha: self.angle, beta: None },
            KreinMode::AngleAtB => ExtensionSpec::Separated { alpha: None, beta: self.angle },
            KreinMode::Matrix => ExtensionSpec::Coupled { phi: 0.0, r: self.r_k.expect("matrix mode carries R_K") },
            KreinMode::Trivial => ExtensionSpec::Separated { alpha: None, beta: None },
        }
    }
}

pub fn det2(r: &[[f64; 2]; 2]) -> f64 {
    r[0][0] * r[1][1] - r[0][1] * r[1][0]
}

/// Krein data from the `λ = 0` frames, transported to the midpoint.
///
/// With `(θ, φ) = (û, u)` at each endpoint, `R_K` has the boundary data at
/// `b` of `û_a` and `u_a` as columns; in the mixed cases the angle is fixed by
/// the boundary data of the principal solution of the limit point endpoint.
pub fn krein_data(problem: &BesselProblem, tol: &Tolerance) -> Result<KreinData> {
    let t = tight(tol);
    let m = problem.midpoint();
    let at = |e: Endpoint, member: Member| -> Result<(f64, f64)> {
        let f = volterra_frame(problem, e, 0.0, &t)?;
        transport_frame(&f, member, problem, m, &t)
    };
    let lc = classify(problem);
    match (lc.at_a, lc.at_b) {
        (EndpointKind::LimitPoint, EndpointKind::LimitPoint) => Ok(KreinData::trivial()),
        (EndpointKind::LimitCircle, EndpointKind::LimitPoint) => {
            let ub = at(Endpoint::B, Member::Principal)?;
            let (th, ph) = (at(Endpoint::A, Member::Nonprincipal)?, at(Endpoint::A, Member::Principal)?);
            let (v, d) = (wronskian(ub, ph), wronskian(th, ub));
            Ok(KreinData::angle_at(Endpoint::A, -d / v))
        }
        (EndpointKind::LimitPoint, EndpointKind::LimitCircle) => {
            let ua = at(Endpoint::A, Member::Principal)?;
            let (th, ph) = (at(Endpoint::B, Member::Nonprincipal)?, at(Endpoint::B, Member::Principal)?);
            let (v, d) = (wronskian(ua, ph), wronskian(th, ua));
            Ok(KreinData::angle_at(Endpoint::B, -d / v))
        }
        (EndpointKind::LimitCircle, EndpointKind::LimitCircle) => {
            let (tha, pha) = (at(Endpoint::A, Member::Nonprincipal)?, at(Endpoint::A, Member::Principal)?);
            let (thb, phb) = (at(Endpoint::B, Member::Nonprincipal)?, at(Endpoint::B, Member::Principal)?);
            let r = [[wronskian(tha, phb), wronskian(pha, phb)], [wronskian(thb, tha), wronskian(thb, pha)]];
            Ok(KreinData::matrix(r))
        }
    }
}

fn tight(tol: &Tolerance) -> Tolerance {
    Tolerance { rel: tol.rel.min(1e-12), abs: tol.abs.min(1e-14), max_steps: tol.max_steps.max(400_000) }
}

/// Smallest Friedrichs eigenvalue and whether it clears the threshold
/// `1e−8 (b−a)^{−2}` needed for the Krein construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositivityBound {
    pub epsilon: f64,
    pub threshold: f64,
    pub available: bool,
}

pub fn positivity_lower_bound(problem: &BesselProblem, tol: &Tolerance) -> Result<PositivityBound> {
    let epsilon = spectra::lowest_eigenvalue(problem, &friedrichs_spec(problem), tol)?;
    let threshold = 1e-8 / (problem.length() * problem.length());
    Ok(PositivityBound { epsilon, threshold, available: epsilon > threshold })
}

/// Krein–von Neumann extension, available when the minimal operator is
/// strictly positive.
pub fn krein_spec(problem: &BesselProblem, tol: &Tolerance) -> Result<(ExtensionSpec, KreinData)> {
    let pos = positivity_lower_bound(problem, tol)?;
    if !pos.available {
        return Err(Error::Unavailable(format!(
            "Krein–von Neumann extension needs a strictly positive minimal operator; lowest Friedrichs eigenvalue is {:e}",
            pos.epsilon
        )));
    }
    let data = krein_data(problem, tol)?;
    Ok((data.spec(), data))
}

fn gamma(x: f64) -> Result<f64> {
    gamma_real(x)
}

// 1/(Γ(x+σ)Γ(x−σ)), real for real or imaginary σ
fn rgamma_pair(x: f64, sigma: C) -> f64 {
    (rgamma(x + sigma) * rgamma(x - sigma)).re
}

fn sigma(s: f64, r: f64) -> C {
    0.5 * C::new(4.0 * s * s + 4.0 * r * r - 1.0, 0.0).sqrt()
}

/// Boundary data at the opposite endpoint of the `q = 0` principal solution
/// at an endpoint of strength `s` (opposite strength `r < 1`), in the form
/// `(P, Q)`: the principal solution at `a` has data `(P, Q)` at `b`, the one at
/// `b` has data `(−P, Q)` at `a` with the roles of the strengths swapped.
fn principal_connection(s: f64, r: f64, len: f64) -> Result<(f64, f64)> {
    let sg = sigma(s, r);
    let p = len.powf(s + r) * gamma(1.0 + 2.0 * s)? * gamma(1.0 + 2.0 * r)? * rgamma_pair(0.5 + s + r, sg);
    let q = if r > 0.0 {
        len.powf(s - r) * gamma(2.0 + 2.0 * s)? * gamma(2.0 - 2.0 * r)? / (4.0 * r) * rgamma_pair(1.5 + s - r, sg)
    } else {
        let psi = (digamma(0.5 + s + sg)? + digamma(0.5 + s - sg)?).re;
        -len.powf(s) * gamma(1.0 + 2.0 * s)? * rgamma_pair(0.5 + s, sg) * (len.ln() - 2.0 * EULER_GAMMA - psi)
    };
    Ok((p, q))
}

/// Closed-form Krein data for `q = 0` from Gauss connection formulas.
///
/// Only the principal connection coefficients are needed: the first column
/// of `R_K` follows from `ũ̂_a(b) = ũ′_b(a)` and `det R_K = 1`.
pub fn krein_closed_form_q0(problem: &BesselProblem) -> Result<KreinData> {
    if !problem.q.is_zero() {
        return Err(Error::Parameter("closed-form Krein data needs q = 0".into()));
    }
    let (sa, sb, len) = (problem.s_a, problem.s_b, problem.length());
    let lc = classify(problem);
    match (lc.at_a, lc.at_b) {
        (EndpointKind::LimitPoint, EndpointKind::LimitPoint) => Ok(KreinData::trivial()),
        (EndpointKind::LimitCircle, EndpointKind::LimitPoint) => {
            let (p, qb) = principal_connection(sb, sa, len)?;
            Ok(KreinData::angle_at(Endpoint::A, qb / p))
        }
        (EndpointKind::LimitPoint, EndpointKind::LimitCircle) => {
            let (p, qa) = principal_connection(sa, sb, len)?;
            Ok(KreinData::angle_at(Endpoint::B, -qa / p))
        }
        (EndpointKind::LimitCircle, EndpointKind::LimitCircle) => {
            let (p, qa) = principal_connection(sa, sb, len)?;
            let (_, qb) = principal_connection(sb, sa, len)?;
            Ok(KreinData::matrix([[qb, p], [(qb * qa - 1.0) / p, qa]]))
        }
    }
}

/// `‖α_{s_a,s_b} f‖² + (f, (q − q̃) f)` with the default step width.
pub fn quadratic_form<F>(problem: &BesselProblem, f: F, tol: &Tolerance) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    let expr = FirstOrderExpr::for_problem(problem);
    let integrand = |x: f64| -> f64 {
        let (v, d) = f(x);
        if v == 0.0 && d == 0.0 {
            return 0.0;
        }
        let (p, _) = match expr.phi(x) {
            Ok(p) => p,
            Err(_) => return f64::NAN,
        };
        let af = d + p * v;
        let qt = qtilde(&expr, x).unwrap_or(f64::NAN);
        af * af + (problem.q.eval(x) - qt) * v * v
    };
    match quad_truncated(integrand, problem.a, problem.b, tol) {
        Ok(r) if r.value.is_finite() => Ok(r.value),
        Ok(_) => Err(Error::OutsideFormDomain("form integrand is not integrable".into())),
        Err(e) => Err(Error::OutsideFormDomain(e.to_string())),
    }
}
