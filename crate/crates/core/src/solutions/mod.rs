//! Normalized principal/nonprincipal solution frames at the endpoints.
//!
//! A frame at endpoint `e` is described in the distance variable `t` by a
//! pair `(U, Û)` with `U ~ t^{½+s}` and `Û ~ (2s)⁻¹ t^{½−s}` (or `t^{½} ln(1/t)`
//! when `s = 0`) and `W_t(Û, U) = 1`. At `a` the frame is `(u, û) = (U, Û)`;
//! at `b` it is `u = −U`, `û = Û`, which keeps `W(û, u) = 1` in `x`.

mod global;
mod heun;
mod volterra;

pub use heun::{heun_reduction, HeunReduction};

use crate::error::{Error, Result};
use crate::numerics::{integrate_ode, Tolerance, Transport};
use crate::problem::{BesselProblem, Endpoint};
use global::GlobalFrame;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use volterra::VolterraFrame;

/// Which member of a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Member {
    Principal,
    Nonprincipal,
}

/// Value and derivative of both frame members at one abscissa.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FramePair {
    pub u: (f64, f64),
    pub u_hat: (f64, f64),
}

#[derive(Debug, Clone)]
enum Kind {
    Volterra(Arc<VolterraFrame>),
    Global(GlobalFrame),
}

/// Principal/nonprincipal pair at an endpoint for one spectral parameter.
#[derive(Debug, Clone)]
pub struct SolutionFrame {
    pub endpoint: Endpoint,
    pub lambda: f64,
    pub s: f64,
    /// Open-closed interval of certified evaluation, `(a, a+h]` or `[b−h, b)`.
    pub validity: (f64, f64),
    origin: f64,
    reach: f64,
    kind: Kind,
}

impl SolutionFrame {
    fn new(endpoint: Endpoint, origin: f64, lambda: f64, s: f64, reach: f64, kind: Kind) -> Self {
        let validity = match endpoint {
            Endpoint::A => (origin, origin + reach),
            Endpoint::B => (origin - reach, origin),
        };
        SolutionFrame { endpoint, lambda, s, validity, origin, reach, kind }
    }

    pub fn has_nonprincipal(&self) -> bool {
        self.s < 1.0
    }

    /// Largest certified distance from the endpoint.
    pub fn reach(&self) -> f64 {
        self.reach
    }

    /// Inner edge of the validity interval, where transport starts.
    pub fn edge(&self) -> f64 {
        match self.endpoint {
            Endpoint::A => self.origin + self.reach,
            Endpoint::B => self.origin - self.reach,
        }
    }

    fn distance(&self, x: f64) -> Result<f64> {
        let t = match self.endpoint {
            Endpoint::A => x - self.origin,
            Endpoint::B => self.origin - x,
        };
        if !(t > 0.0) {
            return Err(Error::Singularity { x });
        }
        if t > self.reach * (1.0 + 1e-12) {
            return Err(Error::Parameter(format!(
                "x = {x} outside the frame validity interval [{}, {}]",
                self.validity.0, self.validity.1
            )));
        }
        Ok(t)
    }

    fn orient(&self, member: Member, (v, d): (f64, f64)) -> (f64, f64) {
        match (self.endpoint, member) {
            (Endpoint::A, _) => (v, d),
            (Endpoint::B, Member::Principal) => (-v, d),
            (Endpoint::B, Member::Nonprincipal) => (v, -d),
        }
    }

    /// Value and `x`-derivative of a member at `x`.
    pub fn eval(&self, member: Member, x: f64) -> Result<(f64, f64)> {
        let t = self.distance(x)?;
        let raw = match member {
            Member::Principal => match &self.kind {
                Kind::Volterra(v) => v.principal(t),
                Kind::Global(g) => g.principal(t)?,
            },
            Member::Nonprincipal => {
                if !self.has_nonprincipal() {
                    return Err(Error::FrameUndefined(format!(
                        "s = {} ≥ 1 at {}: limit point endpoint has no nonprincipal member",
                        self.s, self.endpoint
                    )));
                }
                match &self.kind {
                    Kind::Volterra(v) => v.nonprincipal(t),
                    Kind::Global(g) => g.nonprincipal(t)?,
                }
            }
        };
        Ok(self.orient(member, raw))
    }

    pub fn u(&self, x: f64) -> Result<(f64, f64)> {
        self.eval(Member::Principal, x)
    }

    pub fn u_hat(&self, x: f64) -> Result<(f64, f64)> {
        self.eval(Member::Nonprincipal, x)
    }

    pub fn pair(&self, x: f64) -> Result<FramePair> {
        Ok(FramePair { u: self.u(x)?, u_hat: self.u_hat(x)? })
    }
}

/// Closed-form `q = 0` frame of the one-singularity problem at `endpoint`
/// (located at `origin`), evaluated at `x`.
pub fn local_frame_q0(s: f64, endpoint: Endpoint, origin: f64, x: f64) -> Result<FramePair> {
    if !(0.0..1.0).contains(&s) {
        return Err(Error::FrameUndefined(format!("local frame needs s in [0, 1), got {s}")));
    }
    let t = match endpoint {
        Endpoint::A => x - origin,
        Endpoint::B => origin - x,
    };
    if !(t > 0.0) {
        return Err(Error::Singularity { x });
    }
    let u = (t.powf(0.5 + s), (0.5 + s) * t.powf(s - 0.5));
    let uh = if s == 0.0 {
        let l = (1.0 / t).ln();
        (t.sqrt() * l, (0.5 * l - 1.0) / t.sqrt())
    } else {
        (t.powf(0.5 - s) / (2.0 * s), (0.5 - s) * t.powf(-0.5 - s) / (2.0 * s))
    };
    Ok(match endpoint {
        Endpoint::A => FramePair { u, u_hat: uh },
        Endpoint::B => FramePair { u: (-u.0, u.1), u_hat: (uh.0, -uh.1) },
    })
}

/// Closed hypergeometric frame at `λ = 0` for `q = 0`.
pub fn global_frame_q0(problem: &BesselProblem, endpoint: Endpoint, tol: &Tolerance) -> Result<SolutionFrame> {
    if !problem.q.is_zero() {
        return Err(Error::Parameter("global hypergeometric frames need q = 0".into()));
    }
    let g = GlobalFrame::new(problem, endpoint, tol)?;
    let reach = g.reach();
    Ok(SolutionFrame::new(endpoint, problem.position(endpoint), 0.0, problem.s(endpoint), reach, Kind::Global(g)))
}

/// Frame at spectral parameter `λ` by successive approximation around the
/// `q = 0` local frame.
pub fn volterra_frame(problem: &BesselProblem, endpoint: Endpoint, lambda: f64, tol: &Tolerance) -> Result<SolutionFrame> {
    let v = VolterraFrame::build(problem, endpoint, lambda, tol)?;
    let reach = v.reach();
    Ok(SolutionFrame::new(
        endpoint,
        problem.position(endpoint),
        lambda,
        problem.s(endpoint),
        reach,
        Kind::Volterra(Arc::new(v)),
    ))
}

/// Transports a frame member from the edge of its validity interval to
/// `x_target`, keeping the dense output.
pub fn transport_member(
    frame: &SolutionFrame,
    member: Member,
    problem: &BesselProblem,
    x_target: f64,
    tol: &Tolerance,
) -> Result<Transport<f64>> {
    if !(x_target > problem.a && x_target < problem.b) {
        return Err(Error::Singularity { x: x_target });
    }
    let x0 = frame.edge();
    let y0 = frame.eval(member, x0)?;
    integrate_ode(problem.ode_coefficient(frame.lambda), x0, y0, x_target, tol)
}

/// Value and derivative of a frame member at an interior abscissa.
pub fn transport_frame(
    frame: &SolutionFrame,
    member: Member,
    problem: &BesselProblem,
    x_target: f64,
    tol: &Tolerance,
) -> Result<(f64, f64)> {
    let t = problem.distance(frame.endpoint, x_target);
    if t > 0.0 && t <= frame.reach() {
        return frame.eval(member, x_target);
    }
    let tr = transport_member(frame, member, problem, x_target, tol)?;
    Ok((tr.value, tr.derivative))
}

/// `W(f, g) = f g′ − f′ g` from value-derivative pairs.
pub fn wronskian(f: (f64, f64), g: (f64, f64)) -> f64 {
    f.0 * g.1 - f.1 * g.0
}
