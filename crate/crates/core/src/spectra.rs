//! Eigenvalues and eigenfunctions of self-adjoint extensions.
//!
//! Both endpoint frames at `λ` are carried to the midpoint, where the
//! boundary conditions become a real secular function: `D = −W(χ_a, χ_b)`
//! for separated conditions and `2cos φ − T` for coupled ones, where
//! `det(M − e^{iφ}R) = e^{iφ}(2cos φ − T)` and `M` is the transfer matrix of
//! boundary data from `a` to `b`.

use crate::error::{Error, Result};
use crate::extensions::{friedrichs_spec, krein_spec, ExtensionSpec};
use crate::numerics::{find_root, golden_min, integrate_ode, quad_singular, Tolerance, Transport};
use crate::problem::{BesselProblem, Endpoint};
use crate::solutions::{transport_member, volterra_frame, wronskian, Member, SolutionFrame};
use num_complex::Complex64 as C;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

const RESIDUAL_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigenvalue {
    pub lambda: f64,
    pub multiplicity: u8,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    /// The extension with Friedrichs and Krein resolved to concrete conditions.
    pub extension: ExtensionSpec,
    pub range: (f64, f64),
    pub eigenvalues: Vec<Eigenvalue>,
}

impl Spectrum {
    /// Eigenvalues repeated by multiplicity.
    pub fn values(&self) -> Vec<f64> {
        self.eigenvalues.iter().flat_map(|e| std::iter::repeat_n(e.lambda, e.multiplicity as usize)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Conditions {
    Separated { alpha: Option<f64>, beta: Option<f64> },
    Coupled { phi: f64, r: [[f64; 2]; 2] },
}

/// Resolves Friedrichs and Krein–von Neumann to separated or coupled
/// conditions and validates the result.
pub fn resolve(problem: &BesselProblem, ext: &ExtensionSpec, tol: &Tolerance) -> Result<ExtensionSpec> {
    let spec = match ext {
        ExtensionSpec::Friedrichs => friedrichs_spec(problem),
        ExtensionSpec::KreinVonNeumann => krein_spec(problem, tol)?.0,
        other => *other,
    };
    spec.validate(problem)?;
    Ok(spec)
}

fn conditions(spec: &ExtensionSpec) -> Conditions {
    match *spec {
        ExtensionSpec::Separated { alpha, beta } => Conditions::Separated { alpha, beta },
        ExtensionSpec::Coupled { phi, r } => Conditions::Coupled { phi, r },
        _ => unreachable!("resolved specs are separated or coupled"),
    }
}

// One endpoint's frame at λ with both members carried to the midpoint.
#[derive(Debug)]
struct Side {
    frame: SolutionFrame,
    theta: Option<Transport<f64>>,
    phi: Transport<f64>,
}

impl Side {
    fn build(problem: &BesselProblem, e: Endpoint, lambda: f64, tol: &Tolerance) -> Result<Side> {
        let frame = volterra_frame(problem, e, lambda, tol)?;
        let m = problem.midpoint();
        let phi = transport_member(&frame, Member::Principal, problem, m, tol)?;
        let theta = if problem.is_limit_circle(e) {
            Some(transport_member(&frame, Member::Nonprincipal, problem, m, tol)?)
        } else {
            None
        };
        Ok(Side { frame, theta, phi })
    }

    fn theta_mid(&self) -> (f64, f64) {
        let t = self.theta.as_ref().expect("nonprincipal member at a limit circle endpoint");
        (t.value, t.derivative)
    }

    fn phi_mid(&self) -> (f64, f64) {
        (self.phi.value, self.phi.derivative)
    }

    // χ with boundary data (sin α, −cos α); the principal member at limit point ends
    fn chi_coefficients(&self, angle: Option<f64>) -> [f64; 2] {
        match angle {
            Some(t) if self.theta.is_some() => [t.sin(), -t.cos()],
            _ => [0.0, 1.0],
        }
    }

    fn combine(&self, c: [f64; 2]) -> (f64, f64) {
        let p = self.phi_mid();
        if c[0] == 0.0 {
            return (c[1] * p.0, c[1] * p.1);
        }
        let t = self.theta_mid();
        (c[0] * t.0 + c[1] * p.0, c[0] * t.1 + c[1] * p.1)
    }

    fn member(&self, member: Member, x: f64) -> Option<(f64, f64)> {
        let t = match self.frame.endpoint {
            Endpoint::A => x - self.frame.validity.0,
            Endpoint::B => self.frame.validity.1 - x,
        };
        if t > 0.0 && t <= self.frame.reach() {
            return self.frame.eval(member, x).ok();
        }
        match member {
            Member::Principal => self.phi.eval(x),
            Member::Nonprincipal => self.theta.as_ref()?.eval(x),
        }
    }
}

struct Shot {
    a: Side,
    b: Side,
}

impl Shot {
    fn new(problem: &BesselProblem, lambda: f64, tol: &Tolerance) -> Result<Shot> {
        Ok(Shot { a: Side::build(problem, Endpoint::A, lambda, tol)?, b: Side::build(problem, Endpoint::B, lambda, tol)? })
    }

    fn transfer(&self) -> [[f64; 2]; 2] {
        let (tha, pha) = (self.a.theta_mid(), self.a.phi_mid());
        let (thb, phb) = (self.b.theta_mid(), self.b.phi_mid());
        [[wronskian(tha, phb), wronskian(pha, phb)], [wronskian(thb, tha), wronskian(thb, pha)]]
    }

    fn secular(&self, cond: &Conditions) -> f64 {
        match *cond {
            Conditions::Separated { alpha, beta } => {
                let xa = self.a.combine(self.a.chi_coefficients(alpha));
                let xb = self.b.combine(self.b.chi_coefficients(beta));
                -wronskian(xa, xb)
            }
            Conditions::Coupled { phi, r } => 2.0 * phi.cos() - trace_pairing(&self.transfer(), &r),
        }
    }
}

fn trace_pairing(m: &[[f64; 2]; 2], r: &[[f64; 2]; 2]) -> f64 {
    m[0][0] * r[1][1] + m[1][1] * r[0][0] - m[0][1] * r[1][0] - m[1][0] * r[0][1]
}

fn max_abs(m: &[[f64; 2]; 2]) -> f64 {
    m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()))
}

// ±1 when e^{iφ} is real, where a double eigenvalue is possible
fn real_phase(phi: f64) -> Option<f64> {
    let c = phi.cos();
    (phi.sin().abs() < 1e-12).then_some(c.signum())
}

fn coupling_gap(m: &[[f64; 2]; 2], r: &[[f64; 2]; 2], sign: f64) -> f64 {
    let mut g = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            g = g.max((m[i][j] - sign * r[i][j]).abs());
        }
    }
    g / max_abs(r).max(1.0)
}

/// The matching determinant at `λ`: `D` for separated conditions and
/// `det(M − e^{iφ}R)` for coupled ones.
pub fn matching_determinant(problem: &BesselProblem, ext: &ExtensionSpec, lambda: f64, tol: &Tolerance) -> Result<C> {
    let cond = conditions(&resolve(problem, ext, tol)?);
    let shot = Shot::new(problem, lambda, tol)?;
    let f = shot.secular(&cond);
    Ok(match cond {
        Conditions::Separated { .. } => C::new(f, 0.0),
        Conditions::Coupled { phi, .. } => C::from_polar(1.0, phi) * f,
    })
}

fn secular_at(problem: &BesselProblem, cond: &Conditions, lambda: f64, tol: &Tolerance) -> Result<f64> {
    Ok(Shot::new(problem, lambda, tol)?.secular(cond))
}

/// Grid spacing of the scan: a quarter of the lowest free Dirichlet gap scale.
pub fn scan_spacing(problem: &BesselProblem) -> f64 {
    let l = problem.length();
    PI * PI / (4.0 * l * l)
}

/// Eigenvalues of the extension in `range`.
pub fn eigenvalues(problem: &BesselProblem, ext: &ExtensionSpec, range: (f64, f64), tol: &Tolerance) -> Result<Spectrum> {
    eigenvalues_with_density(problem, ext, range, tol, 1)
}

/// As [`eigenvalues`] with the scan grid refined `density` times.
pub fn eigenvalues_with_density(
    problem: &BesselProblem,
    ext: &ExtensionSpec,
    range: (f64, f64),
    tol: &Tolerance,
    density: usize,
) -> Result<Spectrum> {
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Parameter(format!("search range must be finite with lo < hi, got [{lo}, {hi}]")));
    }
    let spec = resolve(problem, ext, tol)?;
    let cond = conditions(&spec);
    let step = scan_spacing(problem) / density.max(1) as f64;
    let n = ((hi - lo) / step).ceil() as usize + 2;
    let start = lo - step;
    let grid: Vec<f64> = (0..=n).map(|i| start + i as f64 * step).collect();
    let vals = grid.par_iter().map(|&l| secular_at(problem, &cond, l, tol)).collect::<Result<Vec<f64>>>()?;
    let f = |l: f64| secular_at(problem, &cond, l, tol).unwrap_or(f64::NAN);

    let mut brackets = Vec::new();
    let mut tangents = Vec::new();
    for i in 0..n {
        if vals[i] == 0.0 {
            brackets.push((grid[i], grid[i], vals[i].abs().max(vals[i + 1].abs())));
        } else if vals[i + 1] != 0.0 && vals[i].signum() != vals[i + 1].signum() {
            brackets.push((grid[i], grid[i + 1], vals[i].abs().max(vals[i + 1].abs())));
        }
    }
    for i in 1..n {
        let (l, c, r) = (vals[i - 1], vals[i], vals[i + 1]);
        if c == 0.0 || l.signum() != c.signum() || r.signum() != c.signum() {
            continue;
        }
        if c.abs() < l.abs() && c.abs() <= r.abs() {
            let sg = c.signum();
            let xtol = 1e-10 * step.max(grid[i].abs());
            let (xm, fm) = golden_min(|x| sg * f(x), grid[i - 1], grid[i + 1], xtol);
            let scale = l.abs().max(r.abs());
            if fm < 0.0 {
                brackets.push((grid[i - 1], xm, scale));
                brackets.push((xm, grid[i + 1], scale));
            } else if fm <= 1e-6 * scale {
                tangents.push((xm, grid[i - 1], grid[i + 1]));
            }
        }
    }

    let refined = brackets
        .par_iter()
        .map(|&(a, b, scale)| -> Result<(f64, f64)> {
            let x = if a == b { a } else { find_root(f, a, b, tol)? };
            Ok((x, f(x).abs() / scale.max(f64::MIN_POSITIVE)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut found: Vec<Eigenvalue> =
        refined.into_iter().map(|(lambda, residual)| Eigenvalue { lambda, multiplicity: 1, residual }).collect();

    if let Conditions::Coupled { phi, r } = cond {
        // sign changes caused by noise around a double root, and tangencies
        let mut candidates: Vec<(f64, f64, f64)> = found.iter().map(|e| (e.lambda, e.lambda - step, e.lambda + step)).collect();
        candidates.extend(tangents.iter().copied());
        let mut doubles = Vec::new();
        if let Some(sign) = real_phase(phi) {
            for (x, a, b) in candidates {
                if let Some(d) = double_root(problem, &r, sign, x, (a, b), tol)? {
                    doubles.push(d);
                }
            }
        }
        if doubles.is_empty() {
            for (x, _, _) in &tangents {
                let residual = f(*x).abs();
                found.push(Eigenvalue { lambda: *x, multiplicity: 1, residual });
                found.push(Eigenvalue { lambda: *x, multiplicity: 1, residual });
            }
        } else {
            found.retain(|e| doubles.iter().all(|d: &Eigenvalue| !near(e.lambda, d.lambda, step)));
            found.extend(doubles);
        }
    }
    found.sort_by(|x, y| x.lambda.total_cmp(&y.lambda));
    found.dedup_by(|x, y| {
        if near(x.lambda, y.lambda, 1e-7 * step) && x.multiplicity == y.multiplicity && x.multiplicity > 1 {
            y.residual = y.residual.min(x.residual);
            true
        } else {
            false
        }
    });
    let slack = 1e-9 * (1.0 + lo.abs().max(hi.abs()));
    found.retain(|e| e.lambda >= lo - slack && e.lambda <= hi + slack);
    Ok(Spectrum { extension: spec, range, eigenvalues: found })
}

fn near(x: f64, y: f64, width: f64) -> bool {
    (x - y).abs() <= 1e-3 * width
}

// A double eigenvalue near `x`: `M = ±R` there. Refined as the zero of the
// entry of M ∓ R with the steepest slope over the bracket.
fn double_root(
    problem: &BesselProblem,
    r: &[[f64; 2]; 2],
    sign: f64,
    x: f64,
    (a, b): (f64, f64),
    tol: &Tolerance,
) -> Result<Option<Eigenvalue>> {
    let m = Shot::new(problem, x, tol)?.transfer();
    if coupling_gap(&m, r, sign) > tol.rel.sqrt() * max_abs(r).max(1.0) {
        return Ok(None);
    }
    let ma = Shot::new(problem, a, tol)?.transfer();
    let mb = Shot::new(problem, b, tol)?.transfer();
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..2 {
        for j in 0..2 {
            let (fa, fb) = (ma[i][j] - sign * r[i][j], mb[i][j] - sign * r[i][j]);
            if fa.signum() != fb.signum() {
                let slope = (fb - fa).abs();
                if best.is_none_or(|(_, _, s)| slope > s) {
                    best = Some((i, j, slope));
                }
            }
        }
    }
    let lambda = match best {
        Some((i, j, _)) => {
            let g = |l: f64| Shot::new(problem, l, tol).map(|s| s.transfer()[i][j] - sign * r[i][j]).unwrap_or(f64::NAN);
            find_root(g, a, b, tol).unwrap_or(x)
        }
        None => x,
    };
    let m = Shot::new(problem, lambda, tol)?.transfer();
    Ok(Some(Eigenvalue { lambda, multiplicity: 2, residual: coupling_gap(&m, r, sign) }))
}

/// Lowest eigenvalue of the extension, searching upward from
/// `−sup|q| − 50/(b−a)²` in doubling windows.
pub fn lowest_eigenvalue(problem: &BesselProblem, ext: &ExtensionSpec, tol: &Tolerance) -> Result<f64> {
    let l = problem.length();
    let mut lo = -problem.q_bound() - 50.0 / (l * l);
    let mut width = 16.0 * scan_spacing(problem) + 50.0 / (l * l);
    for _ in 0..12 {
        let s = eigenvalues(problem, ext, (lo, lo + width), tol)?;
        if let Some(e) = s.eigenvalues.first() {
            return Ok(e.lambda);
        }
        lo += width;
        width *= 2.0;
    }
    Err(Error::Unavailable("no eigenvalue found below the frame validity limit".into()))
}

/// One normalized eigenfunction, held as boundary-data coefficients in the
/// endpoint frames on each half of the interval.
#[derive(Clone)]
pub struct Mode {
    shot: Arc<Shot>,
    mid: f64,
    ca: [C; 2],
    cb: [C; 2],
}

impl std::fmt::Debug for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Mode").field("lambda", &self.shot.a.frame.lambda).field("ca", &self.ca).field("cb", &self.cb).finish()
    }
}

impl Mode {
    /// Value and derivative at an interior `x`.
    pub fn eval(&self, x: f64) -> Result<(C, C)> {
        let (side, c) = if x <= self.mid { (&self.shot.a, &self.ca) } else { (&self.shot.b, &self.cb) };
        let mut v = C::new(0.0, 0.0);
        let mut d = C::new(0.0, 0.0);
        for (k, member) in [Member::Nonprincipal, Member::Principal].into_iter().enumerate() {
            if c[k] == C::new(0.0, 0.0) {
                continue;
            }
            let y = side.member(member, x).ok_or(Error::Singularity { x })?;
            v += c[k] * y.0;
            d += c[k] * y.1;
        }
        Ok((v, d))
    }

    /// Boundary data at `a` and `b`.
    pub fn boundary_data(&self) -> ([C; 2], [C; 2]) {
        (self.ca, self.cb)
    }

    fn scaled(&self, k: C) -> Mode {
        Mode { shot: self.shot.clone(), mid: self.mid, ca: self.ca.map(|c| c * k), cb: self.cb.map(|c| c * k) }
    }

    fn minus(&self, other: &Mode, k: C) -> Mode {
        let sub = |x: [C; 2], y: [C; 2]| [x[0] - k * y[0], x[1] - k * y[1]];
        Mode { shot: self.shot.clone(), mid: self.mid, ca: sub(self.ca, other.ca), cb: sub(self.cb, other.cb) }
    }
}

/// `∫ f ḡ` over `(a, b)`, split at the midpoint.
pub fn inner_product(problem: &BesselProblem, f: &Mode, g: &Mode, tol: &Tolerance) -> Result<C> {
    let m = problem.midpoint();
    let part = |x: f64, pick: fn(C) -> f64| {
        match (f.eval(x), g.eval(x)) {
            (Ok(u), Ok(v)) => pick(u.0 * v.0.conj()),
            _ => f64::NAN,
        }
    };
    let mut re = 0.0;
    let mut im = 0.0;
    for (lo, hi) in [(problem.a, m), (m, problem.b)] {
        re += quad_singular(|x| part(x, |z| z.re), lo, hi, tol)?.value;
        im += quad_singular(|x| part(x, |z| z.im), lo, hi, tol)?.value;
    }
    Ok(C::new(re, im))
}

/// Eigenfunctions at an eigenvalue, normalized in `L²` (orthonormal when the
/// eigenvalue is double).
#[derive(Debug, Clone)]
pub struct Eigenfunction {
    pub lambda: f64,
    pub multiplicity: u8,
    /// `max` of the relative residual `‖(τ−λ)u‖/(‖u‖(1+|λ|))` and the
    /// mismatch of the two halves at the midpoint.
    pub residual: f64,
    pub modes: Vec<Mode>,
}

pub fn eigenfunction(problem: &BesselProblem, ext: &ExtensionSpec, lambda: f64, tol: &Tolerance) -> Result<Eigenfunction> {
    let cond = conditions(&resolve(problem, ext, tol)?);
    let shot = Arc::new(Shot::new(problem, lambda, tol)?);
    let mid = problem.midpoint();
    let omega = lambda.abs().sqrt().max(1.0 / problem.length());
    let real = |c: [f64; 2]| [C::new(c[0], 0.0), C::new(c[1], 0.0)];
    let mut modes = Vec::new();
    match cond {
        Conditions::Separated { alpha, beta } => {
            let ca = shot.a.chi_coefficients(alpha);
            let cb = shot.b.chi_coefficients(beta);
            let (xa, xb) = (shot.a.combine(ca), shot.b.combine(cb));
            let k = (xa.0 * xb.0 + xa.1 * xb.1 / (omega * omega)) / (xb.0 * xb.0 + xb.1 * xb.1 / (omega * omega));
            modes.push(Mode { shot: shot.clone(), mid, ca: real(ca), cb: real([k * cb[0], k * cb[1]]) });
        }
        Conditions::Coupled { phi, r } => {
            let m = shot.transfer();
            let e = C::from_polar(1.0, phi);
            let a = [[m[0][0] - e * r[0][0], m[0][1] - e * r[0][1]], [m[1][0] - e * r[1][0], m[1][1] - e * r[1][1]]];
            let row = |i: usize| (a[i][0].norm_sqr() + a[i][1].norm_sqr()).sqrt();
            let data_at_b = |c: [C; 2]| [e * (r[0][0] * c[0] + r[0][1] * c[1]), e * (r[1][0] * c[0] + r[1][1] * c[1])];
            let scale = max_abs(&m).max(max_abs(&r)).max(1.0);
            if row(0).max(row(1)) <= tol.rel.sqrt() * scale {
                for c in [[1.0, 0.0], [0.0, 1.0]] {
                    let c = real(c);
                    modes.push(Mode { shot: shot.clone(), mid, ca: c, cb: data_at_b(c) });
                }
            } else {
                let i = if row(0) >= row(1) { 0 } else { 1 };
                let c = [-a[i][1], a[i][0]];
                let n = (c[0].norm_sqr() + c[1].norm_sqr()).sqrt();
                let c = [c[0] / n, c[1] / n];
                modes.push(Mode { shot: shot.clone(), mid, ca: c, cb: data_at_b(c) });
            }
        }
    }

    // Gram–Schmidt in L²
    let mut basis: Vec<Mode> = Vec::new();
    for mode in modes {
        let mut v = mode;
        for u in &basis {
            let k = inner_product(problem, &v, u, tol)?;
            v = v.minus(u, k);
        }
        let n = inner_product(problem, &v, &v, tol)?.re;
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Residual(format!("eigenfunction at λ = {lambda} has norm {n:e}")));
        }
        basis.push(v.scaled(C::new(1.0 / n.sqrt(), 0.0)));
    }

    let mut residual = 0.0f64;
    for mode in &basis {
        residual = residual.max(mode_residual(problem, mode, lambda, omega)?);
    }
    if !(residual <= RESIDUAL_LIMIT) {
        return Err(Error::Residual(format!("λ = {lambda} is not an eigenvalue: residual {residual:.3e}")));
    }
    let multiplicity = basis.len() as u8;
    Ok(Eigenfunction { lambda, multiplicity, residual, modes: basis })
}

// Five-point residual of y″ from y′ on interior points, and the jump of the
// two halves at the midpoint; the mode is L²-normalized.
fn mode_residual(problem: &BesselProblem, mode: &Mode, lambda: f64, omega: f64) -> Result<f64> {
    let l = problem.length();
    let n = 101;
    let dx = 0.9 * l / (n - 1) as f64;
    let mut sum = 0.0;
    for j in 0..n {
        let x = problem.a + l * 0.05 + dx * j as f64;
        // step shrinks toward the endpoints with the scale of the solution
        let h = 0.002 * (x - problem.a).min(problem.b - x).min(0.1 * l);
        let d = |t: f64| mode.eval(x + t * h).map(|p| p.1);
        let ypp = (-d(2.0)? + d(1.0)? * 8.0 - d(-1.0)? * 8.0 + d(-2.0)?) / (12.0 * h);
        let y = mode.eval(x)?.0;
        let r = -ypp + y * (problem.potential(x) - lambda);
        sum += r.norm_sqr() * dx;
    }
    let fd = sum.sqrt() / (1.0 + lambda.abs());
    let side = |s: &Side, c: &[C; 2]| -> (C, C) {
        let t = s.theta.as_ref().map(|t| (t.value, t.derivative)).unwrap_or((0.0, 0.0));
        let p = s.phi_mid();
        (c[0] * t.0 + c[1] * p.0, c[0] * t.1 + c[1] * p.1)
    };
    let (ya, yb) = (side(&mode.shot.a, &mode.ca), side(&mode.shot.b, &mode.cb));
    let size = (ya.0.norm_sqr() + ya.1.norm_sqr() / (omega * omega)).sqrt().max(1.0 / l.sqrt());
    let jump = ((ya.0 - yb.0).norm_sqr() + (ya.1 - yb.1).norm_sqr() / (omega * omega)).sqrt() / size;
    Ok(fd.max(jump))
}

/// Integrates `(τ − λ)y = 0` from `x0` with data `y0`; a helper for
/// comparison solutions in tests and diagnostics.
pub fn shoot(problem: &BesselProblem, lambda: f64, x0: f64, y0: (f64, f64), x1: f64, tol: &Tolerance) -> Result<(f64, f64)> {
    let t = integrate_ode(problem.ode_coefficient(lambda), x0, y0, x1, tol)?;
    Ok((t.value, t.derivative))
}
