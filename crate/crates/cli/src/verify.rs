//! Built-in verification suites. Each check records the measured quantity
//! and the limit it must stay below.

use crate::json::{Json, Obj};
use crate::{Failure, Suite};
use besselext::corpus::{parse_trial, random_trials};
use besselext::extensions::{det2, krein_closed_form_q0, krein_data, KreinMode};
use besselext::firstorder::factorization_residual;
use besselext::hardy::{hardy_report, log_refined_check, muckenhoupt, MuckenhouptKind, Variant};
use besselext::numerics::{limit_extrapolate, Grid, Model, Tolerance};
use besselext::solutions::{volterra_frame, wronskian};
use besselext::specialfn::*;
use besselext::{BesselProblem, Endpoint, Potential, Result};
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

struct Check {
    suite: &'static str,
    name: String,
    value: f64,
    limit: f64,
}

impl Check {
    fn pass(&self) -> bool {
        self.value <= self.limit
    }
}

struct Recorder {
    suite: &'static str,
    checks: Vec<Check>,
}

impl Recorder {
    fn check(&mut self, name: impl Into<String>, value: Result<f64>, limit: f64) {
        let name = name.into();
        let value = match value {
            Ok(v) if !v.is_nan() => v,
            Ok(_) => f64::INFINITY,
            Err(e) => {
                eprintln!("besselext: {}/{name}: {e}", self.suite);
                f64::INFINITY
            }
        };
        self.checks.push(Check { suite: self.suite, name, value, limit });
    }

    fn holds(&mut self, name: impl Into<String>, ok: Result<bool>) {
        self.check(name, ok.map(|b| if b { 0.0 } else { 1.0 }), 0.0);
    }
}

fn tight() -> Tolerance {
    Tolerance { rel: 1e-12, abs: 1e-14, max_steps: 400_000 }
}

fn specialfn(r: &mut Recorder) {
    let tol = tight();
    for z in [C::new(0.3, 0.0), C::new(2.5, -1.0), C::new(-3.7, 0.4), C::new(12.0, 5.0)] {
        r.check(
            format!("gamma recurrence at {z}"),
            (|| Ok((gamma_fn(z + 1.0)? - z * gamma_fn(z)?).norm() / gamma_fn(z + 1.0)?.norm()))(),
            1e-12,
        );
        r.check(
            format!("gamma reflection at {z}"),
            (|| {
                let lhs = gamma_fn(z)? * gamma_fn(1.0 - z)?;
                let rhs = PI / (PI * z).sin();
                Ok((lhs - rhs).norm() / rhs.norm())
            })(),
            1e-11,
        );
    }
    r.check("digamma at 1", digamma_real(1.0).map(|v| (v + EULER_GAMMA).abs()), 1e-14);
    for k in 1..=5 {
        r.check(format!("J0 at zero {k}"), Ok(bessel_j0(bessel_j0_zero(k)).abs()), 1e-13);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..20 {
        let (a, b, c) = if k % 2 == 0 {
            let a = rng.gen_range(-1.5..1.5);
            let b = rng.gen_range(-1.5..1.5);
            (C::new(a, 0.0), C::new(b, 0.0), C::new(a + b + rng.gen_range(0.3..2.4), 0.0))
        } else {
            let (x, y) = (rng.gen_range(-0.8..0.8), rng.gen_range(0.1..2.0));
            (C::new(x, y), C::new(x, -y), C::new(2.0 * x + rng.gen_range(0.3..2.4), 0.0))
        };
        let at_one = |a, b, c| -> Result<(f64, f64)> {
            let deltas: Vec<f64> = (0..6).rev().map(|j| 2f64.powi(-34 - 2 * j)).collect();
            let vals: Vec<C> = deltas.iter().map(|d| hyp2f1(Hyp2F1Params::new(a, b, c, 1.0 - d), &tol)).collect::<Result<_>>()?;
            let part = |f: fn(&C) -> f64| -> Result<f64> {
                let g = Grid::new(deltas.clone(), vals.iter().map(f).collect())?;
                Ok(limit_extrapolate(&g, Model::Algebraic, &Tolerance::default())?.limit)
            };
            Ok((part(|v| v.re)?, part(|v| v.im)?))
        };
        r.check(
            format!("Gauss value at 1, triple {k}"),
            (|| {
                let (re, im) = at_one(a, b, c)?;
                let want = gauss_value_at_one(a, b, c)?;
                Ok((C::new(re, im) - want).norm() / want.norm().max(1.0))
            })(),
            1e-8,
        );
        if k % 2 == 1 {
            r.check(
                format!("conjugate pair {k} is real"),
                hyp2f1(Hyp2F1Params::new(a, b, c, 0.7), &tol).map(|v| v.im.abs()),
                1e-10,
            );
        }
    }
}

fn ode_residual(eval: impl Fn(f64) -> Result<(f64, f64)>, p: &BesselProblem, lambda: f64, x: f64) -> Result<f64> {
    let h = 1e-5 * (x - p.a).min(p.b - x);
    let d2 = (eval(x + h)?.1 - eval(x - h)?.1) / (2.0 * h);
    let (u, _) = eval(x)?;
    Ok((d2 - (p.potential(x) - lambda) * u).abs() / (1.0 + u.abs()))
}

fn frames(r: &mut Recorder) {
    let tol = tight();
    let cases = [
        (0.0, 0.5, Potential::Zero, 0.0),
        (0.3, 0.7, Potential::Polynomial(vec![1.0, -2.0, 0.5]), 7.5),
        (0.0, 0.0, Potential::Constant(-4.0), -2.0),
        (0.75, 0.25, Potential::Zero, 30.0),
        (1.5, 0.25, Potential::Zero, 12.0),
    ];
    for (sa, sb, q, lambda) in cases {
        let p = match BesselProblem::new(-1.0, 2.0, sa, sb, q) {
            Ok(p) => p,
            Err(e) => return r.check("problem", Err(e), 0.0),
        };
        for e in [Endpoint::A, Endpoint::B] {
            let label = format!("({sa}, {sb}) at {e:?}, λ = {lambda}");
            let f = match volterra_frame(&p, e, lambda, &tol) {
                Ok(f) => f,
                Err(err) => {
                    r.check(format!("frame {label}"), Err(err), 0.0);
                    continue;
                }
            };
            let (lo, hi) = f.validity;
            let xs: Vec<f64> = (1..8).map(|k| lo + (hi - lo) * k as f64 / 8.0).collect();
            let res = xs.iter().try_fold(0.0f64, |m, &x| {
                let mut v = m.max(ode_residual(|y| f.u(y), &p, lambda, x)?);
                if f.has_nonprincipal() {
                    v = v.max(ode_residual(|y| f.u_hat(y), &p, lambda, x)?);
                }
                Ok(v)
            });
            r.check(format!("ODE residual {label}"), res, 1e-6);
            if f.has_nonprincipal() {
                let w = xs.iter().try_fold(0.0f64, |m, &x| Ok(m.max((wronskian(f.u_hat(x)?, f.u(x)?) - 1.0).abs())));
                r.check(format!("Wronskian {label}"), w, 1e-9);
            }
        }
    }
    let c = [0.3, -1.0, 2.5, 0.7, -1.2];
    let poly = |x: f64| {
        let (mut v, mut d, mut dd) = (0.0, 0.0, 0.0);
        for &ck in c.iter().rev() {
            dd = dd * x + 2.0 * d;
            d = d * x + v;
            v = v * x + ck;
        }
        (v, d, dd)
    };
    let grid: Vec<f64> = (1..200).map(|k| k as f64 / 200.0).collect();
    for (sa, sb) in [(0.3, 0.7), (0.0, 1.25), (2.0, 0.5)] {
        let res = BesselProblem::new(0.0, 1.0, sa, sb, Potential::Polynomial(vec![1.0, 0.5]))
            .and_then(|p| factorization_residual(&p, poly, &grid))
            .map(|f| f.alpha.max(f.beta).max(f.tau));
        r.check(format!("factorization residual ({sa}, {sb})"), res, 1e-8);
    }
}

fn krein(r: &mut Recorder) {
    let tol = Tolerance::default();
    let grid = [0.0, 0.25, 0.5, 0.75];
    for sa in grid {
        for sb in grid {
            let label = format!("({sa}, {sb})");
            let p = match BesselProblem::free(0.0, 1.0, sa, sb) {
                Ok(p) => p,
                Err(e) => return r.check("problem", Err(e), 0.0),
            };
            let numeric = krein_data(&p, &tol);
            let closed = krein_closed_form_q0(&p);
            r.check(format!("det R_K {label}"), numeric.map(|d| (det2(&d.r_k.unwrap_or_default()) - 1.0).abs()), 1e-10);
            let gap = (|| {
                let (n, c) = (krein_data(&p, &tol)?.r_k.unwrap_or_default(), closed?.r_k.unwrap_or_default());
                Ok((0..4).map(|k| (n[k / 2][k % 2] - c[k / 2][k % 2]).abs()).fold(0.0, f64::max))
            })();
            r.check(format!("closed form vs transport {label}"), gap, 1e-6);
        }
    }
    for (sa, len) in [(1.0, 1.0), (1.5, 1.0), (2.25, 3.0)] {
        let want = -(sa + 0.5) / len;
        let p = BesselProblem::free(0.0, len, sa, 0.5);
        let closed = p
            .clone()
            .and_then(|p| krein_closed_form_q0(&p))
            .map(|d| if d.mode == KreinMode::AngleAtB { d.cot_value.unwrap_or(f64::NAN) } else { f64::NAN });
        r.check(format!("closed-form cot β at s_a = {sa}"), closed.map(|c| (c - want).abs()), 1e-10);
        let numeric = p.and_then(|p| krein_data(&p, &tol)).map(|d| d.cot_value.unwrap_or(f64::NAN));
        r.check(format!("numeric cot β at s_a = {sa}"), numeric.map(|c| (c - want).abs()), 1e-6);
    }
}

fn hardy(r: &mut Recorder) {
    let tol = Tolerance::default();
    let (a, b) = (0.0, 2.0);
    for variant in [Variant::Power, Variant::Distance, Variant::Sine] {
        for t in random_trials(50, 7, a, b, false) {
            let rep = hardy_report(|x| t.eval(x), variant, a, b, &tol).map(|h| if h.satisfied { 0.0 } else { h.constant - h.ratio });
            r.check(format!("{} on {}", variant.name(), t.name), rep, 0.0);
        }
    }
    for t in random_trials(50, 8, a, b, true) {
        let rep = hardy_report(|x| t.eval(x), Variant::HalfLine, a, b, &tol).map(|h| if h.satisfied { 0.0 } else { h.constant - h.ratio });
        r.check(format!("halfline on {}", t.name), rep, 0.0);
    }
    for t in random_trials(50, 3, 0.0, 1.0, true) {
        let ok = log_refined_check(|x| t.eval(x), 0.0, 0.05, 1.0, 0.2, 1.5, &tol).map(|c| c.identities_agree && c.inequality_holds);
        r.holds(format!("log-refined on {}", t.name), ok);
    }
    let extremal = parse_trial("power:0.001", 0.0, 1.0)
        .and_then(|f| hardy_report(|x| f.eval(x), Variant::Power, 0.0, 1.0, &tol))
        .map(|h| h.ratio);
    r.check("near-extremal ratio at ε = 1e-3", extremal, 0.26);
    for s in [0.1, 0.3, 0.5] {
        let want = 1.0 / (2.0 * s);
        let m = muckenhoupt(MuckenhouptKind::BForm, |x: f64| x.powf(2.0 * s - 1.0), |x: f64| x.powf(2.0 * s + 1.0), 2.0, 0.0, 1.0, &tol);
        r.check(format!("Muckenhoupt B at s = {s}"), m.map(|m| m.value.finite().map_or(f64::INFINITY, |v| (v - want).abs() / want)), 1e-4);
    }
}

/// Runs the suites; the second value names the first failing check.
pub fn run(suite: Suite) -> std::result::Result<(Json, Option<String>), Failure> {
    type Runner = fn(&mut Recorder);
    let all: [(&'static str, Suite, Runner); 4] = [
        ("specialfn", Suite::Specialfn, specialfn),
        ("frames", Suite::Frames, frames),
        ("krein", Suite::Krein, krein),
        ("hardy", Suite::Hardy, hardy),
    ];
    let mut checks = Vec::new();
    let mut names = Vec::new();
    for (name, s, f) in all {
        if suite == Suite::All || suite == s {
            let mut r = Recorder { suite: name, checks: Vec::new() };
            f(&mut r);
            checks.extend(r.checks);
            names.push(name);
        }
    }
    let failed = checks.iter().filter(|c| !c.pass()).count();
    let first = checks.iter().find(|c| !c.pass()).map(|c| format!("{}/{}: {:e} exceeds {:e}", c.suite, c.name, c.value, c.limit));
    let rows: Vec<Json> = checks
        .iter()
        .map(|c| Obj::new().with("suite", c.suite).with("name", c.name.as_str()).with("value", c.value).with("limit", c.limit).with("pass", c.pass()).into())
        .collect();
    let report = Obj::new()
        .with("schema", 1usize)
        .with("command", "verify")
        .with("suites", names)
        .with("total", checks.len())
        .with("failed", failed)
        .with("checks", Json::Arr(rows));
    Ok((report.into(), first))
}
