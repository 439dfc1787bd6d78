//! Named problems with reference values, and trial-function generators for
//! the inequality suites.

use crate::error::{Error, Result};
use crate::problem::{BesselProblem, Potential};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Problem description as read from flags or a config file.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    pub a: f64,
    pub b: f64,
    pub sa: f64,
    pub sb: f64,
    /// `0`, `const:<c>` or `poly:<c0,c1,...>`.
    pub q: String,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        ProblemConfig { a: 0.0, b: 1.0, sa: 0.5, sb: 0.5, q: "0".into(), rel_tol: None, abs_tol: None }
    }
}

pub fn parse_potential(spec: &str) -> Result<Potential> {
    let spec = spec.trim();
    let num = |s: &str| -> Result<f64> {
        s.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::Parameter(format!("bad number {s:?} in q spec {spec:?}")))
    };
    if spec == "0" {
        return Ok(Potential::Zero);
    }
    if let Some(c) = spec.strip_prefix("const:") {
        return Ok(Potential::Constant(num(c)?));
    }
    if let Some(cs) = spec.strip_prefix("poly:") {
        let c = cs.split(',').map(num).collect::<Result<Vec<_>>>()?;
        return Ok(Potential::Polynomial(c));
    }
    Err(Error::Parameter(format!("q spec {spec:?} is not one of 0, const:<c>, poly:<c0,c1,...>")))
}

impl ProblemConfig {
    pub fn problem(&self) -> Result<BesselProblem> {
        BesselProblem::new(self.a, self.b, self.sa, self.sb, parse_potential(&self.q)?)
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let num = || -> Result<f64> { value.trim().parse::<f64>().map_err(|_| Error::Parameter(format!("{key}: {value:?} is not a number"))) };
        match key {
            "a" => self.a = num()?,
            "b" => self.b = num()?,
            "sa" => self.sa = num()?,
            "sb" => self.sb = num()?,
            "q" => {
                parse_potential(value)?;
                self.q = value.trim().to_string();
            }
            "tol" | "rel_tol" => self.rel_tol = Some(num()?),
            "abs_tol" => self.abs_tol = Some(num()?),
            _ => return Err(Error::Parameter(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = ProblemConfig::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parameter(format!("line {}: expected key = value", n + 1)))?;
            c.set(k.trim(), v).map_err(|e| Error::Parameter(format!("line {}: {e}", n + 1)))?;
        }
        Ok(c)
    }

    /// The config in the format read by [`ProblemConfig::parse`], with
    /// floats written to round-trip exactly.
    pub fn dump(&self) -> String {
        let mut s = format!("a = {:?}\nb = {:?}\nsa = {:?}\nsb = {:?}\nq = {}\n", self.a, self.b, self.sa, self.sb, self.q);
        if let Some(t) = self.rel_tol {
            s += &format!("rel_tol = {t:?}\n");
        }
        if let Some(t) = self.abs_tol {
            s += &format!("abs_tol = {t:?}\n");
        }
        s
    }
}

/// Where a reference value comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    /// Closed form that needs no computation beyond arithmetic.
    Exact,
    /// Independent computation, named.
    Oracle(String),
    /// Quoted from the literature.
    Literature,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Exact => write!(f, "exact"),
            Source::Oracle(name) => write!(f, "oracle {name}"),
            Source::Literature => write!(f, "literature"),
        }
    }
}

/// A reference value at a dotted path into the JSON report of the command.
#[derive(Debug, Clone, PartialEq)]
pub struct Expectation {
    pub path: String,
    pub value: f64,
    /// Relative tolerance; absolute when `value` is zero.
    pub tol: f64,
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenCase {
    pub name: String,
    pub command: String,
    pub config: ProblemConfig,
    /// Command flags other than the problem keys, in file order.
    pub options: Vec<(String, String)>,
    pub expected: Vec<Expectation>,
}

const GOLDEN: &str = include_str!("../fixtures/golden.txt");

/// The cases of the bundled fixture file.
pub fn golden_cases() -> Vec<GoldenCase> {
    parse_golden(GOLDEN).expect("bundled fixture parses")
}

/// Parses the fixture format: `[name]` headers, `key = value` settings and
/// `expect <path> = <value> <tol> <source>` lines.
pub fn parse_golden(text: &str) -> Result<Vec<GoldenCase>> {
    let mut cases: Vec<GoldenCase> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: &str| Error::Parameter(format!("fixture line {}: {m}", n + 1));
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            cases.push(GoldenCase {
                name: name.to_string(),
                command: String::new(),
                config: ProblemConfig::default(),
                options: Vec::new(),
                expected: Vec::new(),
            });
            continue;
        }
        let case = cases.last_mut().ok_or_else(|| err("setting before the first case"))?;
        if let Some(rest) = line.strip_prefix("expect ") {
            let (path, rhs) = rest.split_once('=').ok_or_else(|| err("expect needs ="))?;
            let mut it = rhs.split_whitespace();
            let value = it.next().and_then(|v| v.parse().ok()).ok_or_else(|| err("bad value"))?;
            let tol = it.next().and_then(|v| v.parse().ok()).ok_or_else(|| err("bad tolerance"))?;
            let source = match it.next() {
                Some("exact") => Source::Exact,
                Some("literature") => Source::Literature,
                Some("oracle") => Source::Oracle(it.collect::<Vec<_>>().join(" ")),
                _ => return Err(err("source must be exact, literature or oracle <name>")),
            };
            case.expected.push(Expectation { path: path.trim().to_string(), value, tol, source });
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| err("expected key = value"))?;
        let (k, v) = (k.trim(), v.trim());
        match k {
            "command" => case.command = v.to_string(),
            "a" | "b" | "sa" | "sb" | "q" | "tol" | "rel_tol" | "abs_tol" => case.config.set(k, v).map_err(|e| err(&e.to_string()))?,
            _ => case.options.push((k.to_string(), v.to_string())),
        }
    }
    Ok(cases)
}

type Eval = Arc<dyn Fn(f64) -> (f64, f64) + Send + Sync>;

/// A trial function `x ↦ (f(x), f′(x))` with a reproducible name.
#[derive(Clone)]
pub struct Trial {
    pub name: String,
    f: Eval,
}

impl fmt::Debug for Trial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Trial").field("name", &self.name).finish()
    }
}

impl Trial {
    pub fn eval(&self, x: f64) -> (f64, f64) {
        (self.f)(x)
    }
}

// t = (x − a)/L; returns (g, dg/dt)
fn on_interval(a: f64, b: f64, g: impl Fn(f64) -> (f64, f64) + Send + Sync + 'static) -> Eval {
    let len = b - a;
    Arc::new(move |x| {
        let (v, d) = g((x - a) / len);
        (v, d / len)
    })
}

fn poly(c: &[f64], t: f64) -> (f64, f64) {
    c.iter().rev().fold((0.0, 0.0), |(v, d), ck| (v * t + ck, d * t + v))
}

// (v, dv) · t^e (1 − t)^r
fn times_edges((v, d): (f64, f64), t: f64, e: f64, r: f64) -> (f64, f64) {
    let (w, dw) = if r == 0.0 { (1.0, 0.0) } else { ((1.0 - t).powf(r), -r * (1.0 - t).powf(r - 1.0)) };
    let (p, dp) = (t.powf(e), e * t.powf(e - 1.0));
    (v * p * w, d * p * w + v * dp * w + v * p * dw)
}

/// Parses a named trial on `(a, b)`, with `t = (x − a)/(b − a)`:
///
/// * `poly:<c0,c1,...>` for `t(1 − t) Σ c_k t^k`
/// * `power:<ε>` for `t^{½+ε}(1 − t)`
/// * `halfpower:<ε>` for `t^{½+ε}`, which need not vanish at `b`
/// * `bump:<center>,<width>` for a smooth bump supported in `(0, 1)`
/// * `sine:<k>` for `sin(kπt)`
pub fn parse_trial(spec: &str, a: f64, b: f64) -> Result<Trial> {
    let bad = || Error::Parameter(format!("trial spec {spec:?} not understood"));
    let (kind, args) = spec.split_once(':').ok_or_else(bad)?;
    let nums = args.split(',').map(|s| s.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
    let f = match (kind, nums.as_slice()) {
        ("poly", c) if !c.is_empty() => {
            let c = c.to_vec();
            on_interval(a, b, move |t| times_edges(poly(&c, t), t, 1.0, 1.0))
        }
        ("power", &[e]) if e > 0.0 => on_interval(a, b, move |t| times_edges((1.0, 0.0), t, 0.5 + e, 1.0)),
        ("halfpower", &[e]) if e > 0.0 => on_interval(a, b, move |t| times_edges((1.0, 0.0), t, 0.5 + e, 0.0)),
        ("bump", &[c, w]) if w > 0.0 && c - w >= 0.0 && c + w <= 1.0 => on_interval(a, b, move |t| {
            let u = (t - c) / w;
            if u.abs() >= 1.0 {
                return (0.0, 0.0);
            }
            let e = (-1.0 / (1.0 - u * u)).exp();
            (e, e * (-2.0 * u / (1.0 - u * u).powi(2)) / w)
        }),
        ("sine", &[k]) if k > 0.0 => on_interval(a, b, move |t| ((k * PI * t).sin(), k * PI * (k * PI * t).cos())),
        _ => return Err(bad()),
    };
    Ok(Trial { name: spec.to_string(), f })
}

/// `n` reproducible trials mixing the four families; with `right_free` the
/// trials need not vanish at `b`.
pub fn random_trials(n: usize, seed: u64, a: f64, b: f64, right_free: bool) -> Vec<Trial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let spec = match k % 4 {
            0 => {
                let deg = rng.gen_range(0..4);
                let c: Vec<String> = (0..=deg).map(|_| format!("{:.6}", rng.gen_range(-2.0..2.0f64))).collect();
                format!("poly:{}", c.join(","))
            }
            1 => {
                let e = 10f64.powf(rng.gen_range(-2.0..0.0));
                if right_free { format!("halfpower:{e:.6}") } else { format!("power:{e:.6}") }
            }
            2 => {
                let w = rng.gen_range(0.05..0.45f64);
                let c = rng.gen_range(w + 1e-5..1.0 - w - 1e-5);
                format!("bump:{c:.6},{w:.6}")
            }
            _ => format!("sine:{}", rng.gen_range(1..8)),
        };
        out.push(parse_trial(&spec, a, b).expect("generated spec parses"));
    }
    out
}
