//! The operator `τ = −d² + (s_a²−¼)/(x−a)² + (s_b²−¼)/(x−b)² + q` on `(a, b)`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// One of the two interval endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    A,
    B,
}

impl Endpoint {
    pub fn other(self) -> Endpoint {
        match self {
            Endpoint::A => Endpoint::B,
            Endpoint::B => Endpoint::A,
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Endpoint::A => "a",
            Endpoint::B => "b",
        })
    }
}

type Callback = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Bounded potential `q`.
#[derive(Clone)]
pub enum Potential {
    Zero,
    Constant(f64),
    /// Coefficients `c0, c1, …` of `Σ c_k x^k`.
    Polynomial(Vec<f64>),
    /// Arbitrary function with a declared bound `sup |q| ≤ bound`.
    Callback { f: Callback, bound: f64 },
}

impl Potential {
    pub fn callback(f: impl Fn(f64) -> f64 + Send + Sync + 'static, bound: f64) -> Self {
        Potential::Callback { f: Arc::new(f), bound }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Potential::Zero => 0.0,
            Potential::Constant(c) => *c,
            Potential::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck),
            Potential::Callback { f, .. } => f(x),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Potential::Zero => true,
            Potential::Constant(c) => *c == 0.0,
            Potential::Polynomial(c) => c.iter().all(|&v| v == 0.0),
            Potential::Callback { .. } => false,
        }
    }

    /// Upper bound of `|q|` on `[a, b]`.
    pub fn bound(&self, a: f64, b: f64) -> f64 {
        match self {
            Potential::Zero => 0.0,
            Potential::Constant(c) => c.abs(),
            Potential::Polynomial(c) => {
                let r = a.abs().max(b.abs());
                c.iter().rev().fold(0.0, |acc, &ck| acc * r + ck.abs())
            }
            Potential::Callback { bound, .. } => *bound,
        }
    }
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::Callback { bound, .. } => write!(f, "Callback {{ bound: {bound} }}"),
            other => write!(f, "{other}"),
        }
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::Zero => f.write_str("0"),
            Potential::Constant(c) => write!(f, "const:{c:?}"),
            Potential::Polynomial(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| format!("{c:?}")).collect();
                write!(f, "poly:{}", parts.join(","))
            }
            Potential::Callback { bound, .. } => write!(f, "callback(bound={bound})"),
        }
    }
}

impl PartialEq for Potential {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Potential::Zero, Potential::Zero) => true,
            (Potential::Constant(x), Potential::Constant(y)) => x == y,
            (Potential::Polynomial(x), Potential::Polynomial(y)) => x == y,
            (Potential::Callback { f: f1, .. }, Potential::Callback { f: f2, .. }) => Arc::ptr_eq(f1, f2),
            _ => false,
        }
    }
}

impl FromStr for Potential {
    type Err = Error;

    /// Parses `0`, `const:<c>` or `poly:<c0,c1,...>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| -> Result<f64> {
            let v: f64 = t.trim().parse().map_err(|_| Error::Parameter(format!("bad number {t:?} in q spec")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Parameter(format!("non-finite coefficient {t:?} in q spec")))
            }
        };
        if s == "0" {
            Ok(Potential::Zero)
        } else if let Some(rest) = s.strip_prefix("const:") {
            Ok(Potential::Constant(num(rest)?))
        } else if let Some(rest) = s.strip_prefix("poly:") {
            let cs = rest.split(',').map(num).collect::<Result<Vec<_>>>()?;
            if cs.is_empty() {
                return Err(Error::Parameter("empty polynomial in q spec".into()));
            }
            Ok(Potential::Polynomial(cs))
        } else {
            Err(Error::Parameter(format!("unrecognized q spec {s:?} (expected 0, const:<c> or poly:<c0,c1,...>)")))
        }
    }
}

/// A Bessel-type problem on a bounded interval.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselProblem {
    pub a: f64,
    pub b: f64,
    pub s_a: f64,
    pub s_b: f64,
    pub q: Potential,
}

impl BesselProblem {
    pub fn new(a: f64, b: f64, s_a: f64, s_b: f64, q: Potential) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::Problem(format!("need finite a < b (got {a}, {b})")));
        }
        if !(s_a >= 0.0 && s_b >= 0.0 && s_a.is_finite() && s_b.is_finite()) {
            return Err(Error::Problem(format!("need s_a, s_b >= 0 (got {s_a}, {s_b})")));
        }
        if let Potential::Callback { bound, .. } = &q {
            if !(bound.is_finite() && *bound >= 0.0) {
                return Err(Error::Problem("callback potential needs a finite bound".into()));
            }
        }
        Ok(BesselProblem { a, b, s_a, s_b, q })
    }

    /// Problem with `q = 0`.
    pub fn free(a: f64, b: f64, s_a: f64, s_b: f64) -> Result<Self> {
        Self::new(a, b, s_a, s_b, Potential::Zero)
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn s(&self, e: Endpoint) -> f64 {
        match e {
            Endpoint::A => self.s_a,
            Endpoint::B => self.s_b,
        }
    }

    pub fn position(&self, e: Endpoint) -> f64 {
        match e {
            Endpoint::A => self.a,
            Endpoint::B => self.b,
        }
    }

    pub fn is_limit_circle(&self, e: Endpoint) -> bool {
        self.s(e) < 1.0
    }

    /// Distance from `x` to the endpoint `e`.
    pub fn distance(&self, e: Endpoint, x: f64) -> f64 {
        match e {
            Endpoint::A => x - self.a,
            Endpoint::B => self.b - x,
        }
    }

    /// Abscissa at distance `t` from the endpoint `e`.
    pub fn at_distance(&self, e: Endpoint, t: f64) -> f64 {
        match e {
            Endpoint::A => self.a + t,
            Endpoint::B => self.b - t,
        }
    }

    pub fn q_bound(&self) -> f64 {
        self.q.bound(self.a, self.b)
    }

    /// Full potential `V(x)`, so that `τu = −u″ + V u`.
    pub fn potential(&self, x: f64) -> f64 {
        let ta = x - self.a;
        let tb = self.b - x;
        (self.s_a * self.s_a - 0.25) / (ta * ta) + (self.s_b * self.s_b - 0.25) / (tb * tb) + self.q.eval(x)
    }

    /// Everything but the inverse-square term of `e`, as a function of the
    /// distance `t` to `e`.
    pub fn rest_potential(&self, e: Endpoint, t: f64) -> f64 {
        let o = self.s(e.other());
        let r = self.length() - t;
        (o * o - 0.25) / (r * r) + self.q.eval(self.at_distance(e, t))
    }

    /// Coefficient `c` of `u″ = c u` for `(τ − λ)u = 0`.
    pub fn ode_coefficient(&self, lambda: f64) -> impl Fn(f64) -> f64 + '_ {
        move |x| self.potential(x) - lambda
    }
}
