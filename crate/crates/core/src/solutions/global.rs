//! Hypergeometric frames for `q = 0`, `λ = 0`. In the distance variable `t`
//! to the endpoint with strength `s`, with `r` the opposite strength,
//! `L = b − a` and `ξ = t/L`,
//!
//! `U = L^{r−½} t^{½+s} (L−t)^{½−r} F(½+s−r+σ, ½+s−r−σ; 1+2s; ξ)`,
//! `σ = ½(4s² + 4r² − 1)^{½}`.

use crate::error::{Error, Result};
use crate::numerics::Tolerance;
use crate::problem::{BesselProblem, Endpoint};
use crate::specialfn::{hyp2f1, hyp2f1_derivative, Hyp2F1Params};
use num_complex::Complex64 as C;

// The logarithmic series for s = 0 is only summed up to this fraction of L.
const LOG_REACH: f64 = 0.9;

#[derive(Debug, Clone)]
pub(super) struct GlobalFrame {
    s: f64,
    r: f64,
    len: f64,
    sigma: C,
    tol: Tolerance,
}

impl GlobalFrame {
    pub(super) fn new(problem: &BesselProblem, endpoint: Endpoint, tol: &Tolerance) -> Result<Self> {
        let s = problem.s(endpoint);
        let r = problem.s(endpoint.other());
        if r >= 1.0 {
            return Err(Error::FrameUndefined(format!(
                "global q = 0 frames need the opposite strength below 1 (got {r})"
            )));
        }
        let sigma = 0.5 * C::new(4.0 * s * s + 4.0 * r * r - 1.0, 0.0).sqrt();
        // series evaluation needs tighter stopping than the caller's tolerance
        let tol = Tolerance { rel: tol.rel.min(1e-15), abs: tol.abs * 1e-3, ..*tol };
        Ok(GlobalFrame { s, r, len: problem.length(), sigma, tol })
    }

    pub(super) fn reach(&self) -> f64 {
        if self.s == 0.0 {
            LOG_REACH * self.len
        } else {
            self.len * (1.0 - 1e-12)
        }
    }

    // L^{r−½} t^{e} (L−t)^{½−r} and its t-derivative
    fn prefactor(&self, t: f64, e: f64) -> (f64, f64) {
        let (l, r) = (self.len, self.r);
        let v = l.powf(r - 0.5) * t.powf(e) * (l - t).powf(0.5 - r);
        (v, v * (e / t - (0.5 - r) / (l - t)))
    }

    fn hyp(&self, alpha: C, beta: C, gamma: f64, xi: f64) -> Result<(f64, f64)> {
        let p = Hyp2F1Params::new(alpha, beta, C::new(gamma, 0.0), xi);
        let f = hyp2f1(p, &self.tol)?;
        let df = hyp2f1_derivative(p, &self.tol)?;
        Ok((f.re, df.re / self.len))
    }

    pub(super) fn principal(&self, t: f64) -> Result<(f64, f64)> {
        let (s, r) = (self.s, self.r);
        let base = C::new(0.5 + s - r, 0.0);
        let (f, df) = self.hyp(base + self.sigma, base - self.sigma, 1.0 + 2.0 * s, t / self.len)?;
        let (p, dp) = self.prefactor(t, 0.5 + s);
        Ok((p * f, dp * f + p * df))
    }

    pub(super) fn nonprincipal(&self, t: f64) -> Result<(f64, f64)> {
        let (s, r, l) = (self.s, self.r, self.len);
        let xi = t / l;
        if s == 0.0 {
            return self.log_member(t);
        }
        if s == 0.5 {
            // the c = 0 case has the elementary limit 1 + (1−2r)/2 · E(ξ)
            let e = if r == 0.0 { -(1.0 - xi).ln() } else { (1.0 - (1.0 - xi).powf(2.0 * r)) / (2.0 * r) };
            let de = (1.0 - xi).powf(2.0 * r - 1.0) / l;
            let g = 1.0 + 0.5 * (1.0 - 2.0 * r) * e;
            let dg = 0.5 * (1.0 - 2.0 * r) * de;
            let (p, dp) = self.prefactor(t, 0.0);
            return Ok((p * g, dp * g + p * dg));
        }
        let base = C::new(0.5 - s - r, 0.0);
        let (f, df) = self.hyp(base + self.sigma, base - self.sigma, 1.0 - 2.0 * s, xi)?;
        let (p, dp) = self.prefactor(t, 0.5 - s);
        let k = 1.0 / (2.0 * s);
        Ok((k * p * f, k * (dp * f + p * df)))
    }

    // t^{½}(L−t)^{½−r} L^{r−½} [ln(1/t) F(α,β;1;ξ) − S(ξ)] with S the
    // ψ-weighted companion series of the c = 1 logarithmic solution
    fn log_member(&self, t: f64) -> Result<(f64, f64)> {
        let (r, l) = (self.r, self.len);
        let xi = t / l;
        if xi > LOG_REACH {
            return Err(Error::Parameter(format!("logarithmic frame evaluated beyond ξ = {LOG_REACH}")));
        }
        let a = C::new(0.5 - r, 0.0) + self.sigma;
        let b = C::new(0.5 - r, 0.0) - self.sigma;
        let (f, df) = self.hyp(a, b, 1.0, xi)?;
        let (sv, dsv) = if r == 0.5 { (0.0, 0.0) } else { self.companion(a, b, xi)? };
        let ln = (1.0 / t).ln();
        let (p, dp) = self.prefactor(t, 0.5);
        let g = ln * f - sv;
        let dg = -f / t + ln * df - dsv / l;
        Ok((p * g, dp * g + p * dg))
    }

    fn companion(&self, a: C, b: C, xi: f64) -> Result<(f64, f64)> {
        let mut c = C::new(1.0, 0.0);
        let mut d = C::new(0.0, 0.0);
        let mut sum = C::new(0.0, 0.0);
        let mut dsum = C::new(0.0, 0.0);
        let mut pw = 1.0;
        let mut small = 0;
        for n in 1..20_000usize {
            let k = (n - 1) as f64;
            d += 1.0 / (a + k) + 1.0 / (b + k) - 2.0 / (k + 1.0);
            c *= (a + k) * (b + k) / ((k + 1.0) * (k + 1.0));
            let nf = n as f64;
            dsum += c * d * nf * pw;
            pw *= xi;
            let term = c * d * pw;
            sum += term;
            if term.norm() <= self.tol.rel * sum.norm().max(1e-300) {
                small += 1;
                if small >= 3 {
                    return Ok((sum.re, dsum.re));
                }
            } else {
                small = 0;
            }
        }
        Err(Error::Divergence("logarithmic companion series did not converge".into()))
    }
}
