use super::gamma::{digamma, is_pole, rgamma};
use crate::error::{Error, Result};
use crate::numerics::Tolerance;
use num_complex::Complex64;

type C = Complex64;

const MAX_TERMS: usize = 10_000;

/// Parameters of the Gauss hypergeometric function F(α, β; γ; ξ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Params {
    pub alpha: C,
    pub beta: C,
    pub gamma_param: C,
    pub xi: f64,
}

impl Hyp2F1Params {
    pub fn new(alpha: C, beta: C, gamma_param: C, xi: f64) -> Self {
        Hyp2F1Params { alpha, beta, gamma_param, xi }
    }

    pub fn real(alpha: f64, beta: f64, gamma_param: f64, xi: f64) -> Self {
        Self::new(C::new(alpha, 0.0), C::new(beta, 0.0), C::new(gamma_param, 0.0), xi)
    }
}

fn nonpositive_integer(z: C) -> Option<usize> {
    if is_pole(z) {
        Some((-z.re) as usize)
    } else {
        None
    }
}

fn near_integer(z: C, eps: f64) -> Option<i64> {
    let n = z.re.round();
    if z.im.abs() <= eps && (z.re - n).abs() <= eps {
        Some(n as i64)
    } else {
        None
    }
}

/// Σ (α)_n(β)_n/((γ)_n n!) ξⁿ with the three-small-terms stopping rule.
fn series(a: C, b: C, c: C, z: f64, tol: &Tolerance) -> Result<C> {
    let mut term = C::new(1.0, 0.0);
    let mut sum = term;
    let mut small = 0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term.norm() <= tol.rel * sum.norm() || term.norm() == 0.0 {
            small += 1;
            if small >= 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::Divergence(format!("hypergeometric series at ξ = {z} did not converge in {MAX_TERMS} terms")))
}

/// Γ(γ)Γ(γ−α−β)/(Γ(γ−α)Γ(γ−β)), the value F(α, β; γ; 1).
pub fn gauss_value_at_one(alpha: C, beta: C, gamma_param: C) -> Result<C> {
    if is_pole(gamma_param) {
        return Err(Error::Parameter(format!("γ = {gamma_param} is a nonpositive integer")));
    }
    let m = gamma_param - alpha - beta;
    if m.re <= 0.0 {
        return Err(Error::Divergence(format!("Re(γ−α−β) = {} ≤ 0 at ξ = 1", m.re)));
    }
    Ok(super::gamma::gamma_fn(gamma_param)? * super::gamma::gamma_fn(m)?
        * rgamma(gamma_param - alpha)
        * rgamma(gamma_param - beta))
}

/// Gauss hypergeometric function on `ξ ∈ [0, 1]`.
pub fn hyp2f1(p: Hyp2F1Params, tol: &Tolerance) -> Result<C> {
    let Hyp2F1Params { alpha: a, beta: b, gamma_param: c, xi: z } = p;
    if is_pole(c) {
        return Err(Error::Parameter(format!("γ = {c} is a nonpositive integer")));
    }
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::Parameter(format!("ξ = {z} outside [0, 1]")));
    }
    if z == 0.0 {
        return Ok(C::new(1.0, 0.0));
    }
    if z == 1.0 {
        return gauss_value_at_one(a, b, c);
    }
    if nonpositive_integer(a).is_some() || nonpositive_integer(b).is_some() || z <= 0.5 {
        return series(a, b, c, z, tol);
    }
    let m = c - a - b;
    match near_integer(m, 1e-12) {
        Some(n) if n >= 0 => integer_case(a, b, n as usize, z, tol),
        Some(n) => {
            // Euler transform flips the sign of γ−α−β
            let w = (1.0 - z).powi(n as i32);
            Ok(w * integer_case(c - a, c - b, (-n) as usize, z, tol)?)
        }
        None => {
            if near_integer(m, 1e-4).is_some() && z <= 0.95 {
                return series(a, b, c, z, tol);
            }
            let w = 1.0 - z;
            let t1 = super::gamma::gamma_fn(c)? * super::gamma::gamma_fn(m)? * rgamma(c - a) * rgamma(c - b);
            let t2 = super::gamma::gamma_fn(c)? * super::gamma::gamma_fn(-m)? * rgamma(a) * rgamma(b);
            let f1 = if t1.norm() == 0.0 { C::new(0.0, 0.0) } else { series(a, b, 1.0 - m, w, tol)? };
            let f2 = if t2.norm() == 0.0 { C::new(0.0, 0.0) } else { series(c - a, c - b, 1.0 + m, w, tol)? };
            Ok(t1 * f1 + C::new(w, 0.0).powc(m) * t2 * f2)
        }
    }
}

/// Derivative dF/dξ = (αβ/γ) F(α+1, β+1; γ+1; ξ).
pub fn hyp2f1_derivative(p: Hyp2F1Params, tol: &Tolerance) -> Result<C> {
    let q = Hyp2F1Params::new(p.alpha + 1.0, p.beta + 1.0, p.gamma_param + 1.0, p.xi);
    Ok(p.alpha * p.beta / p.gamma_param * hyp2f1(q, tol)?)
}

// Logarithmic connection formulas for γ = α + β + m, m a nonnegative integer.
fn integer_case(a: C, b: C, m: usize, z: f64, tol: &Tolerance) -> Result<C> {
    let w = 1.0 - z;
    let lw = w.ln();
    let mf = m as f64;
    let c = a + b + mf;
    let mut finite = C::new(0.0, 0.0);
    if m > 0 {
        let pre = super::gamma::gamma_fn(C::new(mf, 0.0))? * super::gamma::gamma_fn(c)? * rgamma(a + mf) * rgamma(b + mf);
        let mut term = C::new(1.0, 0.0);
        for k in 0..m {
            finite += term;
            let kf = k as f64;
            term *= (a + kf) * (b + kf) / ((kf + 1.0) * (1.0 - mf + kf)) * w;
        }
        finite *= pre;
    }
    let pre = super::gamma::gamma_fn(c)? * rgamma(a) * rgamma(b);
    if pre.norm() == 0.0 {
        return Ok(finite);
    }
    // term_k = (a+m)_k (b+m)_k / (k! (k+m)!) w^k
    let mut fact_m = 1.0;
    for i in 1..=m {
        fact_m *= i as f64;
    }
    let mut term = C::new(1.0 / fact_m, 0.0);
    let mut psi1 = digamma(C::new(1.0, 0.0))?;
    let mut psim = digamma(C::new(mf + 1.0, 0.0))?;
    let mut psia = digamma(a + mf)?;
    let mut psib = digamma(b + mf)?;
    let mut sum = C::new(0.0, 0.0);
    let mut small = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let t = term * (lw - psi1 - psim + psia + psib);
        sum += t;
        if t.norm() <= tol.rel * sum.norm() || t.norm() == 0.0 {
            small += 1;
            if small >= 3 {
                let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
                let lead = if m == 0 { -pre } else { -sign * pre * w.powi(m as i32) };
                return Ok(finite + lead * sum);
            }
        } else {
            small = 0;
        }
        term *= (a + mf + kf) * (b + mf + kf) / ((kf + 1.0) * (kf + mf + 1.0)) * w;
        psi1 += 1.0 / (kf + 1.0);
        psim += 1.0 / (kf + mf + 1.0);
        psia += 1.0 / (a + mf + kf);
        psib += 1.0 / (b + mf + kf);
    }
    Err(Error::Divergence("logarithmic connection series did not converge".into()))
}
