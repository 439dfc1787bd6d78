//! Limit extrapolation `δ ↓ 0` by variable projection: for a trial exponent
//! `p` the model is linear in its coefficients, and `p` is found by
//! minimizing the least-squares residual.

use super::{golden_min, Grid, Tolerance};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Asymptotic model `v(δ) = L + δ^p (C + D ln(1/δ))`, `D = 0` for `Algebraic`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Algebraic,
    AlgebraicLog,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Extrapolation {
    pub limit: f64,
    pub uncertainty: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    pub exponent: f64,
    /// The samples grow like a negative power of δ; `limit` is meaningless.
    pub diverges: bool,
}

struct Fit {
    coef: Vec<f64>,
    rms: f64,
}

fn fit(delta: &[f64], v: &[f64], p: f64, model: Model) -> Fit {
    let n = delta.len();
    let with_log = model == Model::AlgebraicLog && n >= 4;
    let cols = if with_log { 3 } else { 2 };
    let mut m = DMatrix::<f64>::zeros(n, cols);
    for (i, &d) in delta.iter().enumerate() {
        let dp = d.powf(p);
        m[(i, 0)] = 1.0;
        if model == Model::AlgebraicLog {
            m[(i, 1)] = dp * (1.0 / d).ln();
            if with_log {
                m[(i, 2)] = dp;
            }
        } else {
            m[(i, 1)] = dp;
        }
    }
    let mut norms = vec![0.0; cols];
    for j in 0..cols {
        let nj = m.column(j).norm();
        norms[j] = if nj > 0.0 && nj.is_finite() { nj } else { 1.0 };
        for i in 0..n {
            m[(i, j)] /= norms[j];
        }
    }
    let rhs = DVector::from_column_slice(v);
    let svd = m.clone().svd(true, true);
    let x = match svd.solve(&rhs, 1e-13) {
        Ok(x) => x,
        Err(_) => return Fit { coef: vec![f64::NAN; cols], rms: f64::INFINITY },
    };
    let r = &m * &x - &rhs;
    let coef = (0..cols).map(|j| x[j] / norms[j]).collect();
    Fit { coef, rms: (r.norm_squared() / n as f64).sqrt() }
}

fn best_exponent(delta: &[f64], v: &[f64], model: Model, lo: f64, hi: f64) -> (f64, Fit) {
    let obj = |p: f64| fit(delta, v, p, model).rms;
    let grid: Vec<f64> = (0..=80).map(|i| lo + (hi - lo) * i as f64 / 80.0).collect();
    let vals: Vec<f64> = grid.iter().map(|&p| obj(p)).collect();
    let mut k = 0;
    for i in 1..vals.len() {
        if vals[i] < vals[k] {
            k = i;
        }
    }
    let a = grid[k.saturating_sub(1)];
    let b = grid[(k + 1).min(grid.len() - 1)];
    let (p, _) = golden_min(obj, a, b, 1e-12);
    let p = if obj(p) <= vals[k] { p } else { grid[k] };
    (p, fit(delta, v, p, model))
}

/// Extrapolates samples `(δ_k, v_k)` to `δ = 0`.
pub fn limit_extrapolate(samples: &Grid<f64>, model: Model, tol: &Tolerance) -> Result<Extrapolation> {
    if samples.len() < 3 {
        return Err(Error::Parameter("extrapolation needs at least three samples".into()));
    }
    if samples.points[0] <= 0.0 {
        return Err(Error::Parameter("extrapolation abscissae must be positive".into()));
    }
    let delta = &samples.points;
    let v = &samples.values;
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::ModelMismatch("non-finite sample".into()));
    }
    let thresh = tol.abs.max(tol.rel.sqrt()) * scale.max(f64::MIN_POSITIVE);
    let spread = v.iter().fold(0.0f64, |m, x| m.max((x - v[0]).abs()));
    if spread <= 4.0 * f64::EPSILON * scale {
        return Ok(Extrapolation { limit: v[0], uncertainty: spread, residual: 0.0, exponent: f64::NAN, diverges: false });
    }

    let (p, f) = best_exponent(delta, v, model, 0.02, 4.0);
    if f.rms > thresh {
        let (pn, fneg) = best_exponent(delta, v, model, -4.0, -0.02);
        if fneg.rms <= thresh.max(f.rms * 1e-3) {
            return Ok(Extrapolation { limit: f64::NAN, uncertainty: f64::INFINITY, residual: fneg.rms, exponent: pn, diverges: true });
        }
        return Err(Error::ModelMismatch(format!("fit residual {:.3e} exceeds {:.3e}", f.rms, thresh)));
    }
    let params = if model == Model::AlgebraicLog && delta.len() >= 4 { 4 } else { 3 };
    let uncertainty = if delta.len() > params {
        // drop the sample farthest from the limit and refit
        let far = if delta[0] > delta[delta.len() - 1] { 0 } else { delta.len() - 1 };
        let d2: Vec<f64> = delta.iter().enumerate().filter(|(i, _)| *i != far).map(|(_, x)| *x).collect();
        let v2: Vec<f64> = v.iter().enumerate().filter(|(i, _)| *i != far).map(|(_, x)| *x).collect();
        let (_, f2) = best_exponent(&d2, &v2, model, 0.02, 4.0);
        (f2.coef[0] - f.coef[0]).abs()
    } else {
        f.rms
    };
    Ok(Extrapolation { limit: f.coef[0], uncertainty, residual: f.rms, exponent: p, diverges: false })
}
