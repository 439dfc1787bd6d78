//! Frames of `(τ − λ)u = 0` near one endpoint. With `t` the distance to the
//! endpoint and `f = λ − V_rest`, the principal solution is
//! `U = t^{½+s} w` where
//!
//! `w(t) = 1 + t² ∫₀¹ κ(τ) f(tτ) w(tτ) dτ`, `κ(τ) = τ(τ^{2s} − 1)/(2s)`,
//!
//! and `w′(t) = −t ∫₀¹ τ^{1+2s} f(tτ) w(tτ) dτ`. Both integrals are stored at
//! Chebyshev nodes. The nonprincipal member follows by reduction of order,
//! `Û = U (ρ_s − J)` with `ρ_s = t^{−2s}/(2s)` (or `ln(1/t)`).

use crate::error::{Error, Result};
use crate::numerics::{gauss_jacobi01, gauss_legendre01, Chebyshev, Tolerance};
use crate::problem::{BesselProblem, Endpoint};

const NODES: usize = 32;
const QUAD: usize = 40;
const JACOBI: usize = 24;

#[derive(Debug, Clone)]
pub(super) struct VolterraFrame {
    s: f64,
    h: f64,
    cheb: Chebyshev,
    m: Vec<f64>,
    p: Vec<f64>,
    jacobi: Option<(Vec<f64>, Vec<f64>)>,
}

fn kernel(s: f64, tau: f64) -> f64 {
    if s == 0.0 {
        tau * tau.ln()
    } else {
        tau * (2.0 * s * tau.ln()).exp_m1() / (2.0 * s)
    }
}

impl VolterraFrame {
    pub(super) fn build(problem: &BesselProblem, endpoint: Endpoint, lambda: f64, tol: &Tolerance) -> Result<Self> {
        let s = problem.s(endpoint);
        let len = problem.length();
        let other = problem.s(endpoint.other());
        let sup_f = |h: f64| lambda.abs() + problem.q_bound() + (other * other - 0.25).abs() / ((len - h) * (len - h));
        let mut h = 0.25 * len;
        for _ in 0..60 {
            let norm = sup_f(h);
            if norm * h * h / (4.0 * (1.0 + s)) <= 0.25 {
                break;
            }
            h = ((1.0 + s) / norm).sqrt().min(h * 0.999);
        }
        let min = len / 64.0;
        if h < min || sup_f(h) * h * h / (4.0 * (1.0 + s)) > 0.25 {
            return Err(Error::ValidityCollapse { width: h, min });
        }

        let cheb = Chebyshev::new(0.0, h, NODES);
        let (v, vw) = gauss_legendre01(QUAD);
        // τ = v⁶ smooths the τ^{2s} and ln τ factors at the origin
        let quad: Vec<(f64, f64)> = v.iter().zip(&vw).map(|(&v, &w)| (v.powi(6), 6.0 * v.powi(5) * w)).collect();

        let mut a_mat = vec![vec![0.0; NODES]; NODES];
        let mut b_mat = vec![vec![0.0; NODES]; NODES];
        for (i, &x) in cheb.nodes.iter().enumerate() {
            for &(tau, w) in &quad {
                let r = x * tau;
                let f = lambda - problem.rest_potential(endpoint, r);
                let basis = cheb.basis(r);
                let ka = w * kernel(s, tau) * f;
                let kb = w * tau.powf(1.0 + 2.0 * s) * f;
                for (j, l) in basis.iter().enumerate() {
                    a_mat[i][j] += ka * l;
                    b_mat[i][j] += kb * l;
                }
            }
        }
        let apply = |mat: &Vec<Vec<f64>>, w: &[f64]| -> Vec<f64> {
            mat.iter().map(|row| row.iter().zip(w).map(|(a, b)| a * b).sum()).collect()
        };

        let mut w = vec![1.0; NODES];
        let stop = (1e-2 * tol.abs).max(1e-16);
        let mut converged = false;
        for _ in 0..tol.max_steps.min(500) {
            let m = apply(&a_mat, &w);
            let next: Vec<f64> = cheb.nodes.iter().zip(&m).map(|(x, m)| 1.0 + x * x * m).collect();
            let inc = next.iter().zip(&w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            w = next;
            if inc <= stop * w.iter().fold(1.0f64, |acc, v| acc.max(v.abs())) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::ValidityCollapse { width: h, min });
        }
        let m = apply(&a_mat, &w);
        let p = apply(&b_mat, &w);
        let jacobi = if s < 1.0 { Some(gauss_jacobi01(JACOBI, 1.0 - 2.0 * s)) } else { None };
        Ok(VolterraFrame { s, h, cheb, m, p, jacobi })
    }

    pub(super) fn reach(&self) -> f64 {
        self.h
    }

    fn w(&self, t: f64) -> (f64, f64) {
        let m = self.cheb.interp(&self.m, t);
        let p = self.cheb.interp(&self.p, t);
        (1.0 + t * t * m, -t * p)
    }

    pub(super) fn principal(&self, t: f64) -> (f64, f64) {
        let s = self.s;
        let (w, dw) = self.w(t);
        let lead = t.powf(0.5 + s);
        (lead * w, (0.5 + s) * lead / t * w + lead * dw)
    }

    fn j(&self, t: f64) -> f64 {
        let (nodes, weights) = self.jacobi.as_ref().expect("nonprincipal member requires s < 1");
        let sum: f64 = nodes
            .iter()
            .zip(weights)
            .map(|(&tau, &wt)| {
                let r = t * tau;
                let m = self.cheb.interp(&self.m, r);
                let w = 1.0 + r * r * m;
                wt * (-m * (2.0 + r * r * m) / (w * w))
            })
            .sum();
        t.powf(2.0 - 2.0 * self.s) * sum
    }

    pub(super) fn nonprincipal(&self, t: f64) -> (f64, f64) {
        let s = self.s;
        let rho = if s == 0.0 { (1.0 / t).ln() } else { t.powf(-2.0 * s) / (2.0 * s) };
        let (u, du) = self.principal(t);
        let c = rho - self.j(t);
        (u * c, du * c - 1.0 / u)
    }
}
