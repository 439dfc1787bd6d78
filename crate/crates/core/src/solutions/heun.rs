//! Confluent Heun form of `τ u = z u` for `q = 0`.
//!
//! `w″ + (γ/ξ + δ/(ξ−1) + ε) w′ + (νξ − μ)/(ξ(ξ−1)) w = 0`, and after
//! `v = e^{εξ/2} ξ^{γ/2} (ξ−1)^{δ/2} w` the normal form
//! `v″ + (A + B/ξ + C/(ξ−1) + D/ξ² + E/(ξ−1)²) v = 0` with
//!
//! `A = −ε²/4`, `B = [2μ + γ(δ−ε)]/2`, `C = [2ν − (ε+γ)δ − 2μ]/2`,
//! `D = (2−γ)γ/4`, `E = (2−δ)δ/4`.

use crate::problem::BesselProblem;
use num_complex::Complex64 as C;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeunReduction {
    pub gamma: C,
    pub delta: C,
    pub epsilon: C,
    pub mu: C,
    pub nu: C,
    pub a: C,
    pub b: C,
    pub c: C,
    pub d: C,
    pub e: C,
    /// Largest deviation of `(A, B, C, D, E)` from `((b−a)² z, 0, 0, ¼−s_a², ¼−s_b²)`.
    pub identification_residual: f64,
}

/// Heun parameters for `τ_{s_a,s_b,q=0} u = z u` and the resulting
/// normal-form coefficients, in the variable `ξ = (x−a)/(b−a)`.
pub fn heun_reduction(problem: &BesselProblem, z: C) -> HeunReduction {
    let (sa, sb) = (problem.s_a, problem.s_b);
    let len = problem.length();
    let gamma = C::new(1.0 + 2.0 * sa, 0.0);
    let delta = C::new(1.0 - 2.0 * sb, 0.0);
    let root = C::new(0.0, 2.0 * (problem.a - problem.b)) * z.sqrt();
    let epsilon = root;
    let mu = 0.5 * (1.0 + 2.0 * sa) * (root + (2.0 * sb - 1.0));
    let nu = root * (1.0 + sa - sb);

    let a = -epsilon * epsilon / 4.0;
    let b = (2.0 * mu + gamma * (delta - epsilon)) / 2.0;
    let c = (2.0 * nu - (epsilon + gamma) * delta - 2.0 * mu) / 2.0;
    let d = (2.0 - gamma) * gamma / 4.0;
    let e = (2.0 - delta) * delta / 4.0;

    let targets = [len * len * z, C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.25 - sa * sa, 0.0), C::new(0.25 - sb * sb, 0.0)];
    let identification_residual =
        [a, b, c, d, e].iter().zip(&targets).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    HeunReduction { gamma, delta, epsilon, mu, nu, a, b, c, d, e, identification_residual }
}
