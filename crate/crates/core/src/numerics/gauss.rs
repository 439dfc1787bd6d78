use nalgebra::{DMatrix, SymmetricEigen};
use std::f64::consts::PI;

/// Gauss rule for `∫₀¹ τ^β g(τ) dτ`, β > −1, by Golub–Welsch.
pub fn gauss_jacobi01(n: usize, beta: f64) -> (Vec<f64>, Vec<f64>) {
    let alpha = 0.0;
    let ab = alpha + beta;
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let a = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        j[(k, k)] = a;
        if k + 1 < n {
            let m = kf + 1.0;
            let num = 4.0 * m * (m + alpha) * (m + beta) * (m + ab);
            let den = (2.0 * m + ab).powi(2) * (2.0 * m + ab + 1.0) * (2.0 * m + ab - 1.0);
            let b = (num / den).sqrt();
            j[(k, k + 1)] = b;
            j[(k + 1, k)] = b;
        }
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let x = eig.eigenvalues[i];
            let v0 = eig.eigenvectors[(0, i)];
            (0.5 * (1.0 + x), v0 * v0 / (beta + 1.0))
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    pairs.into_iter().unzip()
}

/// Gauss–Legendre rule on `[0, 1]`.
pub fn gauss_legendre01(n: usize) -> (Vec<f64>, Vec<f64>) {
    gauss_jacobi01(n, 0.0)
}

/// Chebyshev–Lobatto nodes on `[a, b]` with barycentric interpolation.
#[derive(Debug, Clone)]
pub struct Chebyshev {
    pub a: f64,
    pub b: f64,
    pub nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Chebyshev {
    pub fn new(a: f64, b: f64, n: usize) -> Self {
        let m = n - 1;
        let nodes = (0..n)
            .map(|j| {
                let c = (PI * j as f64 / m as f64).cos();
                0.5 * (a + b) - 0.5 * (b - a) * c
            })
            .collect();
        let weights = (0..n)
            .map(|j| {
                let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                if j == 0 || j == m {
                    0.5 * s
                } else {
                    s
                }
            })
            .collect();
        Chebyshev { a, b, nodes, weights }
    }

    /// Interpolates nodal values at `x`.
    pub fn interp(&self, values: &[f64], x: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&xj, &wj), &fj) in self.nodes.iter().zip(&self.weights).zip(values) {
            let d = x - xj;
            if d == 0.0 {
                return fj;
            }
            let t = wj / d;
            num += t * fj;
            den += t;
        }
        num / den
    }

    /// Lagrange basis values at `x`, so that `interp = Σ ℓ_j f_j`.
    pub fn basis(&self, x: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.nodes.len()];
        let mut den = 0.0;
        for (j, (&xj, &wj)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let d = x - xj;
            if d == 0.0 {
                out.iter_mut().for_each(|v| *v = 0.0);
                out[j] = 1.0;
                return out;
            }
            out[j] = wj / d;
            den += out[j];
        }
        out.iter_mut().for_each(|v| *v /= den);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_moments() {
        let beta = -0.5;
        let (x, w) = gauss_jacobi01(20, beta);
        for k in 0..10 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            assert!((q - 1.0 / (k as f64 + beta + 1.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn chebyshev_reproduces_polynomial() {
        let c = Chebyshev::new(0.0, 2.0, 12);
        let vals: Vec<f64> = c.nodes.iter().map(|x| x.powi(5) - 3.0 * x).collect();
        assert!((c.interp(&vals, 0.37) - (0.37f64.powi(5) - 1.11)).abs() < 1e-13);
    }
}
