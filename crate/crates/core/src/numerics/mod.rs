//! Shared numerical kernel: ODE transport, endpoint-robust quadrature,
//! bracketed root finding and limit extrapolation.

mod extrapolate;
mod gauss;
mod ode;
mod quad;
mod roots;
mod scalar;

pub use extrapolate::{limit_extrapolate, Extrapolation, Model};
pub use gauss::{gauss_jacobi01, gauss_legendre01, Chebyshev};
pub use ode::{integrate_ode, Transport};
pub use quad::{quad_log, quad_nodes, quad_singular, quad_truncated, Node, QuadResult};
pub use roots::{find_root, golden_min};
pub use scalar::Scalar;

use crate::error::{Error, Result};

/// Tolerance triple shared by every iterative routine.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_steps: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-10, abs: 1e-12, max_steps: 200_000 }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64, max_steps: usize) -> Result<Self> {
        if !(rel > 0.0) || !(abs > 0.0) || max_steps == 0 {
            return Err(Error::Parameter(format!(
                "tolerance needs rel > 0, abs > 0, max_steps >= 1 (got {rel}, {abs}, {max_steps})"
            )));
        }
        Ok(Tolerance { rel, abs, max_steps })
    }

    /// Same step budget with both thresholds scaled.
    pub fn scaled(&self, factor: f64) -> Self {
        Tolerance { rel: self.rel * factor, abs: self.abs * factor, max_steps: self.max_steps }
    }

    pub(crate) fn accepts(&self, err: f64, scale: f64) -> bool {
        err <= self.abs.max(self.rel * scale.abs())
    }
}

/// Ordered samples on strictly increasing abscissae.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    pub points: Vec<f64>,
    pub values: Vec<T>,
}

impl<T: Copy> Grid<T> {
    pub fn new(points: Vec<f64>, values: Vec<T>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::Parameter("grid points and values differ in length".into()));
        }
        if points.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Parameter("grid abscissae must be strictly increasing".into()));
        }
        Ok(Grid { points, values })
    }

    /// Builds a grid from unordered pairs, sorting by abscissa.
    pub fn from_pairs(mut pairs: Vec<(f64, T)>) -> Result<Self> {
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let (points, values) = pairs.into_iter().unzip();
        Grid::new(points, values)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
