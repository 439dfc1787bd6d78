//! Γ, ψ, ψ′, the Gauss hypergeometric function on [0, 1] and J₀ zeros.

mod bessel;
mod gamma;
mod hyp;

pub use bessel::{bessel_j0, bessel_j0_zero, bessel_j1};
pub use gamma::{digamma, digamma_real, gamma_fn, gamma_real, rgamma, trigamma};
pub use hyp::{gauss_value_at_one, hyp2f1, hyp2f1_derivative, Hyp2F1Params};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
