use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("step-count exhausted near x = {x}: stiffness or singularity too close")]
    StepExhaustion { x: f64 },
    #[error("quadrature refinement did not converge (last levels {prev:e} and {last:e})")]
    QuadratureNoConvergence { prev: f64, last: f64 },
    #[error("integral diverges at the endpoint x = {x}")]
    Divergent { x: f64 },
    #[error("integrand overflows near x = {x}")]
    Overflow { x: f64 },
    #[error("invalid bracket [{lo}, {hi}]: function values do not change sign")]
    InvalidBracket { lo: f64, hi: f64 },
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("pole of the gamma function at z = {0}")]
    Pole(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("series diverges: {0}")]
    Divergence(String),
    #[error("frame undefined: {0}")]
    FrameUndefined(String),
    #[error("validity interval collapsed to {width:e} (minimum {min:e})")]
    ValidityCollapse { width: f64, min: f64 },
    #[error("evaluation at the singular point x = {x}")]
    Singularity { x: f64 },
    #[error("inadmissible trial function: {0}")]
    Inadmissible(String),
    #[error("function outside the form domain: {0}")]
    OutsideFormDomain(String),
    #[error("unavailable: {0}")]
    Unavailable(String),
    #[error("residual check failed: {0}")]
    Residual(String),
    #[error("invalid problem: {0}")]
    Problem(String),
}

pub type Result<T> = std::result::Result<T, Error>;
