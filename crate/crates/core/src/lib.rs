//! Bessel-type Sturm–Liouville operators
//! `τ = −d²/dx² + (s_a²−¼)/(x−a)² + (s_b²−¼)/(x−b)² + q`
//! on a bounded interval: solution frames, generalized boundary values,
//! self-adjoint extensions, spectra and Hardy-type inequalities.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod corpus;
pub mod error;
pub mod extensions;
pub mod firstorder;
pub mod hardy;
pub mod numerics;
pub mod problem;
pub mod solutions;
pub mod specialfn;
pub mod spectra;

pub use error::{Error, Result};
pub use problem::{BesselProblem, Endpoint, Potential};
