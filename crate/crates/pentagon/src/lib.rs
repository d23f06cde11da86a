//! Special functions, kernels and numerical engines for checking pentagon-type
//! identities: exact operator expansions, hyperbolic and index sum/integrals,
//! their gamma-function limits, and the limits themselves.

pub mod error;
pub mod golden;
pub mod identities;
pub mod integrators;
pub mod kernels;
pub mod special_functions;
pub mod weyl_series;

pub use error::{Error, Result};
