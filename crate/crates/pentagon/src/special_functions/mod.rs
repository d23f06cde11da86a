//! Scalar special functions: complex log-gamma, q-Pochhammer symbols,
//! the hyperbolic gamma function and the (Rogers) dilogarithm.

mod dilog;
mod gamma;
mod hyperbolic;
mod qpoch;
mod types;

pub use dilog::{dilog, rogers_l};
pub use gamma::{gamma, ln1p, log_gamma, log_gamma_real};
pub use hyperbolic::{bernoulli_b22, bernoulli_b22_periods, hyperbolic_gamma, log_hyperbolic_gamma};
pub use qpoch::{
    expm1, ln_one_minus_exp, log_qpoch_from_ln, qpoch_finite, qpoch_from_one, qpoch_inf,
    qpoch_inf_detailed, qpoch_ratio_regularized, PochhammerValue, VANISHING_FACTOR,
};
pub use types::{ModularPair, Nome, TruncationPolicy};
