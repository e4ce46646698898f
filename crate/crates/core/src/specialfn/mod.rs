//! Gamma- and zeta-family special functions at configurable precision.
//!
//! Each function has a precision-explicit `*_float` form used by the other
//! modules and a [`PrecisionContext`](crate::mpcore::PrecisionContext) form
//! returning [`BigReal`](crate::mpcore::BigReal).

mod bernoulli;
mod checks;
mod constants;
mod gamma;
mod zeta;

pub use bernoulli::bernoulli_even;
pub use checks::{
    digamma_derivative_check, duplication_check, eta_zeta_relation_check, gauss_multiplication_check,
    lngamma_recurrence_check,
};
pub use constants::{euler_gamma, euler_gamma_float, ln2_float, ln3_float, ln_pi_float};
pub use gamma::{digamma, digamma_float, ln_gamma_float, lngamma};
pub use zeta::{eta_float, eta_int, zeta_euler_maclaurin, zeta_float, zeta_int};
