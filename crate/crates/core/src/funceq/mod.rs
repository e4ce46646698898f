//! Expansion of `f(a) = g(a) + x f(a/p)` into finite recursions and infinite
//! series, and its Gamma, eta and zeta applications.

mod applications;
mod engine;
mod problem;
pub mod problems;
mod solve;

pub use applications::{cm1b_check, eta_series_check, r0a_product_check, rs2_check, zeta_series_check};
pub use engine::{expand_finite, expanding_outcome, series_outcome, solve_expanding, solve_series, FiniteExpansion};
pub use solve::{closed_form, funceq_report};
pub use problem::{Boundary, FunceqProblem, GFn};
