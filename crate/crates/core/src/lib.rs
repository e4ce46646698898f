//! High-precision evaluation and verification of trigonometric infinite
//! products for `sinc`, their exceptional cases and N-plication relatives,
//! the Gamma/digamma/zeta series built on the multiplication formula, and the
//! Dobinski and `prod cos(2^j a)` limit anomalies.

pub mod error;
pub mod mpcore;

pub use error::{Error, Result};
pub mod report;
pub mod specialfn;
pub mod funceq;
pub mod products;
pub mod anomalies;
pub mod catalog;
pub mod suite;
pub mod cli;
