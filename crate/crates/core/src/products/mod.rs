//! Evaluators and verifiers for the trigonometric product and finite-sum
//! identities.

mod classify;
mod curious;
mod euler;
mod finite;
mod logprod;
mod nplication;
mod sums;

pub use classify::{classify, ArgumentClass};
pub use curious::{
    cpodd_product, epsilon_scaling_study, gp1b_induction_check, gp1b_product, peo2_product,
    sinc_cot_product, sinc_partial, vsum2_log_term, vsum2_partial, vsum2_product, vsum2a_hyperbolic,
    EpsilonRow, EpsilonScaling,
};
pub use finite::{
    br114_finite, finite_p5_product, jo1_product, jo2_product, jo2_zero_indices, x1_check,
    x1a_check, x1b_check,
};
pub use nplication::{
    cosine_sum_lemma, gn3c_pairing_check, gn3ci_factor, limit_factor_ratio, nplication_factor,
    nplication_product, special_factor, telescoping_trace, viete_partial, BaseFamily, SumKind,
    TelescopingRow, TelescopingTrace,
};
pub use euler::{euler_sine_partial, euler_sine_product, MAX_EULER_FACTORS};
pub use sums::{also_identity, gn3ad, h25, r1bd, vsum3};
