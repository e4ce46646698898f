//! The Dobinski product with complex branches, the Agnew-Walker condition and
//! the limit anatomy of `prod cos(2^j a)`.

mod dobinski;
mod weierstrass;

pub use dobinski::{
    agnew_walker_condition, agnew_walker_report, dobinski_closure_report, dobinski_evaluate,
    AgnewWalkerRow, AgnewWalkerTrace, Branch, DobinskiRow, DobinskiTrace,
};
pub use weierstrass::{
    br114a_report, case1_expansion_check, case2_zero_factor, jo2_zero_anatomy, required_digits,
    weierstrass_trajectory, CauchyViolation, LimitTrajectory, TrajectoryRow, WindowCount,
    CAUCHY_WINDOW, DEFAULT_K_MAX,
};
