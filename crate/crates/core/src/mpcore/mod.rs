//! Extended-precision substrate: contexts, reals and complexes backed by
//! MPFR, exact `rational + rational*pi` arguments, and argument reduction.

mod complex;
mod context;
mod elementary;
mod exact;
mod real;
mod series;

pub use complex::BigComplex;
pub use context::{bits_to_digits, digits_to_bits, pow10, PrecisionContext};
pub use elementary::{elementary, elementary_exact, pi, realize, reduce_scaled, ElementaryFn};
pub use exact::{parse_rational_literal, ExactArgument};
pub use real::{format_decimal, BigReal};
pub use series::{sum_series, sum_series_with, SeriesOutcome, MAX_TAIL_RATIO};

#[allow(unused_imports)]
pub(crate) use elementary::{cos_at, cot_at, reduce_angle, sin_at, tan_at};
