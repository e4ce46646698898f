//! Ready-made instances of `f(a) = g(a) + x f(a/p)`.

use std::sync::Arc;

use rug::Float;

use super::problem::{Boundary, FunceqProblem, GFn};
use crate::error::Result;
use crate::specialfn::{ln2_float, ln_gamma_float, ln_pi_float};

fn build(label: &str, g: GFn, x: f64, p: f64, boundary: Boundary) -> FunceqProblem {
    FunceqProblem::new(label, g, Float::with_val(64, x), Float::with_val(64, p), boundary)
        .expect("built-in problem parameters are consistent")
}

/// `g(a) = a`, `x = 1/2`, `p = 2`: `f(a) = 4a/3`.
pub fn linear() -> FunceqProblem {
    build("linear", Arc::new(|y, prec| Ok(Float::with_val(prec, y))), 0.5, 2.0, Boundary::F0Finite)
}

/// `g(a) = a^2`, `x = 1/4`, `p = 2`: `f(a) = 16 a^2 / 15`.
pub fn square() -> FunceqProblem {
    build("square", Arc::new(|y, prec| Ok(Float::with_val(prec, y.square_ref()))), 0.25, 2.0, Boundary::F0Finite)
}

/// `g(a) = 1/a`, `x = 2`, `p = 2`: `f(a) = -1/(3a)`.
pub fn reciprocal() -> FunceqProblem {
    build("reciprocal", Arc::new(|y, prec| Ok(Float::with_val(prec, y.recip_ref()))), 2.0, 2.0, Boundary::FInfFinite)
}

/// `g(a) = 1/a^2`, `x = 8`, `p = 2`: `f(a) = -1/(31 a^2)`.
pub fn reciprocal_square() -> FunceqProblem {
    build(
        "reciprocal_square",
        Arc::new(|y, prec| Ok(Float::with_val(prec, y.square_ref()).recip())),
        8.0,
        2.0,
        Boundary::FInfFinite,
    )
}

/// `g(a) = e^-a`, `x = 2`, `p = 2`: `f(a) = -sum_{j>=1} e^(-2^j a) / 2^j`.
pub fn exp_decay() -> FunceqProblem {
    build(
        "exp_decay",
        Arc::new(|y, prec| Ok(Float::with_val(prec, -y).exp())),
        2.0,
        2.0,
        Boundary::FInfFinite,
    )
}

/// `ln Gamma(1+a) = [a ln 2 - ln(pi)/2 + ln Gamma(a/2 + 1/2)] + ln Gamma(1 + a/2)`.
pub fn duplication_defect() -> FunceqProblem {
    build(
        "lngamma_duplication",
        Arc::new(|y, prec| {
            let w = prec + 8;
            let mut g = Float::with_val(w, y * ln2_float(w));
            g -= ln_pi_float(w) / 2u32;
            g += ln_gamma_float(&(Float::with_val(w, y / 2u32) + 0.5f64), w)?;
            Ok(Float::with_val(prec, g))
        }),
        1.0,
        2.0,
        Boundary::F0Zero,
    )
}

/// `ln Gamma(y+1) - ln Gamma(y+1/2) + ln(pi)/2 - 2 y ln 2`, which is `O(y^2)`.
pub(crate) fn half_shift_defect(y: &Float, prec: u32) -> Result<Float> {
    let w = prec + 8;
    let mut t = ln_gamma_float(&(Float::with_val(w, y) + 1u32), w)?;
    t -= ln_gamma_float(&(Float::with_val(w, y) + 0.5f64), w)?;
    t += ln_pi_float(w) / 2u32;
    t -= Float::with_val(w, y * ln2_float(w)) * 2u32;
    Ok(Float::with_val(prec, t))
}

fn divided(y: &Float, prec: u32, t: impl FnOnce() -> Result<Float>) -> Result<Float> {
    if y.is_zero() {
        return Ok(Float::with_val(prec, 0));
    }
    Ok(Float::with_val(prec, t()? / y))
}

/// `g(y) = s(y)/y` with `s(y) = 2 ln Gamma(y/2+1) - 2 ln Gamma(y/2+1/2) + ln pi - 2 y ln 2`.
///
/// `a f(a)` is the sum of the Gamma-ratio series whose value is
/// `-2 gamma a - 2 ln Gamma(a+1)`.
pub fn rs2_summand() -> FunceqProblem {
    build(
        "rs2_summand",
        Arc::new(|y, prec| divided(y, prec, || Ok(half_shift_defect(&Float::with_val(prec, y / 2u32), prec)? * 2u32))),
        1.0,
        2.0,
        Boundary::F0Zero,
    )
}

/// `g(y) = T(y)/y` with `T(y) = ln Gamma(y+1) - ln Gamma(y+1/2) + ln(pi)/2 - 2 y ln 2`;
/// `ln Gamma(1+2a) + a f(a) = -2 gamma a`.
pub fn r0a_summand() -> FunceqProblem {
    build(
        "r0a_summand",
        Arc::new(|y, prec| divided(y, prec, || half_shift_defect(y, prec))),
        1.0,
        2.0,
        Boundary::F0Zero,
    )
}

/// `g(y) = (1/y) ln(sqrt(pi) Gamma(y/2+1) / (Gamma(y/2+1/2) 2^y))`; the solution
/// is the zeta series `sum_{j>=1} zeta(1+j) (-a)^j / (1+j)`.
pub fn zeta_splitting() -> FunceqProblem {
    build(
        "zeta_splitting",
        Arc::new(|y, prec| divided(y, prec, || eta_series_closed_form_numerator(y, prec))),
        1.0,
        2.0,
        Boundary::F0Zero,
    )
}

/// `ln(sqrt(pi) Gamma(y/2+1) / (Gamma(y/2+1/2) 2^y))`.
pub(crate) fn eta_series_closed_form_numerator(y: &Float, prec: u32) -> Result<Float> {
    let w = prec + 8;
    let half = Float::with_val(w, y / 2u32);
    let mut t = ln_pi_float(w) / 2u32;
    t += ln_gamma_float(&(Float::with_val(w, &half) + 1u32), w)?;
    t -= ln_gamma_float(&(half + 0.5f64), w)?;
    t -= Float::with_val(w, y * ln2_float(w));
    Ok(Float::with_val(prec, t))
}

/// Every built-in problem, by label.
pub fn builtin(label: &str) -> Option<FunceqProblem> {
    Some(match label {
        "linear" => linear(),
        "square" => square(),
        "reciprocal" => reciprocal(),
        "reciprocal_square" => reciprocal_square(),
        "exp_decay" => exp_decay(),
        "lngamma_duplication" | "dargid" => duplication_defect(),
        "rs2_summand" | "rs2" => rs2_summand(),
        "r0a_summand" | "r0a" => r0a_summand(),
        "zeta_splitting" | "cm1b" => zeta_splitting(),
        _ => return None,
    })
}

pub const BUILTIN_LABELS: [&str; 9] = [
    "linear",
    "square",
    "reciprocal",
    "reciprocal_square",
    "exp_decay",
    "lngamma_duplication",
    "rs2_summand",
    "r0a_summand",
    "zeta_splitting",
];
