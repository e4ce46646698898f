use std::fmt;
use std::str::FromStr;

use rug::float::Constant;
use rug::{Float, Integer, Rational};

use super::context::PrecisionContext;
use super::exact::ExactArgument;
use super::real::BigReal;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementaryFn {
    Sin,
    Cos,
    Tan,
    Cot,
    Sinh,
    Tanh,
    Exp,
    Ln,
}

impl ElementaryFn {
    pub const ALL: [ElementaryFn; 8] = [
        ElementaryFn::Sin,
        ElementaryFn::Cos,
        ElementaryFn::Tan,
        ElementaryFn::Cot,
        ElementaryFn::Sinh,
        ElementaryFn::Tanh,
        ElementaryFn::Exp,
        ElementaryFn::Ln,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ElementaryFn::Sin => "sin",
            ElementaryFn::Cos => "cos",
            ElementaryFn::Tan => "tan",
            ElementaryFn::Cot => "cot",
            ElementaryFn::Sinh => "sinh",
            ElementaryFn::Tanh => "tanh",
            ElementaryFn::Exp => "exp",
            ElementaryFn::Ln => "ln",
        }
    }
}

impl fmt::Display for ElementaryFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ElementaryFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ElementaryFn::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown elementary function '{s}'")))
    }
}

/// `rational_part + pi_multiple * pi`, rounded to the context precision.
pub fn realize(arg: &ExactArgument, ctx: &PrecisionContext) -> BigReal {
    BigReal::from_float(&arg.to_float(ctx.work_bits()), ctx)
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// Apply `f` to a real value. Computed at the working precision and rounded to
/// the context precision. `tan`/`cot` report a domain error when the input is
/// indistinguishable from a pole at the value's own precision.
pub fn elementary(f: ElementaryFn, x: &BigReal, ctx: &PrecisionContext) -> Result<BigReal> {
    let w = ctx.work_bits();
    let xv = Float::with_val(w, x.as_float());
    let pole_threshold = {
        let scale = Float::with_val(w, xv.abs_ref()).max(&Float::with_val(w, 1));
        scale * Float::with_val(w, Float::i_exp(1, 4 - x.prec() as i32))
    };
    let value = match f {
        ElementaryFn::Sin => xv.sin(),
        ElementaryFn::Cos => xv.cos(),
        ElementaryFn::Tan => {
            let (s, c) = xv.sin_cos(Float::new(w));
            if Float::with_val(w, c.abs_ref()) <= pole_threshold {
                return Err(Error::domain(format!("tan pole at {x}")));
            }
            s / c
        }
        ElementaryFn::Cot => {
            let (s, c) = xv.sin_cos(Float::new(w));
            if Float::with_val(w, s.abs_ref()) <= pole_threshold {
                return Err(Error::domain(format!("cot pole at {x}")));
            }
            c / s
        }
        ElementaryFn::Sinh => xv.sinh(),
        ElementaryFn::Tanh => xv.tanh(),
        ElementaryFn::Exp => xv.exp(),
        ElementaryFn::Ln => {
            if xv <= 0 {
                return Err(Error::domain(format!("ln of non-positive value {x}")));
            }
            xv.ln()
        }
    };
    Ok(BigReal::from_float(&value, ctx))
}

/// Apply `f` to an exactly known argument. Poles of `tan`/`cot` and exact
/// zeros of `sin`/`cos` at multiples of `pi/2` are decided exactly.
pub fn elementary_exact(f: ElementaryFn, arg: &ExactArgument, ctx: &PrecisionContext) -> Result<BigReal> {
    let w = ctx.work_bits();
    let value = match f {
        ElementaryFn::Sin => sin_at(arg, w),
        ElementaryFn::Cos => cos_at(arg, w),
        ElementaryFn::Tan => tan_at(arg, w)?,
        ElementaryFn::Cot => cot_at(arg, w)?,
        ElementaryFn::Ln => {
            if arg.signum() <= 0 {
                return Err(Error::domain(format!("ln of non-positive value {arg}")));
            }
            arg.to_float(w).ln()
        }
        other => return elementary(other, &realize(arg, ctx), ctx),
    };
    Ok(BigReal::from_float(&value, ctx))
}

/// `(q^j * a) mod 2pi` in `[0, 2pi)`.
///
/// The pi multiple of `q^j * a` is reduced modulo 2 exactly; the rational
/// part is realised with `digits + ceil(j log10 q) + guard_digits` digits
/// plus its own magnitude, so the reduction loses nothing to cancellation.
pub fn reduce_scaled(arg: &ExactArgument, q: u32, j: u32, ctx: &PrecisionContext) -> BigReal {
    let scaled = arg.scale_pow(q, j as i32);
    let prec = ctx.reduction_bits(q, j);
    let mut t = reduce_angle(&scaled, prec);
    if t.is_sign_negative() && !t.is_zero() {
        t += Float::with_val(t.prec(), Constant::Pi) * 2u32;
    }
    BigReal::from_float(&t, ctx)
}

/// `s mod 2` in `(-1, 1]`.
fn pi_multiple_mod2(s: &Rational) -> Rational {
    // s - 2 * round_half_down(s / 2)
    let half = Rational::from(s / 2u32);
    let (_, floor) = half.fract_floor(Integer::new());
    let mut r = s - Rational::from(floor * 2u32);
    // now r in [0, 2)
    if r > 1 {
        r -= 2u32;
    }
    r
}

/// The angle `arg` reduced into `(-pi, pi]`, accurate to about `2^-prec`
/// absolute. Arguments already inside that interval are returned unreduced,
/// keeping full relative accuracy for tiny angles.
pub(crate) fn reduce_angle(arg: &ExactArgument, prec: u32) -> Float {
    let s = pi_multiple_mod2(&arg.pi_multiple);
    let reduced = ExactArgument::new(arg.rational_part.clone(), s);
    if reduced.rational_part == 0 {
        return Float::with_val(prec, &reduced.pi_multiple) * pi(prec);
    }
    let p = prec + reduced.magnitude_bits() + 16;
    let t = reduced.to_float(p);
    let pi_p = pi(p);
    if Float::with_val(p, t.abs_ref()) <= pi_p {
        return Float::with_val(prec, t);
    }
    let two_pi = Float::with_val(p, &pi_p * 2u32);
    let k = Float::with_val(p, &t / &two_pi).round();
    Float::with_val(prec, t - two_pi * k)
}

/// Exact value class of `arg` when it is an integer multiple of `pi/2`:
/// `Some(0..=3)` giving the quarter turn.
fn quarter_turn(arg: &ExactArgument) -> Option<u32> {
    let s = arg.as_pi_multiple()?;
    let doubled = Rational::from(s * 2u32);
    if *doubled.denom() != 1 {
        return None;
    }
    let q = doubled.numer().mod_u(4);
    Some(q)
}

pub(crate) fn sin_at(arg: &ExactArgument, prec: u32) -> Float {
    match quarter_turn(arg) {
        Some(0) | Some(2) => Float::with_val(prec, 0),
        Some(1) => Float::with_val(prec, 1),
        Some(3) => Float::with_val(prec, -1),
        _ => reduce_angle(arg, prec + 8).sin(),
    }
}

pub(crate) fn cos_at(arg: &ExactArgument, prec: u32) -> Float {
    match quarter_turn(arg) {
        Some(1) | Some(3) => Float::with_val(prec, 0),
        Some(0) => Float::with_val(prec, 1),
        Some(2) => Float::with_val(prec, -1),
        _ => reduce_angle(arg, prec + 8).cos(),
    }
}

pub(crate) fn tan_at(arg: &ExactArgument, prec: u32) -> Result<Float> {
    match quarter_turn(arg) {
        Some(0) | Some(2) => Ok(Float::with_val(prec, 0)),
        Some(_) => Err(Error::domain(format!("tan pole at {arg}"))),
        None => Ok(reduce_angle(arg, prec + 8).tan()),
    }
}

pub(crate) fn cot_at(arg: &ExactArgument, prec: u32) -> Result<Float> {
    match quarter_turn(arg) {
        Some(1) | Some(3) => Ok(Float::with_val(prec, 0)),
        Some(_) => Err(Error::domain(format!("cot pole at {arg}"))),
        None => Ok(reduce_angle(arg, prec + 8).cot()),
    }
}
