use std::fmt;

use rug::float::Constant;
use rug::Float;
use serde::{Serialize, Serializer};

use super::real::format_decimal;
use crate::error::{Error, Result};

/// Complex number with arbitrary-precision parts.
///
/// Only what the Dobinski evaluator needs: products, modulus, principal
/// argument and principal real powers.
#[derive(Debug, Clone, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        BigComplex { re, im }
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::with_val(re.prec(), 0);
        BigComplex { re, im }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_real(Float::with_val(prec, 1))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn modulus(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// Principal argument in `(-pi, pi]`. A negative zero imaginary part is
    /// treated as `+0`, so the negative real axis maps to `+pi`.
    pub fn arg(&self) -> Float {
        let prec = self.prec();
        if self.im.is_zero() {
            return if self.re.is_sign_negative() && !self.re.is_zero() {
                Float::with_val(prec, Constant::Pi)
            } else {
                Float::with_val(prec, 0)
            };
        }
        Float::with_val(prec, self.im.atan2_ref(&self.re))
    }

    pub fn mul(&self, other: &BigComplex) -> BigComplex {
        let prec = self.prec().max(other.prec());
        let re = Float::with_val(prec, &self.re * &other.re) - Float::with_val(prec, &self.im * &other.im);
        let im = Float::with_val(prec, &self.re * &other.im) + Float::with_val(prec, &self.im * &other.re);
        BigComplex { re, im }
    }

    pub fn scale(&self, factor: &Float) -> BigComplex {
        BigComplex {
            re: Float::with_val(self.prec(), &self.re * factor),
            im: Float::with_val(self.prec(), &self.im * factor),
        }
    }

    /// Multiply by `exp(i * theta)`.
    pub fn rotate(&self, theta: &Float) -> BigComplex {
        let prec = self.prec();
        let (s, c) = Float::with_val(prec, theta).sin_cos(Float::new(prec));
        self.mul(&BigComplex { re: c, im: s })
    }

    pub fn sub(&self, other: &BigComplex) -> BigComplex {
        let prec = self.prec().max(other.prec());
        BigComplex {
            re: Float::with_val(prec, &self.re - &other.re),
            im: Float::with_val(prec, &self.im - &other.im),
        }
    }

    /// `z^w = exp(w * (ln|z| + i Arg z))` with `Arg z` in `(-pi, pi]`.
    ///
    /// `0^w` is `0` for `w > 0` and a domain error otherwise. A positive real
    /// base gives `exp(w ln z)` with an exactly zero imaginary part.
    pub fn pow_principal(&self, w: &Float) -> Result<BigComplex> {
        let prec = self.prec().max(w.prec());
        if self.is_zero() {
            if *w > 0 {
                return Ok(BigComplex::from_real(Float::with_val(prec, 0)));
            }
            return Err(Error::domain("0 raised to a non-positive power"));
        }
        if self.im.is_zero() && self.re.is_sign_positive() {
            let v = Float::with_val(prec, self.re.ln_ref()) * w;
            return Ok(BigComplex::from_real(v.exp()));
        }
        let ln_mod = self.modulus().ln();
        let magnitude = Float::with_val(prec, &ln_mod * w).exp();
        let phase = Float::with_val(prec, self.arg() * w);
        let (s, c) = phase.sin_cos(Float::new(prec));
        Ok(BigComplex {
            re: Float::with_val(prec, &magnitude * &c),
            im: Float::with_val(prec, &magnitude * &s),
        })
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        format!(
            "({}, {})",
            format_decimal(&self.re, digits),
            format_decimal(&self.im, digits)
        )
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = super::context::bits_to_digits(self.prec()) as usize;
        f.write_str(&self.to_decimal(digits))
    }
}

impl Serialize for BigComplex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rug::ops::Pow;

    const P: u32 = 200;

    fn c(re: f64, im: f64) -> BigComplex {
        BigComplex::new(Float::with_val(P, re), Float::with_val(P, im))
    }

    fn close(a: &Float, b: &Float, tol: f64) -> bool {
        Float::with_val(P, a - b).abs() < tol
    }

    #[test]
    fn sqrt_of_minus_one_is_i() {
        let r = c(-1.0, 0.0).pow_principal(&Float::with_val(P, 0.5)).unwrap();
        assert!(close(&r.re, &Float::with_val(P, 0), 1e-55));
        assert!(close(&r.im, &Float::with_val(P, 1), 1e-55));
    }

    #[test]
    fn sqrt_of_four() {
        let r = c(4.0, 0.0).pow_principal(&Float::with_val(P, 0.5)).unwrap();
        assert!(close(&r.re, &Float::with_val(P, 2), 1e-55));
        assert!(r.im.is_zero());
    }

    #[test]
    fn fourth_root_of_minus_two() {
        let r = c(-2.0, 0.0).pow_principal(&Float::with_val(P, 0.25)).unwrap();
        // 2^(1/4) (cos(pi/4) + i sin(pi/4)) = 2^(1/4) / sqrt(2) (1 + i) = 2^(-1/4) (1 + i)
        let expect = Float::with_val(P, 2).pow(Float::with_val(P, -0.25));
        assert!(close(&r.re, &expect, 1e-55));
        assert!(close(&r.im, &expect, 1e-55));
    }

    #[test]
    fn zero_base() {
        assert!(c(0.0, 0.0).pow_principal(&Float::with_val(P, 0.5)).unwrap().is_zero());
        assert!(c(0.0, 0.0).pow_principal(&Float::with_val(P, 0)).is_err());
        assert!(c(0.0, 0.0).pow_principal(&Float::with_val(P, -1)).is_err());
    }

    #[test]
    fn negative_zero_imaginary_part_uses_upper_branch() {
        let z = BigComplex::new(Float::with_val(P, -1), -Float::with_val(P, 0));
        let pi = Float::with_val(P, Constant::Pi);
        assert_eq!(z.arg(), pi);
    }

    proptest! {
        #[test]
        fn arg_in_principal_interval(re in -10.0f64..10.0, im in -10.0f64..10.0) {
            prop_assume!(re != 0.0 || im != 0.0);
            let a = c(re, im).arg();
            let pi = Float::with_val(P, Constant::Pi);
            prop_assert!(a > -pi.clone() && a <= pi);
        }

        #[test]
        fn positive_real_base_matches_real_power(x in 1e-6f64..1e6, w in -5.0f64..5.0) {
            let z = c(x, 0.0);
            let w = Float::with_val(P, w);
            let r = z.pow_principal(&w).unwrap();
            let direct = Float::with_val(P, Float::with_val(P, x).ln() * &w).exp();
            prop_assert!(r.im.is_zero());
            prop_assert_eq!(r.re, direct);
        }
    }
}
