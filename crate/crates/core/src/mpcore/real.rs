use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

use rug::Float;
use serde::{Serialize, Serializer};

use super::context::PrecisionContext;
use crate::error::{Error, Result};

/// Arbitrary-precision real rounded to a context's `digits`.
///
/// The mantissa holds [`PrecisionContext::bits`] bits: a value parsed from a
/// `digits`-digit decimal prints back to the same string, so serialization at
/// `digits` round-trips exactly.
#[derive(Debug, Clone, PartialEq, PartialOrd)]
pub struct BigReal {
    value: Float,
    digits: u32,
}

impl BigReal {
    /// Round `value` to the precision of `ctx`.
    pub fn from_float(value: &Float, ctx: &PrecisionContext) -> Self {
        BigReal {
            value: Float::with_val(ctx.bits(), value),
            digits: ctx.digits,
        }
    }

    pub fn from_f64(value: f64, ctx: &PrecisionContext) -> Self {
        BigReal {
            value: Float::with_val(ctx.bits(), value),
            digits: ctx.digits,
        }
    }

    pub fn zero(ctx: &PrecisionContext) -> Self {
        Self::from_f64(0.0, ctx)
    }

    /// Parse a decimal string (e.g. `-1.25e-3`) at the precision of `ctx`.
    pub fn parse(text: &str, ctx: &PrecisionContext) -> Result<Self> {
        let parsed = Float::parse(text.trim())
            .map_err(|e| Error::Parse(format!("invalid decimal '{text}': {e}")))?;
        Ok(BigReal {
            value: Float::with_val(ctx.bits(), parsed),
            digits: ctx.digits,
        })
    }

    pub fn as_float(&self) -> &Float {
        &self.value
    }

    pub fn into_float(self) -> Float {
        self.value
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn abs(&self) -> BigReal {
        BigReal {
            value: self.value.clone().abs(),
            digits: self.digits,
        }
    }

    /// Decimal string with the value's `digits` significant digits.
    pub fn to_decimal(&self) -> String {
        format_decimal(&self.value, self.digits as usize)
    }

    /// Decimal string with `n` significant digits.
    pub fn to_decimal_digits(&self, n: usize) -> String {
        format_decimal(&self.value, n)
    }

    pub fn cmp_abs_f64(&self, bound: f64) -> Ordering {
        self.value
            .clone()
            .abs()
            .partial_cmp(&bound)
            .unwrap_or(Ordering::Greater)
    }
}

impl Deref for BigReal {
    type Target = Float;

    fn deref(&self) -> &Float {
        &self.value
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

impl Serialize for BigReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_decimal())
    }
}

/// Format `value` with `digits` significant decimal digits. Plain notation is
/// used for decimal exponents in `-6..=21`, scientific otherwise.
pub fn format_decimal(value: &Float, digits: usize) -> String {
    if value.is_nan() {
        return "nan".into();
    }
    if value.is_infinite() {
        return if value.is_sign_negative() { "-inf" } else { "inf" }.into();
    }
    if value.is_zero() {
        return "0".into();
    }
    let (neg, mantissa, exp) = value.to_sign_string_exp(10, Some(digits.max(1)));
    // value = 0.mantissa * 10^exp
    let exp = exp.unwrap_or(0);
    let sign = if neg { "-" } else { "" };
    let m = mantissa.as_str();
    if exp > 0 && exp <= 21 {
        let e = exp as usize;
        if e >= m.len() {
            format!("{sign}{m}{}", "0".repeat(e - m.len()))
        } else {
            format!("{sign}{}.{}", &m[..e], &m[e..])
        }
    } else if exp <= 0 && exp > -6 {
        format!("{sign}0.{}{m}", "0".repeat((-exp) as usize))
    } else if m.len() > 1 {
        format!("{sign}{}.{}e{}", &m[..1], &m[1..], exp - 1)
    } else {
        format!("{sign}{m}e{}", exp - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formats_plain_and_scientific() {
        let ctx = PrecisionContext::with_digits(12);
        assert_eq!(BigReal::from_f64(1.0, &ctx).to_decimal(), "1.00000000000");
        assert_eq!(BigReal::from_f64(-0.015625, &ctx).to_decimal(), "-0.0156250000000");
        assert_eq!(BigReal::from_f64(1.5e-30, &ctx).to_decimal(), "1.50000000000e-30");
        assert_eq!(BigReal::from_f64(0.0, &ctx).to_decimal(), "0");
        assert_eq!(format_decimal(&Float::with_val(53, 1234.0), 4), "1234");
        assert_eq!(format_decimal(&Float::with_val(53, 1234.0), 2), "1200");
    }

    #[test]
    fn parse_rejects_garbage() {
        let ctx = PrecisionContext::with_digits(12);
        assert!(BigReal::parse("1.2.3", &ctx).is_err());
        assert!(BigReal::parse("abc", &ctx).is_err());
    }

    proptest! {
        #[test]
        fn decimal_round_trip_is_identity(seed in proptest::collection::vec(0u8..10, 80), lead in 1u8..10, neg: bool, e in -40i32..40, digits in 10u32..80) {
            let ctx = PrecisionContext::with_digits(digits);
            let mantissa: String = std::iter::once(lead)
                .chain(seed.into_iter())
                .take(digits as usize)
                .map(|d| char::from(b'0' + d))
                .collect();
            let text = format!("{}0.{mantissa}e{e}", if neg { "-" } else { "" });
            let x = BigReal::parse(&text, &ctx).unwrap();
            let printed = x.to_decimal();
            let back = BigReal::parse(&printed, &ctx).unwrap();
            prop_assert_eq!(back.as_float(), x.as_float());
            prop_assert_eq!(back.to_decimal(), printed);
        }
    }
}
