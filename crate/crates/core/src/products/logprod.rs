//! Infinite products summed as logarithms of their factors.

use rug::Float;

use crate::error::Result;
use crate::mpcore::{sum_series, PrecisionContext, SeriesOutcome};

/// `exponent * ln|factor|` of one weighted factor.
pub(crate) enum LogTerm {
    Value { log: Float, negative: bool },
    Zero,
}

impl LogTerm {
    /// `exponent * ln|base|`, negative when `base < 0` and the exponent is odd.
    pub(crate) fn weighted(base: &Float, exponent: &Float, odd: bool, prec: u32) -> LogTerm {
        if base.is_zero() {
            return LogTerm::Zero;
        }
        let log = Float::with_val(prec, base.abs_ref()).ln() * exponent;
        LogTerm::Value {
            log,
            negative: odd && base.is_sign_negative(),
        }
    }
}

/// Truncated `prod_j factor_j = sign * exp(log_abs)`.
pub(crate) struct LogProduct {
    pub log_abs: Float,
    pub negative: bool,
    pub zero_at: Option<usize>,
    pub outcome: SeriesOutcome,
}

impl LogProduct {
    pub(crate) fn value(&self, prec: u32) -> Float {
        if self.zero_at.is_some() {
            return Float::with_val(prec, 0);
        }
        let v = Float::with_val(prec, self.log_abs.exp_ref());
        if self.negative {
            -v
        } else {
            v
        }
    }
}

/// Sum `term(i)` for `i = 0, 1, ...` with the geometric truncation rule.
/// A zero factor ends the product with value zero.
pub(crate) fn log_product<F>(ctx: &PrecisionContext, prec: u32, mut term: F) -> Result<LogProduct>
where
    F: FnMut(usize) -> Result<LogTerm>,
{
    let mut negative = false;
    let mut zero_at = None;
    let outcome = sum_series(ctx, prec, |i| {
        if zero_at.is_some() {
            return Ok(Float::with_val(prec, 0));
        }
        match term(i)? {
            LogTerm::Value { log, negative: neg } => {
                negative ^= neg;
                Ok(log)
            }
            LogTerm::Zero => {
                zero_at = Some(i);
                Ok(Float::with_val(prec, 0))
            }
        }
    })?;
    let mut outcome = outcome;
    if zero_at.is_some() {
        outcome.converged = true;
    }
    Ok(LogProduct {
        log_abs: outcome.sum.clone(),
        negative,
        zero_at,
        outcome,
    })
}

/// `2^(j-1)` as a float, for `j >= 1`.
pub(crate) fn pow2(j: i64, prec: u32) -> Float {
    Float::with_val(prec, Float::i_exp(1, j as i32))
}
