use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;
const LOG10_2: f64 = std::f64::consts::LOG10_2;

/// Working precision, tolerances and truncation policy shared by every
/// evaluation in the crate.
///
/// `digits` is the number of significant decimal digits that results are
/// rounded to. Internal computations run with `guard_digits` extra digits,
/// and argument reductions of `q^j * a` add another `ceil(j * log10 q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecisionContext {
    pub digits: u32,
    pub tail_tolerance: f64,
    pub rel_tolerance: f64,
    pub max_terms: usize,
    pub guard_digits: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::with_digits(50)
    }
}

impl PrecisionContext {
    /// Context with the default policy for `digits`: tail tolerance
    /// `10^-(digits-10)`, relative tolerance `10^-(digits-10)`, 256 terms and
    /// 10 guard digits.
    pub fn with_digits(digits: u32) -> Self {
        let tol = pow10(-(digits as i32 - 10));
        PrecisionContext {
            digits,
            tail_tolerance: tol,
            rel_tolerance: tol,
            max_terms: 256,
            guard_digits: 10,
        }
    }

    pub fn new(
        digits: u32,
        tail_tolerance: f64,
        rel_tolerance: f64,
        max_terms: usize,
        guard_digits: u32,
    ) -> Result<Self> {
        let ctx = PrecisionContext {
            digits,
            tail_tolerance,
            rel_tolerance,
            max_terms,
            guard_digits,
        };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn validate(&self) -> Result<()> {
        if self.digits < 10 {
            return Err(Error::InvalidContext(format!(
                "digits must be >= 10, got {}",
                self.digits
            )));
        }
        if !(self.tail_tolerance > 0.0) || !self.tail_tolerance.is_finite() {
            return Err(Error::InvalidContext(
                "tail_tolerance must be a positive finite number".into(),
            ));
        }
        if !(self.rel_tolerance > 0.0) || !self.rel_tolerance.is_finite() {
            return Err(Error::InvalidContext(
                "rel_tolerance must be a positive finite number".into(),
            ));
        }
        if self.max_terms < 1 {
            return Err(Error::InvalidContext("max_terms must be >= 1".into()));
        }
        Ok(())
    }

    pub fn with_tail_tolerance(mut self, tol: f64) -> Self {
        self.tail_tolerance = tol;
        self
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }

    pub fn with_guard_digits(mut self, guard: u32) -> Self {
        self.guard_digits = guard;
        self
    }

    /// Mantissa bits of a [`BigReal`](super::BigReal) at this context. Any
    /// `digits`-digit decimal parsed at this precision prints back unchanged.
    pub fn bits(&self) -> u32 {
        digits_to_bits(self.digits) + 1
    }

    /// Internal working precision: `digits + guard_digits` decimal digits.
    pub fn work_bits(&self) -> u32 {
        digits_to_bits(self.digits + self.guard_digits)
    }

    /// Decimal digits used when reducing `q^j * a`:
    /// `digits + ceil(j * log10 q) + guard_digits`.
    pub fn reduction_digits(&self, q: u32, j: u32) -> u32 {
        let growth = (j as f64 * (q as f64).log10()).ceil() as u32;
        self.digits + growth + self.guard_digits
    }

    pub fn reduction_bits(&self, q: u32, j: u32) -> u32 {
        digits_to_bits(self.reduction_digits(q, j))
    }

    /// Tolerance for identities that are exact at finite size:
    /// `10^-(digits-8)`.
    pub fn exact_tolerance(&self) -> f64 {
        pow10(-(self.digits as i32 - 8))
    }

    /// The same context with `digits` doubled (other fields kept).
    pub fn doubled(&self) -> Self {
        let mut c = self.clone();
        c.digits *= 2;
        c
    }
}

/// `10^e` correctly rounded, as the literal `1e{e}` would be.
pub fn pow10(e: i32) -> f64 {
    format!("1e{e}").parse().expect("valid float literal")
}

pub fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * LOG2_10).ceil() as u32
}

pub fn bits_to_digits(bits: u32) -> u32 {
    (bits as f64 * LOG10_2).floor() as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let ctx = PrecisionContext::default();
        assert_eq!(ctx.digits, 50);
        assert_eq!(ctx.max_terms, 256);
        assert!((ctx.tail_tolerance - 1e-40).abs() < 1e-52);
        ctx.validate().unwrap();
    }

    #[test]
    fn rejects_bad_contexts() {
        assert!(PrecisionContext::new(9, 1e-5, 1e-5, 10, 0).is_err());
        assert!(PrecisionContext::new(20, 0.0, 1e-5, 10, 0).is_err());
        assert!(PrecisionContext::new(20, 1e-5, 1e-5, 0, 0).is_err());
        assert!(PrecisionContext::new(20, 1e-5, 1e-5, 1, 0).is_ok());
    }

    #[test]
    fn reduction_precision_grows_linearly() {
        let ctx = PrecisionContext::default();
        assert_eq!(ctx.reduction_digits(2, 0), 60);
        // ceil(100 * log10 2) = 31
        assert_eq!(ctx.reduction_digits(2, 100), 50 + 31 + 10);
        assert_eq!(ctx.reduction_digits(3, 5), 50 + 3 + 10);
    }

    #[test]
    fn bits_fit_digits() {
        let ctx = PrecisionContext::with_digits(30);
        // ceil(30 * log2 10) + 1
        assert_eq!(ctx.bits(), 101);
    }
}
