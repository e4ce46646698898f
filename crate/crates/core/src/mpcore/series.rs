use rug::Float;

use super::context::PrecisionContext;
use crate::error::{Error, Result};

/// Largest observed ratio of consecutive terms accepted as geometric decay.
pub const MAX_TAIL_RATIO: f64 = 0.75;

/// Truncated sum of an infinite series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesOutcome {
    pub sum: Float,
    pub terms: usize,
    pub last_term: Float,
    /// `|t_J| * r / (1 - r)` with `r` the last observed ratio.
    pub tail_bound: Float,
    pub converged: bool,
}

impl SeriesOutcome {
    pub fn into_result(self) -> Result<SeriesOutcome> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NoConvergence {
                terms: self.terms,
                last_term: self.last_term.to_f64().abs(),
            })
        }
    }
}

/// Sum `term(j)` for `j = 0, 1, ...` until the geometric truncation rule
/// holds or `ctx.max_terms` terms have been added.
///
/// The rule: `|t_j| < target`, the ratio `r = |t_j / t_{j-1}|` is at most
/// [`MAX_TAIL_RATIO`], and the tail bound `|t_j| r / (1 - r)` is below
/// `target`. The target is `tail_tolerance / 8` so that the truncation error
/// leaves room in the verdict. An exactly zero term after a zero term ends
/// the sum with zero tail.
pub fn sum_series<F>(ctx: &PrecisionContext, prec: u32, term: F) -> Result<SeriesOutcome>
where
    F: FnMut(usize) -> Result<Float>,
{
    sum_series_with(ctx.tail_tolerance / 8.0, ctx.max_terms, prec, term)
}

pub fn sum_series_with<F>(target: f64, max_terms: usize, prec: u32, mut term: F) -> Result<SeriesOutcome>
where
    F: FnMut(usize) -> Result<Float>,
{
    let mut sum = Float::with_val(prec, 0);
    let mut prev: Option<Float> = None;
    let mut last = Float::with_val(prec, 0);
    let mut tail = Float::with_val(prec, f64::INFINITY);
    for j in 0..max_terms {
        let t = term(j)?;
        if !t.is_finite() {
            return Err(Error::Evaluation(format!("non-finite term at index {j}")));
        }
        sum += &t;
        let mag = Float::with_val(prec, t.abs_ref());
        if let Some(p) = &prev {
            if p.is_zero() && mag.is_zero() {
                return Ok(SeriesOutcome {
                    sum,
                    terms: j + 1,
                    last_term: mag,
                    tail_bound: Float::with_val(prec, 0),
                    converged: true,
                });
            }
            if !p.is_zero() {
                let r = Float::with_val(prec, &mag / p);
                if r <= MAX_TAIL_RATIO {
                    tail = Float::with_val(prec, &mag * &r) / (1 - r);
                    if mag < target && tail <= target {
                        return Ok(SeriesOutcome {
                            sum,
                            terms: j + 1,
                            last_term: mag,
                            tail_bound: tail,
                            converged: true,
                        });
                    }
                } else {
                    tail = Float::with_val(prec, f64::INFINITY);
                }
            }
        }
        last = mag.clone();
        prev = Some(mag);
    }
    Ok(SeriesOutcome {
        sum,
        terms: max_terms,
        last_term: last,
        tail_bound: tail,
        converged: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series_sums_to_closed_form() {
        let ctx = PrecisionContext::with_digits(30);
        let p = ctx.work_bits();
        let out = sum_series(&ctx, p, |j| Ok(Float::with_val(p, Float::i_exp(1, -(j as i32))))).unwrap();
        assert!(out.converged);
        let err = Float::with_val(p, &out.sum - 2u32).abs();
        assert!(err < 1e-20);
        assert!(out.tail_bound.to_f64() <= 1e-20 / 8.0);
    }

    #[test]
    fn slow_series_does_not_converge() {
        let ctx = PrecisionContext::with_digits(20).with_max_terms(50);
        let p = ctx.work_bits();
        let out = sum_series(&ctx, p, |j| Ok(Float::with_val(p, 1) / ((j + 1) as u32 * (j + 1) as u32))).unwrap();
        assert!(!out.converged);
        assert_eq!(out.terms, 50);
        assert!(matches!(out.into_result(), Err(Error::NoConvergence { terms: 50, .. })));
    }

    #[test]
    fn zero_series_ends_immediately() {
        let ctx = PrecisionContext::with_digits(20);
        let out = sum_series(&ctx, 80, |_| Ok(Float::with_val(80, 0))).unwrap();
        assert!(out.converged);
        assert_eq!(out.terms, 2);
        assert!(out.sum.is_zero());
    }
}
