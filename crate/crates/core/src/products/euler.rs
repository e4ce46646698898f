//! The sine product over the integers, which converges like `1/J`.

use rug::Float;

use super::curious::unit_limit;
use crate::error::{Error, Result};
use crate::mpcore::{pi, sin_at, ExactArgument, PrecisionContext};
use crate::report::{ReportBuilder, Tolerance, VerificationReport};

/// Upper limit on the number of factors of a fixed-length partial product.
pub const MAX_EULER_FACTORS: usize = 10_000_000;

struct Partial {
    value: Float,
    zero_at: Option<usize>,
}

/// `prod_{j=1}^{J} (1 - a^2/(pi^2 j^2))` in log form with sign tracking.
/// `stop(j)` is asked after each factor whether to end early.
fn partial(a: &Float, max: usize, prec: u32, mut stop: impl FnMut(usize) -> bool) -> (Partial, usize) {
    let pi2 = pi(prec).square();
    let ratio = Float::with_val(prec, a.square_ref()) / pi2;
    let mut log = Float::with_val(prec, 0);
    let mut negative = false;
    let mut used = 0;
    for j in 1..=max {
        used = j;
        let jj = Float::with_val(prec, j) * j as u64;
        let factor = Float::with_val(prec, 1) - Float::with_val(prec, &ratio / &jj);
        if factor.is_zero() {
            return (
                Partial {
                    value: Float::with_val(prec, 0),
                    zero_at: Some(j),
                },
                j,
            );
        }
        if factor.is_sign_negative() {
            negative = !negative;
        }
        log += factor.abs().ln();
        if stop(j) {
            break;
        }
    }
    let v = log.exp();
    (
        Partial {
            value: if negative { -v } else { v },
            zero_at: None,
        },
        used,
    )
}

/// `a^2/(pi^2 J)`, the size of `sum_{j>J} a^2/(pi^2 j^2)`.
fn tail_estimate(a: &Float, terms: usize) -> f64 {
    let p = a.prec();
    (Float::with_val(p, a.square_ref()) / pi(p).square() / terms as u64).to_f64()
}

/// Index `k` of the vanishing factor when `a = k pi` with `k != 0`.
fn vanishing_index(a: &ExactArgument) -> Option<usize> {
    let s = a.as_pi_multiple()?;
    if *s == 0 || *s.denom() != 1 {
        return None;
    }
    s.numer().clone().abs().to_usize()
}

/// `prod_{j>=1} (1 - a^2/(pi^2 j^2)) = sin(a)/a`, truncated once the tail
/// estimate `a^2/(pi^2 J)` is below the tail target or at `max_terms`
/// (then inconclusive).
pub fn euler_sine_product(a: &ExactArgument, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let builder = ReportBuilder::new("euprod", ctx).param("a", a);
    if a.is_zero() {
        return Ok(unit_limit(builder, ctx));
    }
    let w = ctx.work_bits();
    let rhs = sin_at(a, w) / a.to_float(w);
    if let Some(k) = vanishing_index(a) {
        let zero = Float::with_val(w, 0);
        return Ok(builder
            .terms(k)
            .detail("zero_factor_index", k)
            .real(&zero, &rhs));
    }
    let af = a.to_float(w);
    let target = ctx.tail_tolerance / 8.0;
    let (p, used) = partial(&af, ctx.max_terms, w, |j| tail_estimate(&af, j) <= target);
    let tail = tail_estimate(&af, used);
    let converged = tail <= target;
    Ok(builder
        .terms(used)
        .tail(tail)
        .converged(converged)
        .detail("tail_estimate", format!("{tail:e}"))
        .real(&p.value, &rhs))
}

/// `prod_{j=1}^{J} (1 - a^2/(pi^2 j^2))` against `sin(a)/a`, passing when the
/// difference is within the tail estimate `a^2/(pi^2 J)` widened by 10%.
pub fn euler_sine_partial(a: &ExactArgument, factors: usize, ctx: &PrecisionContext) -> Result<VerificationReport> {
    if factors == 0 || factors > MAX_EULER_FACTORS {
        return Err(Error::domain(format!("factors must lie in 1..={MAX_EULER_FACTORS}")));
    }
    if a.is_zero() {
        return Ok(unit_limit(ReportBuilder::new("euprod_partial", ctx).param("a", a).param("factors", factors), ctx));
    }
    let w = ctx.work_bits();
    let af = a.to_float(w);
    let (p, _) = partial(&af, factors, w, |_| false);
    let rhs = sin_at(a, w) / &af;
    let tail = tail_estimate(&af, factors);
    let mut builder = ReportBuilder::new("euprod_partial", ctx)
        .param("a", a)
        .param("factors", factors)
        .terms(factors)
        .tail(tail)
        .tolerance(Tolerance::new(tail * 1.1, 0.0))
        .detail("tail_estimate", format!("{tail:e}"))
        .detail("margin", "0.1");
    if let Some(k) = p.zero_at {
        builder = builder.detail("zero_factor_index", k);
    }
    Ok(builder.real(&p.value, &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;

    fn arg(s: &str) -> ExactArgument {
        s.parse().unwrap()
    }

    #[test]
    fn slow_product_is_inconclusive_at_default_tolerance() {
        let c = PrecisionContext::default();
        let r = euler_sine_product(&arg("pi/2"), &c).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.rhs.to_string().starts_with("0.6366197723"));
        assert!(euler_sine_product(&arg("0"), &c).unwrap().passed());
    }

    #[test]
    fn converges_for_tiny_arguments() {
        let c = PrecisionContext::with_digits(20).with_tail_tolerance(1e-12);
        let r = euler_sine_product(&arg("1e-6"), &c).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn vanishing_factor_at_pi_multiples() {
        let c = PrecisionContext::default();
        let r = euler_sine_product(&arg("-3*pi"), &c).unwrap();
        assert!(r.passed());
        assert_eq!(r.details["zero_factor_index"], "3");
        let r = euler_sine_partial(&arg("2*pi"), 10, &c).unwrap();
        assert!(r.passed());
        assert_eq!(r.details["zero_factor_index"], "2");
    }

    #[test]
    fn ten_thousand_factors_within_estimate() {
        let c = PrecisionContext::default();
        let r = euler_sine_partial(&arg("1"), 10_000, &c).unwrap();
        assert!(r.passed(), "{r:?}");
        let est = 1.0 / (std::f64::consts::PI.powi(2) * 1e4);
        assert!((r.tail_bound.to_f64() - est).abs() < 1e-15);
        assert!(r.abs_error_f64() > 0.5 * est);
        assert!(r.lhs.to_string().starts_with("0.8414"));
    }
}
