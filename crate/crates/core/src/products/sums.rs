//! Series companions of the products: the reciprocal-sine sums and the
//! digamma sums from the duplication and triplication formulas.

use rug::ops::Pow;
use rug::{Float, Integer};

use super::classify::classify;
use super::logprod::pow2;
use crate::error::{Error, Result};
use crate::mpcore::{cot_at, format_decimal, sin_at, sum_series, ExactArgument, PrecisionContext};
use crate::report::{ReportBuilder, Tolerance, VerificationReport, Verdict};
use crate::specialfn::{digamma_float, euler_gamma_float, ln2_float, ln3_float};

fn require_non_pi_multiple(a: &ExactArgument, what: &str) -> Result<()> {
    if classify(a).is_pi_multiple() {
        return Err(Error::domain(format!("{what}: a = {a} is a multiple of pi")));
    }
    Ok(())
}

/// `sum_{j>=1} (2^(j-1) - a/sin(a/2^(j-1))) = a cot(a) - 1`.
///
/// The partial sum over `j = 1..=n+1` is also rebuilt from the finite
/// identities `sum_{i<=n} 2^i = 2^(n+1) - 1` and
/// `sum_{i<=n} 1/sin(a/2^i) = cot(a/2^(n+1)) - cot(a)`; the two must agree.
pub fn vsum3(a: &ExactArgument, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let builder = ReportBuilder::new("vsum3", ctx).param("a", a);
    let w = ctx.work_bits();
    if a.is_zero() {
        let zero = Float::with_val(w, 0);
        return Ok(builder.detail("note", "every summand and the closed form vanish at 0").real(&zero, &zero));
    }
    require_non_pi_multiple(a, "vsum3")?;
    let af = a.to_float(w + 8);
    let out = sum_series(ctx, w, |i| {
        let p = w + 2 * i as u32 + 8;
        let s = sin_at(&a.scale_pow(2, -(i as i32)), p);
        Ok(pow2(i as i64, p) - Float::with_val(p, a.to_float(p) / s))
    })?;
    let lhs = out.sum.clone();
    let rhs = Float::with_val(w, &af * cot_at(a, w + 8)?) - 1u32;

    let n = out.terms - 1;
    let powers: Integer = (0..=n).map(|i| Integer::from(1u32) << i as u32).sum();
    let also_holds = powers == (Integer::from(1u32) << (n as u32 + 1)) - 1u32;
    let p = w + 2 * n as u32 + 16;
    let cot_small = cot_at(&a.scale_pow(2, -(n as i32 + 1)), p)?;
    let reciprocal_sum = cot_small - cot_at(a, p)?;
    let rebuilt = Float::with_val(p, &powers) - a.to_float(p) * reciprocal_sum;
    let gap = Float::with_val(w, &rebuilt - &lhs).abs();
    let gap_ok = gap.to_f64() <= Tolerance::exact(ctx).bound(&Float::with_val(w, lhs.abs_ref()));
    let mut report = builder
        .series(&out)
        .detail("also_identity_holds", also_holds)
        .detail("rebuilt_partial_minus_series", format_decimal(&gap, 10))
        .real(&lhs, &rhs);
    if !(also_holds && gap_ok) {
        report.verdict = report.verdict.combine(Verdict::Fail);
    }
    Ok(report)
}

/// `sum_{j=0}^{n} 1/sin(x/2^j) = cot(x/2^(n+1)) - cot(x)`.
pub fn h25(x: &ExactArgument, n: u32, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let w = ctx.work_bits() + n + 8;
    let mut lhs = Float::with_val(w, 0);
    for j in 0..=n {
        let s = sin_at(&x.scale_pow(2, -(j as i32)), w);
        if s.is_zero() {
            return Err(Error::domain(format!("sin(x/2^{j}) vanishes at x = {x}")));
        }
        lhs += Float::with_val(w, 1) / s;
    }
    let rhs = cot_at(&x.scale_pow(2, -(n as i32 + 1)), w)? - cot_at(x, w)?;
    Ok(ReportBuilder::new("h25", ctx)
        .param("x", x)
        .param("n", n)
        .terms(n as usize + 1)
        .tolerance(Tolerance::exact(ctx))
        .real(&lhs, &rhs))
}

/// `sum_{j=0}^{n} 2^j = 2^(n+1) - 1` in exact integers.
pub fn also_identity(n: u32, ctx: &PrecisionContext) -> Result<VerificationReport> {
    if n > 100_000 {
        return Err(Error::domain("also requires n <= 100000"));
    }
    let lhs: Integer = (0..=n).map(|i| Integer::from(1u32) << i).sum();
    let rhs = (Integer::from(1u32) << (n + 1)) - 1u32;
    let p = n + 64;
    Ok(ReportBuilder::new("also", ctx)
        .param("n", n)
        .terms(n as usize + 1)
        .tolerance(Tolerance::new(0.0, 0.0))
        .real(&Float::with_val(p, &lhs), &Float::with_val(p, &rhs)))
}

fn require_positive(a: &ExactArgument, what: &str) -> Result<()> {
    if a.signum() <= 0 {
        return Err(Error::domain(format!("{what} requires a > 0, got {a}")));
    }
    Ok(())
}

/// `sum_{j>=1} (2 ln 2 - psi(1 + a/2^j) + psi(a/2^j + 1/2)) = 2 psi(a+1) + 2 gamma`.
pub fn r1bd(a: &ExactArgument, ctx: &PrecisionContext) -> Result<VerificationReport> {
    require_positive(a, "r1bd")?;
    let w = ctx.work_bits();
    let out = sum_series(ctx, w, |i| {
        let j = i as i64 + 1;
        let p = w + j as u32 + 8;
        let y = a.to_float(p) / pow2(j, p);
        let up = digamma_float(&Float::with_val(p, &y + 1u32), p)?;
        let half = digamma_float(&Float::with_val(p, &y + 0.5f64), p)?;
        Ok(ln2_float(p) * 2u32 - up + half)
    })?;
    let a1 = Float::with_val(w + 8, a.to_float(w + 8) + 1u32);
    let rhs = (digamma_float(&a1, w + 8)? + euler_gamma_float(w + 8)) * 2u32;
    Ok(ReportBuilder::new("r1bd", ctx)
        .param("a", a)
        .series(&out)
        .real(&out.sum, &rhs))
}

/// `sum_{j>=0} 3^-(1+j) (3 ln 3 + psi(a/3^(1+j) + 1/3) + psi(a/3^(1+j) + 2/3)) = psi(a+1)`.
pub fn gn3ad(a: &ExactArgument, ctx: &PrecisionContext) -> Result<VerificationReport> {
    require_positive(a, "gn3ad")?;
    let w = ctx.work_bits();
    let out = sum_series(ctx, w, |i| {
        let p = w + 8;
        let scale = Float::with_val(p, Integer::from(3u32).pow(i as u32 + 1));
        let y = a.to_float(p) / &scale;
        let third = Float::with_val(p, 1) / 3u32;
        let two_thirds = Float::with_val(p, 2) / 3u32;
        let s = digamma_float(&Float::with_val(p, &y + &third), p)?
            + digamma_float(&Float::with_val(p, &y + &two_thirds), p)?
            + ln3_float(p) * 3u32;
        Ok(s / scale)
    })?;
    let a1 = Float::with_val(w + 8, a.to_float(w + 8) + 1u32);
    let rhs = digamma_float(&a1, w + 8)?;
    Ok(ReportBuilder::new("gn3ad", ctx)
        .param("a", a)
        .series(&out)
        .real(&out.sum, &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn arg(s: &str) -> ExactArgument {
        s.parse().unwrap()
    }

    #[test]
    fn vsum3_examples() {
        let r = vsum3(&arg("pi/4"), &ctx()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.rhs.to_string().starts_with("-0.2146018366"));
        assert_eq!(r.details["also_identity_holds"], "true");
        assert!(vsum3(&arg("2.9"), &ctx()).unwrap().passed());
        assert!(vsum3(&arg("-5"), &ctx()).unwrap().passed());
        assert!(vsum3(&arg("pi"), &ctx()).is_err());
    }

    #[test]
    fn h25_examples() {
        let r = h25(&arg("pi/2"), 0, &ctx()).unwrap();
        assert!(r.passed());
        assert_eq!(r.lhs.to_f64(), 1.0);
        assert!(h25(&arg("pi"), 2, &ctx()).is_err());
        assert!(also_identity(64, &ctx()).unwrap().passed());
    }

    #[test]
    fn digamma_sums_at_one() {
        let c = ctx();
        let r = r1bd(&arg("1"), &c).unwrap();
        assert!(r.passed());
        assert!(r.abs_error_f64() < 1e-30);
        assert!(r.rhs.to_string().starts_with("2.00000000000000000000"));
        let r = gn3ad(&arg("1"), &c).unwrap();
        assert!(r.passed());
        assert!(r.rhs.to_string().starts_with("0.42278433509846713939"));
        for a in ["0.3", "2.5"] {
            assert!(r1bd(&arg(a), &c).unwrap().passed());
            assert!(gn3ad(&arg(a), &c).unwrap().passed());
        }
        assert!(r1bd(&arg("0"), &c).is_err());
        assert!(gn3ad(&arg("-1"), &c).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn h25_exact(num in 1i64..100_000, n in 0u32..=10) {
            let c = PrecisionContext::with_digits(30);
            let x = ExactArgument::ratio(num, 1009);
            prop_assert!(h25(&x, n, &c).unwrap().passed());
        }

        #[test]
        fn also_exact(n in 0u32..500) {
            let c = PrecisionContext::with_digits(20);
            let r = also_identity(n, &c).unwrap();
            prop_assert!(r.passed());
            prop_assert!(r.abs_error.is_zero());
        }
    }
}
