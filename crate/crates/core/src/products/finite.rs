//! Identities that hold exactly at finite size: the telescoping tangent
//! product, its small instances, the cosine doubling product and the Jolley
//! products.

use rug::ops::Pow;
use rug::{Float, Integer};

use super::logprod::pow2;
use crate::error::{Error, Result};
use crate::mpcore::{cos_at, format_decimal, sin_at, tan_at, ExactArgument, PrecisionContext};
use crate::report::{ReportBuilder, Tolerance, VerificationReport, Verdict};

/// `sign * exp(log)` accumulated factor by factor.
struct SignedLog {
    log: Float,
    negative: bool,
}

impl SignedLog {
    fn new(prec: u32) -> Self {
        SignedLog {
            log: Float::with_val(prec, 0),
            negative: false,
        }
    }

    /// Multiply by `base^exponent`, with `odd` the parity of the exponent.
    fn push(&mut self, base: &Float, exponent: &Float, odd: bool) {
        let prec = self.log.prec();
        self.log += Float::with_val(prec, base.abs_ref()).ln() * exponent;
        if odd && base.is_sign_negative() {
            self.negative = !self.negative;
        }
    }

    fn value(&self) -> Float {
        let v = Float::with_val(self.log.prec(), self.log.exp_ref());
        if self.negative {
            -v
        } else {
            v
        }
    }
}

fn nonzero(value: Float, what: &str) -> Result<Float> {
    if value.is_zero() {
        return Err(Error::domain(format!("{what} vanishes")));
    }
    Ok(value)
}

/// `prod_{j=n1+1}^{n2} (2^j/a tan(a/2^j))^(2^(j-1))
///  = a^(N1-N2) 2^(N2 n2 - N1 n1) sin^N2(a/N2) / sin^N1(a/N1)`, `N_i = 2^(n_i)`.
pub fn finite_p5_product(n1: u32, n2: u32, a: &ExactArgument, ctx: &PrecisionContext) -> Result<VerificationReport> {
    if n2 <= n1 {
        return Err(Error::domain("p5 requires n2 > n1"));
    }
    if n2 > 60 {
        return Err(Error::domain("p5 requires n2 <= 60"));
    }
    if a.is_zero() {
        return Err(Error::domain("p5 requires a != 0"));
    }
    let w = ctx.work_bits() + n2 + 8;
    let af = a.to_float(w);
    let mut lhs = SignedLog::new(w);
    for j in (n1 + 1)..=n2 {
        let x = a.scale_pow(2, -(j as i32));
        let t = nonzero(tan_at(&x, w)?, &format!("tan(a/2^{j})"))?;
        let base = t * pow2(j as i64, w) / &af;
        lhs.push(&base, &pow2(j as i64 - 1, w), j == 1);
    }
    let big_n1 = Integer::from(1u32) << n1;
    let big_n2 = Integer::from(1u32) << n2;
    let s1 = nonzero(sin_at(&a.scale_pow(2, -(n1 as i32)), w), "sin(a/N1)")?;
    let s2 = nonzero(sin_at(&a.scale_pow(2, -(n2 as i32)), w), "sin(a/N2)")?;
    let mut rhs = SignedLog::new(w);
    let a_exp = Integer::from(&big_n1 - &big_n2);
    rhs.push(&af, &Float::with_val(w, &a_exp), a_exp.is_odd());
    let two_exp = Integer::from(&big_n2 * n2) - Integer::from(&big_n1 * n1);
    rhs.push(&Float::with_val(w, 2), &Float::with_val(w, &two_exp), false);
    rhs.push(&s2, &Float::with_val(w, &big_n2), big_n2.is_odd());
    rhs.push(&s1, &Float::with_val(w, -Integer::from(&big_n1)), big_n1.is_odd());
    Ok(ReportBuilder::new("p5", ctx)
        .param("n1", n1)
        .param("n2", n2)
        .param("a", a)
        .terms((n2 - n1) as usize)
        .tolerance(Tolerance::exact(ctx))
        .real(&lhs.value(), &rhs.value()))
}

fn tan_power(a: &ExactArgument, j: i32, power: u32, prec: u32) -> Result<Float> {
    Ok(tan_at(&a.scale_pow(2, -j), prec)?.pow(power))
}

/// `tan a tan^2(a/2) tan^4(a/4) tan^8(a/8) = 2^15 sin^16(a/8) / sin(2a)`.
pub fn x1_check(a: &ExactArgument, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let w = ctx.work_bits() + 16;
    let mut lhs = Float::with_val(w, 1);
    for j in 0..4 {
        lhs *= tan_power(a, j, 1 << j, w)?;
    }
    let s2a = nonzero(sin_at(&a.scale_int(2), w), "sin(2a)")?;
    let rhs = pow2(15, w) * sin_at(&a.scale_pow(2, -3), w).pow(16u32) / s2a;
    Ok(ReportBuilder::new("x1", ctx)
        .param("a", a)
        .terms(4)
        .tolerance(Tolerance::exact(ctx))
        .real(&lhs, &rhs))
}

/// `tan(a/2^(n+1)) = 2 sin^2(a/2^(n+1)) / sin(a/2^n)`.
pub fn x1b_check(n: u32, a: &ExactArgument, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let w = ctx.work_bits() + 8;
    let x = a.scale_pow(2, -(n as i32 + 1));
    let lhs = tan_at(&x, w)?;
    let s = nonzero(sin_at(&a.scale_pow(2, -(n as i32)), w), "sin(a/2^n)")?;
    let rhs = sin_at(&x, w).square() * 2u32 / s;
    Ok(ReportBuilder::new("x1b", ctx)
        .param("n", n)
        .param("a", a)
        .terms(1)
        .tolerance(Tolerance::exact(ctx))
        .real(&lhs, &rhs))
}

/// `sin(2a) (sin a / cos a) tan^2(a/2) tan^4(a/4) tan^8(a/8) = 2^15 sin^16(a/8)`.
pub fn x1a_check(a: &ExactArgument, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let w = ctx.work_bits() + 16;
    let c = nonzero(cos_at(a, w), "cos(a)")?;
    let mut lhs = sin_at(&a.scale_int(2), w) * sin_at(a, w) / c;
    for j in 1..4 {
        lhs *= tan_power(a, j, 1 << j, w)?;
    }
    let rhs = pow2(15, w) * sin_at(&a.scale_pow(2, -3), w).pow(16u32);
    Ok(ReportBuilder::new("x1a", ctx)
        .param("a", a)
        .terms(4)
        .tolerance(Tolerance::exact(ctx))
        .real(&lhs, &rhs))
}

/// `prod_{j=0}^{k-1} cos(2^j a)`, each angle reduced with
/// `ceil(j log10 2)` extra digits.
pub(crate) fn cos_doubling_product(a: &ExactArgument, k: u32, ctx: &PrecisionContext) -> Float {
    let w = ctx.reduction_bits(2, k);
    let mut prod = Float::with_val(w, 1);
    for j in 0..k {
        prod *= cos_at(&a.scale_pow(2, j as i32), ctx.reduction_bits(2, j));
    }
    prod
}

/// `sin(2^k a) / (2^k sin a)`.
pub(crate) fn cos_doubling_closed_form(a: &ExactArgument, k: u32, ctx: &PrecisionContext) -> Result<Float> {
    let w = ctx.reduction_bits(2, k);
    let s = sin_at(a, w);
    if s.is_zero() {
        return Err(Error::domain(format!(
            "sin(a) = 0 at a = {a}; the limit anatomy is handled by case2"
        )));
    }
    Ok(sin_at(&a.scale_pow(2, k as i32), w) / (s * pow2(k as i64, w)))
}

/// `prod_{j=0}^{k-1} cos(2^j a) = sin(2^k a) / (2^k sin a)`, with a
/// recomputation at doubled precision that must agree to `digits - 5` places.
pub fn br114_finite(a: &ExactArgument, k: u32, ctx: &PrecisionContext) -> Result<VerificationReport> {
    if k == 0 {
        return Err(Error::domain("br114 requires k >= 1"));
    }
    let rhs = cos_doubling_closed_form(a, k, ctx)?;
    let lhs = cos_doubling_product(a, k, ctx);
    let doubled = ctx.doubled();
    let lhs2 = cos_doubling_product(a, k, &doubled);
    let w = lhs2.prec();
    let drift = if lhs2.is_zero() {
        Float::with_val(w, lhs.abs_ref())
    } else {
        Float::with_val(w, &lhs - &lhs2).abs() / Float::with_val(w, lhs2.abs_ref())
    };
    let drift_tol = crate::mpcore::pow10(-(ctx.digits as i32 - 5));
    let drift_ok = drift.to_f64() <= drift_tol;
    let mut report = ReportBuilder::new("br114", ctx)
        .param("a", a)
        .param("k", k)
        .terms(k as usize)
        .tolerance(Tolerance::relative(ctx.exact_tolerance()))
        .detail("doubled_precision_rel_drift", format_decimal(&drift, 10))
        .detail("reduction_digits", ctx.reduction_digits(2, k))
        .real(&lhs, &rhs);
    if !drift_ok {
        report.verdict = report.verdict.combine(Verdict::Fail);
    }
    Ok(report)
}

/// `(prod_{j=1}^{n-1} tan(pi j/(2n)))^(1/n) = 1`. The printed upper limit
/// `n` would include the pole `tan(pi/2)`.
pub fn jo1_product(n: u64, ctx: &PrecisionContext) -> Result<VerificationReport> {
    if n < 2 {
        return Err(Error::domain("jo1 requires n >= 2"));
    }
    let w = ctx.work_bits() + 8;
    let mut log = Float::with_val(w, 0);
    for j in 1..n {
        let t = tan_at(&ExactArgument::pi_fraction(j as i64, 2 * n as i64), w)?;
        log += t.ln();
    }
    let lhs = (log / n).exp();
    let rhs = Float::with_val(w, 1);
    Ok(ReportBuilder::new("jo1", ctx)
        .param("n", n)
        .terms((n - 1) as usize)
        .tolerance(Tolerance::exact(ctx))
        .detail("upper_limit", "n-1 (the printed limit n contains the pole tan(pi/2))")
        .real(&lhs, &rhs))
}

/// Indices `j` in `1..=2k-1` where `cos(pi j/k)` vanishes exactly.
pub fn jo2_zero_indices(k: u64) -> Vec<u64> {
    (1..2 * k)
        .filter(|&j| cos_at(&ExactArgument::pi_fraction(j as i64, k as i64), 16).is_zero())
        .collect()
}

/// `prod_{j=1}^{2k-1} cos(pi j/k) = ((-1)^k - 1) / 2^(2k-1)`.
pub fn jo2_product(k: u64, ctx: &PrecisionContext) -> Result<VerificationReport> {
    if k < 1 {
        return Err(Error::domain("jo2 requires k >= 1"));
    }
    let w = ctx.work_bits() + 8;
    let mut lhs = Float::with_val(w, 1);
    for j in 1..2 * k {
        lhs *= cos_at(&ExactArgument::pi_fraction(j as i64, k as i64), w);
    }
    let numer = if k.is_multiple_of(2) { 0 } else { -2 };
    let rhs = Float::with_val(w, numer) / pow2(2 * k as i64 - 1, w);
    let zeros = jo2_zero_indices(k);
    Ok(ReportBuilder::new("jo2", ctx)
        .param("k", k)
        .terms((2 * k - 1) as usize)
        .tolerance(Tolerance::exact(ctx))
        .detail(
            "zero_factor_indices",
            zeros.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(","),
        )
        .real(&lhs, &rhs))
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
    fn p5_small_instances() {
        let c = ctx();
        for (n1, n2, a) in [(0, 1, "0.9"), (0, 4, "1.4"), (3, 4, "1"), (2, 9, "-2.7"), (0, 3, "5"), (1, 6, "pi/3")] {
            let r = finite_p5_product(n1, n2, &arg(a), &c).unwrap();
            assert!(r.passed(), "{n1} {n2} {a}: {r:?}");
        }
    }

    #[test]
    fn p5_rejects_poles() {
        assert!(finite_p5_product(0, 3, &arg("pi"), &ctx()).is_err());
        assert!(finite_p5_product(0, 3, &arg("2*pi"), &ctx()).is_err());
        assert!(finite_p5_product(2, 1, &arg("1"), &ctx()).is_err());
    }

    #[test]
    fn x1_family() {
        let c = ctx();
        assert!(x1_check(&arg("0.7"), &c).unwrap().passed());
        assert!(x1b_check(3, &arg("1"), &c).unwrap().passed());
        assert!(x1a_check(&arg("0.7"), &c).unwrap().passed());
        let p = finite_p5_product(0, 4, &arg("1.4"), &c).unwrap();
        assert!(p.passed());
        let p = finite_p5_product(3, 4, &arg("1"), &c).unwrap();
        assert!(p.passed());
    }

    #[test]
    fn br114_examples() {
        let c = ctx();
        let r = br114_finite(&arg("pi/6"), 2, &c).unwrap();
        assert!(r.passed());
        assert!(r.lhs.to_string().starts_with("0.4330127018"));
        assert!(br114_finite(&arg("1"), 1, &c).unwrap().passed());
        let r = br114_finite(&arg("1"), 150, &c).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(br114_finite(&arg("pi"), 3, &c).is_err());
    }

    #[test]
    fn jolley_examples() {
        let c = ctx();
        let r = jo2_product(1, &c).unwrap();
        assert!(r.passed());
        assert_eq!(r.lhs.to_f64(), -1.0);
        let r = jo2_product(3, &c).unwrap();
        assert!(r.passed());
        assert_eq!(r.rhs.to_f64(), -0.0625);
        assert!(jo1_product(7, &c).unwrap().passed());
        assert_eq!(jo2_zero_indices(2), vec![1, 3]);
        assert_eq!(jo2_zero_indices(4), vec![2, 6]);
        assert!(jo2_zero_indices(5).is_empty());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn p5_exact(n1 in 0u32..6, span in 1u32..8, num in -3000i64..3000) {
            prop_assume!(num != 0);
            let c = PrecisionContext::with_digits(30);
            let r = finite_p5_product(n1, n1 + span, &ExactArgument::ratio(num, 1000), &c).unwrap();
            prop_assert!(r.passed(), "{:?}", r);
        }

        #[test]
        fn br114_exact(num in 1i64..100_000, k in 1u32..120) {
            let c = PrecisionContext::with_digits(30);
            let r = br114_finite(&ExactArgument::ratio(num, 997), k, &c).unwrap();
            prop_assert!(r.passed(), "{:?}", r);
        }

        #[test]
        fn jolley_exact(n in 2u64..40) {
            let c = PrecisionContext::with_digits(30);
            prop_assert!(jo1_product(n, &c).unwrap().passed());
            prop_assert!(jo2_product(n, &c).unwrap().passed());
        }

        #[test]
        fn doubling_digits_keeps_pass(n1 in 0u32..4, num in 1i64..3000, k in 1u32..40) {
            let c = PrecisionContext::with_digits(25);
            let a = ExactArgument::ratio(num, 1000);
            let p = finite_p5_product(n1, n1 + 3, &a, &c).unwrap();
            let p2 = finite_p5_product(n1, n1 + 3, &a, &c.doubled()).unwrap();
            prop_assert!(!p.passed() || p2.passed());
            let b = br114_finite(&a, k, &c).unwrap();
            let b2 = br114_finite(&a, k, &c.doubled()).unwrap();
            prop_assert!(!b.passed() || b2.passed());
        }
    }
}
