//! Products for `sin(a)/a` built from base-q multiplication formulas, the
//! cosine-sum lemmas behind them and the telescoping of the odd family.

use std::fmt;

use rug::ops::Pow;
use rug::{Float, Integer};
use serde::Serialize;

use super::curious::unit_limit;
use super::logprod::{log_product, LogTerm};
use crate::error::{Error, Result};
use crate::mpcore::{cos_at, format_decimal, pi, sin_at, BigReal, ExactArgument, PrecisionContext};
use crate::report::{ReportBuilder, Tolerance, TraceTable, VerificationReport, Verdict};

/// Base `q = 2N` (even) or `q = 2N + 1` (odd) of the multiplication formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "parity", content = "n", rename_all = "lowercase")]
pub enum BaseFamily {
    Even(u32),
    Odd(u32),
}

impl BaseFamily {
    pub fn from_base(q: u32) -> Result<Self> {
        match q {
            0 | 1 => Err(Error::domain(format!("base must be >= 2, got {q}"))),
            q if q % 2 == 0 => Ok(BaseFamily::Even(q / 2)),
            q => Ok(BaseFamily::Odd(q / 2)),
        }
    }

    pub fn base(self) -> u32 {
        match self {
            BaseFamily::Even(n) => 2 * n,
            BaseFamily::Odd(n) => 2 * n + 1,
        }
    }

    pub fn half(self) -> u32 {
        match self {
            BaseFamily::Even(n) | BaseFamily::Odd(n) => n,
        }
    }

    /// Catalog id: the named special cases, else the general family.
    pub fn id(self) -> &'static str {
        match self {
            BaseFamily::Even(1) => "gn1",
            BaseFamily::Even(2) => "gn4a",
            BaseFamily::Odd(1) => "gn3ca",
            BaseFamily::Odd(2) => "gn5b",
            BaseFamily::Even(_) => "g2a",
            BaseFamily::Odd(_) => "g2x",
        }
    }

    fn validate(self) -> Result<()> {
        if self.half() == 0 {
            return Err(Error::domain("N must be >= 1"));
        }
        Ok(())
    }
}

impl fmt::Display for BaseFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseFamily::Even(n) => write!(f, "even(N={n})"),
            BaseFamily::Odd(n) => write!(f, "odd(N={n})"),
        }
    }
}

/// `c * a / q^(1+j)` exactly.
fn scaled(a: &ExactArgument, c: i64, q: u32, j: u32) -> ExactArgument {
    a.scale_pow(q, -(j as i32 + 1)).scale_int(c)
}

/// `sum_{n=1}^{N} cos((2n-1) a/(2N)^(1+j))` or `sum_{n=1}^{N} cos(2n a/(2N+1)^(1+j))`.
fn cosine_sum(family: BaseFamily, a: &ExactArgument, j: u32, prec: u32) -> Float {
    let q = family.base();
    let mut s = Float::with_val(prec, 0);
    for n in 1..=family.half() as i64 {
        let c = match family {
            BaseFamily::Even(_) => 2 * n - 1,
            BaseFamily::Odd(_) => 2 * n,
        };
        s += cos_at(&scaled(a, c, q, j), prec);
    }
    s
}

/// Factor `j >= 0` of the general even or odd product.
pub fn nplication_factor(family: BaseFamily, a: &ExactArgument, j: u32, prec: u32) -> Float {
    let s = cosine_sum(family, a, j, prec);
    match family {
        BaseFamily::Even(n) => s / n,
        BaseFamily::Odd(n) => (s * 2u32 + 1u32) / (2 * n + 1),
    }
}

/// Factor `j >= 0` in the printed form of a named special case.
pub fn special_factor(family: BaseFamily, a: &ExactArgument, j: u32, prec: u32) -> Option<Float> {
    let c = |k: i64, q: u32| cos_at(&scaled(a, k, q, j), prec);
    match family {
        BaseFamily::Even(1) => Some(c(1, 2)),
        BaseFamily::Even(2) => Some(c(1, 4) / 2u32 + c(3, 4) / 2u32),
        BaseFamily::Odd(1) => Some((c(2, 3) * 2u32 + 1u32) / 3u32),
        BaseFamily::Odd(2) => Some((c(2, 5) * 2u32 + c(4, 5) * 2u32 + 1u32) / 5u32),
        _ => None,
    }
}

/// Factor `j >= 1` of `prod_{j>=1} (1 - (4/3) sin^2(a/3^j))`.
pub fn gn3ci_factor(a: &ExactArgument, j: u32, prec: u32) -> Float {
    let s = sin_at(&a.scale_pow(3, -(j as i32)), prec);
    Float::with_val(prec, 1) - s.square() * 4u32 / 3u32
}

/// `prod_{j>=0} factor_j = sin(a)/a` for the even or odd family, using the
/// printed form of the named special cases.
pub fn nplication_product(family: BaseFamily, a: &ExactArgument, ctx: &PrecisionContext) -> Result<VerificationReport> {
    family.validate()?;
    let builder = ReportBuilder::new(family.id(), ctx)
        .param("family", family)
        .param("a", a);
    if a.is_zero() {
        return Ok(unit_limit(builder, ctx));
    }
    let w = ctx.work_bits();
    let mut max_dev = Float::with_val(w, 0);
    let prod = log_product(ctx, w, |i| {
        let j = i as u32;
        let general = nplication_factor(family, a, j, w);
        let factor = match special_factor(family, a, j, w) {
            Some(f) => {
                let d = Float::with_val(w, &f - &general).abs();
                if d > max_dev {
                    max_dev = d;
                }
                f
            }
            None => general,
        };
        Ok(LogTerm::weighted(&factor, &Float::with_val(w, 1), true, w))
    })?;
    let lhs = prod.value(w);
    let rhs = sin_at(a, w) / a.to_float(w);
    let mut builder = builder.series(&prod.outcome);
    if let Some(j) = prod.zero_at {
        builder = builder.detail("zero_factor_index", j);
    }
    if special_factor(family, a, 0, 16).is_some() {
        builder = builder.detail("special_vs_general_factor_max_diff", format_decimal(&max_dev, 10));
    }
    Ok(builder.real(&lhs, &rhs))
}

/// `prod_{j>=1} (1 - (4/3) sin^2(a/3^j)) = sin(a)/a`, with the factors
/// compared pairwise against `(1 + 2 cos(2a/3^(1+j)))/3` for `j` below the
/// number of terms used.
pub fn gn3c_pairing_check(a: &ExactArgument, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let builder = ReportBuilder::new("gn3ci", ctx).param("a", a);
    if a.is_zero() {
        return Ok(unit_limit(builder, ctx));
    }
    let w = ctx.work_bits();
    let mut max_diff = Float::with_val(w, 0);
    let prod = log_product(ctx, w, |i| {
        let j = i as u32;
        let cubic = gn3ci_factor(a, j + 1, w);
        let cosine = special_factor(BaseFamily::Odd(1), a, j, w).expect("named case");
        let d = Float::with_val(w, &cubic - &cosine).abs();
        if d > max_diff {
            max_diff = d;
        }
        Ok(LogTerm::weighted(&cubic, &Float::with_val(w, 1), true, w))
    })?;
    let lhs = prod.value(w);
    let rhs = sin_at(a, w) / a.to_float(w);
    let pairing_ok = max_diff.to_f64() <= ctx.exact_tolerance();
    let mut report = builder
        .series(&prod.outcome)
        .detail("factor_pairs_compared", prod.outcome.terms)
        .detail("factor_pair_max_diff", format_decimal(&max_diff, 10))
        .real(&lhs, &rhs);
    if !pairing_ok {
        report.verdict = report.verdict.combine(Verdict::Fail);
    }
    Ok(report)
}

/// `prod_{i=1}^{J} r_i/2` with `r_1 = sqrt 2`, `r_{i+1} = sqrt(2 + r_i)`,
/// against `2/pi`. The tolerance is the truncation estimate
/// `(2/pi)(x/sin x - 1)`, `x = pi/2^(J+1)`, widened by 10%. Each radical
/// factor must also match `cos(pi/2^(i+1))`.
pub fn viete_partial(factors: u32, ctx: &PrecisionContext) -> Result<VerificationReport> {
    if factors == 0 {
        return Err(Error::domain("viete requires at least one factor"));
    }
    let w = ctx.work_bits() + 8;
    let mut r = Float::with_val(w, 2).sqrt();
    let mut lhs = Float::with_val(w, 1);
    let mut max_diff = Float::with_val(w, 0);
    let half_pi = ExactArgument::pi_fraction(1, 2);
    for i in 1..=factors {
        if i > 1 {
            r = (r + 2u32).sqrt();
        }
        let f = Float::with_val(w, &r / 2u32);
        let euler = special_factor(BaseFamily::Even(1), &half_pi, i - 1, w).expect("named case");
        let d = Float::with_val(w, &f - &euler).abs();
        if d > max_diff {
            max_diff = d;
        }
        lhs *= f;
    }
    let rhs = Float::with_val(w, 2) / pi(w);
    let x = pi(w) / Float::with_val(w, Float::i_exp(1, factors as i32 + 1));
    let estimate = Float::with_val(w, &rhs) * (Float::with_val(w, &x / Float::with_val(w, x.sin_ref())) - 1u32);
    let bound = estimate.to_f64() * 1.1 + ctx.exact_tolerance();
    let mut report = ReportBuilder::new("viete", ctx)
        .param("factors", factors)
        .terms(factors as usize)
        .tail(estimate.to_f64())
        .tolerance(Tolerance::new(bound, 0.0))
        .detail("factor_vs_cos_max_diff", format_decimal(&max_diff, 10))
        .real(&lhs, &rhs);
    if max_diff.to_f64() > ctx.exact_tolerance() {
        report.verdict = report.verdict.combine(Verdict::Fail);
    }
    Ok(report)
}

/// Which cosine-sum lemma.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SumKind {
    Even,
    Odd,
}

impl std::str::FromStr for SumKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(SumKind::Even),
            "odd" => Ok(SumKind::Odd),
            _ => Err(Error::Parse(format!("kind must be even or odd, got '{s}'"))),
        }
    }
}

/// Even: `sum cos((2n-1)a/(2N)^(1+j)) = sin(a/(2N)^j) / (2 sin(a/(2N)^(1+j)))`.
/// Odd: `sum cos(2na/(2N+1)^(1+j)) = sin(a/(2N+1)^j) / (2 sin(a/(2N+1)^(1+j))) - 1/2`.
pub fn cosine_sum_lemma(kind: SumKind, n: u32, j: u32, a: &ExactArgument, ctx: &PrecisionContext) -> Result<VerificationReport> {
    if n == 0 {
        return Err(Error::domain("N must be >= 1"));
    }
    let family = match kind {
        SumKind::Even => BaseFamily::Even(n),
        SumKind::Odd => BaseFamily::Odd(n),
    };
    let q = family.base();
    let w = ctx.work_bits() + 8;
    let denom = sin_at(&a.scale_pow(q, -(j as i32 + 1)), w);
    if denom.is_zero() {
        return Err(Error::domain(format!("sin(a/{q}^{}) vanishes", j + 1)));
    }
    let lhs = cosine_sum(family, a, j, w);
    let mut rhs = sin_at(&a.scale_pow(q, -(j as i32)), w) / (denom * 2u32);
    if kind == SumKind::Odd {
        rhs -= 0.5f64;
    }
    let id = match kind {
        SumKind::Even => "sumid1",
        SumKind::Odd => "sumid2",
    };
    Ok(ReportBuilder::new(id, ctx)
        .param("N", n)
        .param("j", j)
        .param("a", a)
        .terms(n as usize)
        .tolerance(Tolerance::exact(ctx))
        .real(&lhs, &rhs))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TelescopingRow {
    pub j: u32,
    /// `sin(a/q^j) / (q sin(a/q^(1+j)))`
    pub factor: BigReal,
    /// `(1 + 2 sum_n cos(2na/q^(1+j))) / q`
    pub direct_factor: BigReal,
    pub cumulative: BigReal,
    pub direct_cumulative: BigReal,
    /// `sin(a) / (q^(J+1) sin(a/q^(J+1)))`
    pub closed_form: BigReal,
    pub deviation: BigReal,
    /// `q^(j+1) sin(a/q^(1+j)) / a`, tending to 1
    pub limit_factor_ratio: BigReal,
}

/// Partial telescoping of the odd family with base `q = 2N + 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TelescopingTrace {
    pub n: u32,
    pub q: u32,
    pub a: String,
    pub rows: Vec<TelescopingRow>,
}

pub fn telescoping_trace(n: u32, a: &ExactArgument, terms: u32, ctx: &PrecisionContext) -> Result<TelescopingTrace> {
    if n == 0 {
        return Err(Error::domain("N must be >= 1"));
    }
    if a.is_zero() {
        return Err(Error::domain("telescoping trace requires a != 0"));
    }
    let q = 2 * n + 1;
    let w = ctx.work_bits() + 8;
    let af = a.to_float(w);
    let sin_a = sin_at(a, w);
    let mut cumulative = Float::with_val(w, 1);
    let mut direct_cumulative = Float::with_val(w, 1);
    let mut rows = Vec::with_capacity(terms as usize + 1);
    let short = |x: &Float| BigReal::from_float(x, ctx);
    for j in 0..=terms {
        let upper = sin_at(&a.scale_pow(q, -(j as i32)), w);
        let lower = sin_at(&a.scale_pow(q, -(j as i32 + 1)), w);
        if lower.is_zero() {
            return Err(Error::domain(format!("sin(a/{q}^{}) vanishes", j + 1)));
        }
        let factor = Float::with_val(w, &upper / &lower) / q;
        let direct = nplication_factor(BaseFamily::Odd(n), a, j, w);
        cumulative *= &factor;
        direct_cumulative *= &direct;
        let scale = Float::with_val(w, Integer::from(q).pow(j + 1));
        let limit = Float::with_val(w, &scale * &lower);
        let closed = Float::with_val(w, &sin_a / &limit);
        let deviation = Float::with_val(w, &cumulative - &closed).abs();
        rows.push(TelescopingRow {
            j,
            factor: short(&factor),
            direct_factor: short(&direct),
            cumulative: short(&cumulative),
            direct_cumulative: short(&direct_cumulative),
            closed_form: short(&closed),
            deviation: BigReal::from_float(&deviation, &PrecisionContext { digits: 10, ..ctx.clone() }),
            limit_factor_ratio: short(&Float::with_val(w, &limit / &af)),
        });
    }
    Ok(TelescopingTrace {
        n,
        q,
        a: a.to_string(),
        rows,
    })
}

impl TraceTable for TelescopingTrace {
    fn columns(&self) -> Vec<&'static str> {
        vec![
            "j",
            "factor",
            "direct_factor",
            "cumulative",
            "direct_cumulative",
            "closed_form",
            "deviation",
            "limit_factor_ratio",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.j.to_string(),
                    r.factor.to_string(),
                    r.direct_factor.to_string(),
                    r.cumulative.to_string(),
                    r.direct_cumulative.to_string(),
                    r.closed_form.to_string(),
                    r.deviation.to_string(),
                    r.limit_factor_ratio.to_string(),
                ]
            })
            .collect()
    }
}

/// `(2N+1)^(j+1) sin(a/(2N+1)^(1+j)) / a`, which tends to 1.
pub fn limit_factor_ratio(n: u32, a: &ExactArgument, j: u32, ctx: &PrecisionContext) -> Result<Float> {
    if a.is_zero() {
        return Err(Error::domain("limit factor requires a != 0"));
    }
    let q = 2 * n + 1;
    let w = ctx.work_bits() + 8;
    let s = sin_at(&a.scale_pow(q, -(j as i32 + 1)), w);
    let scale = Float::with_val(w, Integer::from(q).pow(j + 1));
    Ok(s * scale / a.to_float(w))
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
    fn dispatch_ids() {
        assert_eq!(BaseFamily::from_base(2).unwrap().id(), "gn1");
        assert_eq!(BaseFamily::from_base(3).unwrap().id(), "gn3ca");
        assert_eq!(BaseFamily::from_base(4).unwrap().id(), "gn4a");
        assert_eq!(BaseFamily::from_base(5).unwrap().id(), "gn5b");
        assert_eq!(BaseFamily::from_base(10).unwrap().id(), "g2a");
        assert_eq!(BaseFamily::from_base(11).unwrap().id(), "g2x");
        assert!(BaseFamily::from_base(1).is_err());
    }

    #[test]
    fn all_bases_reach_sinc() {
        let c = ctx();
        for q in 2..=11 {
            for a in ["1", "pi/2", "2.2"] {
                let r = nplication_product(BaseFamily::from_base(q).unwrap(), &arg(a), &c).unwrap();
                assert!(r.passed() && r.abs_error_f64() <= 1e-30, "q={q} a={a}: {r:?}");
            }
        }
    }

    #[test]
    fn named_examples() {
        let c = ctx();
        let r = nplication_product(BaseFamily::Even(1), &arg("pi/2"), &c).unwrap();
        assert!(r.rhs.to_string().starts_with("0.6366197723"));
        let r = nplication_product(BaseFamily::Even(2), &arg("1"), &c).unwrap();
        assert!(r.lhs.to_string().starts_with("0.8414709848"));
    }

    #[test]
    fn zero_factor_is_reported() {
        let r = nplication_product(BaseFamily::Even(1), &arg("pi"), &ctx()).unwrap();
        assert!(r.passed());
        assert_eq!(r.details["zero_factor_index"], "0");
    }

    #[test]
    fn gn3c_pairs_agree() {
        let c = ctx();
        for a in ["1", "pi/2", "2.2", "-0.4"] {
            let r = gn3c_pairing_check(&arg(a), &c).unwrap();
            assert!(r.passed(), "{a}: {r:?}");
        }
    }

    #[test]
    fn viete_sixty_factors() {
        let r = viete_partial(60, &ctx()).unwrap();
        assert!(r.passed());
        assert!(r.abs_error_f64() < 1e-30);
        let r = viete_partial(10, &ctx()).unwrap();
        assert!(r.passed());
        assert!(r.abs_error_f64() > 1e-8);
    }

    #[test]
    fn cosine_lemma_examples() {
        let c = ctx();
        assert!(cosine_sum_lemma(SumKind::Even, 1, 0, &arg("0.9"), &c).unwrap().passed());
        let r = cosine_sum_lemma(SumKind::Odd, 1, 0, &arg("pi"), &c).unwrap();
        assert!(r.passed());
        assert_eq!(r.lhs.to_f64(), -0.5);
        assert!(cosine_sum_lemma(SumKind::Odd, 3, 1, &arg("1.3"), &c).unwrap().passed());
        assert!(cosine_sum_lemma(SumKind::Odd, 1, 0, &arg("0"), &c).is_err());
    }

    #[test]
    fn telescoping_matches_closed_form_and_direct_product() {
        let c = ctx();
        let t = telescoping_trace(2, &arg("pi/3"), 10, &c).unwrap();
        assert_eq!(t.rows.len(), 11);
        for r in &t.rows {
            let d = Float::with_val(200, r.cumulative.as_float() - r.direct_cumulative.as_float());
            assert!(d.abs() < 1e-45);
            assert!(r.deviation.to_f64() < 1e-45);
        }
        assert_eq!(t.rows().len(), 11);
        assert_eq!(t.columns().len(), t.rows()[0].len());
    }

    #[test]
    fn limit_factor_law() {
        let v = limit_factor_ratio(1, &arg("1"), 30, &ctx()).unwrap();
        assert!(Float::with_val(200, v - 1u32).abs() < 1e-25);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn cosine_lemmas_exact(n in 1u32..=5, j in 0u32..=3, num in -5000i64..5000, odd: bool) {
            prop_assume!(num != 0);
            let c = PrecisionContext::with_digits(30);
            let kind = if odd { SumKind::Odd } else { SumKind::Even };
            let r = cosine_sum_lemma(kind, n, j, &ExactArgument::ratio(num, 1000), &c).unwrap();
            prop_assert!(r.passed(), "{:?}", r);
        }

        #[test]
        fn even_one_collapses_to_cosine_halving(num in -3000i64..3000, j in 0u32..40) {
            let a = ExactArgument::ratio(num, 1000);
            let general = nplication_factor(BaseFamily::Even(1), &a, j, 160);
            let euler = cos_at(&a.scale_pow(2, -(j as i32 + 1)), 160);
            prop_assert!(Float::with_val(160, general - euler).abs() < 1e-45);
        }

        #[test]
        fn odd_one_collapses_to_both_forms(num in -3000i64..3000, j in 0u32..40) {
            let a = ExactArgument::ratio(num, 1000);
            let general = nplication_factor(BaseFamily::Odd(1), &a, j, 160);
            let cosine = special_factor(BaseFamily::Odd(1), &a, j, 160).unwrap();
            let cubic = gn3ci_factor(&a, j + 1, 160);
            prop_assert!(Float::with_val(160, &general - &cosine).abs() < 1e-45);
            prop_assert!(Float::with_val(160, &general - &cubic).abs() < 1e-45);
        }
    }
}
