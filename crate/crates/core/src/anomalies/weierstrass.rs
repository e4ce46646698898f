//! The cosine doubling product `P_k = prod_{j<k} cos(2^j a)` as `k` grows:
//! finite equality with `sin(2^k a)/(2^k sin a)`, the normalised column
//! `2^-k`, and the lack of a limit in `P_k` itself.

use rug::ops::Pow;
use rug::{Float, Integer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mpcore::{cos_at, format_decimal, sin_at, BigReal, ExactArgument, PrecisionContext};
use crate::products::jo2_zero_indices;
use crate::report::{ReportBuilder, Tolerance, TraceTable, VerificationReport, Verdict};

pub const DEFAULT_K_MAX: u32 = 200;
pub const CAUCHY_WINDOW: u32 = 40;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub k: u32,
    /// `prod_{j=0}^{k-1} cos(2^j a)`
    pub lhs: BigReal,
    /// `sin(2^k a) / (2^k sin a)`
    pub rhs: BigReal,
    pub deviation: BigReal,
    /// `sin(a) prod cos(2^j a) / sin(2^k a)`, undefined when `sin(2^k a) = 0`
    pub br114a: Option<BigReal>,
    /// `|br114a - 2^-k|`
    pub br114a_deviation: Option<BigReal>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CauchyViolation {
    pub k1: u32,
    pub k2: u32,
    /// `P_{k2} / P_{k1}`
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WindowCount {
    pub start: u32,
    pub end: u32,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitTrajectory {
    pub a: String,
    pub k_max: u32,
    pub working_digits: u32,
    pub rows: Vec<TrajectoryRow>,
    /// For each `k1`, the first `k2 > k1` with both `|P| < 1` and
    /// `|P_{k2}/P_{k1} - 1| > 1/2`.
    pub cauchy_violations: Vec<CauchyViolation>,
    /// Violations with both indices inside consecutive windows of 40.
    pub windows: Vec<WindowCount>,
    /// The normalised column decreases strictly towards 0.
    pub br114a_monotone: bool,
}

/// Digits needed to reduce `2^k a` for `k <= k_max`.
pub fn required_digits(k_max: u32, ctx: &PrecisionContext) -> u32 {
    ctx.reduction_digits(2, k_max)
}

/// Trajectory for `k = 1..=k_max`. Refuses when the reduction needs more than
/// `4 * digits` digits unless `allow_growth` is set.
pub fn weierstrass_trajectory(
    a: &ExactArgument,
    k_max: u32,
    allow_growth: bool,
    ctx: &PrecisionContext,
) -> Result<LimitTrajectory> {
    if k_max == 0 {
        return Err(Error::domain("k_max must be >= 1"));
    }
    let required = required_digits(k_max, ctx);
    let allowed = 4 * ctx.digits;
    if required > allowed && !allow_growth {
        return Err(Error::PrecisionBudget { required, allowed });
    }
    let w = ctx.reduction_bits(2, k_max) + 16;
    let sin_a = sin_at(a, w);
    if sin_a.is_zero() {
        return Err(Error::domain(format!("sin(a) = 0 at a = {a}; see case2")));
    }
    let short = PrecisionContext { digits: 10, ..ctx.clone() };
    let mut lhs = Float::with_val(w, 1);
    let mut products = Vec::with_capacity(k_max as usize);
    let mut rows = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        lhs *= cos_at(&a.scale_pow(2, k as i32 - 1), ctx.reduction_bits(2, k - 1) + 16);
        let two_k = Float::with_val(w, Float::i_exp(1, k as i32));
        let s_k = sin_at(&a.scale_pow(2, k as i32), ctx.reduction_bits(2, k) + 16);
        let rhs = Float::with_val(w, &s_k / Float::with_val(w, &two_k * &sin_a));
        let deviation = Float::with_val(w, &lhs - &rhs).abs();
        let (br, br_dev) = if s_k.is_zero() {
            (None, None)
        } else {
            let v = Float::with_val(w, &sin_a * &lhs) / &s_k;
            let d = Float::with_val(w, &v - Float::with_val(w, Float::i_exp(1, -(k as i32)))).abs();
            (Some(BigReal::from_float(&v, ctx)), Some(BigReal::from_float(&d, &short)))
        };
        rows.push(TrajectoryRow {
            k,
            lhs: BigReal::from_float(&lhs, ctx),
            rhs: BigReal::from_float(&rhs, ctx),
            deviation: BigReal::from_float(&deviation, &short),
            br114a: br,
            br114a_deviation: br_dev,
        });
        products.push(lhs.clone());
    }
    let cauchy_violations = cauchy_pairs(&products);
    let windows = window_counts(&cauchy_violations, k_max);
    let br114a_monotone = rows
        .windows(2)
        .all(|p| match (&p[0].br114a, &p[1].br114a) {
            (Some(x), Some(y)) => y.as_float() < x.as_float() && y.as_float().is_sign_positive(),
            _ => true,
        });
    Ok(LimitTrajectory {
        a: a.to_string(),
        k_max,
        working_digits: required,
        rows,
        cauchy_violations,
        windows,
        br114a_monotone,
    })
}

fn cauchy_pairs(products: &[Float]) -> Vec<CauchyViolation> {
    let below_one = |p: &Float| !p.is_zero() && Float::with_val(p.prec(), p.abs_ref()) < 1;
    let mut out = Vec::new();
    for (i1, p1) in products.iter().enumerate() {
        if !below_one(p1) {
            continue;
        }
        for (i2, p2) in products.iter().enumerate().skip(i1 + 1) {
            if !below_one(p2) {
                continue;
            }
            let ratio = Float::with_val(p1.prec(), p2 / p1);
            if Float::with_val(p1.prec(), &ratio - 1u32).abs() > 0.5 {
                out.push(CauchyViolation {
                    k1: i1 as u32 + 1,
                    k2: i2 as u32 + 1,
                    ratio: ratio.to_f64(),
                });
                break;
            }
        }
    }
    out
}

fn window_counts(violations: &[CauchyViolation], k_max: u32) -> Vec<WindowCount> {
    let mut out = Vec::new();
    let mut start = 1;
    while start + CAUCHY_WINDOW - 1 <= k_max {
        let end = start + CAUCHY_WINDOW - 1;
        let violations = violations
            .iter()
            .filter(|v| v.k1 >= start && v.k2 <= end)
            .count();
        out.push(WindowCount { start, end, violations });
        start = end + 1;
    }
    out
}

impl LimitTrajectory {
    pub fn every_window_has_violation(&self) -> bool {
        !self.windows.is_empty() && self.windows.iter().all(|w| w.violations > 0)
    }
}

impl TraceTable for LimitTrajectory {
    fn columns(&self) -> Vec<&'static str> {
        vec!["k", "lhs", "rhs", "deviation", "br114a", "br114a_target", "br114a_deviation"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let opt = |v: &Option<BigReal>| v.as_ref().map_or("nan".to_string(), |x| x.to_string());
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.k.to_string(),
                    r.lhs.to_string(),
                    r.rhs.to_string(),
                    r.deviation.to_string(),
                    opt(&r.br114a),
                    format_decimal(&Float::with_val(64, Float::i_exp(1, -(r.k as i32))), 17),
                    opt(&r.br114a_deviation),
                ]
            })
            .collect()
    }
}

/// The normalised column at `k` against `2^-k`.
pub fn br114a_report(a: &ExactArgument, k: u32, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let t = weierstrass_trajectory(a, k, true, ctx)?;
    let row = t.rows.last().expect("k >= 1");
    let Some(v) = &row.br114a else {
        return Err(Error::domain(format!("sin(2^{k} a) vanishes at a = {a}")));
    };
    let rhs = Float::with_val(ctx.bits(), Float::i_exp(1, -(k as i32)));
    let mut report = ReportBuilder::new("br114a", ctx)
        .param("a", a)
        .param("k", k)
        .terms(k as usize)
        .tolerance(Tolerance::exact(ctx))
        .detail("monotone_to_zero", t.br114a_monotone)
        .detail("cauchy_violations", t.cauchy_violations.len())
        .real(v.as_float(), &rhs);
    if !t.br114a_monotone {
        report.verdict = report.verdict.combine(Verdict::Fail);
    }
    Ok(report)
}

/// `prod_{j=0}^{k-1} cos(2^j x)` at precision `prec` (angles reduced exactly).
fn cos_product(x: &ExactArgument, k: u32, prec: u32) -> Float {
    let mut p = Float::with_val(prec, 1);
    for j in 0..k {
        p *= cos_at(&x.scale_pow(2, j as i32), prec + j);
    }
    p
}

/// Quadratic coefficient of `prod_{j<k} cos(2^j a)` at `a0 = 2^n pi`, from
/// the central second difference with step `10^-floor(digits/4)` normalised
/// by the value at `a0`, against `(1 - 4^k)/6`.
pub fn case1_expansion_check(n: u32, k: u32, ctx: &PrecisionContext) -> Result<VerificationReport> {
    if k == 0 || k > 12 {
        return Err(Error::domain("case1 requires 1 <= k <= 12"));
    }
    if n > 60 {
        return Err(Error::domain("case1 requires n <= 60"));
    }
    let w = ctx.work_bits() + 2 * ctx.digits + 2 * k + n + 32;
    let center = ExactArgument::pi_fraction(1, 1).scale_pow(2, n as i32);
    let step_digits = ctx.digits / 4;
    let h = ExactArgument::rational(rug::Rational::from((1, Integer::from(10u32).pow(step_digits))));
    let f0 = cos_product(&center, k, w);
    let fp = cos_product(&center.add(&h), k, w);
    let fm = cos_product(&center.add(&h.neg()), k, w);
    let hf = h.to_float(w);
    let second = (fp - Float::with_val(w, &f0 * 2u32) + fm) / Float::with_val(w, hf.square_ref());
    let lhs = Float::with_val(w, &second / &f0) / 2u32;
    let four_k = Integer::from(1u32) << (2 * k);
    let rhs = Float::with_val(w, 1 - four_k) / 6u32;

    let factors: Vec<Float> = (0..k)
        .map(|j| cos_at(&center.scale_pow(2, j as i32), 64))
        .collect();
    let all_unity = factors.iter().all(|f| *f == 1);
    let all_unit_modulus = factors.iter().all(|f| f.clone().abs() == 1);
    let mut report = ReportBuilder::new("case1", ctx)
        .param("n", n)
        .param("k", k)
        .terms(k as usize)
        .tolerance(Tolerance::relative(1e-6))
        .detail("step", format!("1e-{step_digits}"))
        .detail(
            "factors_at_center",
            factors.iter().map(|f| f.to_f64().to_string()).collect::<Vec<_>>().join(","),
        )
        .detail("all_factors_unity", all_unity)
        .real(&lhs, &rhs);
    let center_ok = if n == 0 { all_unit_modulus } else { all_unity };
    if !center_ok {
        report.verdict = report.verdict.combine(Verdict::Fail);
    }
    if n == 0 {
        report.details.insert(
            "note".into(),
            "at n = 0 the j = 0 factor is cos(pi) = -1; the coefficient is taken relative to the value at the centre".into(),
        );
    }
    Ok(report)
}

/// At `a = pi/2^m`, `prod_{j<k} cos(2^j a) = sin(2^(k-m) pi)/(2^k sin(pi/2^m))`;
/// for `k >= m` the only vanishing factor is `j = m - 1`.
pub fn case2_zero_factor(m: u32, k: u32, ctx: &PrecisionContext) -> Result<VerificationReport> {
    if m == 0 || k == 0 {
        return Err(Error::domain("case2 requires m >= 1 and k >= 1"));
    }
    if m > 60 {
        return Err(Error::domain("case2 requires m <= 60"));
    }
    let a = ExactArgument::pi_fraction(1, 1).scale_pow(2, -(m as i32));
    let w = ctx.reduction_bits(2, k) + 16;
    let mut lhs = Float::with_val(w, 1);
    let mut zeros = Vec::new();
    for j in 0..k {
        let c = cos_at(&a.scale_pow(2, j as i32), w);
        if c.is_zero() {
            zeros.push(j);
        }
        lhs *= c;
    }
    let rhs = sin_at(&a.scale_pow(2, k as i32), w) / (sin_at(&a, w) * Float::with_val(w, Float::i_exp(1, k as i32)));
    let expected: Vec<u32> = if k >= m { vec![m - 1] } else { vec![] };
    let index_ok = zeros == expected;
    let mut report = ReportBuilder::new("case2", ctx)
        .param("m", m)
        .param("k", k)
        .terms(k as usize)
        .tolerance(Tolerance::exact(ctx))
        .detail(
            "zero_factor_indices",
            zeros.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(","),
        )
        .detail("expected_zero_index", expected.first().map_or("none".into(), |j| j.to_string()))
        .real(&lhs, &rhs);
    if !index_ok {
        report.verdict = report.verdict.combine(Verdict::Fail);
    }
    Ok(report)
}

/// For even `k`, `prod_{j=1}^{2k-1} cos(pi j/k)` has exactly two vanishing
/// factors, at `j = k/2` and `j = 3k/2`, while `((-1)^k - 1)/2^(2k-1)` is 0.
pub fn jo2_zero_anatomy(k: u64, ctx: &PrecisionContext) -> Result<VerificationReport> {
    if k == 0 || k % 2 == 1 {
        return Err(Error::domain(format!("jo2 zero anatomy requires even k >= 2, got {k}")));
    }
    let w = ctx.work_bits();
    let zeros = jo2_zero_indices(k);
    let expected = vec![k / 2, 3 * k / 2];
    let mut lhs = Float::with_val(w, 1);
    for j in 1..2 * k {
        lhs *= cos_at(&ExactArgument::pi_fraction(j as i64, k as i64), w);
    }
    let rhs = Float::with_val(w, 0);
    let mut report = ReportBuilder::new("jo2_zeros", ctx)
        .param("k", k)
        .terms((2 * k - 1) as usize)
        .tolerance(Tolerance::exact(ctx))
        .detail(
            "zero_factor_indices",
            zeros.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(","),
        )
        .detail(
            "note",
            "two vanishing factors on the product side against a closed form that is simply zero",
        )
        .real(&lhs, &rhs);
    if zeros != expected {
        report.verdict = report.verdict.combine(Verdict::Fail);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn arg(s: &str) -> ExactArgument {
        s.parse().unwrap()
    }

    #[test]
    fn trajectory_finite_identity_and_normalised_column() {
        let t = weierstrass_trajectory(&arg("1"), 100, false, &ctx()).unwrap();
        for r in &t.rows {
            assert!(r.deviation.to_f64() <= 1e-42 * r.rhs.to_f64().abs().max(1e-300) + 1e-60, "k={}", r.k);
            assert!(r.br114a_deviation.as_ref().unwrap().to_f64() < 1e-30);
        }
        assert!(t.br114a_monotone);
        assert_eq!(t.rows[9].br114a.as_ref().unwrap().to_f64(), 0.0009765625);
        assert_eq!(t.rows().len(), 100);
    }

    #[test]
    fn cauchy_violations_in_every_window() {
        let t = weierstrass_trajectory(&arg("1"), 200, false, &ctx()).unwrap();
        assert_eq!(t.windows.len(), 5);
        assert!(t.every_window_has_violation(), "{:?}", t.windows);
        let t = weierstrass_trajectory(&arg("1"), 60, false, &ctx()).unwrap();
        assert!(!t.cauchy_violations.is_empty());
        for a in ["0.3", "1.4142135623730950488"] {
            let t = weierstrass_trajectory(&arg(a), 200, false, &ctx()).unwrap();
            assert!(t.every_window_has_violation(), "a={a}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let c = PrecisionContext::with_digits(20);
        assert!(matches!(
            weierstrass_trajectory(&arg("1"), 200, false, &c),
            Err(Error::PrecisionBudget { .. })
        ));
        assert!(weierstrass_trajectory(&arg("1"), 200, true, &c).is_ok());
        assert!(weierstrass_trajectory(&arg("pi"), 10, false, &ctx()).is_err());
    }

    #[test]
    fn br114a_at_ten() {
        let r = br114a_report(&arg("1"), 10, &ctx()).unwrap();
        assert!(r.passed());
        assert_eq!(r.rhs.to_f64(), 0.0009765625);
    }

    #[test]
    fn case1_coefficients() {
        let c = ctx();
        for k in 1..=6 {
            let r = case1_expansion_check(1, k, &c).unwrap();
            assert!(r.passed(), "k={k}: {r:?}");
        }
        let r = case1_expansion_check(1, 3, &c).unwrap();
        assert_eq!(r.rhs.to_f64(), -10.5);
        let r0 = case1_expansion_check(0, 4, &c).unwrap();
        let r2 = case1_expansion_check(2, 4, &c).unwrap();
        assert!(r0.passed() && r2.passed());
        assert_eq!(r0.details["all_factors_unity"], "false");
        assert_eq!(r2.details["all_factors_unity"], "true");
        assert!(case1_expansion_check(1, 13, &c).is_err());
    }

    #[test]
    fn case2_indices() {
        let c = ctx();
        for m in 1..=8 {
            for k in 1..=10 {
                let r = case2_zero_factor(m, k, &c).unwrap();
                assert!(r.passed(), "m={m} k={k}: {r:?}");
            }
        }
        let r = case2_zero_factor(3, 5, &c).unwrap();
        assert_eq!(r.details["zero_factor_indices"], "2");
        let r = case2_zero_factor(1, 1, &c).unwrap();
        assert_eq!(r.lhs.to_f64(), 0.0);
    }

    #[test]
    fn jo2_zero_examples() {
        let c = ctx();
        for (k, z) in [(2, "1,3"), (4, "2,6"), (6, "3,9")] {
            let r = jo2_zero_anatomy(k, &c).unwrap();
            assert!(r.passed());
            assert_eq!(r.details["zero_factor_indices"], z);
        }
        assert!(jo2_zero_anatomy(3, &c).is_err());
    }

    proptest::proptest! {
        #[test]
        fn finite_identity_and_normalised_column(n in 1i64..3141, k_max in 1u32..60) {
            let c = PrecisionContext::with_digits(30);
            let a = ExactArgument::ratio(n, 1000);
            let t = weierstrass_trajectory(&a, k_max, false, &c).unwrap();
            for r in &t.rows {
                let scale = r.rhs.to_f64().abs().max(1e-300);
                proptest::prop_assert!(r.deviation.to_f64() <= 1e-22 * scale);
                if let Some(d) = &r.br114a_deviation {
                    proptest::prop_assert!(d.to_f64() <= 1e-22 * 2f64.powi(-(r.k as i32)));
                }
            }
        }
    }
}
