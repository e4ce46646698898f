//! The tangent and cotangent products for `a / sin a`, their hyperbolic twin,
//! the exceptional values at multiples of pi and the generalisation to
//! exponent offset `n`.

use rug::ops::Pow;
use rug::{Float, Integer};
use serde::Serialize;

use super::classify::{classify, ArgumentClass};
use super::logprod::{log_product, pow2, LogProduct, LogTerm};
use crate::error::{Error, Result};
use crate::mpcore::{pi, sin_at, tan_at, cot_at, BigReal, ExactArgument, PrecisionContext};
use crate::report::{ReportBuilder, Tolerance, VerificationReport, Verdict};

pub(crate) fn exceptional(a: &ExactArgument, class: &ArgumentClass) -> Error {
    let redirect = match class.pi_decomposition() {
        Some((0, n)) => format!("cpodd (n={n}) or peo2 (m=0, n={n})"),
        Some((m, n)) => format!("peo2 (m={m}, n={n})"),
        None => "a regular argument".to_string(),
    };
    Error::ExceptionalPoint {
        argument: a.to_string(),
        redirect,
    }
}

pub(crate) fn require_regular(a: &ExactArgument) -> Result<ArgumentClass> {
    let class = classify(a);
    if class.is_pi_multiple() {
        return Err(exceptional(a, &class));
    }
    Ok(class)
}

/// Report for `a = 0`, where both sides are the limit 1.
pub(crate) fn unit_limit(builder: ReportBuilder, ctx: &PrecisionContext) -> VerificationReport {
    let one = Float::with_val(ctx.work_bits(), 1);
    builder.detail("note", "empty-product limit at 0").real(&one, &one)
}

/// `2^(j-1) ln|tan(x)/x|` with `x = a/2^(j-shift)`, computed at `prec` bits.
fn tan_over_arg_term(a: &ExactArgument, j: i64, shift: i64, prec: u32) -> Result<LogTerm> {
    let x = a.scale_pow(2, -((j - shift) as i32));
    let t = tan_at(&x, prec)?;
    let base = t / x.to_float(prec);
    Ok(LogTerm::weighted(&base, &pow2(j - 1, prec), j == 1, prec))
}

/// `2^(j-1) ln|cot(x) x|` with `x = a/2^j`.
fn cot_times_arg_term(a: &ExactArgument, j: i64, prec: u32) -> Result<LogTerm> {
    let x = a.scale_pow(2, -(j as i32));
    let c = cot_at(&x, prec)?;
    let base = c * x.to_float(prec);
    Ok(LogTerm::weighted(&base, &pow2(j - 1, prec), j == 1, prec))
}

fn term_bits(ctx: &PrecisionContext, j: i64) -> u32 {
    ctx.work_bits() + j as u32 + 8
}

fn vsum2_log_product(a: &ExactArgument, ctx: &PrecisionContext) -> Result<LogProduct> {
    let w = ctx.work_bits();
    log_product(ctx, w, |i| {
        let j = i as i64 + 1;
        tan_over_arg_term(a, j, 0, term_bits(ctx, j))
    })
}

/// `prod_{j=1}^{J} (tan(a/2^j) 2^j/a)^(2^(j-1))`.
pub fn vsum2_partial(a: &ExactArgument, terms: usize, ctx: &PrecisionContext) -> Result<Float> {
    require_regular(a)?;
    partial_product(terms, ctx, |j| tan_over_arg_term(a, j, 0, term_bits(ctx, j)))
}

/// `prod_{j=1}^{J} (cot(a/2^j) a/2^j)^(2^(j-1))`.
pub fn sinc_partial(a: &ExactArgument, terms: usize, ctx: &PrecisionContext) -> Result<Float> {
    require_regular(a)?;
    partial_product(terms, ctx, |j| cot_times_arg_term(a, j, term_bits(ctx, j)))
}

fn partial_product(
    terms: usize,
    ctx: &PrecisionContext,
    mut term: impl FnMut(i64) -> Result<LogTerm>,
) -> Result<Float> {
    let w = ctx.work_bits();
    let mut log = Float::with_val(w, 0);
    let mut negative = false;
    for i in 0..terms {
        match term(i as i64 + 1)? {
            LogTerm::Value { log: l, negative: n } => {
                log += l;
                negative ^= n;
            }
            LogTerm::Zero => return Ok(Float::with_val(w, 0)),
        }
    }
    let v = log.exp();
    Ok(if negative { -v } else { v })
}

/// `2^(j-1) ln|tan(a/2^j) 2^j/a|` for `j >= 1`.
pub fn vsum2_log_term(a: &ExactArgument, j: u32, ctx: &PrecisionContext) -> Result<Float> {
    require_regular(a)?;
    match tan_over_arg_term(a, j as i64, 0, term_bits(ctx, j as i64))? {
        LogTerm::Value { log, .. } => Ok(log),
        LogTerm::Zero => Err(Error::domain("zero factor")),
    }
}

/// `prod_{j>=1} (tan(a/2^j) 2^j/a)^(2^(j-1)) = a/sin(a)`.
pub fn vsum2_product(a: &ExactArgument, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let class = require_regular(a)?;
    if a.is_zero() {
        return Ok(unit_limit(ReportBuilder::new("vsum2", ctx).param("a", a), ctx));
    }
    let w = ctx.work_bits();
    let prod = vsum2_log_product(a, ctx)?;
    let lhs = prod.value(w);
    let rhs = a.to_float(w) / sin_at(a, w);
    Ok(ReportBuilder::new("vsum2", ctx)
        .param("a", a)
        .detail("class", class)
        .series(&prod.outcome)
        .real(&lhs, &rhs))
}

/// `prod_{j>=1} (cot(a/2^j) a/2^j)^(2^(j-1)) = sin(a)/a`.
pub fn sinc_cot_product(a: &ExactArgument, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let class = require_regular(a)?;
    if a.is_zero() {
        return Ok(unit_limit(ReportBuilder::new("sinc", ctx).param("a", a), ctx));
    }
    let w = ctx.work_bits();
    let prod = log_product(ctx, w, |i| {
        let j = i as i64 + 1;
        cot_times_arg_term(a, j, term_bits(ctx, j))
    })?;
    let lhs = prod.value(w);
    let rhs = sin_at(a, w) / a.to_float(w);
    Ok(ReportBuilder::new("sinc", ctx)
        .param("a", a)
        .detail("class", class)
        .series(&prod.outcome)
        .real(&lhs, &rhs))
}

/// `prod_{j>=1} (2^j tanh(b/2^j)/b)^(2^(j-1)) = b/sinh(b)`.
pub fn vsum2a_hyperbolic(b: &BigReal, ctx: &PrecisionContext) -> Result<VerificationReport> {
    if b.is_zero() {
        return Ok(unit_limit(ReportBuilder::new("vsum2a", ctx).param("b", b), ctx));
    }
    let w = ctx.work_bits();
    let prod = log_product(ctx, w, |i| {
        let j = i as i64 + 1;
        let p = term_bits(ctx, j);
        let y = Float::with_val(p, b.as_float()) / pow2(j, p);
        let base = Float::with_val(p, y.tanh_ref()) / &y;
        Ok(LogTerm::weighted(&base, &pow2(j - 1, p), false, p))
    })?;
    let lhs = prod.value(w);
    let bw = Float::with_val(w, b.as_float());
    let rhs = Float::with_val(w, &bw / Float::with_val(w, bw.sinh_ref()));
    Ok(ReportBuilder::new("vsum2a", ctx)
        .param("b", b)
        .series(&prod.outcome)
        .real(&lhs, &rhs))
}

/// `prod_{j>=2} (tan((2n-1)pi/2^j) 2^j/((2n-1)pi))^(2^(j-1)) = pi^2 (1/2 - n)^2`.
pub fn cpodd_product(n: u64, ctx: &PrecisionContext) -> Result<VerificationReport> {
    if n == 0 {
        return Err(Error::domain("cpodd requires n >= 1"));
    }
    let w = ctx.work_bits();
    let odd = 2 * n as i64 - 1;
    let prod = log_product(ctx, w, |i| {
        let j = i as i64 + 2;
        let p = term_bits(ctx, j);
        let t = tan_at(&ExactArgument::pi_fraction(odd, 1).scale_pow(2, -(j as i32)), p)?;
        let ln_tan = Float::with_val(p, t.abs_ref()).ln();
        let ln2 = Float::with_val(p, rug::float::Constant::Log2);
        let ln_odd_pi = Float::with_val(p, Float::with_val(p, odd) * pi(p)).ln();
        let log = (ln_tan + ln2 * j as u32 - ln_odd_pi) * pow2(j - 1, p);
        Ok(LogTerm::Value { log, negative: false })
    })?;
    let lhs = prod.value(w);
    let half = Float::with_val(w, n) - 0.5f64;
    let rhs = Float::with_val(w, pi(w).square_ref()) * half.square();
    Ok(ReportBuilder::new("cpodd", ctx)
        .param("n", n)
        .series(&prod.outcome)
        .real(&lhs, &rhs))
}

/// `prod_{j>=m+2} (tan(x_j)/x_j)^(2^(j-1))`, `x_j = 2^(m-j)(2n-1)pi`, equals
/// `((2n-1)pi/2)^(2^(m+1))`.
pub fn peo2_product(m: u32, n: u64, ctx: &PrecisionContext) -> Result<VerificationReport> {
    if n == 0 {
        return Err(Error::domain("peo2 requires n >= 1"));
    }
    if m > 60 {
        return Err(Error::domain("peo2 requires m <= 60"));
    }
    let w = ctx.work_bits() + m + 8;
    let odd = 2 * n as i64 - 1;
    let a = ExactArgument::pi_fraction(odd, 1).scale_pow(2, m as i32);
    let prod = log_product(ctx, w, |i| {
        let j = i as i64 + m as i64 + 2;
        tan_over_arg_term(&a, j, 0, w + j as u32)
    })?;
    let lhs = prod.value(w);
    let base = Float::with_val(w, odd) * pi(w) / 2u32;
    let rhs = base.pow(Integer::from(1u32) << (m + 1));
    Ok(ReportBuilder::new("peo2", ctx)
        .param("m", m)
        .param("n", n)
        .series(&prod.outcome)
        .real(&lhs, &rhs))
}

/// One epsilon of the scaling study. Values that tower with `2^m` are given
/// as natural logarithms of their magnitudes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsilonRow {
    pub eps: f64,
    /// `ln|prod_{j=1}^{m} factor_j|`
    pub vanishing_log: f64,
    /// `ln((eps ln2)^(2^m - 1))`
    pub vanishing_expected_log: f64,
    /// `ln|factor_{m+1}|`
    pub pole_log: f64,
    /// `ln((4/(ln2 (2n-1)^2 pi^2 eps))^(2^m))`
    pub pole_expected_log: f64,
    /// `ln|prod_{j=1}^{m+1} factor_j|`
    pub combined_log: f64,
    /// `2 tan((2n+2eps-1)pi/2)/((2n+2eps-1)pi)`
    pub first_factor: f64,
    /// `-2/(pi^2 (2n-1) eps)`
    pub first_factor_law: f64,
    pub first_factor_rel_error: f64,
}

/// Behaviour of the product near `a = 2^m (2n-1) pi` under `a = 2^(m+eps)(2n-1)pi`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsilonScaling {
    pub m: u32,
    pub n: u64,
    pub rows: Vec<EpsilonRow>,
    /// Least-squares slope of `combined_log` against `ln eps`.
    pub slope: f64,
    pub slope_band: f64,
    pub first_factor_tolerance: f64,
    pub verdict: Verdict,
}

pub const SLOPE_BAND: f64 = 0.05;
pub const FIRST_FACTOR_TOLERANCE: f64 = 1e-3;
pub const MAX_EPSILON: f64 = 1e-3;

pub fn epsilon_scaling_study(
    m: u32,
    n: u64,
    eps_list: &[BigReal],
    ctx: &PrecisionContext,
) -> Result<EpsilonScaling> {
    if n == 0 {
        return Err(Error::domain("epsilon scaling requires n >= 1"));
    }
    if m > 20 {
        return Err(Error::domain("epsilon scaling requires m <= 20"));
    }
    if eps_list.len() < 2 {
        return Err(Error::domain("epsilon scaling needs at least two values of eps"));
    }
    for e in eps_list {
        if !(e.to_f64() > 0.0 && e.to_f64() <= MAX_EPSILON) {
            return Err(Error::domain(format!("eps must lie in (0, 1e-3], got {e}")));
        }
    }
    let w = ctx.work_bits() + m + 16;
    let odd = Float::with_val(w, 2 * n - 1);
    let pi_w = pi(w);
    let ln2 = Float::with_val(w, rug::float::Constant::Log2);
    let mut rows = Vec::with_capacity(eps_list.len());
    for e in eps_list {
        let eps = Float::with_val(w, e.as_float());
        let two_eps = Float::with_val(w, eps.exp2_ref());
        let a = Float::with_val(w, &odd * &pi_w) * &two_eps * pow2(m as i64, w);
        let factor_log = |j: u32| -> (Float, bool) {
            let x = Float::with_val(w, &a / pow2(j as i64, w));
            let base = Float::with_val(w, x.tan_ref()) / &x;
            let neg = base.is_sign_negative() && j == 1;
            (Float::with_val(w, base.abs_ref()).ln() * pow2(j as i64 - 1, w), neg)
        };
        let mut vanishing = Float::with_val(w, 0);
        for j in 1..=m {
            vanishing += factor_log(j).0;
        }
        let (pole, _) = factor_log(m + 1);
        let scale = pow2(m as i64, w);
        let eps_ln2 = Float::with_val(w, &eps * &ln2);
        let vanishing_expected = Float::with_val(w, &scale - 1u32) * eps_ln2.clone().ln();
        let pole_arg = Float::with_val(w, 4u32) / (Float::with_val(w, &ln2 * odd.clone().square()) * pi_w.clone().square() * &eps);
        let pole_expected = pole_arg.ln() * &scale;
        let combined = Float::with_val(w, &vanishing + &pole);

        let shifted = Float::with_val(w, 2 * n - 1) + Float::with_val(w, &eps * 2u32);
        let angle = Float::with_val(w, &shifted * &pi_w) / 2u32;
        let first = Float::with_val(w, angle.tan_ref()) * 2u32 / Float::with_val(w, &shifted * &pi_w);
        let law = Float::with_val(w, -2) / (pi_w.clone().square() * &odd * &eps);
        let rel = Float::with_val(w, &first - &law).abs() / Float::with_val(w, law.abs_ref());
        rows.push(EpsilonRow {
            eps: eps.to_f64(),
            vanishing_log: vanishing.to_f64(),
            vanishing_expected_log: vanishing_expected.to_f64(),
            pole_log: pole.to_f64(),
            pole_expected_log: pole_expected.to_f64(),
            combined_log: combined.to_f64(),
            first_factor: first.to_f64(),
            first_factor_law: law.to_f64(),
            first_factor_rel_error: rel.to_f64(),
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.eps.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.combined_log).collect();
    let slope = least_squares_slope(&xs, &ys);
    let smallest = rows
        .iter()
        .min_by(|x, y| x.eps.total_cmp(&y.eps))
        .expect("at least two rows");
    let slope_ok = (slope + 1.0).abs() <= SLOPE_BAND;
    let first_ok = smallest.first_factor_rel_error <= FIRST_FACTOR_TOLERANCE;
    let verdict = if slope_ok && first_ok { Verdict::Pass } else { Verdict::Fail };
    Ok(EpsilonScaling {
        m,
        n,
        rows,
        slope,
        slope_band: SLOPE_BAND,
        first_factor_tolerance: FIRST_FACTOR_TOLERANCE,
        verdict,
    })
}

impl EpsilonScaling {
    /// The slope against `-1` as a report, failing also when the first-factor
    /// law misses its tolerance at the smallest eps.
    pub fn to_report(&self, ctx: &PrecisionContext) -> VerificationReport {
        let lhs = Float::with_val(64, self.slope);
        let rhs = Float::with_val(64, -1);
        let mut b = ReportBuilder::new("epsilon_scaling", ctx)
            .param("m", self.m)
            .param("n", self.n)
            .param(
                "eps",
                self.rows.iter().map(|r| format!("{:e}", r.eps)).collect::<Vec<_>>().join(","),
            )
            .tolerance(Tolerance::new(SLOPE_BAND, 0.0))
            .terms(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            b = b
                .detail(&format!("row{i}_combined_log"), r.combined_log)
                .detail(&format!("row{i}_first_factor"), r.first_factor)
                .detail(&format!("row{i}_first_factor_law"), r.first_factor_law)
                .detail(&format!("row{i}_first_factor_rel_error"), r.first_factor_rel_error)
                .detail(&format!("row{i}_vanishing_log_deviation"), r.vanishing_log - r.vanishing_expected_log)
                .detail(&format!("row{i}_pole_log_deviation"), r.pole_log - r.pole_expected_log);
        }
        let mut report = b.real(&lhs, &rhs);
        report.verdict = report.verdict.combine(self.verdict);
        report
    }
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn gp1b_log_product(n: u32, a: &ExactArgument, ctx: &PrecisionContext) -> Result<LogProduct> {
    let w = ctx.work_bits() + n + 8;
    log_product(ctx, w, |i| {
        let j = i as i64 + n as i64 + 1;
        tan_over_arg_term(a, j, n as i64, w + i as u32 + 8)
    })
}

/// `(a/sin a)^(2^n)`.
fn gp1b_closed_form(n: u32, a: &ExactArgument, prec: u32) -> Float {
    let ratio = a.to_float(prec) / sin_at(a, prec);
    ratio.pow(Integer::from(1u32) << n)
}

const MAX_GP1B_N: u32 = 40;

/// `prod_{j>=n+1} (2^(j-n)/a tan(2^(n-j) a))^(2^(j-1)) = a^(2^n)/sin^(2^n)(a)`.
pub fn gp1b_product(n: u32, a: &ExactArgument, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let class = require_regular(a)?;
    if n > MAX_GP1B_N {
        return Err(Error::domain(format!("gp1b requires n <= {MAX_GP1B_N}")));
    }
    if a.is_zero() {
        return Ok(unit_limit(ReportBuilder::new("gp1b", ctx).param("n", n).param("a", a), ctx));
    }
    let w = ctx.work_bits() + n + 8;
    let prod = gp1b_log_product(n, a, ctx)?;
    let lhs = prod.value(w);
    let rhs = gp1b_closed_form(n, a, w);
    Ok(ReportBuilder::new("gp1b", ctx)
        .param("n", n)
        .param("a", a)
        .detail("class", class)
        .series(&prod.outcome)
        .real(&lhs, &rhs))
}

/// One induction step: the product at `(n+1, a/2)` times the extracted factor
/// `(2 tan(a/2)/a)^(2^n)` against `a^(2^n) (2 cos(a/2) sin(a/2))^(-2^n)`.
/// Details compare the reconstruction with the direct product at `(n, a)`
/// and the intermediate closed form with the final one.
pub fn gp1b_induction_check(n: u32, a: &ExactArgument, ctx: &PrecisionContext) -> Result<VerificationReport> {
    require_regular(a)?;
    if n >= MAX_GP1B_N {
        return Err(Error::domain(format!("gp1b induction requires n < {MAX_GP1B_N}")));
    }
    if a.is_zero() {
        return Err(Error::domain("gp1b induction requires a != 0"));
    }
    let w = ctx.work_bits() + n + 16;
    let half = a.scale_pow(2, -1);
    let exponent = Integer::from(1u32) << n;
    let next = gp1b_log_product(n + 1, &half, ctx)?;
    let extracted = (tan_at(&half, w)? * 2u32 / a.to_float(w)).pow(&exponent);
    let reconstructed = Float::with_val(w, next.value(w) * &extracted);

    let p1_rhs = gp1b_closed_form(n + 1, &half, w);
    let p2_rhs = Float::with_val(w, &p1_rhs * &extracted);
    let s = sin_at(&half, w);
    let c = crate::mpcore::cos_at(&half, w);
    let p3_rhs = a.to_float(w).pow(&exponent) * (Float::with_val(w, 1) / (s * c * 2u32)).pow(&exponent);

    let direct = gp1b_log_product(n, a, ctx)?;
    let direct_value = direct.value(w);

    let exact = Tolerance::exact(ctx);
    let p2_vs_p3 = Float::with_val(w, &p2_rhs - &p3_rhs).abs();
    let direct_vs = Float::with_val(w, &direct_value - &reconstructed).abs();
    let scale = Float::with_val(w, p3_rhs.abs_ref());
    let mut verdict = Verdict::Pass;
    if !(p2_vs_p3.to_f64() <= exact.bound(&scale)) {
        verdict = Verdict::Fail;
    }
    if !(direct_vs.to_f64() <= Tolerance::from_ctx(ctx).bound(&scale)) {
        verdict = Verdict::Fail;
    }
    let mut report = ReportBuilder::new("gp1b_induction", ctx)
        .param("n", n)
        .param("a", a)
        .series(&next.outcome)
        .converged(next.outcome.converged && direct.outcome.converged)
        .detail("p2_rhs_minus_p3_rhs", crate::mpcore::format_decimal(&p2_vs_p3, 10))
        .detail("direct_minus_reconstructed", crate::mpcore::format_decimal(&direct_vs, 10))
        .real(&reconstructed, &p3_rhs);
    report.verdict = report.verdict.combine(verdict);
    Ok(report)
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
    fn vsum2_at_one() {
        let r = vsum2_product(&arg("1"), &ctx()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.rhs.to_string().starts_with("1.188395105778"));
        assert!(r.abs_error_f64() < 1e-35);
        assert!(r.terms_used <= 140);
    }

    #[test]
    fn vsum2_at_pi_third() {
        let r = vsum2_product(&arg("pi/3"), &ctx()).unwrap();
        assert!(r.passed());
        assert!(r.rhs.to_string().starts_with("1.2091995761"));
    }

    #[test]
    fn vsum2_beyond_pi_tracks_sign() {
        let r = vsum2_product(&arg("4"), &ctx()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.lhs.to_f64() < 0.0);
    }

    #[test]
    fn vsum2_rejects_pi_multiples() {
        match vsum2_product(&arg("pi"), &ctx()) {
            Err(Error::ExceptionalPoint { redirect, .. }) => assert!(redirect.contains("cpodd")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(vsum2_product(&arg("-6*pi"), &ctx()), Err(Error::ExceptionalPoint { .. })));
    }

    #[test]
    fn zero_is_the_unit_limit() {
        assert!(vsum2_product(&arg("0"), &ctx()).unwrap().passed());
        assert!(sinc_cot_product(&arg("0"), &ctx()).unwrap().passed());
    }

    #[test]
    fn sinc_form_examples() {
        let r = sinc_cot_product(&arg("1"), &ctx()).unwrap();
        assert!(r.passed());
        assert!(r.rhs.to_string().starts_with("0.8414709848"));
        let r = sinc_cot_product(&arg("pi/2"), &ctx()).unwrap();
        assert!(r.passed());
        assert!(r.rhs.to_string().starts_with("0.6366197723"));
    }

    #[test]
    fn hyperbolic_examples() {
        let c = ctx();
        let r = vsum2a_hyperbolic(&BigReal::parse("1", &c).unwrap(), &c).unwrap();
        assert!(r.passed());
        assert!(r.rhs.to_string().starts_with("0.8509181282"));
        let r = vsum2a_hyperbolic(&BigReal::parse("2.5", &c).unwrap(), &c).unwrap();
        assert!(r.passed());
        let oracle = 2.5 / 2.5f64.sinh();
        assert!((r.rhs.to_f64() - oracle).abs() < 1e-15);
    }

    #[test]
    fn cpodd_matches_closed_form_and_peo2() {
        let c = ctx();
        for n in 1..=4 {
            let r = cpodd_product(n, &c).unwrap();
            assert!(r.abs_error_f64() < 1e-30, "n={n}: {r:?}");
            let p = peo2_product(0, n, &c).unwrap();
            let diff = Float::with_val(200, r.lhs.as_real().unwrap().as_float() - p.lhs.as_real().unwrap().as_float());
            assert!(diff.abs() < 1e-38);
        }
        let r = cpodd_product(1, &c).unwrap();
        assert!(r.rhs.to_string().starts_with("2.4674011002"));
    }

    #[test]
    fn cpodd_converges_for_n_up_to_six() {
        let c = ctx();
        for n in 1..=6 {
            assert!(cpodd_product(n, &c).unwrap().passed());
        }
        let loose = PrecisionContext::with_digits(30).with_tail_tolerance(1e-15).with_max_terms(64);
        for n in 1..=6 {
            let r = cpodd_product(n, &loose).unwrap();
            assert_ne!(r.verdict, Verdict::Inconclusive);
            assert!(r.rel_error_f64() < 1e-14);
        }
    }

    #[test]
    fn peo2_examples() {
        let c = ctx();
        for m in 0..=2 {
            for n in 1..=2 {
                let r = peo2_product(m, n, &c).unwrap();
                assert!(r.rel_error_f64() < 1e-25, "m={m} n={n}: {r:?}");
            }
        }
        let r = peo2_product(1, 1, &c).unwrap();
        assert!(r.rhs.to_string().starts_with("6.0880681896"));
    }

    fn eps(values: &[&str]) -> Vec<BigReal> {
        let c = ctx();
        values.iter().map(|v| BigReal::parse(v, &c).unwrap()).collect()
    }

    #[test]
    fn epsilon_scaling_slopes() {
        for m in 0..=2 {
            let s = epsilon_scaling_study(m, 1, &eps(&["1e-4", "1e-5", "1e-6"]), &ctx()).unwrap();
            assert!((s.slope + 1.0).abs() <= 0.05, "m={m} slope={}", s.slope);
            assert_eq!(s.verdict, Verdict::Pass);
            for row in &s.rows {
                assert!((row.vanishing_log - row.vanishing_expected_log).abs() < 1e-2);
                assert!((row.pole_log - row.pole_expected_log).abs() < 1e-2);
            }
        }
    }

    #[test]
    fn first_factor_law_value() {
        let s = epsilon_scaling_study(0, 1, &eps(&["1e-5", "1e-6"]), &ctx()).unwrap();
        let row = &s.rows[1];
        assert!((row.first_factor_law + 2.0264237e5).abs() < 1.0);
        assert!(row.first_factor_rel_error < 1e-3);
        assert!(s.to_report(&ctx()).passed());
    }

    #[test]
    fn epsilon_domain() {
        assert!(epsilon_scaling_study(1, 1, &eps(&["1e-2", "1e-4"]), &ctx()).is_err());
        assert!(epsilon_scaling_study(1, 1, &eps(&["1e-4"]), &ctx()).is_err());
    }

    #[test]
    fn gp1b_examples() {
        let c = ctx();
        let r0 = gp1b_product(0, &arg("1"), &c).unwrap();
        let v = vsum2_product(&arg("1"), &c).unwrap();
        assert_eq!(r0.lhs, v.lhs);
        let r1 = gp1b_product(1, &arg("1"), &c).unwrap();
        assert!(r1.passed());
        assert!(r1.rhs.to_string().starts_with("1.4122829"));
        assert!(gp1b_product(5, &arg("-2.5"), &c).unwrap().passed());
    }

    #[test]
    fn gp1b_induction_steps() {
        let c = ctx();
        for (n, a) in [(0, "1"), (1, "0.7"), (3, "2.9"), (2, "-1.3")] {
            let r = gp1b_induction_check(n, &arg(a), &c).unwrap();
            assert!(r.passed(), "n={n} a={a}: {r:?}");
        }
    }

    #[test]
    fn partial_products_reciprocal() {
        let c = ctx();
        for j in [1usize, 5, 20] {
            let p = vsum2_partial(&arg("1.7"), j, &c).unwrap();
            let q = sinc_partial(&arg("1.7"), j, &c).unwrap();
            let err = Float::with_val(200, p * q - 1u32).abs();
            assert!(err < 1e-45);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn partial_products_increase_to_the_limit(num in 1i64..3141, j in 1usize..40) {
            let c = PrecisionContext::with_digits(30);
            let a = ExactArgument::ratio(num, 1000);
            let p = vsum2_partial(&a, j, &c).unwrap();
            let q = vsum2_partial(&a, j + 1, &c).unwrap();
            let limit = a.to_float(c.work_bits()) / sin_at(&a, c.work_bits());
            prop_assert!(q >= p);
            prop_assert!(q <= limit);
        }

        #[test]
        fn log_terms_decay(num in -2000i64..=2000, j in 3u32..60) {
            prop_assume!(num != 0);
            let c = PrecisionContext::with_digits(30);
            let a = ExactArgument::ratio(num, 1000);
            let t = vsum2_log_term(&a, j, &c).unwrap();
            let bound = a.to_float(64).square() / Float::with_val(64, Float::i_exp(1, j as i32));
            prop_assert!(t.abs() <= bound);
        }

        #[test]
        fn reciprocity(num in -2999i64..=2999, j in 1usize..60) {
            prop_assume!(num != 0);
            let c = PrecisionContext::with_digits(30);
            let a = ExactArgument::ratio(num, 1000);
            let p = vsum2_partial(&a, j, &c).unwrap();
            let q = sinc_partial(&a, j, &c).unwrap();
            prop_assert!(Float::with_val(200, p * q - 1u32).abs() < 1e-30);
        }

        #[test]
        fn induction_closure(n in 0u32..6, num in 1i64..3000) {
            let c = PrecisionContext::with_digits(30);
            let r = gp1b_induction_check(n, &ExactArgument::ratio(num, 1000), &c).unwrap();
            prop_assert!(r.passed(), "{:?}", r);
        }
    }
}
