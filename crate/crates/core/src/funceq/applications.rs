//! Gamma, eta and zeta identities obtained from the functional equation.

use rug::ops::Pow;
use rug::Float;

use super::engine::series_outcome;
use super::problems::{eta_series_closed_form_numerator, r0a_summand, rs2_summand, zeta_splitting};
use crate::error::{Error, Result};
use crate::mpcore::{sum_series, BigReal, PrecisionContext, SeriesOutcome};
use crate::report::{ReportBuilder, VerificationReport};
use crate::specialfn::{eta_float, euler_gamma_float, ln_gamma_float, zeta_float};

/// Working bits for an argument `a`: the closed forms divide an `O(a)`
/// quantity by `a`, losing `log2(1/|a|)` bits.
fn bits_for(a: &Float, ctx: &PrecisionContext) -> u32 {
    let w = ctx.work_bits();
    if a.is_zero() {
        return w;
    }
    let lost = (-a.get_exp().unwrap_or(0)).max(0) as u32;
    w + lost.min(4 * w)
}

fn check_unit_disc(a: &Float, what: &str) -> Result<()> {
    if Float::with_val(a.prec(), a.abs_ref()) >= 1 {
        return Err(Error::domain(format!("{what} requires |a| < 1, got {}", a.to_f64())));
    }
    Ok(())
}

/// `sum_{j>=1} (c_{1+j} - 1)(-a)^j/(1+j) + (ln(1+a) - a)/a`, which equals
/// `sum_{j>=1} c_{1+j} (-a)^j/(1+j)`; subtracting the limit 1 of `c_n` makes
/// the terms decay like `(a/2)^j`.
fn accelerated_series(
    a: &Float,
    w: u32,
    ctx: &PrecisionContext,
    coeff: impl Fn(u32, u32) -> Result<Float>,
) -> Result<(Float, SeriesOutcome)> {
    let out = sum_series(ctx, w, |i| {
        let j = i as u32 + 1;
        let c = coeff(1 + j, w)? - 1u32;
        let power = Float::with_val(w, -a).pow(j as i32);
        Ok(c * power / (j + 1))
    })?;
    let ln1p = Float::with_val(w, a.ln_1p_ref());
    let head = (ln1p - a) / a;
    Ok((Float::with_val(w, &out.sum + &head), out))
}

fn trivial_zero(id: &str, ctx: &PrecisionContext) -> VerificationReport {
    let zero = Float::with_val(ctx.work_bits(), 0);
    ReportBuilder::new(id, ctx)
        .param("a", 0)
        .detail("note", "a = 0: every summand vanishes and the closed form has limit 0")
        .real(&zero, &zero)
}

/// `sum_{j>=1} eta(1+j) (-a)^j / (1+j) = (1/a) ln(sqrt(pi) Gamma(a/2+1) / (Gamma(a/2+1/2) 2^a))`.
pub fn eta_series_check(a: &BigReal, ctx: &PrecisionContext) -> Result<VerificationReport> {
    check_unit_disc(a, "eta series")?;
    if a.is_zero() {
        return Ok(trivial_zero("cm1a", ctx));
    }
    let w = bits_for(a, ctx);
    let af = Float::with_val(w, a.as_float());
    let (lhs, out) = accelerated_series(&af, w, ctx, eta_float)?;
    let rhs = eta_series_closed_form_numerator(&af, w)? / &af;
    Ok(ReportBuilder::new("cm1a", ctx)
        .param("a", a)
        .series(&out)
        .detail("series_terms", out.terms)
        .real(&lhs, &rhs))
}

/// `S(a) = sum_{j>=1} zeta(1+j) (-a)^j / (1+j)` evaluated as a series.
fn zeta_series(a: &Float, w: u32, ctx: &PrecisionContext) -> Result<(Float, SeriesOutcome)> {
    if a.is_zero() {
        let zero = Float::with_val(w, 0);
        let out = SeriesOutcome {
            sum: zero.clone(),
            terms: 0,
            last_term: zero.clone(),
            tail_bound: zero.clone(),
            converged: true,
        };
        return Ok((zero, out));
    }
    accelerated_series(a, w, ctx, zeta_float)
}

/// `sum_{j>=1} zeta(1+j) (-a)^j / (1+j) = -ln Gamma(a+1)/a - gamma`.
///
/// The splitting identity `S(a) = (1/a) ln(...) + S(a/2)` is evaluated too and
/// its error recorded under `splitting_abs_error`.
pub fn zeta_series_check(a: &BigReal, ctx: &PrecisionContext) -> Result<VerificationReport> {
    check_unit_disc(a, "zeta series")?;
    if a.is_zero() {
        return Ok(trivial_zero("sc1a", ctx));
    }
    let w = bits_for(a, ctx);
    let af = Float::with_val(w, a.as_float());
    let (lhs, out) = zeta_series(&af, w, ctx)?;
    let lg = ln_gamma_float(&(Float::with_val(w, &af) + 1u32), w)?;
    let rhs = Float::with_val(w, -lg / &af) - euler_gamma_float(w);
    let split = splitting_rhs(&af, w, ctx)?;
    let split_err = Float::with_val(w, &lhs - &split.0).abs();
    Ok(ReportBuilder::new("sc1a", ctx)
        .param("a", a)
        .series(&out)
        .detail("series_terms", out.terms)
        .detail("splitting_abs_error", BigReal::from_f64(split_err.to_f64(), &ctx_short(ctx)))
        .real(&lhs, &rhs))
}

fn ctx_short(ctx: &PrecisionContext) -> PrecisionContext {
    let mut c = ctx.clone();
    c.digits = 10;
    c
}

/// `(1/a) ln(sqrt(pi) Gamma(a/2+1) / (Gamma(a/2+1/2) 2^a)) + S(a/2)`.
fn splitting_rhs(a: &Float, w: u32, ctx: &PrecisionContext) -> Result<(Float, SeriesOutcome)> {
    let closed = eta_series_closed_form_numerator(a, w)? / a;
    let half = Float::with_val(w, a / 2u32);
    let (s_half, out) = zeta_series(&half, w, ctx)?;
    Ok((closed + s_half, out))
}

/// Splitting identity `S(a) = (1/a) ln(sqrt(pi) Gamma(a/2+1)/(Gamma(a/2+1/2) 2^a)) + S(a/2)`
/// from three independent evaluations: the series at `a`, the closed form,
/// and the series at `a/2`. The functional-equation solution
/// `sum_j g(a/2^j)` is recorded as a fourth value.
pub fn cm1b_check(a: &BigReal, ctx: &PrecisionContext) -> Result<VerificationReport> {
    check_unit_disc(a, "splitting identity")?;
    if a.is_zero() {
        return Ok(trivial_zero("cm1b", ctx));
    }
    let w = bits_for(a, ctx);
    let af = Float::with_val(w, a.as_float());
    let (lhs, out_full) = zeta_series(&af, w, ctx)?;
    let (rhs, out_half) = splitting_rhs(&af, w, ctx)?;
    let engine = series_outcome(&zeta_splitting(), &af, ctx)?;
    let engine_err = Float::with_val(w, &engine.sum - &lhs).abs();
    Ok(ReportBuilder::new("cm1b", ctx)
        .param("a", a)
        .terms(out_full.terms + out_half.terms)
        .tail(out_full.tail_bound.to_f64() + out_half.tail_bound.to_f64())
        .converged(out_full.converged && out_half.converged)
        .detail("funceq_solution", BigReal::from_float(&engine.sum, ctx))
        .detail("funceq_terms", engine.terms)
        .detail("funceq_abs_error", BigReal::from_f64(engine_err.to_f64(), &ctx_short(ctx)))
        .real(&lhs, &rhs))
}

/// `sum_{j>=1} (2^j ln(Gamma(a/2^j+1)/Gamma(a/2^j+1/2)) + 2^(j-1) ln pi - 2 a ln 2) + 2 ln Gamma(a+1) = -2 gamma a`,
/// with the sum evaluated as `a f(a)`, `f` solving `f(y) = g(y) + f(y/2)` with `g` from [`rs2_summand`].
pub fn rs2_check(a: &BigReal, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let w = ctx.work_bits();
    let af = Float::with_val(w, a.as_float());
    if af <= -1 {
        return Err(Error::domain("Gamma-ratio series requires a > -1"));
    }
    let out = series_outcome(&rs2_summand(), &af, ctx)?;
    let mut lhs = Float::with_val(w, &af * &out.sum);
    lhs += ln_gamma_float(&(Float::with_val(w, &af) + 1u32), w)? * 2u32;
    let rhs = Float::with_val(w, -euler_gamma_float(w) * &af) * 2u32;
    Ok(ReportBuilder::new("rs2", ctx)
        .param("a", a)
        .series(&out)
        .detail("summand_series", BigReal::from_float(&Float::with_val(w, &af * &out.sum), ctx))
        .real(&lhs, &rhs))
}

/// `Gamma(1+2a) prod_{j>=0} 2^(-2a) (sqrt(pi) Gamma(a/2^j+1)/Gamma(a/2^j+1/2))^(2^j) = e^(-2 gamma a)`,
/// evaluated in log space as `ln Gamma(1+2a) + a f(a)` for [`r0a_summand`].
pub fn r0a_product_check(a: &BigReal, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let w = ctx.work_bits();
    let af = Float::with_val(w, a.as_float());
    if Float::with_val(w, &af * 2u32) <= -1 {
        return Err(Error::domain("Gamma(1+2a) and Gamma(a+1/2) need a > -1/2"));
    }
    let out = series_outcome(&r0a_summand(), &af, ctx)?;
    let mut log_lhs = Float::with_val(w, &af * &out.sum);
    log_lhs += ln_gamma_float(&(Float::with_val(w, &af * 2u32) + 1u32), w)?;
    let log_rhs = Float::with_val(w, -euler_gamma_float(w) * &af) * 2u32;
    Ok(ReportBuilder::new("r0a", ctx)
        .param("a", a)
        .series(&out)
        .detail("log_lhs", BigReal::from_float(&log_lhs, ctx))
        .real(&log_lhs.exp(), &log_rhs.exp()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn br(x: &str, ctx: &PrecisionContext) -> BigReal {
        BigReal::parse(x, ctx).unwrap()
    }

    #[test]
    fn eta_series_at_half() {
        let c = ctx();
        let r = eta_series_check(&br("0.5", &c), &c).unwrap();
        assert!(r.passed(), "{}", r.abs_error);
        assert!(r.abs_error_f64() < 1e-25);
        assert!(r.terms_used <= 120);
        assert_eq!(r.lhs.as_real().unwrap().to_decimal_digits(10), "-0.1515228704");
    }

    #[test]
    fn eta_series_at_minus_half() {
        let c = ctx();
        let r = eta_series_check(&br("-0.5", &c), &c).unwrap();
        assert!(r.passed(), "{}", r.abs_error);
        assert!(r.terms_used <= 120);
    }

    #[test]
    fn zeta_series_at_half() {
        let c = ctx();
        let r = zeta_series_check(&br("0.5", &c), &c).unwrap();
        assert!(r.passed(), "{}", r.abs_error);
        assert_eq!(r.rhs.as_real().unwrap().to_decimal_digits(10), "-0.3356511896");
        assert!(r.details["splitting_abs_error"].parse::<f64>().unwrap() < 1e-25);
    }

    #[test]
    fn zero_argument_is_trivial_pass() {
        let c = ctx();
        for check in [eta_series_check, zeta_series_check, cm1b_check] {
            let r = check(&br("0", &c), &c).unwrap();
            assert!(r.passed());
            assert_eq!(r.lhs.to_f64(), 0.0);
        }
    }

    #[test]
    fn unit_disc_enforced() {
        let c = ctx();
        assert!(eta_series_check(&br("1", &c), &c).is_err());
        assert!(zeta_series_check(&br("-1.2", &c), &c).is_err());
    }

    #[test]
    fn splitting_identity() {
        let c = ctx();
        let r = cm1b_check(&br("0.6", &c), &c).unwrap();
        assert!(r.passed(), "{}", r.abs_error);
        assert!(r.details["funceq_abs_error"].parse::<f64>().unwrap() < 1e-25);
    }

    #[test]
    fn gamma_ratio_series() {
        let c = ctx();
        for a in ["0.25", "0.5", "0.9", "0", "-0.5"] {
            let r = rs2_check(&br(a, &c), &c).unwrap();
            assert!(r.passed(), "a = {a}: {}", r.abs_error);
        }
    }

    #[test]
    fn gamma_ratio_product() {
        let c = ctx();
        for a in ["0.25", "0.5", "0.9", "0"] {
            let r = r0a_product_check(&br(a, &c), &c).unwrap();
            assert!(r.passed(), "a = {a}: {}", r.abs_error);
        }
        let r = r0a_product_check(&br("0.25", &c), &c).unwrap();
        assert_eq!(r.rhs.as_real().unwrap().to_decimal_digits(7), "0.7493060");
        assert!(r0a_product_check(&br("-0.5", &c), &c).is_err());
    }
}
