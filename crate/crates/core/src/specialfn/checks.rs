use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use super::constants::ln_pi_float;
use super::gamma::{digamma_float, ln_gamma_float};
use super::zeta::{eta_float, zeta_euler_maclaurin};
use crate::error::{Error, Result};
use crate::mpcore::{BigReal, PrecisionContext};
use crate::report::{ReportBuilder, Tolerance, VerificationReport};

fn work(x: &BigReal, ctx: &PrecisionContext) -> Float {
    Float::with_val(ctx.work_bits(), x.as_float())
}

/// `ln Gamma(1+a) = a ln 2 - ln(pi)/2 + ln Gamma(a/2 + 1/2) + ln Gamma(1 + a/2)`.
pub fn duplication_check(a: &BigReal, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let w = ctx.work_bits();
    let a = work(a, ctx);
    if a <= -1 {
        return Err(Error::domain("duplication check requires a > -1"));
    }
    let lhs = ln_gamma_float(&Float::with_val(w, &a + 1u32), w)?;
    let half = Float::with_val(w, &a / 2u32);
    let mut rhs = Float::with_val(w, &a * Float::with_val(w, Constant::Log2));
    rhs -= ln_pi_float(w) / 2u32;
    rhs += ln_gamma_float(&Float::with_val(w, &half + 0.5f64), w)?;
    rhs += ln_gamma_float(&Float::with_val(w, &half + 1u32), w)?;
    Ok(ReportBuilder::new("dargid", ctx).param("a", a.to_f64()).real(&lhs, &rhs))
}

/// Gauss multiplication in log form:
/// `ln Gamma(n a) = (1-n)/2 ln(2 pi) + (n a - 1/2) ln n + sum_{k<n} ln Gamma(a + k/n)`.
pub fn gauss_multiplication_check(n: u32, a: &BigReal, ctx: &PrecisionContext) -> Result<VerificationReport> {
    if n < 1 {
        return Err(Error::domain("multiplication order must be >= 1"));
    }
    let w = ctx.work_bits();
    let a = work(a, ctx);
    if a <= 0 {
        return Err(Error::domain("multiplication check requires a > 0"));
    }
    let lhs = ln_gamma_float(&Float::with_val(w, &a * n), w)?;
    let two_pi = Float::with_val(w, Constant::Pi) * 2u32;
    let ln_n = Float::with_val(w, n).ln();
    let mut rhs = two_pi.ln() * (1 - n as i64) / 2u32;
    rhs += (Float::with_val(w, &a * n) - 0.5f64) * &ln_n;
    for k in 0..n {
        let shift = Float::with_val(w, k) / n;
        rhs += ln_gamma_float(&Float::with_val(w, &a + &shift), w)?;
    }
    Ok(ReportBuilder::new("gauss", ctx)
        .param("n", n)
        .param("a", a.to_f64())
        .real(&lhs, &rhs))
}

/// `eta(n) = (1 - 2^(1-n)) zeta(n)`, with `eta` from the accelerated
/// alternating series and `zeta` from Euler-Maclaurin summation.
pub fn eta_zeta_relation_check(n: u32, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let w = ctx.work_bits();
    let eta = eta_float(n, w)?;
    let zeta = zeta_euler_maclaurin(n, w)?;
    let factor = 1 - Float::with_val(w, Float::i_exp(1, 1 - n as i32));
    let rhs = Float::with_val(w, &zeta * &factor);
    Ok(ReportBuilder::new("etadef", ctx)
        .param("n", n)
        .tolerance(Tolerance::exact(ctx))
        .detail("zeta", BigReal::from_float(&zeta, ctx))
        .real(&eta, &rhs))
}

/// `psi(x)` against the central difference `(ln Gamma(x+h) - ln Gamma(x-h)) / 2h`
/// with `h = 10^-(digits/3)`.
pub fn digamma_derivative_check(x: &BigReal, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let w = ctx.work_bits();
    let x = work(x, ctx);
    let third = (ctx.digits / 3) as i32;
    let h = Float::with_val(w, 10).pow(-third);
    if x <= h {
        return Err(Error::domain("finite-difference check requires x > h"));
    }
    let up = ln_gamma_float(&Float::with_val(w, &x + &h), w)?;
    let down = ln_gamma_float(&Float::with_val(w, &x - &h), w)?;
    let lhs = Float::with_val(w, up - down) / Float::with_val(w, &h * 2u32);
    let rhs = digamma_float(&x, w)?;
    let tol = crate::mpcore::pow10(-third);
    Ok(ReportBuilder::new("psi_fd", ctx)
        .param("x", x.to_f64())
        .tolerance(Tolerance::new(tol, 0.0))
        .real(&lhs, &rhs))
}

/// `ln Gamma(x+1) - ln Gamma(x) = ln x`.
pub fn lngamma_recurrence_check(x: &BigReal, ctx: &PrecisionContext) -> Result<VerificationReport> {
    let w = ctx.work_bits();
    let x = work(x, ctx);
    let lhs = ln_gamma_float(&Float::with_val(w, &x + 1u32), w)? - ln_gamma_float(&x, w)?;
    let rhs = Float::with_val(w, x.ln_ref());
    Ok(ReportBuilder::new("lngamma_rec", ctx)
        .param("x", x.to_f64())
        .tolerance(Tolerance::new(4.0 * ctx.tail_tolerance, 0.0))
        .real(&lhs, &rhs))
}
