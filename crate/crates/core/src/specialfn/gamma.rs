use rug::float::Constant;
use rug::Float;

use super::bernoulli::bernoulli_even;
use crate::error::{Error, Result};
use crate::mpcore::{BigReal, PrecisionContext};

/// Arguments are shifted up to at least this value before the asymptotic
/// series is applied; the series' smallest term is then below `2^-2prec`.
fn shift_threshold(prec: u32) -> u32 {
    prec / 4 + 10
}

/// Upper bound on the asymptotic-series length at working precision `w`.
fn max_terms(w: u32) -> usize {
    w as usize / 4 + 16
}

fn check_positive(x: &Float, name: &str) -> Result<()> {
    if x.is_nan() || *x <= 0 {
        return Err(Error::domain(format!("{name} requires x > 0, got {}", x.to_f64())));
    }
    Ok(())
}

/// Shift `x` to `z = x + n >= threshold` and return `(z, n)`.
fn shifted(x: &Float, w: u32, threshold: u32) -> (Float, u32) {
    let mut z = Float::with_val(w, x);
    let mut n = 0u32;
    if z < threshold {
        let gap = Float::with_val(w, threshold - Float::with_val(w, x)).ceil();
        n = gap.to_f64() as u32;
        z += n;
    }
    (z, n)
}

/// `ln Gamma(x)` for `x > 0`, accurate to about `2^-prec` absolute.
///
/// Shift by the recurrence `ln Gamma(x) = ln Gamma(x + n) - ln(x (x+1) ... (x+n-1))`,
/// then apply Stirling's series with Bernoulli coefficients.
pub fn ln_gamma_float(x: &Float, prec: u32) -> Result<Float> {
    check_positive(x, "lngamma")?;
    let w = prec + 32;
    let (z, n) = shifted(x, w, shift_threshold(prec));
    let mut shift = Float::with_val(w, 1);
    for i in 0..n {
        shift *= Float::with_val(w, x + i);
    }
    let ln_shift = shift.ln();

    // (z - 1/2) ln z - z + ln(2 pi) / 2
    let ln_z = Float::with_val(w, z.ln_ref());
    let mut s = Float::with_val(w, &z - 0.5f64) * &ln_z;
    s -= &z;
    let two_pi = Float::with_val(w, Constant::Pi) * 2u32;
    s += two_pi.ln() / 2u32;

    let eps = Float::with_val(w, Float::i_exp(1, -(w as i32)));
    let z2 = Float::with_val(w, &z * &z);
    let mut zpow = z.clone();
    for (i, b) in bernoulli_even(max_terms(w)).iter().enumerate() {
        let k = (i + 1) as u64;
        let term = Float::with_val(w, b) / (2 * k * (2 * k - 1)) / &zpow;
        s += &term;
        if term.abs() < eps {
            break;
        }
        zpow *= &z2;
    }
    Ok(Float::with_val(prec, s - ln_shift))
}

/// `psi(x) = d/dx ln Gamma(x)` for `x > 0`.
///
/// Shift by `psi(x) = psi(x + n) - sum 1/(x + i)`, then apply
/// `psi(z) ~ ln z - 1/(2z) - sum B_{2k} / (2k z^{2k})`.
pub fn digamma_float(x: &Float, prec: u32) -> Result<Float> {
    check_positive(x, "digamma")?;
    let w = prec + 32;
    let (z, n) = shifted(x, w, shift_threshold(prec));
    let mut harmonic = Float::with_val(w, 0);
    for i in 0..n {
        harmonic += Float::with_val(w, x + i).recip();
    }

    let mut s = Float::with_val(w, z.ln_ref());
    s -= Float::with_val(w, z.recip_ref()) / 2u32;

    let eps = Float::with_val(w, Float::i_exp(1, -(w as i32)));
    let z2 = Float::with_val(w, &z * &z);
    let mut zpow = z2.clone();
    for (i, b) in bernoulli_even(max_terms(w)).iter().enumerate() {
        let k = (i + 1) as u64;
        let term = Float::with_val(w, b) / (2 * k) / &zpow;
        s -= &term;
        if term.abs() < eps {
            break;
        }
        zpow *= &z2;
    }
    Ok(Float::with_val(prec, s - harmonic))
}

/// `ln Gamma(x)` for `x > 0`.
pub fn lngamma(x: &BigReal, ctx: &PrecisionContext) -> Result<BigReal> {
    let v = ln_gamma_float(&Float::with_val(ctx.work_bits(), x.as_float()), ctx.work_bits())?;
    Ok(BigReal::from_float(&v, ctx))
}

/// The digamma function `psi(x)` for `x > 0`.
pub fn digamma(x: &BigReal, ctx: &PrecisionContext) -> Result<BigReal> {
    let v = digamma_float(&Float::with_val(ctx.work_bits(), x.as_float()), ctx.work_bits())?;
    Ok(BigReal::from_float(&v, ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: u32 = 200;

    fn f(x: f64) -> Float {
        Float::with_val(P, x)
    }

    fn err(a: &Float, b: &Float) -> f64 {
        Float::with_val(P, a - b).abs().to_f64()
    }

    #[test]
    fn lngamma_at_one_and_two_is_zero() {
        assert!(ln_gamma_float(&f(1.0), P).unwrap().abs() < 1e-58);
        assert!(ln_gamma_float(&f(2.0), P).unwrap().abs() < 1e-58);
    }

    #[test]
    fn lngamma_at_half_is_ln_sqrt_pi() {
        let expect = Float::with_val(P, Constant::Pi).sqrt().ln();
        assert!(err(&ln_gamma_float(&f(0.5), P).unwrap(), &expect) < 1e-58);
    }

    #[test]
    fn lngamma_matches_factorials() {
        // ln Gamma(21) = ln 20!
        let fact = Float::with_val(P, rug::Integer::from(rug::Integer::factorial(20))).ln();
        assert!(err(&ln_gamma_float(&f(21.0), P).unwrap(), &fact) < 1e-55);
    }

    #[test]
    fn lngamma_one_and_a_half() {
        let ctx = PrecisionContext::with_digits(20);
        let v = lngamma(&BigReal::parse("1.5", &ctx).unwrap(), &ctx).unwrap();
        assert_eq!(v.to_decimal_digits(10), "-0.1207822376");
    }

    #[test]
    fn digamma_closed_forms() {
        let gamma = Float::with_val(P, Constant::Euler);
        let ln2 = Float::with_val(P, Constant::Log2);
        assert!(err(&digamma_float(&f(1.0), P).unwrap(), &Float::with_val(P, -&gamma)) < 1e-58);
        assert!(err(&digamma_float(&f(2.0), P).unwrap(), &Float::with_val(P, 1 - &gamma)) < 1e-58);
        let half = Float::with_val(P, -&gamma) - ln2 * 2u32;
        assert!(err(&digamma_float(&f(0.5), P).unwrap(), &half) < 1e-58);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(ln_gamma_float(&f(0.0), P).is_err());
        assert!(digamma_float(&f(-1.5), P).is_err());
    }

    #[test]
    fn tiny_arguments() {
        // ln Gamma(x) ~ -ln x - gamma x for small x
        let x = Float::with_val(P, Float::i_exp(1, -60));
        let v = ln_gamma_float(&x, P).unwrap();
        let approx = Float::with_val(P, -x.clone().ln()) - Float::with_val(P, Constant::Euler) * &x;
        assert!(err(&v, &approx) < 1e-30);
    }

    proptest! {
        #[test]
        fn recurrence_holds(x in 0.01f64..50.0) {
            let x = f(x);
            let lhs = ln_gamma_float(&Float::with_val(P, &x + 1u32), P).unwrap() - ln_gamma_float(&x, P).unwrap();
            prop_assert!(err(&lhs, &x.clone().ln()) < 1e-55);
        }

        #[test]
        fn digamma_recurrence_holds(x in 0.01f64..50.0) {
            let x = f(x);
            let lhs = digamma_float(&Float::with_val(P, &x + 1u32), P).unwrap() - digamma_float(&x, P).unwrap();
            prop_assert!(err(&lhs, &x.clone().recip()) < 1e-50);
        }
    }
}
