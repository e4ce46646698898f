use rug::ops::Pow;
use rug::Float;

use super::bernoulli::bernoulli_even;
use crate::error::{Error, Result};
use crate::mpcore::{BigReal, PrecisionContext};

fn check_order(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("integer zeta/eta require n >= 2, got {n}")));
    }
    Ok(())
}

/// Dirichlet eta `eta(n) = sum_{k>=1} (-1)^(k-1) / k^n`.
///
/// Cohen-Villegas-Zagier acceleration of the alternating series: the error
/// after `N` terms is below `2 / (3 + sqrt 8)^N`.
pub fn eta_float(n: u32, prec: u32) -> Result<Float> {
    check_order(n)?;
    let w = prec + 32;
    // (3 + sqrt 8)^N > 2^(w+2): N = (w+2) ln2 / ln(3 + sqrt 8)
    let terms = ((w + 2) as f64 * 0.3931).ceil() as u32 + 1;
    let base = Float::with_val(w, 8).sqrt() + 3u32;
    let d = base.pow(terms);
    let d = (Float::with_val(w, d.recip_ref()) + &d) / 2u32;
    let mut b = Float::with_val(w, -1);
    let mut c = Float::with_val(w, -&d);
    let mut s = Float::with_val(w, 0);
    let big_n = terms as i64;
    for k in 0..terms as i64 {
        c = Float::with_val(w, &b - &c);
        let kp1 = Float::with_val(w, k + 1);
        s += Float::with_val(w, &c / kp1.pow(n));
        // b <- b (k + N)(k - N) / ((k + 1/2)(k + 1))
        b *= (k + big_n) * (k - big_n);
        b /= Float::with_val(w, k as f64 + 0.5) * (k + 1);
    }
    Ok(Float::with_val(prec, s / d))
}

/// Riemann zeta at an integer `n >= 2`, as `eta(n) / (1 - 2^(1-n))`.
pub fn zeta_float(n: u32, prec: u32) -> Result<Float> {
    let eta = eta_float(n, prec + 8)?;
    let factor = 1 - Float::with_val(prec + 8, Float::i_exp(1, 1 - n as i32));
    Ok(Float::with_val(prec, eta / factor))
}

/// Riemann zeta at an integer `n >= 2` by Euler-Maclaurin summation, used as
/// an independent route to check the `eta`/`zeta` relation.
pub fn zeta_euler_maclaurin(n: u32, prec: u32) -> Result<Float> {
    check_order(n)?;
    let w = prec + 32;
    let cutoff = (w / 4 + 10) as u64;
    let correction_terms = (w / 4 + 10) as usize;
    let s = n as u64;

    let mut sum = Float::with_val(w, 0);
    for k in 1..cutoff {
        sum += Float::with_val(w, k).pow(n).recip();
    }
    let big_n = Float::with_val(w, cutoff);
    let n_pow = Float::with_val(w, (&big_n).pow(n));
    // N^(1-s)/(s-1) + N^(-s)/2
    sum += Float::with_val(w, &big_n / &n_pow) / (s - 1);
    sum += Float::with_val(w, n_pow.recip_ref()) / 2u32;

    // sum_j B_{2j}/(2j)! s(s+1)...(s+2j-2) N^(-s-2j+1)
    let eps = Float::with_val(w, Float::i_exp(1, -(w as i32)));
    let n2 = Float::with_val(w, &big_n * &big_n);
    let mut rising = Float::with_val(w, s);
    let mut factorial = Float::with_val(w, 2);
    let mut power = Float::with_val(w, &n_pow * &big_n);
    for (i, b) in bernoulli_even(correction_terms).iter().enumerate() {
        let j = (i + 1) as u64;
        let term = Float::with_val(w, b) * &rising / &factorial / &power;
        sum += &term;
        if term.abs() < eps {
            break;
        }
        rising *= (s + 2 * j - 1) * (s + 2 * j);
        factorial *= (2 * j + 1) * (2 * j + 2);
        power *= &n2;
    }
    Ok(Float::with_val(prec, sum))
}

/// Dirichlet eta at an integer `n >= 2`.
pub fn eta_int(n: u32, ctx: &PrecisionContext) -> Result<BigReal> {
    Ok(BigReal::from_float(&eta_float(n, ctx.work_bits())?, ctx))
}

/// Riemann zeta at an integer `n >= 2`.
pub fn zeta_int(n: u32, ctx: &PrecisionContext) -> Result<BigReal> {
    Ok(BigReal::from_float(&zeta_float(n, ctx.work_bits())?, ctx))
}
