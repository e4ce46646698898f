use rug::float::Constant;
use rug::Float;

use crate::mpcore::{BigReal, PrecisionContext};

/// Euler-Mascheroni constant by the Brent-McMillan algorithm:
/// `gamma = U/V - ln n` with `U = sum A_k`, `V = sum B_k`, error `O(e^(-4n))`.
pub fn euler_gamma_float(prec: u32) -> Float {
    let n = (((prec + 10) as f64 * std::f64::consts::LN_2) / 4.0).ceil() as u64 + 1;
    let terms = (3.5911 * n as f64).ceil() as u64 + 1;
    // terms grow to about e^(2n) before the sums settle
    let w = prec + 32 + (3 * n) as u32;
    let n2 = Float::with_val(w, n * n);
    let mut a = -Float::with_val(w, n).ln();
    let mut b = Float::with_val(w, 1);
    let mut u = a.clone();
    let mut v = b.clone();
    for k in 1..=terms {
        b *= &n2;
        b /= k * k;
        a *= &n2;
        a /= k;
        a += &b;
        a /= k;
        u += &a;
        v += &b;
    }
    Float::with_val(prec, u / v)
}

pub fn ln2_float(prec: u32) -> Float {
    Float::with_val(prec, Constant::Log2)
}

pub fn ln3_float(prec: u32) -> Float {
    Float::with_val(prec, 3).ln()
}

pub fn ln_pi_float(prec: u32) -> Float {
    Float::with_val(prec + 8, Constant::Pi).ln()
}

/// The Euler-Mascheroni constant at the context precision.
pub fn euler_gamma(ctx: &PrecisionContext) -> BigReal {
    BigReal::from_float(&euler_gamma_float(ctx.work_bits()), ctx)
}
