use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An input point `a = rational_part + pi_multiple * pi` held exactly.
///
/// Exceptional points of the trigonometric products (integer multiples of
/// pi, dyadic fractions of pi) are recognised from `pi_multiple` without any
/// floating comparison.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactArgument {
    pub rational_part: Rational,
    pub pi_multiple: Rational,
}

impl ExactArgument {
    pub fn new(rational_part: Rational, pi_multiple: Rational) -> Self {
        ExactArgument {
            rational_part,
            pi_multiple,
        }
    }

    pub fn zero() -> Self {
        Self::new(Rational::new(), Rational::new())
    }

    pub fn rational(r: impl Into<Rational>) -> Self {
        Self::new(r.into(), Rational::new())
    }

    /// `(num/den) * pi`
    pub fn pi_fraction(num: i64, den: i64) -> Self {
        Self::new(Rational::new(), Rational::from((num, den)))
    }

    /// `num/den`
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(Rational::from((num, den)), Rational::new())
    }

    /// Exact rational parsed from a decimal literal such as `0.3` or `1e-6`.
    pub fn decimal(text: &str) -> Result<Self> {
        Ok(Self::rational(parse_rational_literal(text)?))
    }

    pub fn is_zero(&self) -> bool {
        self.rational_part == 0 && self.pi_multiple == 0
    }

    /// `Some(s)` when the argument is exactly `s * pi`.
    pub fn as_pi_multiple(&self) -> Option<&Rational> {
        (self.rational_part == 0).then_some(&self.pi_multiple)
    }

    /// Multiply by an exact rational.
    pub fn scale(&self, factor: &Rational) -> Self {
        Self::new(
            Rational::from(&self.rational_part * factor),
            Rational::from(&self.pi_multiple * factor),
        )
    }

    pub fn scale_int(&self, factor: i64) -> Self {
        self.scale(&Rational::from(factor))
    }

    /// `q^j * a` for integer `q` (negative `j` divides).
    pub fn scale_pow(&self, q: u32, j: i32) -> Self {
        let p = Integer::from(q).pow(j.unsigned_abs());
        let factor = if j >= 0 {
            Rational::from(p)
        } else {
            Rational::from((Integer::from(1), p))
        };
        self.scale(&factor)
    }

    pub fn add(&self, other: &ExactArgument) -> Self {
        Self::new(
            Rational::from(&self.rational_part + &other.rational_part),
            Rational::from(&self.pi_multiple + &other.pi_multiple),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(
            Rational::from(-&self.rational_part),
            Rational::from(-&self.pi_multiple),
        )
    }

    /// Exact sign when decidable without evaluation, otherwise decided by a
    /// high-precision comparison (`r + s*pi` is never zero unless both are).
    pub fn signum(&self) -> i32 {
        let sr = self.rational_part.cmp0() as i32;
        let ss = self.pi_multiple.cmp0() as i32;
        if sr == 0 || ss == 0 || sr == ss {
            return if sr != 0 { sr } else { ss };
        }
        let v = self.to_float(256);
        if v.is_sign_negative() {
            -1
        } else {
            1
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Value as a float at `prec` bits. The pi multiple is reduced exactly
    /// modulo 2 first only by callers that need angles; this is the plain value.
    pub fn to_float(&self, prec: u32) -> rug::Float {
        use rug::float::Constant;
        use rug::Float;
        let mag = self.magnitude_bits();
        let p = prec + mag + 8;
        let r = Float::with_val(p, &self.rational_part);
        let pi = Float::with_val(p, Constant::Pi);
        let s = Float::with_val(p, &self.pi_multiple) * pi;
        Float::with_val(prec, r + s)
    }

    /// Rough upper bound on `log2 |a|`, used to size working precision.
    pub(crate) fn magnitude_bits(&self) -> u32 {
        fn bits(q: &Rational) -> u32 {
            if *q == 0 {
                return 0;
            }
            let n = q.numer().significant_bits() as i64;
            let d = q.denom().significant_bits() as i64;
            (n - d + 1).max(0) as u32
        }
        bits(&self.rational_part).max(bits(&self.pi_multiple) + 2)
    }
}

impl fmt::Display for ExactArgument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rational_part == 0, self.pi_multiple == 0) {
            (true, true) => f.write_str("0"),
            (false, true) => write!(f, "{}", self.rational_part),
            (true, false) => write!(f, "{}*pi", self.pi_multiple),
            (false, false) => {
                if self.pi_multiple < 0 {
                    write!(f, "{} - {}*pi", self.rational_part, Rational::from(-&self.pi_multiple))
                } else {
                    write!(f, "{} + {}*pi", self.rational_part, self.pi_multiple)
                }
            }
        }
    }
}

impl Serialize for ExactArgument {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl FromStr for ExactArgument {
    type Err = Error;

    /// Accepts sums of rational terms and rational multiples of pi, e.g.
    /// `1/2 + 1/3*pi`, `3*pi/8`, `-pi`, `2pi`, `0.25`, `1e-6`, `(1/3)*pi`.
    fn from_str(s: &str) -> Result<Self> {
        let tokens = tokenize(s)?;
        let mut parser = Parser { tokens, pos: 0, src: s };
        let value = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(Error::Parse(format!("trailing input in '{s}'")));
        }
        Ok(value)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(Rational),
    Pi,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            'π' => {
                push_pi(&mut out);
                i += 1;
            }
            'p' | 'P' if i + 1 < chars.len() && matches!(chars[i + 1], 'i' | 'I') => {
                push_pi(&mut out);
                i += 2;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && matches!(chars[i], 'e' | 'E') {
                    let mut k = i + 1;
                    if k < chars.len() && matches!(chars[k], '+' | '-') {
                        k += 1;
                    }
                    if k < chars.len() && chars[k].is_ascii_digit() {
                        while k < chars.len() && chars[k].is_ascii_digit() {
                            k += 1;
                        }
                        i = k;
                    }
                }
                let lit: String = chars[start..i].iter().collect();
                out.push(Token::Num(parse_rational_literal(&lit)?));
            }
            other => return Err(Error::Parse(format!("unexpected character '{other}' in '{s}'"))),
        }
    }
    Ok(out)
}

/// `2pi` is read as `2*pi`.
fn push_pi(out: &mut Vec<Token>) {
    if matches!(out.last(), Some(Token::Num(_)) | Some(Token::RParen)) {
        out.push(Token::Star);
    }
    out.push(Token::Pi);
}

/// Exact rational from a decimal literal with optional exponent.
pub fn parse_rational_literal(lit: &str) -> Result<Rational> {
    let lit = lit.trim();
    let bad = || Error::Parse(format!("invalid number '{lit}'"));
    let (mantissa, exponent) = match lit.find(['e', 'E']) {
        Some(k) => (&lit[..k], lit[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (lit, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from(Integer::from_str_radix(&digits, 10).map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Integer::from(10).pow(scale.unsigned_abs());
    if scale >= 0 {
        value *= Rational::from(ten);
    } else {
        value /= Rational::from(ten);
    }
    if neg {
        value = -value;
    }
    Ok(value)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} in '{}'", self.src))
    }

    fn expr(&mut self) -> Result<ExactArgument> {
        let mut acc = self.term()?;
        while let Some(tok) = self.peek() {
            match tok {
                Token::Plus => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Token::Minus => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?.neg());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ExactArgument> {
        let mut acc = self.unary()?;
        while let Some(tok) = self.peek() {
            match tok {
                Token::Star => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = if rhs.pi_multiple == 0 {
                        acc.scale(&rhs.rational_part)
                    } else if acc.pi_multiple == 0 {
                        rhs.scale(&acc.rational_part)
                    } else {
                        return Err(self.err("product of two pi terms is not linear in pi"));
                    };
                }
                Token::Slash => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    if rhs.pi_multiple != 0 {
                        return Err(self.err("division by a pi term"));
                    }
                    if rhs.rational_part == 0 {
                        return Err(self.err("division by zero"));
                    }
                    let inv = Rational::from(rhs.rational_part.recip_ref());
                    acc = acc.scale(&inv);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ExactArgument> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<ExactArgument> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(r)) => {
                self.pos += 1;
                Ok(ExactArgument::rational(r))
            }
            Some(Token::Pi) => {
                self.pos += 1;
                Ok(ExactArgument::pi_fraction(1, 1))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(self.err("missing ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.err("expected a number or pi")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(s: &str) -> ExactArgument {
        s.parse().unwrap()
    }

    #[test]
    fn parses_textual_forms() {
        assert_eq!(parse("1/2 + 1/3*pi"), ExactArgument::new(Rational::from((1, 2)), Rational::from((1, 3))));
        assert_eq!(parse("3*pi/8"), ExactArgument::pi_fraction(3, 8));
        assert_eq!(parse("3/8*pi"), ExactArgument::pi_fraction(3, 8));
        assert_eq!(parse("pi/3"), ExactArgument::pi_fraction(1, 3));
        assert_eq!(parse("-pi"), ExactArgument::pi_fraction(-1, 1));
        assert_eq!(parse("2pi"), ExactArgument::pi_fraction(2, 1));
        assert_eq!(parse("0.25"), ExactArgument::ratio(1, 4));
        assert_eq!(parse("1e-6"), ExactArgument::ratio(1, 1_000_000));
        assert_eq!(parse("-2.5E+1"), ExactArgument::ratio(-25, 1));
        assert_eq!(parse("(1/3)*pi - 1"), ExactArgument::new(Rational::from(-1), Rational::from((1, 3))));
        assert_eq!(parse("12π"), ExactArgument::pi_fraction(12, 1));
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in ["", "pi*pi", "1/0", "1/pi", "abc", "1..2", "(1", "1 2"] {
            assert!(bad.parse::<ExactArgument>().is_err(), "{bad} should fail");
        }
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(parse("2/4 + 2/6*pi").to_string(), "1/2 + 1/3*pi");
        assert_eq!(parse("1 - pi").to_string(), "1 - 1*pi");
        assert_eq!(parse("0").to_string(), "0");
        assert_eq!(parse("6/4").to_string(), "3/2");
    }

    #[test]
    fn signum_mixed_terms() {
        assert_eq!(parse("4 - pi").signum(), 1);
        assert_eq!(parse("3 - pi").signum(), -1);
        assert_eq!(parse("0").signum(), 0);
    }

    proptest! {
        #[test]
        fn textual_round_trip(rn in -1000i64..1000, rd in 1i64..1000, sn in -1000i64..1000, sd in 1i64..1000) {
            let a = ExactArgument::new(Rational::from((rn, rd)), Rational::from((sn, sd)));
            let back: ExactArgument = a.to_string().parse().unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
