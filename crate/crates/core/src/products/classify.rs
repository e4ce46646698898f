use std::fmt;

use rug::Integer;
use serde::Serialize;

use crate::mpcore::ExactArgument;

/// Exact position of an argument relative to the exceptional sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArgumentClass {
    Regular,
    /// `|a| = (2n-1) pi`
    OddPiMultiple { n: u64 },
    /// `|a| = 2^m (2n-1) pi` with `m >= 1`
    EvenPiMultiple { m: u32, n: u64 },
    /// `|a| = (2n+1) pi / 2^k` with `k >= 1`
    PoleDyadic { k: u32 },
}

impl ArgumentClass {
    pub fn is_pi_multiple(&self) -> bool {
        matches!(self, ArgumentClass::OddPiMultiple { .. } | ArgumentClass::EvenPiMultiple { .. })
    }

    /// `(m, n)` of `|a| = 2^m (2n-1) pi`, with `m = 0` for odd multiples.
    pub fn pi_decomposition(&self) -> Option<(u32, u64)> {
        match *self {
            ArgumentClass::OddPiMultiple { n } => Some((0, n)),
            ArgumentClass::EvenPiMultiple { m, n } => Some((m, n)),
            _ => None,
        }
    }
}

impl fmt::Display for ArgumentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArgumentClass::Regular => write!(f, "regular"),
            ArgumentClass::OddPiMultiple { n } => write!(f, "odd_pi_multiple(n={n})"),
            ArgumentClass::EvenPiMultiple { m, n } => write!(f, "even_pi_multiple(m={m}, n={n})"),
            ArgumentClass::PoleDyadic { k } => write!(f, "pole_dyadic(k={k})"),
        }
    }
}

/// Classify `a` exactly from its rational and pi parts. The sign of `a` is
/// ignored, and `a = 0` is regular.
pub fn classify(a: &ExactArgument) -> ArgumentClass {
    let Some(s) = a.as_pi_multiple() else {
        return ArgumentClass::Regular;
    };
    if *s == 0 {
        return ArgumentClass::Regular;
    }
    let num = Integer::from(s.numer().abs_ref());
    let den = s.denom();
    if *den == 1 {
        let m = num.find_one(0).unwrap_or(0);
        let odd = Integer::from(&num >> m);
        let n = (odd + 1u32) / 2u32;
        let n = n.to_u64().unwrap_or(u64::MAX);
        return if m == 0 {
            ArgumentClass::OddPiMultiple { n }
        } else {
            ArgumentClass::EvenPiMultiple { m, n }
        };
    }
    if den.is_power_of_two() {
        let k = den.find_one(0).unwrap_or(0);
        return ArgumentClass::PoleDyadic { k };
    }
    ArgumentClass::Regular
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn class(text: &str) -> ArgumentClass {
        classify(&text.parse().unwrap())
    }

    #[test]
    fn worked_examples() {
        assert_eq!(class("3*pi"), ArgumentClass::OddPiMultiple { n: 2 });
        assert_eq!(class("12*pi"), ArgumentClass::EvenPiMultiple { m: 2, n: 2 });
        assert_eq!(class("3/8*pi"), ArgumentClass::PoleDyadic { k: 3 });
        assert_eq!(class("pi"), ArgumentClass::OddPiMultiple { n: 1 });
        assert_eq!(class("-2*pi"), ArgumentClass::EvenPiMultiple { m: 1, n: 1 });
        assert_eq!(class("pi/3"), ArgumentClass::Regular);
        assert_eq!(class("1"), ArgumentClass::Regular);
        assert_eq!(class("0"), ArgumentClass::Regular);
        assert_eq!(class("1 + pi"), ArgumentClass::Regular);
        assert_eq!(class("pi/2"), ArgumentClass::PoleDyadic { k: 1 });
    }

    proptest! {
        #[test]
        fn decomposition_is_unique(m in 0u32..20, n in 1i64..10_000) {
            let s = (2 * n - 1) * (1i64 << m);
            let c = classify(&ExactArgument::pi_fraction(s, 1));
            prop_assert_eq!(c.pi_decomposition(), Some((m, n as u64)));
        }

        #[test]
        fn dyadic_poles(k in 1u32..30, n in 0i64..1000) {
            let c = classify(&ExactArgument::pi_fraction(2 * n + 1, 1i64 << k));
            prop_assert_eq!(c, ArgumentClass::PoleDyadic { k });
        }
    }
}
