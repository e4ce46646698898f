use std::sync::{Mutex, OnceLock};

use rug::{Integer, Rational};

static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();

/// `B_2, B_4, ..., B_{2n}` as exact rationals.
///
/// Computed from the tangent numbers `T_k` by
/// `B_{2k} = (-1)^(k-1) 2k T_k / (4^k (4^k - 1))` and cached; the cache only
/// grows, so repeated calls return identical values.
pub fn bernoulli_even(n: usize) -> Vec<Rational> {
    let table = TABLE.get_or_init(|| Mutex::new(Vec::new()));
    let mut guard = table.lock().unwrap_or_else(|e| e.into_inner());
    if guard.len() < n {
        *guard = compute(n.max(2 * guard.len()));
    }
    guard[..n].to_vec()
}

fn tangent_numbers(n: usize) -> Vec<Integer> {
    let mut t: Vec<Integer> = vec![Integer::new(); n + 1];
    if n == 0 {
        return t;
    }
    t[1] = Integer::from(1);
    for k in 2..=n {
        t[k] = Integer::from(&t[k - 1] * (k as u64 - 1));
    }
    for k in 2..=n {
        for j in k..=n {
            let a = Integer::from(&t[j - 1] * (j - k) as u64);
            let b = Integer::from(&t[j] * (j - k + 2) as u64);
            t[j] = a + b;
        }
    }
    t
}

fn compute(n: usize) -> Vec<Rational> {
    let t = tangent_numbers(n);
    (1..=n)
        .map(|k| {
            let four_k = Integer::from(1) << (2 * k as u32);
            let den = &four_k * Integer::from(&four_k - 1u32);
            let num = Integer::from(&t[k] * (2 * k as u64));
            let b = Rational::from((num, den));
            if k % 2 == 0 {
                -b
            } else {
                b
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_tangent_numbers() {
        let t = tangent_numbers(5);
        let expect = [0, 1, 2, 16, 272, 7936];
        for (k, e) in expect.iter().enumerate() {
            assert_eq!(t[k], *e);
        }
    }

    #[test]
    fn first_bernoulli_numbers() {
        let b = bernoulli_even(6);
        let expect = [(1, 6), (-1, 30), (1, 42), (-1, 30), (5, 66), (-691, 2730)];
        for (got, (n, d)) in b.iter().zip(expect) {
            assert_eq!(*got, Rational::from((n, d)));
        }
    }

    #[test]
    fn cache_growth_is_consistent() {
        let small = bernoulli_even(4);
        let large = bernoulli_even(40);
        assert_eq!(&large[..4], &small[..]);
        // von Staudt-Clausen: denominator of B_40 is 2*3*5*11*41 = 13530
        assert_eq!(*large[19].denom(), 13530);
    }
}
