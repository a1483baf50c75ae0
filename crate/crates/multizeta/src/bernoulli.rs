//! Ordinary Bernoulli numbers with the convention B_1 = -1/2, i.e. the
//! coefficients of t/(e^t - 1) = sum B_n t^n/n!.

use std::sync::Mutex;
use std::sync::OnceLock;

use num::bigint::BigInt;
use num::integer;

use crate::rational::Rational;

static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();

/// B_n, memoized. Computed from the recurrence
/// sum_{k=0}^{n} C(n+1,k) B_k = 0 (n >= 1), which fixes B_1 = -1/2.
pub fn bernoulli(n: u32) -> Rational {
    let cache = CACHE.get_or_init(|| Mutex::new(vec![Rational::one()]));
    let mut cache = cache.lock().unwrap();
    while cache.len() <= n as usize {
        let m = cache.len() as u32; // compute B_m
        if m >= 3 && m % 2 == 1 {
            cache.push(Rational::zero());
            continue;
        }
        let mut acc = Rational::zero();
        for k in 0..m {
            let b = binomial(m + 1, k);
            acc = acc + Rational::from_int(b) * &cache[k as usize];
        }
        let bm = -acc / Rational::from_int(m as i64 + 1);
        cache.push(bm);
    }
    cache[n as usize].clone()
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    integer::binomial(BigInt::from(n), BigInt::from(k))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(0), Rational::one());
        assert_eq!(bernoulli(1), Rational::new(-1, 2));
        assert_eq!(bernoulli(2), Rational::new(1, 6));
        assert_eq!(bernoulli(3), Rational::zero());
        assert_eq!(bernoulli(4), Rational::new(-1, 30));
        assert_eq!(bernoulli(12), Rational::new(-691, 2730));
    }

    #[test]
    fn recurrence_self_consistency() {
        // sum_{k=0}^{n} C(n+1,k) B_k = 0 for n >= 1
        for n in 1..=20u32 {
            let mut acc = Rational::zero();
            for k in 0..=n {
                acc = acc + Rational::from_int(binomial(n + 1, k)) * bernoulli(k);
            }
            assert!(acc.is_zero(), "recurrence failed at n={n}");
        }
    }

    #[test]
    fn factorial_and_binomial() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(2, 6), BigInt::from(0));
    }
}
