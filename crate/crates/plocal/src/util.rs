//! Small shared helpers: binomials, subset ranking, prime arithmetic.

use num::bigint::BigUint;
use num::traits::{One, Zero};

/// Binomial coefficient as `u128`. Panics on overflow, which the degree
/// ranges used in this crate never reach.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Binomial coefficient as an arbitrary-precision integer.
pub fn binomial_big(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Cached variant of [`subsets`]; the tables are tiny and shared across
/// threads.
pub fn subsets_cached(universe: usize, size: usize) -> std::sync::Arc<Vec<Vec<usize>>> {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Vec<Vec<usize>>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard.entry((universe, size)).or_insert_with(|| Arc::new(subsets(universe, size))).clone()
}

/// All `size`-element subsets of `{0, .., universe-1}` in lexicographic
/// order, each sorted ascending.
pub fn subsets(universe: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if size > universe {
        return out;
    }
    let mut cur: Vec<usize> = (0..size).collect();
    loop {
        out.push(cur.clone());
        // advance to the next subset in lex order
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != universe - size + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..size {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Rank of a sorted subset within the lex order produced by [`subsets`].
pub fn subset_rank(universe: usize, subset: &[usize]) -> usize {
    let size = subset.len();
    let mut rank: u128 = 0;
    let mut prev = 0;
    for (pos, &a) in subset.iter().enumerate() {
        for b in prev..a {
            rank += binomial(universe - 1 - b, size - pos - 1);
        }
        prev = a + 1;
    }
    rank as usize
}

/// Trial-division primality test for the primes used as localization targets.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization of a small integer as (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// p-adic valuation of a nonzero integer.
pub fn valuation_u64(mut n: u64, p: u64) -> u32 {
    assert!(n != 0 && p >= 2);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// p-adic valuation of a nonzero big integer.
pub fn valuation_big(n: &BigUint, p: u64) -> u32 {
    assert!(!n.is_zero());
    let p = BigUint::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial_big(20, 10), BigUint::from(184756u64));
    }

    #[test]
    fn subset_enumeration_and_rank() {
        let s = subsets(4, 2);
        assert_eq!(s.len(), 6);
        assert_eq!(s[0], vec![0, 1]);
        assert_eq!(s[5], vec![2, 3]);
        for (i, sub) in s.iter().enumerate() {
            assert_eq!(subset_rank(4, sub), i);
        }
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(3) && is_prime(97));
        assert!(!is_prime(1) && !is_prime(91));
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(valuation_u64(48, 2), 4);
    }
}
