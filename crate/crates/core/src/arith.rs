//! Integer helpers shared across the crate: extended Euclid, gcd of slices,
//! deterministic primality, and small exact-square tests.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Extended Euclidean algorithm. Returns `(g, x, y)` with `a*x + b*y = g`
/// and `g = gcd(a, b) >= 0`.
pub fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_x, mut x) = (BigInt::one(), BigInt::zero());
    let (mut old_y, mut y) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let tmp = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, tmp);
        let tmp = &old_x - &q * &x;
        old_x = std::mem::replace(&mut x, tmp);
        let tmp = &old_y - &q * &y;
        old_y = std::mem::replace(&mut y, tmp);
    }
    if old_r.is_negative() {
        (-old_r, -old_x, -old_y)
    } else {
        (old_r, old_x, old_y)
    }
}

/// gcd of an arbitrary list of integers (0 for the empty list).
pub fn gcd_all<'a, I: IntoIterator<Item = &'a BigInt>>(values: I) -> BigInt {
    let mut g = BigInt::zero();
    for v in values {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Deterministic Miller-Rabin for u64 (SPRP bases covering the full range).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Primality for BigInt. Values beyond u64 fall back to trial division,
/// which is plenty for the prime searches done here (witnesses stay small).
pub fn is_prime(n: &BigInt) -> bool {
    if !n.is_positive() {
        return false;
    }
    if let Ok(small) = u64::try_from(n) {
        return is_prime_u64(small);
    }
    let two = BigInt::from(2);
    if (n % &two).is_zero() {
        return false;
    }
    let mut d = BigInt::from(3);
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            return false;
        }
        d += 2;
    }
    true
}

/// If `n = k^2` for a non-negative integer `k`, returns `k`.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extended_gcd_bezout() {
        for (a, b) in [(240i64, 46), (-240, 46), (0, 5), (7, 0), (-4, -6)] {
            let (a, b) = (BigInt::from(a), BigInt::from(b));
            let (g, x, y) = extended_gcd(&a, &b);
            assert_eq!(&a * &x + &b * &y, g);
            assert_eq!(g, a.gcd(&b));
        }
    }

    #[test]
    fn gcd_all_basics() {
        let v = [BigInt::from(12), BigInt::from(18), BigInt::from(30)];
        assert_eq!(gcd_all(v.iter()), BigInt::from(6));
        assert_eq!(gcd_all([].iter()), BigInt::zero());
    }

    #[test]
    fn primality_small_and_carmichael() {
        let primes = [2u64, 3, 5, 7, 61, 97, 1_000_003, 4_000_000_007];
        for p in primes {
            assert!(is_prime_u64(p), "{p} is prime");
        }
        let composites = [1u64, 4, 561, 1729, 25_326_001, 3_215_031_751];
        for c in composites {
            assert!(!is_prime_u64(c), "{c} is composite");
        }
        assert!(is_prime(&BigInt::from(1_000_003)));
        assert!(!is_prime(&BigInt::from(-7)));
    }

    #[test]
    fn exact_sqrt_detects_squares() {
        assert_eq!(exact_sqrt(&BigInt::from(144)), Some(BigInt::from(12)));
        assert_eq!(exact_sqrt(&BigInt::from(145)), None);
        assert_eq!(exact_sqrt(&BigInt::from(0)), Some(BigInt::zero()));
        assert_eq!(exact_sqrt(&BigInt::from(-4)), None);
    }
}
