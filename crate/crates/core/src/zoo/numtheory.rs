//! Small-integer number theory.

use crate::error::{Error, Result};

pub fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division, primes ascending with exponents.
pub fn factorize(mut n: u128) -> Vec<(u128, u32)> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n as u128)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p as u64 * (p as u64 - 1))
}

/// `Ω(n)`: prime factors counted with multiplicity.
pub fn big_omega(n: u64) -> u32 {
    factorize(n as u128).iter().map(|&(_, e)| e).sum()
}

pub fn is_square_free(n: u64) -> bool {
    factorize(n as u128).iter().all(|&(_, e)| e == 1)
}

pub fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

/// Multiplicative order of `a` modulo `m`, if `a` is a unit.
pub fn mult_order(a: u64, m: u64) -> Option<u64> {
    if gcd(a as u128, m as u128) != 1 {
        return None;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 % m {
        x = x * a % m;
        k += 1;
    }
    Some(k)
}

/// Smallest `ω ∈ {2, …, p-1}` of multiplicative order exactly `n` (`ω = 1` when `n = 1`).
pub fn smallest_root_of_unity(p: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(1);
    }
    (2..p).find(|&w| mult_order(w, p) == Some(n))
}

/// `gcd(n, φ(n)) = 1`.
pub fn ci_order_condition(n: u64) -> bool {
    n >= 1 && gcd(n as u128, euler_phi(n) as u128) == 1
}

fn checked_pow(a: u128, k: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(a)?;
    }
    Some(acc)
}

/// Smallest primitive prime divisor of `aᵏ − 1`, i.e. a prime dividing
/// `aᵏ − 1` and no `aˡ − 1` with `ℓ < k`.
///
/// Every such prime is `≡ 1 (mod k)`, so trial division only visits that
/// residue class after the common factors with `aᵈ − 1` (`d | k`, `d < k`)
/// have been divided out. Errors when `aᵏ` overflows 128 bits.
pub fn zsigmondy_ppd(a: u64, k: u32) -> Result<Option<u128>> {
    if a < 2 || k < 2 {
        return Err(Error::Precondition("need a, k >= 2".into()));
    }
    let a = a as u128;
    let overflow = || Error::Unsupported(format!("{a}^{k} exceeds 128 bits"));
    let mut m = checked_pow(a, k).ok_or_else(overflow)? - 1;
    for d in (1..k).filter(|d| k.is_multiple_of(*d)) {
        let other = checked_pow(a, d).ok_or_else(overflow)? - 1;
        loop {
            let g = gcd(m, other);
            if g == 1 {
                break;
            }
            m /= g;
        }
    }
    if m == 1 {
        return Ok(None);
    }
    let step = k as u128;
    let mut p = step + 1;
    while p * p <= m {
        if m % p == 0 {
            return Ok(Some(p));
        }
        p += step;
    }
    Ok(Some(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zsigmondy_cases() {
        assert_eq!(zsigmondy_ppd(2, 6).unwrap(), None);
        assert_eq!(zsigmondy_ppd(3, 2).unwrap(), None);
        assert_eq!(zsigmondy_ppd(7, 2).unwrap(), None);
        assert_eq!(zsigmondy_ppd(2, 4).unwrap(), Some(5));
        assert_eq!(zsigmondy_ppd(2, 11).unwrap(), Some(23));
        assert_eq!(zsigmondy_ppd(5, 2).unwrap(), Some(3));
        assert!(zsigmondy_ppd(1, 3).is_err());
        assert!(matches!(zsigmondy_ppd(1 << 40, 4), Err(Error::Unsupported(_))));
    }

    #[test]
    fn order_condition() {
        assert!(ci_order_condition(15));
        assert!(!ci_order_condition(21));
        assert!(!ci_order_condition(4));
        assert!(ci_order_condition(1));
    }

    #[test]
    fn arithmetic_helpers() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(euler_phi(13), 12);
        assert_eq!(big_omega(12), 3);
        assert!(is_square_free(15) && !is_square_free(9));
        assert_eq!(smallest_root_of_unity(5, 4), Some(2));
        assert_eq!(smallest_root_of_unity(7, 3), Some(2));
        assert_eq!(smallest_root_of_unity(13, 4), Some(5));
        assert_eq!(smallest_root_of_unity(7, 4), None);
    }
}
