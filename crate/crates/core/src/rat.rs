//! Exact rationals and small integer helpers shared across modules.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"n"`, `"n/d"` or `"-n/d"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

pub fn fmt_q(r: &Q) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Residue of `r` modulo the prime `p`, or `None` when p divides the denominator.
pub fn q_mod(r: &Q, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let n = r.numer().mod_floor(&pb).to_u64().unwrap();
    let d = r.denom().mod_floor(&pb).to_u64().unwrap();
    if d == 0 {
        return None;
    }
    Some(mulmod(n, powmod(d, p - 2, p), p))
}

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'w: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'w;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `Some((p, n))` when `q = p^n` with p prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let f = prime_factors(q);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let mut n = 0;
    let mut m = q;
    while m > 1 {
        m /= p;
        n += 1;
    }
    Some((p, n))
}

/// Odd prime powers in `[lo, hi]`, ascending.
pub fn odd_prime_powers(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(3)..=hi)
        .filter(|&q| q % 2 == 1 && prime_power(q).is_some())
        .collect()
}

/// Squarefree part of a nonzero integer, sign included.
/// Trial division to 10^6; a cofactor that is not provably prime or a square is an error.
pub fn squarefree_part(n: &BigInt) -> Result<BigInt> {
    if n.is_zero() {
        return Err(Error::Domain("squarefree part of 0".into()));
    }
    let mut m = n.abs();
    let mut out = BigInt::one();
    let mut d: u64 = 2;
    while d <= 1_000_000 {
        let db = BigInt::from(d);
        if &db * &db > m {
            break;
        }
        let mut e = 0;
        while (&m % &db).is_zero() {
            m /= &db;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &db;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        let r = m.sqrt();
        if &r * &r == m {
            // square cofactor contributes nothing
        } else if BigInt::from(d) * BigInt::from(d) > m
            || m.to_u64().map(is_prime_u64).unwrap_or(false)
        {
            out *= &m;
        } else {
            return Err(Error::Domain(format!("could not factor cofactor {m}")));
        }
    }
    if n.is_negative() {
        out = -out;
    }
    Ok(out)
}

/// Squarefree part of a rational (of num·den).
pub fn squarefree_part_q(r: &Q) -> Result<BigInt> {
    squarefree_part(&(r.numer() * r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("-9/16").unwrap(), q(-9, 16));
        assert_eq!(parse_q("10").unwrap(), qi(10));
        assert_eq!(fmt_q(&q(81, 256)), "81/256");
        assert_eq!(fmt_q(&q(6, 3)), "2");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn reduction() {
        assert_eq!(q_mod(&q(1, 2), 7), Some(4));
        assert_eq!(q_mod(&q(-9, 16), 3), Some(0));
        assert_eq!(q_mod(&q(1, 3), 3), None);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(45), None);
        let v = odd_prime_powers(1, 30);
        assert_eq!(v, vec![3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29]);
        assert!(is_prime_u64(4611686018427387847));
        assert!(!is_prime_u64(4611686018427387849));
    }

    #[test]
    fn squarefree() {
        assert_eq!(squarefree_part(&BigInt::from(72)).unwrap(), BigInt::from(2));
        assert_eq!(squarefree_part(&BigInt::from(-20)).unwrap(), BigInt::from(-5));
        assert_eq!(squarefree_part(&BigInt::from(2401 * 2400)).unwrap(), BigInt::from(6));
    }
}
