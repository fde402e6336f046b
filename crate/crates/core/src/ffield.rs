//! Odd-characteristic finite fields F_q with Zech-logarithm tables.
//!
//! Elements are stored as exponents of a fixed generator, so multiplication is
//! addition mod q-1 and the discrete log is free. Addition goes through the
//! successor table `zech[k] = log(1 + g^k)`.
//!
//! The polynomial view of an element is its index `c0 + c1 p + ... + c_{n-1} p^{n-1}`.

use crate::error::{Error, Result};
use crate::rat::{is_prime_u64, prime_factors, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

pub const MAX_Q: u64 = 1 << 24;
const ZERO: u32 = u32::MAX;

/// A field element: zero, or `generator^k` with `k` in `[0, q-2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(ZERO);
    pub const ONE: FqElem = FqElem(0);

    pub fn is_zero(self) -> bool {
        self.0 == ZERO
    }

    /// Exponent of the generator, `None` for zero.
    pub fn exponent(self) -> Option<u32> {
        (!self.is_zero()).then_some(self.0)
    }
}

#[derive(Clone, Debug)]
pub struct FieldSpec {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    basis_trace: Vec<u32>,
}

// Dense polynomials over F_p, low degree first.
fn ptrim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn pmulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    prem(r, f, p)
}

fn prem(mut r: Vec<u64>, f: &[u64], p: u64) -> Vec<u64> {
    // f monic
    let n = f.len() - 1;
    while r.len() > n {
        let c = *r.last().unwrap();
        let sh = r.len() - 1 - n;
        if c != 0 {
            for (i, &fi) in f.iter().enumerate() {
                r[sh + i] = (r[sh + i] + p * p - c * fi % p) % p;
            }
        }
        r.pop();
    }
    ptrim(r)
}

fn ppowmod(a: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![1u64];
    let mut b = prem(a.to_vec(), f, p);
    while e > 0 {
        if e & 1 == 1 {
            r = pmulmod(&r, &b, f, p);
        }
        b = pmulmod(&b, &b, f, p);
        e >>= 1;
    }
    r
}

fn pgcd(a: Vec<u64>, b: Vec<u64>, p: u64) -> Vec<u64> {
    let (mut a, mut b) = (ptrim(a), ptrim(b));
    while !b.is_empty() {
        let lc = *b.last().unwrap();
        let inv = crate::rat::powmod(lc, p - 2, p);
        let monic: Vec<u64> = b.iter().map(|&c| c * inv % p).collect();
        let r = prem(a, &monic, p);
        a = monic;
        b = r;
    }
    a
}

fn psub_x(a: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    if r.len() < 2 {
        r.resize(2, 0);
    }
    r[1] = (r[1] + p - 1) % p;
    ptrim(r)
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = (f.len() - 1) as u64;
    let x = vec![0u64, 1];
    let pn = p.pow(n as u32);
    if psub_x(&ppowmod(&x, pn, f, p), p).len() > 0 {
        return false;
    }
    for r in prime_factors(n) {
        let h = ppowmod(&x, p.pow((n / r) as u32), f, p);
        let g = pgcd(f.to_vec(), psub_x(&h, p), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn digits(mut idx: u64, p: u64, n: u32) -> Vec<u64> {
    let mut d = Vec::with_capacity(n as usize);
    for _ in 0..n {
        d.push(idx % p);
        idx /= p;
    }
    ptrim(d)
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl FieldSpec {
    /// Builds F_{p^n} with the least irreducible modulus and least generator.
    pub fn new(p: u64, n: u32) -> Result<Self> {
        Self::with_generator_rank(p, n, 0)
    }

    /// Like [`FieldSpec::new`] but uses the `rank`-th generator in index order.
    pub fn with_generator_rank(p: u64, n: u32, rank: usize) -> Result<Self> {
        if p == 2 {
            return Err(Error::Field("characteristic 2 is not supported".into()));
        }
        if !is_prime_u64(p) {
            return Err(Error::Field(format!("p = {p} is not prime")));
        }
        if n == 0 {
            return Err(Error::Field("degree n must be at least 1".into()));
        }
        let q = (p as u128).checked_pow(n).unwrap_or(u128::MAX);
        if q > MAX_Q as u128 {
            return Err(Error::Field(format!("q = {p}^{n} exceeds the 2^24 table bound")));
        }
        let q = q as u64;
        let modulus = least_irreducible(p, n);
        let qm1 = q - 1;
        let facs = prime_factors(qm1);
        let mut found = 0usize;
        let mut gen = None;
        for idx in 1..q {
            let a = digits(idx, p, n);
            let ok = facs
                .iter()
                .all(|&r| ppowmod(&a, qm1 / r, &modulus, p) != vec![1]);
            if ok {
                if found == rank {
                    gen = Some(idx);
                    break;
                }
                found += 1;
            }
        }
        let gen = gen.ok_or_else(|| Error::Field(format!("no generator of rank {rank}")))?;
        let g = digits(gen, p, n);
        let mut exp = Vec::with_capacity(qm1 as usize);
        let mut log = vec![ZERO; q as usize];
        let mut cur = vec![1u64];
        for k in 0..qm1 {
            let idx = undigits(&cur, p) as u32;
            exp.push(idx);
            log[idx as usize] = k as u32;
            cur = pmulmod(&cur, &g, &modulus, p);
        }
        let zech = exp
            .iter()
            .map(|&idx| {
                // 1 + element: bump the constant digit
                let c0 = idx as u64 % p;
                let s = idx as u64 - c0 + (c0 + 1) % p;
                log[s as usize]
            })
            .collect();
        let basis_trace = (0..n)
            .map(|i| {
                let mut b = vec![0u64; i as usize + 1];
                b[i as usize] = 1;
                let mut acc = vec![0u64; n as usize];
                let mut cur = prem(b, &modulus, p);
                for _ in 0..n {
                    for (j, &c) in cur.iter().enumerate() {
                        acc[j] = (acc[j] + c) % p;
                    }
                    cur = ppowmod(&cur, p, &modulus, p);
                }
                acc[0] as u32
            })
            .collect();
        Ok(FieldSpec {
            p: p as u32,
            n,
            q: q as u32,
            modulus: modulus.iter().map(|&c| c as u32).collect(),
            generator: gen as u32,
            exp,
            log,
            zech,
            basis_trace,
        })
    }

    /// Builds the field of order `q`, which must be an odd prime power.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, n) = crate::rat::prime_power(q)
            .ok_or_else(|| Error::Field(format!("q = {q} is not a prime power")))?;
        Self::new(p, n)
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn q(&self) -> u64 {
        self.q as u64
    }
    /// Monic modulus coefficients, low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn generator(&self) -> FqElem {
        FqElem(1 % self.order())
    }
    /// Index (polynomial view) of the generator.
    pub fn generator_index(&self) -> u64 {
        self.generator as u64
    }

    fn order(&self) -> u32 {
        self.q - 1
    }

    pub fn zero(&self) -> FqElem {
        FqElem::ZERO
    }
    pub fn one(&self) -> FqElem {
        FqElem::ONE
    }

    pub fn from_index(&self, idx: u64) -> FqElem {
        FqElem(self.log[(idx % self.q as u64) as usize])
    }

    pub fn index(&self, a: FqElem) -> u64 {
        if a.is_zero() {
            0
        } else {
            self.exp[a.0 as usize] as u64
        }
    }

    /// Coefficients of the polynomial view, low degree first, padded to n.
    pub fn coeffs(&self, a: FqElem) -> Vec<u64> {
        let mut d = digits(self.index(a), self.p as u64, self.n);
        d.resize(self.n as usize, 0);
        d
    }

    /// Element from coefficients (low degree first, at most n of them).
    pub fn from_coeffs(&self, c: &[u64]) -> FqElem {
        assert!(c.len() <= self.n as usize, "too many coefficients");
        let p = self.p as u64;
        let c: Vec<u64> = c.iter().map(|&x| x % p).collect();
        self.from_index(undigits(&c, p))
    }

    pub fn from_int(&self, k: i64) -> FqElem {
        self.from_index(k.rem_euclid(self.p as i64) as u64)
    }

    pub fn from_bigint(&self, k: &BigInt) -> FqElem {
        let r = k.mod_floor(&BigInt::from(self.p)).to_u64().unwrap();
        self.from_index(r)
    }

    /// Reduction of a rational; `None` when p divides the denominator.
    pub fn from_q(&self, r: &Q) -> Option<FqElem> {
        let d = self.from_bigint(r.denom());
        if d.is_zero() {
            return None;
        }
        Some(self.div(self.from_bigint(r.numer()), d))
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.is_zero() || b.is_zero() {
            return FqElem::ZERO;
        }
        let s = a.0 as u64 + b.0 as u64;
        FqElem((s % self.order() as u64) as u32)
    }

    pub fn inv(&self, a: FqElem) -> FqElem {
        assert!(!a.is_zero(), "inverse of zero");
        FqElem((self.order() - a.0) % self.order())
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> FqElem {
        self.mul(a, self.inv(b))
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        if a.is_zero() {
            return a;
        }
        FqElem(((a.0 as u64 + (self.order() / 2) as u64) % self.order() as u64) as u32)
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let m = self.order();
        let d = (b.0 + m - a.0) % m;
        let z = self.zech[d as usize];
        if z == ZERO {
            FqElem::ZERO
        } else {
            FqElem(((a.0 as u64 + z as u64) % m as u64) as u32)
        }
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, a: FqElem, e: i64) -> FqElem {
        if a.is_zero() {
            return if e == 0 { FqElem::ONE } else { FqElem::ZERO };
        }
        let m = self.order() as i128;
        FqElem(((a.0 as i128 * e as i128).rem_euclid(m)) as u32)
    }

    /// Discrete log base the generator.
    pub fn dlog(&self, a: FqElem) -> Result<u64> {
        a.exponent()
            .map(|e| e as u64)
            .ok_or_else(|| Error::Domain("dlog of zero".into()))
    }

    pub fn is_square(&self, a: FqElem) -> bool {
        a.is_zero() || a.0 % 2 == 0
    }

    /// Quadratic character with chi(0) = 0.
    pub fn chi(&self, a: FqElem) -> i64 {
        if a.is_zero() {
            0
        } else if a.0 % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// The square root with the smaller exponent.
    pub fn sqrt(&self, a: FqElem) -> Option<FqElem> {
        if a.is_zero() {
            return Some(a);
        }
        (a.0 % 2 == 0).then_some(FqElem(a.0 / 2))
    }

    /// Absolute trace to F_p.
    pub fn trace(&self, a: FqElem) -> u64 {
        self.trace_index(self.index(a))
    }

    pub fn trace_index(&self, mut idx: u64) -> u64 {
        let p = self.p as u64;
        let mut t = 0;
        for &b in &self.basis_trace {
            t += (idx % p) * b as u64;
            idx /= p;
        }
        t % p
    }

    pub fn frobenius(&self, a: FqElem) -> FqElem {
        self.pow(a, self.p as i64)
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q as u64).map(|i| self.from_index(i))
    }

    /// Nonzero elements in exponent order.
    pub fn units(&self) -> impl Iterator<Item = FqElem> {
        (0..self.order()).map(FqElem)
    }

    /// Textual encoding: an integer for prime fields, `[c0,c1,...]` otherwise.
    pub fn format(&self, a: FqElem) -> String {
        if self.n == 1 {
            self.index(a).to_string()
        } else {
            let c: Vec<String> = self.coeffs(a).iter().map(|c| c.to_string()).collect();
            format!("[{}]", c.join(","))
        }
    }

    pub fn parse(&self, s: &str) -> Result<FqElem> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not an element of F_{}: {s:?}", self.q));
        if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let c: Vec<u64> = inner
                .split(',')
                .map(|x| x.trim().parse::<i64>().map(|v| v.rem_euclid(self.p as i64) as u64))
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad())?;
            if c.len() > self.n as usize {
                return Err(bad());
            }
            Ok(self.from_coeffs(&c))
        } else {
            let r = crate::rat::parse_q(s).map_err(|_| bad())?;
            self.from_q(&r).ok_or_else(bad)
        }
    }
}

fn least_irreducible(p: u64, n: u32) -> Vec<u64> {
    if n == 1 {
        return vec![0, 1];
    }
    // enumerate (c0, c1, ..., c_{n-1}) lexicographically with c0 most significant
    let total = p.pow(n);
    for k in 0..total {
        let mut c = vec![0u64; n as usize];
        let mut r = k;
        for i in (0..n as usize).rev() {
            c[i] = r % p;
            r /= p;
        }
        if c[0] == 0 {
            continue;
        }
        let mut f = c.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fields() {
        let f7 = FieldSpec::new(7, 1).unwrap();
        assert_eq!(f7.generator_index(), 3);
        assert_eq!(f7.dlog(f7.from_int(2)).unwrap(), 2);
        assert_eq!(f7.dlog(f7.from_int(3)).unwrap(), 1);
        let f5 = FieldSpec::new(5, 1).unwrap();
        assert_eq!(f5.generator_index(), 2);
        assert_eq!(f5.dlog(f5.from_int(4)).unwrap(), 2);
        let f9 = FieldSpec::new(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        assert_eq!(f9.coeffs(f9.generator()), vec![1, 1]);
    }

    #[test]
    fn rejects() {
        assert!(FieldSpec::new(2, 3).is_err());
        assert!(FieldSpec::new(9, 1).is_err());
        assert!(FieldSpec::new(3, 20).is_err());
        assert!(FieldSpec::new(5, 0).is_err());
    }

    #[test]
    fn squares_and_roots() {
        let f7 = FieldSpec::new(7, 1).unwrap();
        assert!(!f7.is_square(f7.from_int(-1)));
        let f5 = FieldSpec::new(5, 1).unwrap();
        let r = f5.sqrt(f5.from_int(4)).unwrap();
        assert_eq!(f5.index(r), 2);
        assert_eq!(f5.sqrt(f5.zero()), Some(f5.zero()));
    }

    #[test]
    fn traces() {
        let f9 = FieldSpec::new(3, 2).unwrap();
        assert_eq!(f9.trace(f9.from_coeffs(&[0, 1])), 0);
        assert_eq!(f9.trace(f9.one()), 2);
        let f7 = FieldSpec::new(7, 1).unwrap();
        assert_eq!(f7.trace(f7.from_int(4)), 4);
    }

    #[test]
    fn textual() {
        let f9 = FieldSpec::new(3, 2).unwrap();
        let a = f9.parse("[2,1]").unwrap();
        assert_eq!(f9.format(a), "[2,1]");
        let f7 = FieldSpec::new(7, 1).unwrap();
        assert_eq!(f7.index(f7.parse("1/2").unwrap()), 4);
    }
}
