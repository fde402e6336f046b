//! Prime fields with a word-sized modulus, used for randomized identity testing.

use crate::rat::{is_prime_u64, mulmod, powmod, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp64 {
    p: u64,
}

impl Fp64 {
    pub fn new(p: u64) -> Self {
        assert!(p > 2 && is_prime_u64(p), "{p} is not an odd prime");
        Fp64 { p }
    }

    /// A uniformly chosen odd prime with exactly `bits` bits.
    pub fn random_prime<R: Rng>(bits: u32, rng: &mut R) -> Self {
        assert!((3..=63).contains(&bits));
        let lo = 1u64 << (bits - 1);
        loop {
            let c = rng.random_range(lo..(lo << 1)) | 1;
            if is_prime_u64(c) {
                return Fp64 { p: c };
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.p as u128) as u64
    }
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.p - b % self.p)
    }
    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mulmod(a, b, self.p)
    }
    pub fn pow(&self, a: u64, e: u64) -> u64 {
        powmod(a, e, self.p)
    }
    pub fn inv(&self, a: u64) -> Option<u64> {
        (a % self.p != 0).then(|| powmod(a, self.p - 2, self.p))
    }
    pub fn from_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }
    pub fn from_bigint(&self, a: &BigInt) -> u64 {
        a.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }
    pub fn from_q(&self, r: &Q) -> Option<u64> {
        let d = self.inv(self.from_bigint(r.denom()))?;
        Some(self.mul(self.from_bigint(r.numer()), d))
    }
    pub fn legendre(&self, a: u64) -> i32 {
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        if self.pow(a, (self.p - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    /// Tonelli-Shanks square root.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        let p = self.p;
        let a = a % p;
        if a == 0 {
            return Some(0);
        }
        if self.legendre(a) != 1 {
            return None;
        }
        if p % 4 == 3 {
            return Some(self.pow(a, (p + 1) / 4));
        }
        let mut qq = p - 1;
        let mut s = 0;
        while qq % 2 == 0 {
            qq /= 2;
            s += 1;
        }
        let mut z = 2;
        while self.legendre(z) != -1 {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow(z, qq);
        let mut t = self.pow(a, qq);
        let mut r = self.pow(a, (qq + 1) / 2);
        while t != 1 {
            let mut i = 0;
            let mut tt = t;
            while tt != 1 {
                tt = self.mul(tt, tt);
                i += 1;
            }
            let b = self.pow(c, 1 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sqrt_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for bits in [20u32, 40, 62] {
            let f = Fp64::random_prime(bits, &mut rng);
            assert_eq!(64 - f.p().leading_zeros(), bits);
            for _ in 0..50 {
                let a = rng.random_range(0..f.p());
                let sq = f.mul(a, a);
                let r = f.sqrt(sq).unwrap();
                assert_eq!(f.mul(r, r), sq);
            }
        }
        let f = Fp64::new(17);
        assert_eq!(f.sqrt(3), None);
        assert_eq!(f.from_q(&crate::rat::q(1, 2)), Some(9));
    }
}
