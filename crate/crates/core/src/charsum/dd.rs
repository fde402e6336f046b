//! Double-double floating point (about 106 significant bits).

use num_traits::{Num, One, Zero};
use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

pub const PI: Dd = Dd { hi: 3.141592653589793, lo: 1.2246467991473532e-16 };

impl Dd {
    pub const fn new(hi: f64) -> Self {
        Dd { hi, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::zero();
        }
        let x = Dd::new(self.hi.sqrt());
        // one Newton step in double-double
        x + (self - x * x) / (x + x)
    }

    pub fn round(self) -> Self {
        (self + Dd::new(0.5)).floor_dd()
    }

    pub fn from_ratio(k: i64, n: i64) -> Self {
        Dd::new(k as f64) / Dd::new(n as f64)
    }

    /// `(cos, sin)` of `2 pi k / n`.
    pub fn cis_ratio(k: u64, n: u64) -> (Dd, Dd) {
        let k = k % n;
        // reduce to an octant using exact integer arithmetic on 8k vs n
        let e = 8 * k as u128;
        let n128 = n as u128;
        let oct = (e / n128) as u64;
        // angle = 2 pi (k/n) = (pi/4) * (8k/n); residual r = 8k - oct*n in [0, n)
        let r = (e - oct as u128 * n128) as u64;
        let (mut c, mut s, swap) = if oct % 2 == 0 {
            let th = PI * Dd::from_ratio(r as i64, 4 * n as i64);
            let (c, s) = small_cis(th);
            (c, s, false)
        } else {
            let th = PI * Dd::from_ratio((n - r) as i64, 4 * n as i64);
            let (c, s) = small_cis(th);
            (c, s, true)
        };
        if swap {
            std::mem::swap(&mut c, &mut s);
        }
        // (c, s) is now cis of (pi/4)*(oct + r/n) reduced to quadrant start oct/2*pi/2
        match oct / 2 {
            0 => (c, s),
            1 => (-s, c),
            2 => (-c, -s),
            _ => (s, -c),
        }
    }
}

fn small_cis(x: Dd) -> (Dd, Dd) {
    let x2 = x * x;
    let mut sin = Dd::zero();
    let mut cos = Dd::zero();
    let mut term_s = x;
    let mut term_c = Dd::one();
    for k in 0..30 {
        sin = sin + term_s;
        cos = cos + term_c;
        let a = (2 * k + 2) as f64;
        let b = (2 * k + 3) as f64;
        term_s = -(term_s * x2) / Dd::new(a * b);
        term_c = -(term_c * x2) / Dd::new((2 * k + 1) as f64 * a);
        if term_s.hi.abs() < 1e-40 && term_c.hi.abs() < 1e-40 {
            break;
        }
    }
    (cos, sin)
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::new(x)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::new(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

impl Rem for Dd {
    type Output = Dd;
    fn rem(self, b: Dd) -> Dd {
        let q = self / b;
        let t = if q.hi < 0.0 { -((-q).floor_dd()) } else { q.floor_dd() };
        self - b * t
    }
}

impl Dd {
    fn floor_dd(self) -> Dd {
        let h = self.hi.floor();
        if h == self.hi {
            let (hi, lo) = quick_two_sum(h, self.lo.floor());
            Dd { hi, lo }
        } else {
            Dd::new(h)
        }
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, o: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&o.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&o.lo),
            c => c,
        }
    }
}

impl Zero for Dd {
    fn zero() -> Dd {
        Dd::new(0.0)
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }
}

impl One for Dd {
    fn one() -> Dd {
        Dd::new(1.0)
    }
}

impl Num for Dd {
    type FromStrRadixErr = std::num::ParseFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Dd, Self::FromStrRadixErr> {
        debug_assert_eq!(radix, 10);
        s.parse::<f64>().map(Dd::new)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let third = Dd::one() / Dd::new(3.0);
        let back = third * Dd::new(3.0) - Dd::one();
        assert!(back.to_f64().abs() < 1e-30);
        let two = Dd::new(2.0).sqrt();
        assert!((two * two - Dd::new(2.0)).to_f64().abs() < 1e-30);
        assert_eq!(Dd::new(2.5).round().to_f64(), 3.0);
        assert_eq!((Dd::new(7.0) % Dd::new(3.0)).to_f64(), 1.0);
    }

    #[test]
    fn roots_of_unity() {
        for n in [1u64, 2, 3, 5, 7, 8, 12, 100, 997] {
            for k in 0..n.min(40) {
                let (c, s) = Dd::cis_ratio(k, n);
                let one = c * c + s * s - Dd::one();
                assert!(one.to_f64().abs() < 1e-30, "n={n} k={k}");
                let ang = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                assert!((c.to_f64() - ang.cos()).abs() < 1e-14);
                assert!((s.to_f64() - ang.sin()).abs() < 1e-14);
            }
        }
        // a primitive cube root cubed is 1 to double-double accuracy
        let (c, s) = Dd::cis_ratio(1, 3);
        let (c2, s2) = (c * c - s * s, c * s + s * c);
        let (c3, s3) = (c2 * c - s2 * s, c2 * s + s2 * c);
        assert!((c3 - Dd::one()).abs().to_f64() < 1e-30 && s3.abs().to_f64() < 1e-30);
    }
}
