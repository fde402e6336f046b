//! Univariate polynomials and rational functions over Q.

use crate::algebra::Domain;
use crate::rat::Q;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UPoly {
    /// Coefficients, low degree first, no trailing zeros.
    c: Vec<Q>,
}

impl UPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }
    pub fn zero() -> Self {
        UPoly { c: vec![] }
    }
    pub fn constant(a: Q) -> Self {
        UPoly::new(vec![a])
    }
    pub fn one() -> Self {
        UPoly::constant(Q::one())
    }
    /// The variable.
    pub fn x() -> Self {
        UPoly::new(vec![Q::zero(), Q::one()])
    }
    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    /// Degree; the zero polynomial has degree -1 here.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }
    pub fn lead(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }
    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.c.len().max(o.c.len());
        let z = Q::zero();
        UPoly::new((0..n).map(|i| self.c.get(i).unwrap_or(&z) + o.c.get(i).unwrap_or(&z)).collect())
    }
    pub fn neg(&self) -> UPoly {
        UPoly { c: self.c.iter().map(|x| -x).collect() }
    }
    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut r = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        UPoly::new(r)
    }
    pub fn scale(&self, k: &Q) -> UPoly {
        UPoly::new(self.c.iter().map(|x| x * k).collect())
    }
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.c.clone();
        let dl = d.lead();
        let dn = d.c.len();
        if r.len() < dn {
            return (UPoly::zero(), self.clone());
        }
        let mut qv = vec![Q::zero(); r.len() - dn + 1];
        for i in (0..qv.len()).rev() {
            let coef = &r[i + dn - 1] / &dl;
            if !coef.is_zero() {
                for (j, dj) in d.c.iter().enumerate() {
                    r[i + j] -= &coef * dj;
                }
            }
            qv[i] = coef;
        }
        (UPoly::new(qv), UPoly::new(r))
    }
    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }
    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, x)| x * Q::from_integer((i as i64).into()))
                .collect(),
        )
    }
    pub fn eval(&self, x: &Q) -> Q {
        self.c.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }
    pub fn pow(&self, e: u32) -> UPoly {
        (0..e).fold(UPoly::one(), |acc, _| acc.mul(self))
    }
    /// Largest k with `p^k | self`; `None` for the zero polynomial.
    pub fn valuation(&self, p: &UPoly) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut k = 0;
        let mut f = self.clone();
        loop {
            let (qq, r) = f.divrem(p);
            if !r.is_zero() {
                return Some(k);
            }
            f = qq;
            k += 1;
        }
    }
    /// Removes every factor of `p`.
    pub fn strip(&self, p: &UPoly) -> UPoly {
        let mut f = self.clone();
        loop {
            let (qq, r) = f.divrem(p);
            if !r.is_zero() {
                return f;
            }
            f = qq;
        }
    }
    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).deg() <= 0
    }
    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Q::zero();
            let a = if neg { -c } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coef = crate::rat::fmt_q(&a);
            match (i, a.is_one()) {
                (0, _) => out.push_str(&coef),
                (_, true) => {}
                _ => out.push_str(&format!("{coef}*")),
            }
            match i {
                0 => {}
                1 => out.push_str(var),
                _ => out.push_str(&format!("{var}^{i}")),
            }
        }
        out
    }
}

/// `num/den` in lowest terms with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    pub num: UPoly,
    pub den: UPoly,
}

impl RatFunc {
    pub fn new(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc { num, den: UPoly::one() };
        }
        let g = num.gcd(&den);
        let num = num.divrem(&g).0;
        let den = den.divrem(&g).0;
        let l = den.lead().recip();
        RatFunc { num: num.scale(&l), den: den.scale(&l) }
    }
    pub fn poly(p: UPoly) -> Self {
        RatFunc { num: p, den: UPoly::one() }
    }
    pub fn constant(a: Q) -> Self {
        RatFunc::poly(UPoly::constant(a))
    }
    pub fn x() -> Self {
        RatFunc::poly(UPoly::x())
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    /// Order of vanishing at the place `p` (a squarefree polynomial).
    pub fn valuation(&self, p: &UPoly) -> Option<i64> {
        let a = self.num.valuation(p)? as i64;
        let b = self.den.valuation(p).unwrap() as i64;
        Some(a - b)
    }
    /// Order of vanishing at infinity.
    pub fn valuation_inf(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.den.deg() - self.num.deg())
    }
}

/// Q(x) as a [`Domain`].
#[derive(Clone, Copy, Debug, Default)]
pub struct RatFuncs;

impl Domain for RatFuncs {
    type V = RatFunc;
    fn zero(&self) -> RatFunc {
        RatFunc::poly(UPoly::zero())
    }
    fn one(&self) -> RatFunc {
        RatFunc::poly(UPoly::one())
    }
    fn from_int(&self, k: i64) -> RatFunc {
        RatFunc::constant(Q::from_integer(k.into()))
    }
    fn from_q(&self, r: &Q) -> Option<RatFunc> {
        Some(RatFunc::constant(r.clone()))
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        if a.den == b.den {
            return RatFunc::new(a.num.add(&b.num), a.den.clone());
        }
        RatFunc::new(a.num.mul(&b.den).add(&b.num.mul(&a.den)), a.den.mul(&b.den))
    }
    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        RatFunc::new(a.num.mul(&b.num), a.den.mul(&b.den))
    }
    fn neg(&self, a: &RatFunc) -> RatFunc {
        RatFunc { num: a.num.neg(), den: a.den.clone() }
    }
    fn inv(&self, a: &RatFunc) -> Option<RatFunc> {
        (!a.is_zero()).then(|| RatFunc::new(a.den.clone(), a.num.clone()))
    }
    fn is_zero(&self, a: &RatFunc) -> bool {
        a.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::qi;

    fn p(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&x| qi(x)).collect())
    }

    #[test]
    fn arithmetic() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[1, 1]);
        let (qq, r) = a.divrem(&b);
        assert_eq!(qq, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[-1, 1])), p(&[-1, 1]));
        assert_eq!(a.mul(&a).valuation(&b), Some(2));
        assert!(a.is_squarefree());
        assert!(!a.mul(&b).is_squarefree());
        assert_eq!(a.display("s"), "s^2 - 1");
    }

    #[test]
    fn rational_functions() {
        let d = RatFuncs;
        let x = RatFunc::x();
        let f = d.div(&d.sub(&d.mul(&x, &x), &d.one()), &d.sub(&x, &d.one())).unwrap();
        assert_eq!(f, RatFunc::poly(p(&[1, 1])));
        let g = d.inv(&d.mul(&x, &x)).unwrap();
        assert_eq!(g.valuation(&UPoly::x()), Some(-2));
        assert_eq!(g.valuation_inf(), Some(2));
    }
}
