//! Hypergeometric data and the finite hypergeometric sum H_q(alpha, beta | t).

use crate::charsum::{CharacterSystem, Real, Table, Tables};
use crate::error::{Error, Result};
use crate::ffield::FqElem;
use crate::rat::{fmt_q, q as rq, Q};
use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Rounding threshold for the integrality contract.
pub const ROUND_TOL: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct HGDatum {
    pub alpha: Vec<Q>,
    pub beta: Vec<Q>,
    pub p_list: Vec<u64>,
    pub q_list: Vec<u64>,
    pub m: Q,
    pub epsilon: i64,
    /// Multiplicity of Phi_d in gcd(prod(x^p_i - 1), prod(x^q_j - 1)).
    pub d_counts: BTreeMap<u64, u64>,
}

fn phi(n: u64) -> u64 {
    crate::rat::prime_factors(n).iter().fold(n, |acc, &p| acc / p * (p - 1))
}

fn cyclotomic_exponents(v: &[Q], what: &str) -> Result<BTreeMap<u64, i64>> {
    let mut by_den: BTreeMap<u64, BTreeMap<u64, i64>> = BTreeMap::new();
    for a in v {
        let fr = a - a.floor();
        if &fr != a {
            return Err(Error::Datum(format!("{what} entry {} not in [0,1)", fmt_q(a))));
        }
        let d = a.denom().to_u64().unwrap();
        let n = a.numer().to_u64().unwrap();
        *by_den.entry(d).or_default().entry(n).or_default() += 1;
    }
    let mut out = BTreeMap::new();
    for (d, nums) in by_den {
        let counts: Vec<i64> = (0..d)
            .filter(|k| k.gcd(&d) == 1)
            .map(|k| nums.get(&k).copied().unwrap_or(0))
            .collect();
        let e = counts[0];
        if counts.len() as u64 != phi(d) || counts.iter().any(|&c| c != e) {
            let top = *counts.iter().max().unwrap();
            let bad = (0..d)
                .filter(|k| k.gcd(&d) == 1)
                .find(|k| nums.get(k).copied().unwrap_or(0) != top)
                .unwrap();
            return Err(Error::Datum(format!(
                "{what} is not Galois-stable at {bad}/{d}"
            )));
        }
        out.insert(d, e);
    }
    Ok(out)
}

impl HGDatum {
    pub fn from_parameters(alpha: &[Q], beta: &[Q]) -> Result<Self> {
        if alpha.len() != beta.len() || alpha.is_empty() {
            return Err(Error::Datum("alpha and beta must have the same positive length".into()));
        }
        if let Some(a) = alpha.iter().find(|a| beta.contains(a)) {
            return Err(Error::Datum(format!("{} appears in both alpha and beta", fmt_q(a))));
        }
        let num = cyclotomic_exponents(alpha, "alpha")?;
        let den = cyclotomic_exponents(beta, "beta")?;
        let mut e: BTreeMap<u64, i64> = num;
        for (d, c) in den {
            *e.entry(d).or_default() -= c;
        }
        let top = *e.keys().max().unwrap();
        let mut gamma: BTreeMap<u64, i64> = BTreeMap::new();
        for d in (1..=top).rev() {
            let above: i64 = gamma
                .iter()
                .filter(|(&k, _)| k > d && k % d == 0)
                .map(|(_, &g)| g)
                .sum();
            let g = e.get(&d).copied().unwrap_or(0) - above;
            if g != 0 {
                gamma.insert(d, g);
            }
        }
        let mut p_list = Vec::new();
        let mut q_list = Vec::new();
        for (&k, &g) in gamma.iter().rev() {
            let target = if g > 0 { &mut p_list } else { &mut q_list };
            for _ in 0..g.unsigned_abs() {
                target.push(k);
            }
        }
        let sp: u64 = p_list.iter().sum();
        let sq: u64 = q_list.iter().sum();
        if sp != sq {
            return Err(Error::Datum(format!("sum p = {sp} but sum q = {sq}")));
        }
        let mut m = Q::one();
        for &k in &p_list {
            m *= Q::from_integer(BigInt::from(k).pow(k as u32));
        }
        for &k in &q_list {
            m /= Q::from_integer(BigInt::from(k).pow(k as u32));
        }
        let epsilon = if sq % 2 == 0 { 1 } else { -1 };
        let mut d_counts = BTreeMap::new();
        for d in 1..=top {
            let a = p_list.iter().filter(|&&k| k % d == 0).count() as u64;
            let b = q_list.iter().filter(|&&k| k % d == 0).count() as u64;
            if a.min(b) > 0 {
                d_counts.insert(d, a.min(b));
            }
        }
        Ok(HGDatum { alpha: alpha.to_vec(), beta: beta.to_vec(), p_list, q_list, m, epsilon, d_counts })
    }

    /// alpha = (1/4, 1/2, 3/4), beta = (0, 0, 0).
    pub fn h3() -> Self {
        Self::from_parameters(&[rq(1, 4), rq(1, 2), rq(3, 4)], &[Q::zero(), Q::zero(), Q::zero()])
            .unwrap()
    }

    /// alpha = (1/6, 5/6), beta = (1/4, 3/4).
    pub fn h2() -> Self {
        Self::from_parameters(&[rq(1, 6), rq(5, 6)], &[rq(1, 4), rq(3, 4)]).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.alpha.len()
    }

    /// Least common multiple of the denominators of alpha and beta.
    pub fn conductor(&self) -> u64 {
        self.alpha
            .iter()
            .chain(&self.beta)
            .fold(1u64, |acc, a| acc.lcm(&a.denom().to_u64().unwrap()))
    }

    pub fn s_multiplicity(&self, q: u64, m: i64) -> u64 {
        let n = q - 1;
        let g = (m.rem_euclid(n as i64) as u64).gcd(&n);
        let d = n / g;
        let a = self.p_list.iter().filter(|&&k| k % d == 0).count() as u64;
        let b = self.q_list.iter().filter(|&&k| k % d == 0).count() as u64;
        a.min(b)
    }

    /// Exponent k of the integrality contract: `q^k * H` is an integer.
    pub fn integrality_exponent(&self, q: u64) -> u32 {
        self.s_multiplicity(q, 0).saturating_sub(1) as u32
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HgValue {
    pub value: Complex<f64>,
    /// `q^k * value` rounds to `numerator`.
    pub numerator: i64,
    pub k: u32,
    pub q: u64,
    /// Distance of `q^k * value` from `numerator`, imaginary part included.
    pub residual: f64,
}

impl HgValue {
    pub fn exact(&self) -> Q {
        Q::new(BigInt::from(self.numerator), BigInt::from(self.q).pow(self.k))
    }
}

fn sum_generic<R: Real>(
    tab: &Tables<R>,
    datum: &HGDatum,
    q: u64,
    e_arg: u64,
) -> (Complex<R>, R, i64, u32) {
    let n = q - 1;
    let s0 = datum.s_multiplicity(q, 0) as i64;
    let k = (s0 - 1).max(0) as u32;
    let qr = R::of(q as f64);
    let mut acc = Complex::new(R::zero(), R::zero());
    for m in 0..n {
        let sm = datum.s_multiplicity(q, m as i64) as i64;
        let mut term = tab.roots[((m as u128 * e_arg as u128) % n as u128) as usize];
        for &pj in &datum.p_list {
            term = term * tab.gauss[((pj as u128 * m as u128) % n as u128) as usize];
        }
        for &qk in &datum.q_list {
            let idx = (n - (qk as u128 * m as u128 % n as u128) as u64) % n;
            term = term * tab.gauss[idx as usize];
        }
        let ex = sm - s0;
        let mut scale = R::one();
        for _ in 0..ex.abs() {
            scale = scale * qr;
        }
        if ex >= 0 {
            acc = acc + term * scale;
        } else {
            acc = Complex::new(acc.re + term.re / scale, acc.im + term.im / scale);
        }
    }
    let sign = if (datum.p_list.len() + datum.q_list.len()) % 2 == 0 { R::one() } else { -R::one() };
    let pre = sign / (R::one() - qr);
    let val = Complex::new(acc.re * pre, acc.im * pre);
    let mut qk = R::one();
    for _ in 0..k {
        qk = qk * qr;
    }
    let scaled = val.re * qk;
    let r = scaled.round();
    let resid_re = (scaled - r).abs();
    let resid_im = (val.im * qk).abs();
    let resid = if resid_re > resid_im { resid_re } else { resid_im };
    (val, resid, r.f64() as i64, k)
}

/// Reduces `epsilon * M^{-1} * t` into F_q.
pub fn sum_argument(datum: &HGDatum, cs: &CharacterSystem, t: FqElem) -> Result<FqElem> {
    let f = cs.field();
    if t.is_zero() {
        return Err(Error::Domain("t = 0".into()));
    }
    let m = f
        .from_q(&datum.m)
        .filter(|m| !m.is_zero())
        .ok_or_else(|| Error::Reduction(format!("M = {} does not reduce mod {}", fmt_q(&datum.m), f.p())))?;
    Ok(f.mul(f.div(t, m), f.from_int(datum.epsilon)))
}

/// Evaluates the sum and rounds it under the integrality contract.
pub fn hg_sum(datum: &HGDatum, cs: &CharacterSystem, t: FqElem) -> Result<HgValue> {
    let f = cs.field();
    let q = f.q();
    if datum.conductor().gcd(&q) != 1 {
        return Err(Error::Reduction(format!(
            "q = {q} shares a factor with the denominators of the datum"
        )));
    }
    let arg = sum_argument(datum, cs, t)?;
    let e = f.dlog(arg)?;
    let (value, residual, numerator, k) = match cs.table() {
        Table::Standard(tab) => {
            let (v, r, n, k) = sum_generic(tab, datum, q, e);
            (v, r, n, k)
        }
        Table::High(tab) => {
            let (v, r, n, k) = sum_generic(tab, datum, q, e);
            (Complex::new(v.re.f64(), v.im.f64()), r.f64(), n, k)
        }
    };
    if residual > ROUND_TOL || !residual.is_finite() {
        return Err(Error::Precision(format!(
            "hypergeometric sum at q = {q} has rounding residual {residual:e}"
        )));
    }
    Ok(HgValue { value: Complex::new(value.re, value.im), numerator, k, q, residual })
}

/// H_q(1/4,1/2,3/4; 0,0,0 | t) as an integer.
pub fn hg_h3(cs: &CharacterSystem, t: FqElem) -> Result<(i64, f64)> {
    let v = hg_sum(&HGDatum::h3(), cs, t)?;
    let q = cs.field().q() as i64;
    debug_assert_eq!(v.k, 0);
    if v.numerator.abs() > 3 * q {
        return Err(Error::Integrity(format!("|H3| = {} exceeds 3q at q = {q}", v.numerator)));
    }
    Ok((v.numerator, v.residual))
}

/// H_q(1/6,5/6; 1/4,3/4 | t) = A/q, returning A.
pub fn hg_h2(cs: &CharacterSystem, t: FqElem) -> Result<(i64, f64)> {
    let f = cs.field();
    if f.p() == 3 {
        return Err(Error::Reduction("H2 requires gcd(q, 6) = 1".into()));
    }
    let v = hg_sum(&HGDatum::h2(), cs, t)?;
    debug_assert_eq!(v.k, 1);
    let a = v.numerator;
    if (a * a) as u64 > 4 * f.q() {
        return Err(Error::Integrity(format!("q*H2 = {a} violates the Hasse bound at q = {}", f.q())));
    }
    Ok((a, v.residual))
}

/// H3 written out term by term from Gauss sums, for cross-checking the engine.
pub fn hg_h3_by_hand(cs: &CharacterSystem, t: FqElem) -> Result<Complex<f64>> {
    let f = cs.field();
    let q = f.q();
    let n = (q - 1) as i64;
    let arg = f.div(t, f.from_int(256));
    let mut acc = Complex::new(0.0, 0.0);
    for m in 0..n {
        let g = cs.gauss(-m);
        let s = if HGDatum::h3().s_multiplicity(q, m) == 1 { 1.0 } else { 1.0 / q as f64 };
        acc += cs.gauss(4 * m) * g * g * g * g * cs.omega_power(arg, m)? * s;
    }
    Ok(acc / (q as f64 - 1.0))
}

/// The curve datum written out by hand: `g(6m) g(m) g(-4m) g(-3m) omega(-4t/27)^m`.
pub fn hg_h2_by_hand(cs: &CharacterSystem, t: FqElem) -> Result<Complex<f64>> {
    let f = cs.field();
    let q = f.q();
    let n = (q - 1) as i64;
    let arg = f.neg(f.mul(t, f.from_q(&rq(4, 27)).unwrap()));
    let d = HGDatum::h2();
    let mut acc = Complex::new(0.0, 0.0);
    for m in 0..n {
        let s = d.s_multiplicity(q, m) as i32 - 2;
        acc += cs.gauss(6 * m) * cs.gauss(m) * cs.gauss(-4 * m) * cs.gauss(-3 * m)
            * cs.omega_power(arg, m)?
            * (q as f64).powi(s);
    }
    Ok(acc / (1.0 - q as f64))
}

/// Rational value of a Weil-bounded integer over q, for display.
pub fn over_q(a: i64, q: u64) -> Q {
    Q::new(BigInt::from(a), BigInt::from(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::FieldSpec;
    use crate::rat::qi;
    use std::sync::Arc;

    fn cs(p: u64) -> CharacterSystem {
        CharacterSystem::new(Arc::new(FieldSpec::new(p, 1).unwrap()), 53).unwrap()
    }

    #[test]
    fn compile_data() {
        let h3 = HGDatum::h3();
        assert_eq!(h3.p_list, vec![4]);
        assert_eq!(h3.q_list, vec![1, 1, 1, 1]);
        assert_eq!(h3.m, qi(256));
        assert_eq!(h3.epsilon, 1);
        let h2 = HGDatum::h2();
        assert_eq!(h2.p_list, vec![6, 1]);
        assert_eq!(h2.q_list, vec![4, 3]);
        assert_eq!(h2.m, rq(27, 4));
        assert_eq!(h2.epsilon, -1);
        let h1 = HGDatum::from_parameters(&[rq(1, 2)], &[Q::zero()]).unwrap();
        assert_eq!((h1.p_list.clone(), h1.q_list.clone(), h1.m.clone(), h1.epsilon), (vec![2], vec![1, 1], qi(4), 1));
    }

    #[test]
    fn bad_data() {
        assert!(HGDatum::from_parameters(&[rq(1, 3)], &[Q::zero()]).is_err());
        assert!(HGDatum::from_parameters(&[rq(1, 2)], &[rq(1, 2)]).is_err());
        assert!(HGDatum::from_parameters(&[rq(1, 2), Q::zero()], &[Q::zero()]).is_err());
    }

    #[test]
    fn multiplicities() {
        assert_eq!(HGDatum::h3().s_multiplicity(13, 0), 1);
        assert_eq!(HGDatum::h2().s_multiplicity(13, 0), 2);
        assert_eq!(HGDatum::h3().s_multiplicity(13, 4), 0);
    }

    #[test]
    fn sums() {
        let c7 = cs(7);
        let f = c7.field();
        assert_eq!(hg_h3(&c7, f.from_int(4)).unwrap().0, -3);
        let c5 = cs(5);
        let f5 = c5.field();
        assert_eq!(hg_h2(&c5, f5.from_int(3)).unwrap().0, -2);
        assert_eq!(hg_h2(&c5, f5.from_int(2)).unwrap().0, -3);
        assert_eq!(hg_h3(&c5, f5.from_int(1)).unwrap().0, 0);
        let (a, _) = hg_h2(&c7, f.from_int(4)).unwrap();
        assert_eq!(a * a - 7, -3);
    }

    #[test]
    fn by_hand_matches_engine() {
        for p in [5u64, 7, 11, 13] {
            let c = cs(p);
            let f = c.field();
            for t in 1..p as i64 {
                let t = f.from_int(t);
                let a = hg_sum(&HGDatum::h3(), &c, t).unwrap().value;
                let b = hg_h3_by_hand(&c, t).unwrap();
                assert!((a - b).norm() < 1e-9);
                let a = hg_sum(&HGDatum::h2(), &c, t).unwrap().value;
                let b = hg_h2_by_hand(&c, t).unwrap();
                assert!((a - b).norm() < 1e-9);
            }
        }
    }
}
