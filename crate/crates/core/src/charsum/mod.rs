//! Multiplicative and additive characters of F_q and the Gauss-sum table.
//!
//! `omega(x) = zeta_{q-1}^{dlog x}` and `psi(x) = zeta_p^{Tr(x)}`, so
//! `g(m) = sum_k zeta_{q-1}^{mk} psi(gen^k)`, which is one length-(q-1) inverse DFT.

pub mod dd;
pub mod fft;

use crate::error::{Error, Result};
use crate::ffield::{FieldSpec, FqElem};
use dd::Dd;
use num_complex::Complex;
use num_traits::{Num, Zero};
use rustfft::FftPlanner;
use std::fmt::Debug;
use std::sync::Arc;

/// Working precision in bits; values above 106 are clamped.
pub const STANDARD_BITS: u32 = 53;
pub const HIGH_BITS: u32 = 106;
/// Above this q the table is built in double-double regardless of the request.
pub const AUTO_HIGH_Q: u64 = 10_000;

/// Scalar type for character sums.
pub trait Real: Copy + Debug + Send + Sync + Num + PartialOrd + std::ops::Neg<Output = Self> {
    fn of(x: f64) -> Self;
    fn f64(self) -> f64;
    fn sqrt(self) -> Self;
    fn round(self) -> Self;
    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }
    fn cis(k: u64, n: u64) -> Complex<Self>;
}

impl Real for f64 {
    fn of(x: f64) -> Self {
        x
    }
    fn f64(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn round(self) -> Self {
        f64::round(self)
    }
    fn cis(k: u64, n: u64) -> Complex<f64> {
        let (c, s) = Dd::cis_ratio(k, n);
        Complex::new(c.to_f64(), s.to_f64())
    }
}

impl Real for Dd {
    fn of(x: f64) -> Self {
        Dd::new(x)
    }
    fn f64(self) -> f64 {
        self.to_f64()
    }
    fn sqrt(self) -> Self {
        Dd::sqrt(self)
    }
    fn round(self) -> Self {
        Dd::round(self)
    }
    fn cis(k: u64, n: u64) -> Complex<Dd> {
        fft::cis(k, n)
    }
}

/// Gauss sums and roots of unity at one precision.
#[derive(Clone, Debug)]
pub struct Tables<R> {
    pub gauss: Vec<Complex<R>>,
    pub roots: Vec<Complex<R>>,
}

#[derive(Clone, Debug)]
pub enum Table {
    Standard(Tables<f64>),
    High(Tables<Dd>),
}

#[derive(Clone, Debug)]
pub struct CharacterSystem {
    field: Arc<FieldSpec>,
    bits: u32,
    requested_bits: u32,
    twist: FqElem,
    residual: f64,
    table: Table,
}

/// Residual tolerance for `| |g(m)|^2 - q |`.
pub fn tolerance(bits: u32, q: u64) -> f64 {
    let scale = if bits >= HIGH_BITS { 1e-20 } else { 1e-6 };
    scale * (q as f64).sqrt()
}

fn additive_values(field: &FieldSpec, twist: FqElem) -> (Vec<u64>, u64) {
    let p = field.p();
    let vals = field
        .units()
        .map(|x| field.trace(field.mul(twist, x)))
        .collect();
    (vals, p)
}

fn build_f64(field: &FieldSpec, twist: FqElem) -> Tables<f64> {
    let n = (field.q() - 1) as usize;
    let (tr, p) = additive_values(field, twist);
    let zp: Vec<Complex<f64>> = (0..p).map(|k| f64::cis(k, p)).collect();
    let mut buf: Vec<Complex<f64>> = tr.iter().map(|&t| zp[t as usize]).collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_inverse(n).process(&mut buf);
    buf[0] = Complex::new(-1.0, 0.0);
    let roots = (0..n as u64).map(|k| f64::cis(k, n as u64)).collect();
    Tables { gauss: buf, roots }
}

fn build_dd(field: &FieldSpec, twist: FqElem) -> Tables<Dd> {
    let n = (field.q() - 1) as usize;
    let (tr, p) = additive_values(field, twist);
    let zp: Vec<Complex<Dd>> = (0..p).map(|k| Dd::cis(k, p)).collect();
    let buf: Vec<Complex<Dd>> = tr.iter().map(|&t| zp[t as usize]).collect();
    let mut gauss = fft::inverse_dft(&buf);
    gauss[0] = Complex::new(Dd::new(-1.0), Dd::zero());
    let roots = (0..n as u64).map(|k| Dd::cis(k, n as u64)).collect();
    Tables { gauss, roots }
}

fn residual_of<R: Real>(t: &Tables<R>, q: u64) -> f64 {
    let qr = R::of(q as f64);
    t.gauss
        .iter()
        .skip(1)
        .map(|g| (g.norm_sqr() - qr).abs().f64())
        .fold(0.0, f64::max)
}

impl CharacterSystem {
    /// Gauss table for the standard additive character.
    pub fn new(field: Arc<FieldSpec>, bits: u32) -> Result<Self> {
        let one = field.one();
        Self::with_twist(field, bits, one)
    }

    /// Gauss table for `psi_a(x) = psi(a x)`.
    pub fn with_twist(field: Arc<FieldSpec>, bits: u32, a: FqElem) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::Domain("additive twist by zero".into()));
        }
        if bits < STANDARD_BITS {
            return Err(Error::Precision(format!("precision {bits} below 53 bits")));
        }
        let q = field.q();
        let high = bits > STANDARD_BITS || q > AUTO_HIGH_Q;
        let eff = if high { HIGH_BITS } else { STANDARD_BITS };
        let (table, residual) = if high {
            let t = build_dd(&field, a);
            let r = residual_of(&t, q);
            (Table::High(t), r)
        } else {
            let t = build_f64(&field, a);
            let r = residual_of(&t, q);
            (Table::Standard(t), r)
        };
        let tol = tolerance(eff, q);
        if residual > tol {
            return Err(Error::Precision(format!(
                "Gauss residual {residual:e} exceeds {tol:e} at {eff} bits; use high-precision mode"
            )));
        }
        Ok(CharacterSystem { field, bits: eff, requested_bits: bits, twist: a, residual, table })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }
    pub fn field_arc(&self) -> &Arc<FieldSpec> {
        &self.field
    }
    /// Effective working precision.
    pub fn bits(&self) -> u32 {
        self.bits
    }
    /// Precision that was asked for (may exceed the effective one).
    pub fn requested_bits(&self) -> u32 {
        self.requested_bits
    }
    pub fn twist(&self) -> FqElem {
        self.twist
    }
    /// Max of `| |g(m)|^2 - q |` over m != 0.
    pub fn residual(&self) -> f64 {
        self.residual
    }
    pub fn table(&self) -> &Table {
        &self.table
    }

    fn reduce(&self, m: i64) -> usize {
        m.rem_euclid(self.field.q() as i64 - 1) as usize
    }

    pub fn gauss(&self, m: i64) -> Complex<f64> {
        let i = self.reduce(m);
        match &self.table {
            Table::Standard(t) => t.gauss[i],
            Table::High(t) => Complex::new(t.gauss[i].re.to_f64(), t.gauss[i].im.to_f64()),
        }
    }

    /// `omega(x)^m`.
    pub fn omega_power(&self, x: FqElem, m: i64) -> Result<Complex<f64>> {
        let e = self.field.dlog(x)? as i64;
        let n = self.field.q() as i64 - 1;
        let k = ((e as i128 * m as i128).rem_euclid(n as i128)) as u64;
        Ok(f64::cis(k, n as u64))
    }
}

/// Direct O(q) evaluation of one Gauss sum, used as an oracle.
pub fn gauss_direct(field: &FieldSpec, twist: FqElem, m: i64) -> Complex<f64> {
    let n = field.q() - 1;
    let p = field.p();
    let mm = m.rem_euclid(n as i64) as u64;
    let mut acc = Complex::new(0.0, 0.0);
    for (k, x) in field.units().enumerate() {
        let tr = field.trace(field.mul(twist, x));
        acc += f64::cis((k as u64 * mm) % n, n) * f64::cis(tr, p);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(p: u64, n: u32) -> CharacterSystem {
        CharacterSystem::new(Arc::new(FieldSpec::new(p, n).unwrap()), 53).unwrap()
    }

    #[test]
    fn small_gauss_sums() {
        let c3 = cs(3, 1);
        let g = c3.gauss(1);
        assert!((g.re).abs() < 1e-12 && (g.im - 3f64.sqrt()).abs() < 1e-12);
        assert!((c3.gauss(-1) - g).norm() < 1e-12);
        let c5 = cs(5, 1);
        assert!((c5.gauss(2) - Complex::new(5f64.sqrt(), 0.0)).norm() < 1e-12);
        assert!((c5.gauss(6) - c5.gauss(2)).norm() < 1e-12);
        assert_eq!(c5.gauss(4), Complex::new(-1.0, 0.0));
        assert_eq!(c5.gauss(0), Complex::new(-1.0, 0.0));
    }

    #[test]
    fn omega_examples() {
        let c7 = cs(7, 1);
        let f = c7.field();
        let z = c7.omega_power(f.from_int(3), 1).unwrap();
        let ang = std::f64::consts::PI / 3.0;
        assert!((z - Complex::new(ang.cos(), ang.sin())).norm() < 1e-12);
        let c5 = cs(5, 1);
        let w = c5.omega_power(c5.field().from_int(4), 2).unwrap();
        assert!((w - Complex::new(1.0, 0.0)).norm() < 1e-12);
        assert!(c5.omega_power(c5.field().zero(), 1).is_err());
    }

    #[test]
    fn fft_matches_direct() {
        for (p, n) in [(3, 1), (7, 1), (3, 2), (5, 2), (13, 1), (3, 3)] {
            let c = cs(p, n);
            let f = c.field();
            for m in 0..(f.q() as i64 - 1) {
                let d = gauss_direct(f, f.one(), m);
                let g = if m == 0 { Complex::new(-1.0, 0.0) } else { c.gauss(m) };
                assert!((d - g).norm() < 1e-9, "q={} m={m}", f.q());
            }
        }
    }

    #[test]
    fn high_precision_agrees() {
        let f = Arc::new(FieldSpec::new(5, 2).unwrap());
        let lo = CharacterSystem::new(f.clone(), 53).unwrap();
        let hi = CharacterSystem::new(f, 128).unwrap();
        assert_eq!(hi.bits(), HIGH_BITS);
        assert!(hi.residual() < 1e-25);
        for m in 0..24 {
            assert!((lo.gauss(m) - hi.gauss(m)).norm() < 1e-12);
        }
    }
}
