//! Shioda-Inose parameters, the j-invariant pair, the X₀(2) identities and the section Q_t.

use super::catalog::find;
use super::expr::{ex, Env};
use super::{eval_targets, verify_map, MapReport};
use crate::algebra::{j_invariant, Domain, Rationals};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::ffield::{FieldSpec, FqElem};
use crate::rat::{fmt_q, q, qi, squarefree_part, Q};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;

/// `rational + coeff·√radicand` with a squarefree radicand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSurd {
    pub rational: Q,
    pub coeff: Q,
    pub radicand: BigInt,
}

impl QuadSurd {
    pub fn as_rational(&self) -> Option<Q> {
        if self.coeff.is_zero() {
            Some(self.rational.clone())
        } else if self.radicand.is_one() {
            Some(&self.rational + &self.coeff)
        } else {
            None
        }
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) => write!(f, "{}", fmt_q(&r)),
            None => write!(f, "{} + {}*sqrt({})", fmt_q(&self.rational), fmt_q(&self.coeff), self.radicand),
        }
    }
}

/// The two j-invariants `64(512t² − 414t + 27) ± 128(256t − 81)√(t(t−1))`.
pub fn j_invariants_pair(t: &Q) -> Result<[QuadSurd; 2]> {
    if t.is_zero() {
        return Err(Error::Domain("t must be nonzero".into()));
    }
    let rational = qi(64) * (qi(512) * t * t - qi(414) * t + qi(27));
    let c = qi(128) * (qi(256) * t - qi(81));
    let m = t * (t - qi(1));
    // √(n/d) = f·√m0/d where n·d = f²·m0
    let (coeff, radicand) = if m.is_zero() {
        (Q::zero(), BigInt::one())
    } else {
        let nd = m.numer() * m.denom();
        let m0 = squarefree_part(&nd)?;
        let f = (&nd / &m0).sqrt();
        (c * Q::new(f, m.denom().clone()), m0)
    };
    let neg = -coeff.clone();
    Ok([
        QuadSurd { rational: rational.clone(), coeff, radicand: radicand.clone() },
        QuadSurd { rational, coeff: neg, radicand },
    ])
}

fn e1<D: Domain>(d: &D, s: &D::V) -> Option<D::V> {
    let a4 = d.div(&d.sub(&d.one(), s), &d.from_int(2))?;
    j_invariant(d, &d.from_int(-2), &a4, &d.zero())
}

fn e2<D: Domain>(d: &D, s: &D::V) -> Option<D::V> {
    let a4 = d.scale(2, &d.add(&d.one(), s));
    j_invariant(d, &d.from_int(4), &a4, &d.zero())
}

#[derive(Clone, Debug, PartialEq)]
pub struct JMatch<V> {
    pub curves: [V; 2],
    pub formula: [V; 2],
    pub matches: bool,
    /// `j` of the (−2)-twist of E₁ at −S equals `j(E₂)` at S.
    pub twist_ok: bool,
}

/// Compares `{j(E₁), j(E₂)}` with the formula pair, realizing `√(t(t−1))` as `t·S`.
pub fn j_match<D: Domain>(d: &D, t: &D::V, s: &D::V) -> Result<JMatch<D::V>> {
    let t_inv = d.inv(t).ok_or_else(|| Error::Domain("t must be nonzero".into()))?;
    let rel = d.sub(&d.mul(s, s), &d.mul(&d.sub(t, &d.one()), &t_inv));
    if !d.is_zero(&rel) {
        return Err(Error::Domain("S² ≠ (t−1)/t".into()));
    }
    let singular = || Error::Singular("E₁ or E₂ is singular".into());
    let curves = [e1(d, s).ok_or_else(singular)?, e2(d, s).ok_or_else(singular)?];
    let rad = d.mul(t, s);
    let base = d.scale(64, &d.add(&d.sub(&d.scale(512, &d.mul(t, t)), &d.scale(414, t)), &d.from_int(27)));
    let c = d.scale(128, &d.mul(&d.sub(&d.scale(256, t), &d.from_int(81)), &rad));
    let formula = [d.add(&base, &c), d.sub(&base, &c)];
    let matches = (curves[0] == formula[0] && curves[1] == formula[1])
        || (curves[0] == formula[1] && curves[1] == formula[0]);
    let minus_s = d.neg(s);
    let twisted = d.scale(2, &d.add(&d.one(), s));
    let twist_a4 = d.scale(4, &d.div(&d.sub(&d.one(), &minus_s), &d.from_int(2)).unwrap());
    let twist_ok = twisted == twist_a4 && j_invariant(d, &d.from_int(4), &twist_a4, &d.zero()).as_ref() == Some(&curves[1]);
    Ok(JMatch { curves, formula, matches, twist_ok })
}

pub fn j_match_check(field: &FieldSpec, t: FqElem, s: FqElem) -> Result<JMatch<FqElem>> {
    j_match(field, &t, &s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl ExactCheck {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        ExactCheck { name: name.into(), passed, detail }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SiReport {
    pub exact: Vec<ExactCheck>,
    pub maps: Vec<MapReport>,
}

impl SiReport {
    pub fn passed(&self) -> bool {
        self.exact.iter().all(|c| c.passed) && self.maps.iter().all(MapReport::ok)
    }
}

fn maps(names: &[&str], trials: usize, bits: u32, seed: u64, exec: Exec) -> Result<Vec<MapReport>> {
    names
        .iter()
        .map(|n| {
            let e = find(n).ok_or_else(|| Error::Config(format!("missing catalog entry {n}")))?;
            verify_map(&e, trials, bits, seed, exec)
        })
        .collect()
}

/// Exact rational evaluation of a catalog entry's targets at random small rationals.
fn rational_trials(name: &str, var: &str, trials: usize, seed: u64) -> Result<ExactCheck> {
    let e = find(name).ok_or_else(|| Error::Config(format!("missing catalog entry {name}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    let mut attempts = 0;
    while done < trials {
        attempts += 1;
        if attempts > 10 * trials {
            return Err(Error::Sampling(format!("{name}: too many degenerate rational samples")));
        }
        let h = q(rng.random_range(-40..=40), rng.random_range(1..=40));
        let mut env = Env::new();
        env.insert(var.to_string(), h.clone());
        let Ok(vals) = eval_targets(&Rationals, &e.links[0], &env) else { continue };
        if let Some(v) = vals.iter().find(|v| !v.is_zero()) {
            return Ok(ExactCheck::new(&format!("{name}_over_q"), false, format!("{var}={}: residual {}", fmt_q(&h), fmt_q(v))));
        }
        done += 1;
    }
    Ok(ExactCheck::new(&format!("{name}_over_q"), true, format!("{trials} rational points")))
}

/// The five-variable system in its h, g and f forms, plus A and B against the j-pair.
pub fn verify_si_parameters(trials: usize, bits: u32, seed: u64, exec: Exec) -> Result<SiReport> {
    let e = find("si_system_h").unwrap();
    let mut env = Env::new();
    env.insert("h".to_string(), qi(1));
    let d = Rationals;
    let mut vals = Vec::new();
    for v in ["a", "b", "c", "d", "t"] {
        let step = e.links[0].steps.iter().find_map(|s| match s {
            super::Step::Define(name, x) if name == v => Some(x),
            _ => None,
        });
        vals.push(step.unwrap().eval(&d, &env).map_err(|e| Error::Domain(format!("{e:?}")))?);
    }
    let want = [q(-40, 3), q(448, 27), q(-10, 3), q(-56, 27), qi(1)];
    let residuals = eval_targets(&d, &e.links[0], &env).map_err(|e| Error::Domain(format!("{e:?}")))?;
    let mut exact = vec![
        ExactCheck::new(
            "si_h1_values",
            vals == want,
            vals.iter().map(fmt_q).collect::<Vec<_>>().join(", "),
        ),
        ExactCheck::new(
            "si_h1_system",
            residuals.iter().all(Zero::is_zero),
            residuals.iter().map(fmt_q).collect::<Vec<_>>().join(", "),
        ),
    ];
    for name in ["si_system_h", "si_g_vs_h", "si_elimination"] {
        exact.push(rational_trials(name, "h", trials, seed)?);
    }
    exact.push(rational_trials("si_f_vs_g", "g", trials, seed)?);
    let maps = maps(&["si_system_h", "si_g_vs_h", "si_elimination", "si_f_vs_g", "si_ab_j_system"], trials, bits, seed, exec)?;
    Ok(SiReport { exact, maps })
}

fn jq(u: &Q) -> Option<Q> {
    (!u.is_zero()).then(|| (u + qi(256)).pow(3) / (u * u))
}

/// The forgetful-map identities with corrected pairing, the s-t relation and exact spot checks.
pub fn x0_2_checks(trials: usize, bits: u32, seed: u64, exec: Exec) -> Result<SiReport> {
    let d = Rationals;
    let mut exact = vec![ExactCheck::new("x0_2_u_minus_256", jq(&qi(-256)) == Some(qi(0)), "j(-256) = 0".into())];
    let s0 = qi(0);
    let at0 = [jq(&qi(64)), e1(&d, &s0), e2(&d, &s0)];
    exact.push(ExactCheck::new(
        "x0_2_s_zero",
        at0.iter().all(|j| *j == Some(qi(8000))),
        format!("{:?}", at0.iter().map(|j| j.as_ref().map(fmt_q)).collect::<Vec<_>>()),
    ));
    for (a, b) in [(qi(2), qi(3)), (qi(1), qi(-2)), (q(3, 2), q(5, 7))] {
        let s = (qi(8) * &b - &a * &a) / (&a * &a);
        let t = a.pow(4) / (qi(16) * (&a * &a - qi(4) * &b) * &b);
        let ok = &s * &s == (&t - qi(1)) / &t;
        exact.push(ExactCheck::new(
            &format!("x0_2_s_t_exact({},{})", fmt_q(&a), fmt_q(&b)),
            ok,
            format!("s={}, t={}", fmt_q(&s), fmt_q(&t)),
        ));
    }
    let maps = maps(
        &["x0_2_e1", "x0_2_e2", "x0_2_e1_printed", "x0_2_e2_printed", "x0_2_s_t", "x0_2_ab_j"],
        trials,
        bits,
        seed,
        exec,
    )?;
    Ok(SiReport { exact, maps })
}

/// `Q_t` on the Inose model for general t and at t = 1; the pole at u = 0 is excluded.
pub fn verify_qt_on_curve(trials: usize, bits: u32, seed: u64, exec: Exec) -> Result<SiReport> {
    let mut env = Env::new();
    env.insert("u".to_string(), qi(0));
    env.insert("t".to_string(), qi(1));
    let guarded = ex("(128*t*u*(u*(32*t*(3*(u-2)*u+1)-3)-3)+3)/(768*u^2)").eval(&Rationals, &env).is_err();
    let exact = vec![ExactCheck::new("qt_u_zero_guard", guarded, "u = 0 is a pole of x(Q_t)".into())];
    let maps = maps(&["qt_on_curve", "qt_on_curve_t1"], trials, bits, seed, exec)?;
    Ok(SiReport { exact, maps })
}

/// `S` with `S² = (t−1)/t`, when it is rational.
pub fn rational_s(t: &Q) -> Option<Q> {
    let r = (t - qi(1)) / t;
    if r.is_negative() {
        return None;
    }
    let (n, dd) = (r.numer().sqrt(), r.denom().sqrt());
    (&n * &n == *r.numer() && &dd * &dd == *r.denom()).then(|| Q::new(n, dd))
}
