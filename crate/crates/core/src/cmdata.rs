//! Fixtures for the parameters with complex multiplication and their verifiers.

use crate::ecount::{e1_e2, trace};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::ffield::FieldSpec;
use crate::geomver::si::{j_invariants_pair, QuadSurd};
use crate::k3count::{count_affine, CountMode, SurfaceInstance};
use crate::rat::{fmt_q, is_prime_u64, parse_q, powmod, q_mod, squarefree_part_q, Q};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::sync::{Arc, OnceLock};

const TABLES: &str = include_str!("../data/cm_tables.json");

#[derive(Clone, Debug, Deserialize)]
struct RawRational {
    t: String,
    j: String,
    order: String,
    d: i64,
    ns: [i64; 3],
}

#[derive(Clone, Debug, Deserialize)]
struct RawQuadratic {
    t: String,
    field: i64,
    disc: i64,
    order: String,
    d: i64,
    ns: [i64; 3],
}

#[derive(Clone, Debug, Deserialize)]
struct RawTables {
    version: u32,
    rational_cm_j: Vec<String>,
    s1: Vec<RawRational>,
    s2: Vec<RawQuadratic>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CmClass {
    Generic,
    CmRationalJ,
    CmQuadraticJ,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CmRecord {
    pub t: Q,
    pub class: CmClass,
    /// Squarefree m with Q(S) = Q(√m); 1 for the rational rows.
    pub field: i64,
    /// Tabulated j for rational rows.
    pub j: Option<Q>,
    pub order_disc: Option<i64>,
    pub order: String,
    /// Discriminant of the quadratic character.
    pub d: i64,
    /// `[a, b, c]` of the rank-2 summand of the Néron-Severi lattice.
    pub ns: [i64; 3],
}

pub struct CmTables {
    pub version: u32,
    pub rational_cm_j: Vec<Q>,
    pub records: Vec<CmRecord>,
}

fn load() -> Result<CmTables> {
    let raw: RawTables =
        serde_json::from_str(TABLES).map_err(|e| Error::Parse(format!("cm_tables.json: {e}")))?;
    let mut records = Vec::new();
    for r in raw.s1 {
        records.push(CmRecord {
            t: parse_q(&r.t)?,
            class: CmClass::CmRationalJ,
            field: 1,
            j: Some(parse_q(&r.j)?),
            order_disc: None,
            order: r.order,
            d: r.d,
            ns: r.ns,
        });
    }
    for r in raw.s2 {
        records.push(CmRecord {
            t: parse_q(&r.t)?,
            class: CmClass::CmQuadraticJ,
            field: r.field,
            j: None,
            order_disc: Some(r.disc),
            order: r.order,
            d: r.d,
            ns: r.ns,
        });
    }
    Ok(CmTables {
        version: raw.version,
        rational_cm_j: raw.rational_cm_j.iter().map(|s| parse_q(s)).collect::<Result<_>>()?,
        records,
    })
}

pub fn tables() -> &'static CmTables {
    static T: OnceLock<CmTables> = OnceLock::new();
    T.get_or_init(|| load().expect("bundled cm_tables.json is valid"))
}

pub fn record(t: &Q) -> Option<&'static CmRecord> {
    tables().records.iter().find(|r| r.t == *t)
}

pub fn classify_t(t: &Q) -> Result<CmClass> {
    if t.is_zero() {
        return Err(Error::Domain("t must be nonzero".into()));
    }
    Ok(record(t).map_or(CmClass::Generic, |r| r.class))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CmCheck {
    pub t: String,
    pub passed: bool,
    pub pair: [String; 2],
    pub detail: String,
}

fn pair_strings(p: &[QuadSurd; 2]) -> [String; 2] {
    [p[0].to_string(), p[1].to_string()]
}

pub fn verify_rational_cm() -> Result<Vec<CmCheck>> {
    let list = &tables().rational_cm_j;
    let mut out = Vec::new();
    for r in tables().records.iter().filter(|r| r.class == CmClass::CmRationalJ) {
        let pair = j_invariants_pair(&r.t)?;
        let vals: Vec<Option<Q>> = pair.iter().map(QuadSurd::as_rational).collect();
        let table_j = r.j.clone().unwrap();
        let rational = vals.iter().all(Option::is_some);
        let hit = vals.iter().any(|v| v.as_ref() == Some(&table_j));
        let listed = vals.iter().flatten().all(|v| list.contains(v));
        let detail = match (rational, hit, listed) {
            (false, _, _) => "pair is not rational".to_string(),
            (_, false, _) => format!("table j {} not in pair", fmt_q(&table_j)),
            (_, _, false) => "pair leaves the rational CM list".to_string(),
            _ => format!("table j {}", fmt_q(&table_j)),
        };
        out.push(CmCheck {
            t: fmt_q(&r.t),
            passed: rational && hit && listed,
            pair: pair_strings(&pair),
            detail,
        });
    }
    Ok(out)
}

pub fn verify_quadratic_cm() -> Result<Vec<CmCheck>> {
    let mut out = Vec::new();
    for r in tables().records.iter().filter(|r| r.class == CmClass::CmQuadraticJ) {
        let pair = j_invariants_pair(&r.t)?;
        let m = squarefree_part_q(&(&r.t * (&r.t - Q::from_integer(1.into()))))?;
        let conj = pair[0].rational == pair[1].rational && pair[0].coeff == -&pair[1].coeff;
        let ok = conj && !pair[0].coeff.is_zero() && pair[0].radicand == BigInt::from(r.field) && m == BigInt::from(r.field);
        out.push(CmCheck {
            t: fmt_q(&r.t),
            passed: ok,
            pair: pair_strings(&pair),
            detail: format!("squarefree part of t(t-1) = {m}, table field Q(sqrt({}))", r.field),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurveyRow {
    pub p: u64,
    pub s: u64,
    pub trace_t: i64,
    pub a_e1_sq: i64,
    pub kronecker: i32,
}

fn kronecker(d: i64, p: u64) -> i32 {
    let r = d.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if powmod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// `T(p)`, `a(E1)²` and `(D/p)` at good primes where S is defined; data only.
pub fn cm_trace_survey(t: &Q, pmin: u64, pmax: u64, exec: Exec) -> Result<Vec<SurveyRow>> {
    let rec = record(t).ok_or_else(|| Error::Domain(format!("t = {} is not a tabulated CM parameter", fmt_q(t))))?;
    let primes: Vec<u64> = (pmin.max(5)..=pmax).filter(|&p| is_prime_u64(p)).collect();
    let rows = exec.map(&primes, |&p| -> Result<Option<SurveyRow>> {
        if q_mod(t, p).is_none_or(|x| x == 0) {
            return Ok(None);
        }
        let f = Arc::new(FieldSpec::new(p, 1)?);
        let inst = match SurfaceInstance::new(f.clone(), t) {
            Ok(i) => i,
            Err(Error::Reduction(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        if inst.t_is_one && !t.is_one() {
            return Ok(None);
        }
        let tf = f.from_q(t).unwrap();
        let Some(s) = f.sqrt(f.div(f.sub(tf, f.one()), tf)) else { return Ok(None) };
        let (e1, _) = e1_e2(f.as_ref(), &tf, &s)?;
        let a = match trace(&f, &e1) {
            Ok(a) => a,
            Err(Error::Singular(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let v = count_affine(&inst, CountMode::SolvedZ) as i64;
        let q = p as i64;
        Ok(Some(SurveyRow {
            p,
            s: f.index(s),
            trace_t: v - q * q + 3 * q - 3,
            a_e1_sq: a * a,
            kronecker: kronecker(rec.d, p),
        }))
    });
    rows.into_iter().filter_map(Result::transpose).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qi};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fixtures_load() {
        let t = tables();
        assert_eq!(t.rational_cm_j.len(), 13);
        assert_eq!(t.records.iter().filter(|r| r.class == CmClass::CmRationalJ).count(), 5);
        assert_eq!(t.records.iter().filter(|r| r.class == CmClass::CmQuadraticJ).count(), 10);
    }

    #[test]
    fn classify() {
        assert_eq!(classify_t(&qi(1)).unwrap(), CmClass::CmRationalJ);
        assert_eq!(classify_t(&qi(9)).unwrap(), CmClass::CmQuadraticJ);
        assert_eq!(classify_t(&qi(2)).unwrap(), CmClass::Generic);
        assert_eq!(classify_t(&q(-9, 16)).unwrap(), CmClass::CmRationalJ);
        assert!(classify_t(&qi(0)).is_err());
    }

    #[test]
    fn tables_verify() {
        for c in verify_rational_cm().unwrap() {
            assert!(c.passed, "{c:?}");
        }
        for c in verify_quadratic_cm().unwrap() {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn generic_t_has_no_rational_cm_j() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let list = &tables().rational_cm_j;
        for _ in 0..50 {
            let t = q(rng.random_range(-500..=500), rng.random_range(1..=97));
            if t.is_zero() || classify_t(&t).unwrap() != CmClass::Generic {
                continue;
            }
            let pair = j_invariants_pair(&t).unwrap();
            assert!(pair.iter().filter_map(QuadSurd::as_rational).all(|j| !list.contains(&j)), "t={}", fmt_q(&t));
        }
    }

    #[test]
    fn survey_rows() {
        let rows = cm_trace_survey(&q(81, 256), 11, 11, Exec::Sequential).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].trace_t.abs() <= 33);
        assert!(!cm_trace_survey(&qi(1), 7, 7, Exec::Sequential).unwrap().is_empty());
        assert!(cm_trace_survey(&qi(2), 5, 50, Exec::Sequential).is_err());
    }
}
