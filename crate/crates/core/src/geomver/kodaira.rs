//! Kodaira fiber types of the elliptic fibrations from vanishing orders of c4, c6 and Δ.

use super::expr::{ex, Env};
use super::poly::{RatFunc, RatFuncs, UPoly};
use crate::algebra::weierstrass_invariants;
use crate::error::{Error, Result};
use crate::rat::{fmt_q, q, qi, Q};
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KodairaType {
    I(u32),
    II,
    III,
    IV,
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    /// Local Euler number, equal to ord Δ of a minimal model in characteristic 0.
    pub fn euler(self) -> u32 {
        match self {
            KodairaType::I(n) => n,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::IStar(n) => n + 6,
            KodairaType::IVStar => 8,
            KodairaType::IIIStar => 9,
            KodairaType::IIStar => 10,
        }
    }

    /// Type of a minimal model with the given orders; `None` stands for an identically zero invariant.
    pub fn from_orders(v4: Option<i64>, v6: Option<i64>, vd: i64) -> Option<KodairaType> {
        use KodairaType::*;
        if vd == 0 {
            return Some(I(0));
        }
        if v4 == Some(0) {
            return Some(I(vd as u32));
        }
        let ge = |v: Option<i64>, k: i64| v.is_none_or(|v| v >= k);
        let eq = |v: Option<i64>, k: i64| v == Some(k);
        Some(match vd {
            2 if ge(v4, 1) && eq(v6, 1) => II,
            3 if eq(v4, 1) && ge(v6, 2) => III,
            4 if ge(v4, 2) && eq(v6, 2) => IV,
            6 if ge(v4, 2) && ge(v6, 3) => IStar(0),
            8 if ge(v4, 3) && eq(v6, 4) => IVStar,
            9 if eq(v4, 3) && ge(v6, 5) => IIIStar,
            10 if ge(v4, 4) && eq(v6, 5) => IIStar,
            n if n > 6 && eq(v4, 2) && eq(v6, 3) => IStar((n - 6) as u32),
            _ => return None,
        })
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Family19,
    Family19Alt,
    Weier1,
    Inose,
    Can1X,
}

impl Model {
    pub const ALL: [Model; 5] = [Model::Family19, Model::Family19Alt, Model::Weier1, Model::Inose, Model::Can1X];

    pub fn name(self) -> &'static str {
        match self {
            Model::Family19 => "family19",
            Model::Family19Alt => "family19alt",
            Model::Weier1 => "weier1",
            Model::Inose => "inose",
            Model::Can1X => "can1x",
        }
    }

    pub fn parameter(self) -> &'static str {
        match self {
            Model::Inose => "u",
            Model::Can1X => "x",
            _ => "s",
        }
    }

    /// `y² = x³ + a2 x² + a4 x + a6` over Q(t)(parameter).
    fn coefficients(self) -> [&'static str; 3] {
        match self {
            Model::Family19 => ["1/4*(s^2-1)^2", "s^2*(s^2-1)^3/(64*t)", "0"],
            Model::Family19Alt => ["4*s^2", "-s^3*(s-1)^2/t", "0"],
            Model::Weier1 => ["2*(32*s^4-64*s^3+32*s^2-t)", "t^2", "0"],
            Model::Inose => ["0", "-16/3*t^3*(16*t+9)", "512*t^5*u + 8*t^4/u + 8/27*(1024*t^2-2592*t)*t^4"],
            Model::Can1X => ["(1-x)^2", "8*(1-x)/(256*t*x)", "16/(256*t*x)^2"],
        }
    }

    /// Singular fibers as listed for the model; `inf` names the place at infinity.
    fn expected(self, t: &Q) -> Vec<(&'static str, KodairaType)> {
        use KodairaType::*;
        let one = t.is_one();
        match self {
            Model::Family19 if one => vec![("s+1", IIIStar), ("s", I(4)), ("s-1", IIIStar), ("inf", I(2))],
            Model::Family19 => vec![("s+1", IIIStar), ("s", I(4)), ("s-1", IIIStar), ("(t-1)*s^2-t", I(1))],
            Model::Family19Alt if one => vec![("s", IIIStar), ("inf", IIIStar), ("s-1", I(4)), ("s+1", I(2))],
            Model::Family19Alt => vec![("s", IIIStar), ("inf", IIIStar), ("s-1", I(4)), ("s^2-2*(1-2*t)*s+1", I(1))],
            Model::Weier1 if one => vec![
                ("s", I(2)),
                ("2*s-1", I(2)),
                ("s-1", I(2)),
                ("inf", I(16)),
                ("s^2-s-1/4", I(1)),
            ],
            Model::Weier1 => vec![("s-1", I(2)), ("s", I(2)), ("-16*s^4+32*s^3-16*s^2+t", I(1)), ("inf", I(16))],
            Model::Inose => {
                let mut v = vec![("u", IIStar), ("inf", IIStar)];
                if one {
                    v.extend([("8*u+1", I(2)), ("1728*u^2-3568*u+27", I(1))]);
                } else if *t == q(81, 256) {
                    v.extend([("9*u-2", I(2)), ("648*u^2-1413*u+32", I(1))]);
                } else if *t == q(-9, 16) {
                    v.push(("36*u^2-66*u-1", II));
                } else {
                    v.push((
                        "110592*t^2*u^4 + (131072*t^3-331776*t^2)*u^3 + (-262144*t^3+211968*t^2-3456*t)*u^2 + (2048*t^2-5184*t)*u + 27",
                        I(1),
                    ));
                }
                v
            }
            Model::Can1X if one => vec![("x", IVStar), ("inf", I(12)), ("4*x-1", I(2)), ("16*x^2-40*x+27", I(1))],
            Model::Can1X => vec![("x", IVStar), ("inf", I(12)), ("256*t*x*(x-1)^3+27", I(1))],
        }
    }
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Model> {
        Model::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown model {s}; expected one of family19, family19alt, weier1, inose, can1x")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberRow {
    pub place: String,
    pub degree: u32,
    /// Orders of the minimal model; `None` for an identically zero invariant.
    pub ord_c4: Option<i64>,
    pub ord_c6: Option<i64>,
    pub ord_delta: i64,
    pub inferred: Option<String>,
    pub expected: String,
}

impl FiberRow {
    pub fn matches(&self) -> bool {
        self.inferred.as_deref() == Some(self.expected.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KodairaProfile {
    pub model: Model,
    pub t: String,
    pub rows: Vec<FiberRow>,
    pub euler_sum: i64,
    /// Factors of Δ, c4 or c6 not accounted for by the listed places.
    pub unexpected: Vec<String>,
}

impl KodairaProfile {
    pub fn passed(&self) -> bool {
        self.unexpected.is_empty() && self.euler_sum == 24 && self.rows.iter().all(FiberRow::matches)
    }
}

enum Place {
    Finite(UPoly),
    Infinity,
}

fn ord(f: &RatFunc, p: &Place) -> Option<i64> {
    match p {
        Place::Finite(p) => f.valuation(p),
        Place::Infinity => f.valuation_inf(),
    }
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

pub fn kodaira_profile(model: Model, t: &Q) -> Result<KodairaProfile> {
    profile_against(model, t, model.expected(t))
}

fn profile_against(model: Model, t: &Q, mut expected: Vec<(&str, KodairaType)>) -> Result<KodairaProfile> {
    if t.is_zero() {
        return Err(Error::Domain("t must be nonzero".into()));
    }
    let d = RatFuncs;
    let param = model.parameter();
    let mut env: Env<RatFunc> = Env::new();
    env.insert(param.into(), RatFunc::x());
    env.insert("t".into(), RatFunc::constant(t.clone()));
    let eval = |s: &str| {
        ex(s).eval(&d, &env).map_err(|e| Error::Domain(format!("{} at t={}: {e:?}", model.name(), fmt_q(t))))
    };
    let [a2, a4, a6] = model.coefficients().map(eval);
    let (c4, c6, delta) = weierstrass_invariants(&d, &a2?, &a4?, &a6?);
    if delta.is_zero() {
        return Err(Error::Singular(format!("{} has Δ = 0 at t={}", model.name(), fmt_q(t))));
    }
    let mut rows = Vec::new();
    let mut residual = [delta.num.clone(), delta.den.clone(), c4.den.clone(), c6.den.clone()];
    let mut euler_sum = 0;
    let mut repeated = Vec::new();
    if !expected.iter().any(|(p, _)| *p == "inf") {
        expected.push(("inf", KodairaType::I(0)));
    }
    for (label, kind) in expected {
        let (place, degree, name) = if label == "inf" {
            (Place::Infinity, 1, "inf".to_string())
        } else {
            let p = eval(label)?.num;
            if !p.is_squarefree() {
                repeated.push(format!("repeated root in {}", p.monic().display(param)));
            }
            for r in residual.iter_mut() {
                *r = r.strip(&p);
            }
            let deg = p.deg() as u32;
            let name = p.monic().display(param);
            (Place::Finite(p), deg, name)
        };
        let v4 = ord(&c4, &place);
        let v6 = ord(&c6, &place);
        let vd = ord(&delta, &place).unwrap();
        let k = [v4.map(|v| floor_div(v, 4)), v6.map(|v| floor_div(v, 6)), Some(floor_div(vd, 12))]
            .into_iter()
            .flatten()
            .min()
            .unwrap();
        let (v4, v6, vd) = (v4.map(|v| v - 4 * k), v6.map(|v| v - 6 * k), vd - 12 * k);
        euler_sum += degree as i64 * vd;
        rows.push(FiberRow {
            place: name,
            degree,
            ord_c4: v4,
            ord_c6: v6,
            ord_delta: vd,
            inferred: KodairaType::from_orders(v4, v6, vd).map(|k| k.to_string()),
            expected: kind.to_string(),
        });
    }
    let mut unexpected: Vec<String> =
        residual.iter().filter(|r| r.deg() > 0).map(|r| r.monic().display(param)).collect();
    unexpected.extend(repeated);
    Ok(KodairaProfile { model, t: fmt_q(t), rows, euler_sum, unexpected })
}

/// Parameters exercised by default: a generic value plus the special ones.
pub fn default_parameters() -> Vec<Q> {
    vec![qi(2), qi(-3), q(5, 7), qi(1), q(81, 256), q(-9, 16)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row<'a>(p: &'a KodairaProfile, place: &str) -> &'a FiberRow {
        p.rows.iter().find(|r| r.place == place).unwrap()
    }

    #[test]
    fn family19_at_two() {
        let p = kodaira_profile(Model::Family19, &qi(2)).unwrap();
        assert!(p.passed(), "{p:?}");
        assert_eq!(row(&p, "s + 1").ord_delta, 9);
        assert_eq!(row(&p, "s").ord_delta, 4);
        assert_eq!(row(&p, "s^2 - 2").inferred.as_deref(), Some("I1"));
    }

    #[test]
    fn inose_lists() {
        let p = kodaira_profile(Model::Inose, &qi(2)).unwrap();
        assert!(p.passed(), "{p:?}");
        assert_eq!(row(&p, "u").ord_delta, 10);
        assert_eq!(row(&p, "inf").inferred.as_deref(), Some("II*"));
        let p = kodaira_profile(Model::Inose, &q(-9, 16)).unwrap();
        assert!(p.passed(), "{p:?}");
        assert_eq!(p.rows.iter().filter(|r| r.expected == "II").map(|r| r.degree).sum::<u32>(), 2);
    }

    #[test]
    fn all_models_all_parameters() {
        for m in Model::ALL {
            for t in default_parameters() {
                let p = kodaira_profile(m, &t).unwrap();
                assert!(p.passed(), "{} t={}: {:?}", m.name(), fmt_q(&t), p);
            }
        }
    }

    #[test]
    fn wrong_list_is_reported() {
        let generic = Model::Inose.expected(&qi(2));
        let p = profile_against(Model::Inose, &qi(1), generic).unwrap();
        assert!(!p.passed());
        assert!(!p.unexpected.is_empty());
        let p = profile_against(Model::Family19, &qi(2), vec![("s", KodairaType::I(4))]).unwrap();
        assert!(!p.passed());
        assert!(kodaira_profile(Model::Family19, &qi(0)).is_err());
        assert_eq!(KodairaType::from_orders(Some(2), Some(3), 8), Some(KodairaType::IStar(2)));
        assert_eq!(KodairaType::from_orders(None, Some(1), 2), Some(KodairaType::II));
        assert_eq!(KodairaType::from_orders(Some(1), Some(1), 5), None);
    }
}
