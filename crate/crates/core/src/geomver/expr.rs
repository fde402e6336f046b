//! Expression trees with exact rational constants, an infix parser, and evaluation over any [`Domain`].

use crate::algebra::Domain;
use crate::error::{Error, Result};
use crate::rat::Q;
use num_bigint::BigInt;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Q),
    Var(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
pub enum EvalError {
    DivisionByZero,
    Unbound(String),
    /// A constant whose denominator vanishes in the domain.
    BadConstant,
}

pub type Env<V> = BTreeMap<String, V>;

impl Expr {
    pub fn parse(s: &str) -> Result<Expr> {
        let toks = tokenize(s)?;
        let mut p = Parser { toks, pos: 0, src: s };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }

    pub fn eval<D: Domain>(&self, d: &D, env: &Env<D::V>) -> std::result::Result<D::V, EvalError> {
        Ok(match self {
            Expr::Num(r) => d.from_q(r).ok_or(EvalError::BadConstant)?,
            Expr::Var(v) => env.get(v).cloned().ok_or_else(|| EvalError::Unbound(v.clone()))?,
            Expr::Add(a, b) => d.add(&a.eval(d, env)?, &b.eval(d, env)?),
            Expr::Sub(a, b) => d.sub(&a.eval(d, env)?, &b.eval(d, env)?),
            Expr::Mul(a, b) => d.mul(&a.eval(d, env)?, &b.eval(d, env)?),
            Expr::Div(a, b) => {
                let den = b.eval(d, env)?;
                let num = a.eval(d, env)?;
                d.div(&num, &den).ok_or(EvalError::DivisionByZero)?
            }
            Expr::Neg(a) => d.neg(&a.eval(d, env)?),
            Expr::Pow(a, k) => d.pow(&a.eval(d, env)?, *k),
        })
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_vars(out),
        }
    }

    /// Crude (numerator, denominator) degree bound given bounds for each variable.
    pub fn degree(&self, var_deg: &BTreeMap<String, (u64, u64)>) -> (u64, u64) {
        match self {
            Expr::Num(_) => (0, 0),
            Expr::Var(v) => var_deg.get(v).copied().unwrap_or((1, 0)),
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (n1, d1) = a.degree(var_deg);
                let (n2, d2) = b.degree(var_deg);
                ((n1 + d2).max(n2 + d1), d1 + d2)
            }
            Expr::Mul(a, b) => {
                let (n1, d1) = a.degree(var_deg);
                let (n2, d2) = b.degree(var_deg);
                (n1 + n2, d1 + d2)
            }
            Expr::Div(a, b) => {
                let (n1, d1) = a.degree(var_deg);
                let (n2, d2) = b.degree(var_deg);
                (n1 + d2, d1 + n2)
            }
            Expr::Neg(a) => a.degree(var_deg),
            Expr::Pow(a, k) => {
                let (n, d) = a.degree(var_deg);
                (n * *k as u64, d * *k as u64)
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(r) => write!(f, "{}", crate::rat::fmt_q(r)),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Div(a, b) => write!(f, "{a}/({b})"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Pow(a, k) => write!(f, "({a})^{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let n: String = cs[st..i].iter().collect();
            out.push(Tok::Num(n.parse().unwrap()));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {} in {:?}", self.pos, self.src))
    }

    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if c == '+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = if c == '*' {
                Expr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.peek_op() == Some('+') {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            match self.toks.get(self.pos) {
                Some(Tok::Num(n)) => {
                    let k: u32 = n.try_into().map_err(|_| self.err("exponent too large"))?;
                    self.pos += 1;
                    return Ok(Expr::Pow(Box::new(base), k));
                }
                _ => return Err(self.err("expected integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(Q::from_integer(n)))
            }
            Some(Tok::Ident(v)) => {
                self.pos += 1;
                Ok(Expr::Var(v))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            _ => Err(self.err("expected a number, variable or '('")),
        }
    }
}

/// Parses, panicking on malformed built-in formulas.
pub fn ex(s: &str) -> Expr {
    Expr::parse(s).unwrap_or_else(|e| panic!("{e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rationals;
    use crate::rat::{q, qi};

    fn ev(s: &str, vars: &[(&str, Q)]) -> std::result::Result<Q, EvalError> {
        let env: Env<Q> = vars.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        Expr::parse(s).unwrap().eval(&Rationals, &env)
    }

    #[test]
    fn precedence() {
        assert_eq!(ev("1+2*3", &[]).unwrap(), qi(7));
        assert_eq!(ev("-2^2", &[]).unwrap(), qi(-4));
        assert_eq!(ev("(1-x)/2", &[("x", qi(3))]).unwrap(), qi(-1));
        assert_eq!(ev("1/2/2", &[]).unwrap(), q(1, 4));
        assert_eq!(ev("x*y - y*x", &[("x", qi(3)), ("y", q(1, 5))]).unwrap(), qi(0));
    }

    #[test]
    fn errors() {
        assert!(Expr::parse("1+").is_err());
        assert!(Expr::parse("(1").is_err());
        assert!(Expr::parse("x^y").is_err());
        assert!(Expr::parse("x $ y").is_err());
        assert_eq!(ev("1/(x-1)", &[("x", qi(1))]), Err(EvalError::DivisionByZero));
        assert_eq!(ev("z", &[]), Err(EvalError::Unbound("z".into())));
    }

    #[test]
    fn degree_bound() {
        let e = ex("(x^2+1)/(x-y)");
        let d = e.degree(&BTreeMap::new());
        assert_eq!(d, (2, 1));
        assert_eq!(e.vars().into_iter().collect::<Vec<_>>(), vec!["x", "y"]);
    }
}
