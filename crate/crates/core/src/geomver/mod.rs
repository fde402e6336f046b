//! Randomized verification of explicit maps and identities, plus Kodaira profiles.
//!
//! A map entry samples free variables over a random word-sized prime field, solves the
//! source equation for one variable of degree at most two, pushes the point through one or
//! more stages of simultaneous assignments and checks that every target expression vanishes.

pub mod catalog;
pub mod expr;
pub mod kodaira;
pub mod poly;
pub mod si;

use crate::algebra::Domain;
use crate::error::{Error, Result};
use crate::exec::{derive_seed, Exec};
use crate::fp64::Fp64;
use expr::{Env, EvalError, Expr};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    Sample(String),
    Define(String, Expr),
    /// Solve `eq = 0` for the variable; `eq` must have degree at most 2 in it.
    Solve(String, Expr),
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Link {
    pub name: String,
    pub steps: Vec<Step>,
    pub stages: Vec<Vec<(String, Expr)>>,
    pub targets: Vec<Expr>,
}

impl Link {
    pub fn new(name: &str) -> Self {
        Link { name: name.into(), ..Default::default() }
    }
    pub fn sample(mut self, vars: &str) -> Self {
        for v in vars.split_whitespace() {
            self.steps.push(Step::Sample(v.into()));
        }
        self
    }
    pub fn define(mut self, v: &str, e: &str) -> Self {
        self.steps.push(Step::Define(v.into(), expr::ex(e)));
        self
    }
    pub fn solve(mut self, v: &str, e: &str) -> Self {
        self.steps.push(Step::Solve(v.into(), expr::ex(e)));
        self
    }
    pub fn stage(mut self, assignments: &[(&str, &str)]) -> Self {
        self.stages
            .push(assignments.iter().map(|(v, e)| (v.to_string(), expr::ex(e))).collect());
        self
    }
    pub fn target(mut self, e: &str) -> Self {
        self.targets.push(expr::ex(e));
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expect {
    Holds,
    /// Negative control: the verifier must find a counterexample.
    Fails,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MapEntry {
    pub name: String,
    pub anchor: &'static str,
    pub expect: Expect,
    /// Runs the steps of the first link, then the stages and targets of every link in order.
    pub links: Vec<Link>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MapReport {
    pub name: String,
    pub expect: Expect,
    pub trials: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
    pub resamples: usize,
    pub degree_bound: u64,
    /// log2 of the probability that a false identity survives every trial.
    pub miss_log2: f64,
}

impl MapReport {
    pub fn holds(&self) -> bool {
        self.failures == 0
    }
    /// Outcome agrees with the entry's expectation.
    pub fn ok(&self) -> bool {
        self.holds() == (self.expect == Expect::Holds)
    }
}

enum Attempt {
    Resample,
    Done(Option<String>),
}

fn lift(e: EvalError) -> std::result::Result<Attempt, Error> {
    match e {
        EvalError::DivisionByZero | EvalError::BadConstant => Ok(Attempt::Resample),
        EvalError::Unbound(v) => Err(Error::Config(format!("unbound variable {v}"))),
    }
}

macro_rules! tryeval {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return lift(err),
        }
    };
}

fn solve_step<R: Rng>(
    fp: &Fp64,
    env: &mut Env<u64>,
    var: &str,
    eq: &Expr,
    rng: &mut R,
) -> std::result::Result<Option<std::result::Result<(), EvalError>>, Error> {
    let mut at = |v: i64| {
        env.insert(var.to_string(), fp.from_i64(v));
        eq.eval(fp, env)
    };
    let vals: std::result::Result<Vec<u64>, EvalError> = [0, 1, -1, 2].iter().map(|&v| at(v)).collect();
    let vals = match vals {
        Ok(v) => v,
        Err(e) => return Ok(Some(Err(e))),
    };
    let half = fp.inv(2).unwrap();
    let c0 = vals[0];
    let c1 = fp.mul(fp.sub(vals[1], vals[2]), half);
    let c2 = fp.sub(fp.mul(fp.add(vals[1], vals[2]), half), c0);
    let fit = fp.add(fp.add(c0, fp.mul(2, c1)), fp.mul(4, c2));
    if fit != vals[3] {
        return Err(Error::Config(format!("equation for {var} has degree above 2 in {var}")));
    }
    let root = if c2 == 0 {
        if c1 == 0 {
            return Ok(None);
        }
        fp.mul(fp.neg(c0), fp.inv(c1).unwrap())
    } else {
        let disc = fp.sub(fp.mul(c1, c1), fp.mul(4, fp.mul(c0, c2)));
        let Some(r) = fp.sqrt(disc) else { return Ok(None) };
        let r = if rng.random_bool(0.5) { r } else { fp.neg(r) };
        fp.mul(fp.sub(r, c1), fp.inv(fp.mul(2, c2)).unwrap())
    };
    env.insert(var.to_string(), root);
    Ok(Some(Ok(())))
}

fn attempt<R: Rng>(entry: &MapEntry, fp: &Fp64, rng: &mut R) -> std::result::Result<Attempt, Error> {
    let mut env: Env<u64> = BTreeMap::new();
    let mut sampled = Vec::new();
    for step in &entry.links[0].steps {
        match step {
            Step::Sample(v) => {
                let x = rng.random_range(0..fp.p());
                env.insert(v.clone(), x);
                sampled.push(v.clone());
            }
            Step::Define(v, e) => {
                let x = tryeval!(e.eval(fp, &env));
                env.insert(v.clone(), x);
            }
            Step::Solve(v, e) => match solve_step(fp, &mut env, v, e, rng)? {
                None => return Ok(Attempt::Resample),
                Some(Err(err)) => return lift(err),
                Some(Ok(())) => {}
            },
        }
    }
    for link in &entry.links {
        for stage in &link.stages {
            let mut new = Vec::with_capacity(stage.len());
            for (v, e) in stage {
                new.push((v.clone(), tryeval!(e.eval(fp, &env))));
            }
            env.extend(new);
        }
        for (i, t) in link.targets.iter().enumerate() {
            let val = tryeval!(t.eval(fp, &env));
            if val != 0 {
                let pts: Vec<String> = sampled.iter().map(|v| format!("{v}={}", env[v])).collect();
                return Ok(Attempt::Done(Some(format!(
                    "link {} target {i} nonzero at p={} ({})",
                    link.name,
                    fp.p(),
                    pts.join(", ")
                ))));
            }
        }
    }
    Ok(Attempt::Done(None))
}

/// Crude total-degree bound of the target expressions in the sampled variables.
pub fn degree_bound(entry: &MapEntry) -> u64 {
    let mut deg: BTreeMap<String, (u64, u64)> = BTreeMap::new();
    for step in &entry.links[0].steps {
        match step {
            Step::Sample(v) => {
                deg.insert(v.clone(), (1, 0));
            }
            Step::Define(v, e) => {
                let d = e.degree(&deg);
                deg.insert(v.clone(), d);
            }
            Step::Solve(v, e) => {
                let (n, d) = e.degree(&deg);
                deg.insert(v.clone(), (n + d, 0));
            }
        }
    }
    let mut best = 1;
    for link in &entry.links {
        for stage in &link.stages {
            let new: Vec<_> = stage.iter().map(|(v, e)| (v.clone(), e.degree(&deg))).collect();
            deg.extend(new);
        }
        for t in &link.targets {
            let (n, d) = t.degree(&deg);
            best = best.max(n + d);
        }
    }
    best
}

const MAX_ATTEMPTS: usize = 200;

/// Schwartz-Zippel test of one catalog entry.
pub fn verify_map(entry: &MapEntry, trials: usize, bits: u32, seed: u64, exec: Exec) -> Result<MapReport> {
    if trials == 0 {
        return Err(Error::Config("trials must be positive".into()));
    }
    if !(40..=63).contains(&bits) {
        return Err(Error::Config(format!("prime size {bits} outside 40..=63 bits")));
    }
    let idx: Vec<u64> = (0..trials as u64).collect();
    let outcomes = exec.map(&idx, |&i| -> Result<(usize, Option<String>)> {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &entry.name, i));
        let fp = Fp64::random_prime(bits, &mut rng);
        for k in 0..MAX_ATTEMPTS {
            match attempt(entry, &fp, &mut rng)? {
                Attempt::Resample => continue,
                Attempt::Done(f) => return Ok((k, f)),
            }
        }
        Err(Error::Sampling(format!("{}: no usable sample in {MAX_ATTEMPTS} attempts", entry.name)))
    });
    let mut resamples = 0;
    let mut failures = 0;
    let mut first_failure = None;
    for o in outcomes {
        let (r, f) = o?;
        resamples += r;
        if let Some(w) = f {
            failures += 1;
            first_failure.get_or_insert(w);
        }
    }
    if resamples * 10 > 9 * (resamples + trials) {
        return Err(Error::Sampling(format!("{}: resample rate above 90%", entry.name)));
    }
    let degree_bound = degree_bound(entry);
    let per_trial = (degree_bound as f64).log2() - (bits - 1) as f64;
    Ok(MapReport {
        name: entry.name.clone(),
        expect: entry.expect,
        trials,
        failures,
        first_failure,
        resamples,
        degree_bound,
        miss_log2: per_trial.min(0.0) * trials as f64,
    })
}

/// Evaluates every target of a link over an arbitrary domain with all variables supplied.
pub fn eval_targets<D: Domain>(d: &D, link: &Link, env: &Env<D::V>) -> std::result::Result<Vec<D::V>, EvalError> {
    let mut env = env.clone();
    for step in &link.steps {
        if let Step::Define(v, e) = step {
            let x = e.eval(d, &env)?;
            env.insert(v.clone(), x);
        }
    }
    for stage in &link.stages {
        let mut new = Vec::new();
        for (v, e) in stage {
            new.push((v.clone(), e.eval(d, &env)?));
        }
        env.extend(new);
    }
    link.targets.iter().map(|t| t.eval(d, &env)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(link: Link, expect: Expect) -> MapEntry {
        MapEntry { name: link.name.clone(), anchor: "test", expect, links: vec![link] }
    }

    #[test]
    fn identity_and_wrong_map() {
        let good = Link::new("id")
            .sample("t x y")
            .solve("z", "x*y*z*(1-x-y-z) - 1/(256*t)")
            .target("x*y*z*(1-x-y-z) - 1/(256*t)");
        let r = verify_map(&entry(good, Expect::Holds), 20, 62, 1, Exec::Sequential).unwrap();
        assert!(r.holds() && r.ok());
        let bad = Link::new("bad")
            .sample("t x y")
            .solve("z", "x*y*z*(1-x-y-z) - 1/(256*t)")
            .target("x*y*z*(1-x-y-z) - 1/(255*t)");
        let r = verify_map(&entry(bad, Expect::Fails), 5, 62, 1, Exec::Sequential).unwrap();
        assert!(!r.holds() && r.ok());
        assert_eq!(r.failures, 5);
    }

    #[test]
    fn config_errors() {
        let cubic = Link::new("cubic").sample("a").solve("z", "z^3 - a").target("z^3 - a");
        assert!(matches!(
            verify_map(&entry(cubic, Expect::Holds), 2, 62, 1, Exec::Sequential),
            Err(Error::Config(_))
        ));
        let unbound = Link::new("unbound").sample("a").target("b");
        assert!(verify_map(&entry(unbound, Expect::Holds), 2, 62, 1, Exec::Sequential).is_err());
        let degenerate = Link::new("deg").sample("a").define("b", "1/(a-a)").target("b");
        assert!(matches!(
            verify_map(&entry(degenerate, Expect::Holds), 2, 62, 1, Exec::Sequential),
            Err(Error::Sampling(_))
        ));
    }

    #[test]
    fn deterministic_under_seed() {
        let l = Link::new("sq").sample("a").solve("z", "z^2 - a").target("z^2 - a");
        let e = entry(l, Expect::Holds);
        let a = verify_map(&e, 30, 50, 9, Exec::Parallel).unwrap();
        let b = verify_map(&e, 30, 50, 9, Exec::Sequential).unwrap();
        assert_eq!(a, b);
    }
}
