//! Verification records, grid sweeps and their JSON-lines / CSV encodings.

use crate::charsum::CharacterSystem;
use crate::cmdata::{verify_quadratic_cm, verify_rational_cm};
use crate::ecount::{verify_curve_trace_theorem, CurveTheorem};
use crate::error::{Error, Result};
use crate::exec::{derive_seed, Exec};
use crate::ffield::{FieldSpec, FqElem};
use crate::geomver::catalog::catalog;
use crate::geomver::kodaira::{default_parameters, kodaira_profile, Model};
use crate::geomver::si::{j_match_check, verify_qt_on_curve, verify_si_parameters, x0_2_checks, SiReport};
use crate::geomver::{verify_map, MapReport};
use crate::hyperg::{hg_h2, hg_h3, ROUND_TOL};
use crate::k3count::{
    delta_bookkeeping, verify_bcm_identity, verify_e1_trace, verify_main_identity, verify_point_count_lemma,
    verify_trace_corollary, Comparison, SurfaceInstance,
};
use crate::nslat::{
    admissible_triples, delta_enumeration, ns_cm_gram, ns_gram_generic, t1_lattice, u2_complement, verify_table5,
    SectionProfile,
};
use crate::rat::{fmt_q, is_prime_u64, prime_power, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

pub const SCHEMA_VERSION: &str = "hgmk3/1";
pub const DEFAULT_SEED: u64 = 0x6867_6d6b_3301;

const FIELDS: [(&str, &str); 10] = [
    ("check", "string"),
    ("q", "integer|null"),
    ("t", "string|null"),
    ("subject", "string"),
    ("status", "pass|fail|skip"),
    ("lhs", "string|null"),
    ("rhs", "string|null"),
    ("residual", "number|null"),
    ("detail", "string"),
    ("timing_ms", "number (only with --timing)"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub check: String,
    pub q: Option<u64>,
    pub t: Option<String>,
    pub subject: String,
    pub status: Status,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub residual: Option<f64>,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Record {
    pub fn new(check: &str, subject: impl Into<String>, status: Status) -> Self {
        Record {
            check: check.into(),
            q: None,
            t: None,
            subject: subject.into(),
            status,
            lhs: None,
            rhs: None,
            residual: None,
            detail: String::new(),
            timing_ms: None,
        }
    }

    pub fn at(mut self, q: Option<u64>, t: Option<&Q>) -> Self {
        self.q = q;
        self.t = t.map(fmt_q);
        self
    }

    pub fn sides(mut self, lhs: impl ToString, rhs: impl ToString) -> Self {
        self.lhs = Some(lhs.to_string());
        self.rhs = Some(rhs.to_string());
        self
    }

    pub fn residual(mut self, r: f64) -> Self {
        self.residual = Some(r);
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }

    /// Skip for unmet preconditions, failure for anything else.
    pub fn from_error(check: &str, subject: impl Into<String>, e: &Error) -> Self {
        let status = match e {
            Error::Reduction(_) | Error::Unsupported(_) | Error::Domain(_) | Error::Singular(_) => Status::Skip,
            _ => Status::Fail,
        };
        Record::new(check, subject, status).detail(e.to_string())
    }

    fn comparison(check: &str, subject: impl Into<String>, c: &Comparison) -> Self {
        let mut notes: Vec<String> = c.also.iter().map(|(k, v)| format!("{k}={v}")).collect();
        notes.extend(c.notes.iter().map(|(k, v)| format!("{k}={v}")));
        Record::new(check, subject, Status::of(c.passed()))
            .sides(c.lhs, c.rhs)
            .residual(c.residual)
            .detail(notes.join(" "))
    }

    fn key(&self) -> (&str, Option<u64>, Option<&str>, &str) {
        (&self.check, self.q, self.t.as_deref(), &self.subject)
    }

    fn csv_row(&self, timing: bool) -> Vec<String> {
        let o = |x: &Option<String>| x.clone().unwrap_or_default();
        let mut row = vec![
            self.check.clone(),
            self.q.map(|q| q.to_string()).unwrap_or_default(),
            o(&self.t),
            self.subject.clone(),
            self.status.as_str().into(),
            o(&self.lhs),
            o(&self.rhs),
            self.residual.map(|r| serde_json::to_string(&r).unwrap()).unwrap_or_default(),
            self.detail.clone(),
        ];
        if timing {
            row.push(self.timing_ms.map(|r| r.to_string()).unwrap_or_default());
        }
        row
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(mut records: Vec<Record>) -> Self {
        records.sort_by(|a, b| a.key().cmp(&b.key()));
        Report { records }
    }

    pub fn count(&self, s: Status) -> usize {
        self.records.iter().filter(|r| r.status == s).count()
    }

    pub fn of_check(&self, check: &str) -> Vec<&Record> {
        self.records.iter().filter(|r| r.check == check).collect()
    }

    pub fn exit_code(&self) -> i32 {
        if self.count(Status::Fail) == 0 {
            0
        } else {
            1
        }
    }

    pub fn to_jsonl(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            s.push_str(&serde_json::to_string(r).expect("record serializes"));
            s.push('\n');
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let timing = self.records.iter().any(|r| r.timing_ms.is_some());
        let mut w = csv::Writer::from_writer(Vec::new());
        let n = if timing { FIELDS.len() } else { FIELDS.len() - 1 };
        w.write_record(FIELDS[..n].iter().map(|f| f.0)).expect("csv header");
        for r in &self.records {
            w.write_record(r.csv_row(timing)).expect("csv row");
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("utf8")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Jsonl => self.to_jsonl(),
            Format::Csv => self.to_csv(),
        }
    }
}

pub fn report_schema() -> serde_json::Value {
    serde_json::json!({
        "version": SCHEMA_VERSION,
        "fields": FIELDS.iter().map(|(n, t)| serde_json::json!({"name": n, "type": t})).collect::<Vec<_>>(),
        "order": ["check", "q", "t", "subject"],
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Jsonl,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" | "jsonl" | "json-lines" => Ok(Format::Jsonl),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Config(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Bcm,
    Lemma,
    Trace,
    Main,
    E1Trace,
    Delta,
    CurveTheorem,
    Gauss,
    JMatch,
    Maps,
    SiParams,
    Qt,
    X02,
    Fibration,
    Lattice,
    Cm,
}

impl Check {
    pub const ALL: [Check; 16] = [
        Check::Bcm,
        Check::Lemma,
        Check::Trace,
        Check::Main,
        Check::E1Trace,
        Check::Delta,
        Check::CurveTheorem,
        Check::Gauss,
        Check::JMatch,
        Check::Maps,
        Check::SiParams,
        Check::Qt,
        Check::X02,
        Check::Fibration,
        Check::Lattice,
        Check::Cm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Bcm => "bcm",
            Check::Lemma => "lemma",
            Check::Trace => "trace",
            Check::Main => "main",
            Check::E1Trace => "e1-trace",
            Check::Delta => "delta",
            Check::CurveTheorem => "curve-theorem",
            Check::Gauss => "gauss",
            Check::JMatch => "j-match",
            Check::Maps => "maps",
            Check::SiParams => "si-params",
            Check::Qt => "qt",
            Check::X02 => "x0-2",
            Check::Fibration => "fibration",
            Check::Lattice => "lattice",
            Check::Cm => "cm",
        }
    }

    fn uses_t(self) -> bool {
        matches!(self, Check::Bcm | Check::Lemma | Check::Trace | Check::Main | Check::E1Trace | Check::Delta)
    }

    fn uses_q(self) -> bool {
        self.uses_t() || matches!(self, Check::CurveTheorem | Check::Gauss | Check::JMatch)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown check {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub qs: Vec<u64>,
    pub ts: Vec<Q>,
    pub checks: Vec<Check>,
    pub seed: u64,
    pub bits: u32,
    /// Schwartz–Zippel trials per map.
    pub trials: usize,
    /// Prime size for map trials.
    pub map_bits: u32,
    /// Random samples for `j-match`.
    pub samples: usize,
    pub exec: Exec,
    pub timing: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            qs: vec![],
            ts: vec![],
            checks: vec![],
            seed: DEFAULT_SEED,
            bits: 53,
            trials: 100,
            map_bits: 62,
            samples: 200,
            exec: Exec::Parallel,
            timing: false,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.checks.is_empty() {
            return Err(Error::Config("no checks selected".into()));
        }
        let need_q = self.checks.iter().any(|c| c.uses_q());
        let need_t = self.checks.iter().any(|c| c.uses_t());
        if need_q && self.qs.is_empty() {
            return Err(Error::Config("empty q list".into()));
        }
        for &q in &self.qs {
            match prime_power(q) {
                Some((p, _)) if p != 2 => {}
                _ => return Err(Error::Config(format!("q = {q} is not an odd prime power"))),
            }
        }
        if need_t && self.ts.is_empty() {
            return Err(Error::Config("empty t list".into()));
        }
        if self.ts.iter().any(|t| *t == Q::from_integer(0.into())) {
            return Err(Error::Config("t = 0 is not allowed".into()));
        }
        if self.bits < 53 {
            return Err(Error::Config(format!("precision {} below 53 bits", self.bits)));
        }
        Ok(())
    }
}

struct QCtx {
    q: u64,
    cs: std::result::Result<CharacterSystem, Error>,
}

fn timed<T>(on: bool, f: impl FnOnce() -> T) -> (T, Option<f64>) {
    let start = Instant::now();
    let out = f();
    (out, on.then(|| start.elapsed().as_secs_f64() * 1e3))
}

/// Runs every selected check and returns the sorted report.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Report> {
    cfg.validate()?;
    let checks: BTreeSet<Check> = cfg.checks.iter().copied().collect();
    let mut records = Vec::new();

    let ctxs: Vec<QCtx> = if checks.iter().any(|c| c.uses_q()) {
        let qs: Vec<u64> = cfg.qs.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        cfg.exec.map(&qs, |&q| QCtx {
            q,
            cs: FieldSpec::of_order(q).and_then(|f| CharacterSystem::new(Arc::new(f), cfg.bits)),
        })
    } else {
        vec![]
    };

    let mut cells: Vec<(Check, usize, Option<usize>)> = Vec::new();
    for &c in &checks {
        if c.uses_t() {
            for qi in 0..ctxs.len() {
                for ti in 0..cfg.ts.len() {
                    cells.push((c, qi, Some(ti)));
                }
            }
        } else if matches!(c, Check::CurveTheorem | Check::Gauss) {
            for qi in 0..ctxs.len() {
                cells.push((c, qi, None));
            }
        }
    }
    let out = cfg.exec.map(&cells, |&(c, qi, ti)| {
        let ctx = &ctxs[qi];
        let t = ti.map(|i| &cfg.ts[i]);
        let (mut recs, ms) = timed(cfg.timing, || grid_cell(c, ctx, t, cfg.bits));
        for r in &mut recs {
            r.q = Some(ctx.q);
            r.t = t.map(fmt_q);
            r.timing_ms = ms;
        }
        recs
    });
    records.extend(out.into_iter().flatten());

    for &c in &checks {
        let (recs, ms) = timed(cfg.timing, || global_check(c, cfg, &ctxs));
        records.extend(recs.into_iter().map(|mut r| {
            r.timing_ms = r.timing_ms.or(ms);
            r
        }));
    }
    Ok(Report::new(records))
}

fn grid_cell(c: Check, ctx: &QCtx, t: Option<&Q>, bits: u32) -> Vec<Record> {
    let name = c.name();
    let cs = match &ctx.cs {
        Ok(cs) => cs,
        Err(e) => return vec![Record::new(name, "", Status::Fail).detail(e.to_string())],
    };
    let field = cs.field_arc().clone();
    let inst = match t.map(|t| SurfaceInstance::new(field.clone(), t)) {
        Some(Ok(i)) => Some(i),
        Some(Err(e)) => return vec![Record::from_error(name, "", &e)],
        None => None,
    };
    let one = |r: Result<Comparison>| match r {
        Ok(c) => vec![Record::comparison(name, "", &c)],
        Err(e) => vec![Record::from_error(name, "", &e)],
    };
    match c {
        Check::Bcm => one(verify_bcm_identity(cs, inst.as_ref().unwrap())),
        Check::Lemma => one(verify_point_count_lemma(inst.as_ref().unwrap())),
        Check::Trace => one(verify_trace_corollary(cs, inst.as_ref().unwrap())),
        Check::Main => main_cell(cs, inst.as_ref().unwrap()),
        Check::E1Trace => match verify_e1_trace(inst.as_ref().unwrap()) {
            Ok(v) => v
                .iter()
                .map(|(s, c)| Record::comparison(name, format!("S={}", field.format(*s)), c))
                .collect(),
            Err(e) => vec![Record::from_error(name, "", &e)],
        },
        Check::Delta => match delta_bookkeeping(inst.as_ref().unwrap()) {
            Ok(d) => vec![Record::new(name, "", Status::of(d.direct == d.value_condition))
                .sides(d.direct, d.value_condition)
                .detail(format!("definition-order reading {}", d.inner_definition_order))],
            Err(e) => vec![Record::from_error(name, "", &e)],
        },
        Check::CurveTheorem => vec![curve_theorem_cell(cs)],
        Check::Gauss => vec![gauss_cell(cs, bits)],
        _ => unreachable!("not a grid check"),
    }
}

fn main_cell(cs: &CharacterSystem, inst: &SurfaceInstance) -> Vec<Record> {
    let name = Check::Main.name();
    let f = cs.field();
    if f.p() == 3 {
        return vec![Record::new(name, "", Status::Skip).detail("q divisible by 3")];
    }
    match verify_main_identity(cs, inst) {
        Ok(cases) => cases
            .iter()
            .map(|m| {
                let subject = format!("S={},{}", f.format(m.s), if m.sign > 0 { "+" } else { "-" });
                match &m.outcome {
                    Ok(c) => Record::comparison(name, subject, c),
                    Err(why) => Record::new(name, subject, Status::Skip).detail(why.clone()),
                }
            })
            .collect(),
        Err(e) => vec![Record::from_error(name, "", &e)],
    }
}

fn curve_theorem_cell(cs: &CharacterSystem) -> Record {
    let name = Check::CurveTheorem.name();
    let f = cs.field();
    let (mut checked, mut passed, mut skipped) = (0u64, 0u64, 0u64);
    let mut residual: f64 = 0.0;
    let mut first = None;
    for a in f.units() {
        for b in f.units() {
            match verify_curve_trace_theorem(cs, a, b) {
                Ok(CurveTheorem::Checked { count, predicted, residual: r, .. }) => {
                    checked += 1;
                    residual = residual.max(r);
                    if count as i64 == predicted {
                        passed += 1;
                    } else if first.is_none() {
                        first = Some(format!("(a,b)=({},{}): {count} vs {predicted}", f.format(a), f.format(b)));
                    }
                }
                Ok(CurveTheorem::Skipped(_)) => skipped += 1,
                Err(e) => {
                    return Record::from_error(name, "", &e);
                }
            }
        }
    }
    if checked == 0 {
        return Record::new(name, "all (a,b)", Status::Skip).detail("q divisible by 3");
    }
    let mut d = format!("{skipped} singular pairs skipped");
    if let Some(x) = first {
        d = format!("{d}; first mismatch {x}");
    }
    Record::new(name, "all (a,b)", Status::of(passed == checked))
        .sides(passed, checked)
        .residual(residual)
        .detail(d)
}

/// `|g(m)|^2 = q`, and H3/H2 unchanged under an additive twist and under a different generator.
fn gauss_cell(cs: &CharacterSystem, bits: u32) -> Record {
    let name = Check::Gauss.name();
    let f = cs.field();
    let q = f.q();
    let rel = cs.residual() / q as f64;
    let run = || -> Result<(usize, usize, f64)> {
        let twisted = CharacterSystem::with_twist(cs.field_arc().clone(), bits, f.generator())?;
        // F_3 has a single generator
        let g2 = Arc::new(FieldSpec::with_generator_rank(f.p(), f.n(), 1).or_else(|_| FieldSpec::new(f.p(), f.n()))?);
        let regen = CharacterSystem::new(g2.clone(), bits)?;
        let sums: &[fn(&CharacterSystem, FqElem) -> Result<(i64, f64)>] =
            if f.p() == 3 { &[hg_h3] } else { &[hg_h3, hg_h2] };
        let mut compared = 0;
        let mut agree = 0;
        let mut res: f64 = 0.0;
        for idx in 1..q {
            let x = f.from_index(idx);
            let y = g2.from_index(idx);
            for h in sums {
                let a = h(cs, x)?;
                let b = h(&twisted, x)?;
                let c = h(&regen, y)?;
                compared += 1;
                res = res.max(a.1).max(b.1).max(c.1);
                if a.0 == b.0 && a.0 == c.0 {
                    agree += 1;
                }
            }
        }
        Ok((agree, compared, res))
    };
    match run() {
        Ok((agree, compared, res)) => Record::new(name, "", Status::of(rel < 1e-9 && agree == compared && res < ROUND_TOL))
            .sides(agree, compared)
            .residual(rel)
            .detail(format!("max |g|^2/q - 1 = {rel:e}; rescaled sums agree {agree}/{compared}, rounding residual {res:e}")),
        Err(e) => Record::from_error(name, "", &e),
    }
}

fn global_check(c: Check, cfg: &SweepConfig, ctxs: &[QCtx]) -> Vec<Record> {
    let name = c.name();
    let wrap = |r: Result<Vec<Record>>| r.unwrap_or_else(|e| vec![Record::from_error(name, "", &e)]);
    match c {
        Check::JMatch => wrap(j_match_records(cfg, ctxs)),
        Check::Maps => {
            let mut out = Vec::new();
            for entry in catalog() {
                match verify_map(&entry, cfg.trials, cfg.map_bits, cfg.seed, cfg.exec) {
                    Ok(r) => out.push(map_record(name, &r)),
                    Err(e) => out.push(Record::from_error(name, entry.name.clone(), &e)),
                }
            }
            out
        }
        Check::SiParams => wrap(verify_si_parameters(cfg.trials, cfg.map_bits, cfg.seed, cfg.exec).map(|r| si_records(name, &r))),
        Check::Qt => wrap(verify_qt_on_curve(cfg.trials, cfg.map_bits, cfg.seed, cfg.exec).map(|r| si_records(name, &r))),
        Check::X02 => wrap(x0_2_checks(cfg.trials, cfg.map_bits, cfg.seed, cfg.exec).map(|r| si_records(name, &r))),
        Check::Fibration => fibration_records(cfg.exec),
        Check::Lattice => wrap(lattice_records()),
        Check::Cm => wrap(cm_records()),
        _ => vec![],
    }
}

pub fn map_record(check: &str, r: &MapReport) -> Record {
    let mut d = format!(
        "expect {:?}; degree bound {}; miss probability 2^{:.1}; resamples {}",
        r.expect, r.degree_bound, r.miss_log2, r.resamples
    )
    .to_lowercase();
    if let Some(x) = &r.first_failure {
        d = format!("{d}; first failure: {x}");
    }
    Record::new(check, r.name.clone(), Status::of(r.ok()))
        .sides(r.failures, r.trials)
        .detail(d)
}

pub fn si_records(check: &str, r: &SiReport) -> Vec<Record> {
    let mut out: Vec<Record> = r
        .exact
        .iter()
        .map(|e| Record::new(check, e.name.clone(), Status::of(e.passed)).detail(e.detail.clone()))
        .collect();
    out.extend(r.maps.iter().map(|m| map_record(check, m)));
    out
}

fn j_match_records(cfg: &SweepConfig, ctxs: &[QCtx]) -> Result<Vec<Record>> {
    let name = Check::JMatch.name();
    let fields: Vec<&FieldSpec> = ctxs
        .iter()
        .filter_map(|c| c.cs.as_ref().ok().map(|cs| cs.field()))
        .filter(|f| f.p() > 3 && f.q() > 7)
        .collect();
    if fields.is_empty() {
        return Ok(vec![Record::new(name, "random (q,t,S)", Status::Skip).detail("no q with gcd(q,6)=1 and q > 7")]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, name, 0));
    let mut samples = Vec::with_capacity(cfg.samples);
    while samples.len() < cfg.samples {
        let f = fields[rng.random_range(0..fields.len())];
        let t = f.from_index(rng.random_range(2..f.q()));
        if t == f.one() {
            continue;
        }
        if let Some(s) = f.sqrt(f.div(f.sub(t, f.one()), t)) {
            let s = if rng.random_bool(0.5) { f.neg(s) } else { s };
            samples.push((f, t, s));
        }
    }
    let results = cfg.exec.map(&samples, |&(f, t, s)| match j_match_check(f, t, s) {
        Ok(m) => (m.matches && m.twist_ok, String::new(), false),
        Err(e) => (false, format!("q={} t={} S={}: {e}", f.q(), f.format(t), f.format(s)), true),
    });
    let mut ok = 0;
    let mut degenerate = 0;
    let mut first = None;
    for (i, (pass, why, err)) in results.iter().enumerate() {
        if *pass {
            ok += 1;
        } else if *err {
            degenerate += 1;
            first.get_or_insert_with(|| why.clone());
        } else {
            let (f, t, s) = samples[i];
            first.get_or_insert_with(|| format!("q={} t={} S={}", f.q(), f.format(t), f.format(s)));
        }
    }
    let mut d = format!("{} samples over {} fields", samples.len(), fields.len());
    if let Some(x) = first {
        d = format!("{d}; first failure {x}");
    }
    Ok(vec![Record::new(name, "random (q,t,S)", Status::of(ok + degenerate == samples.len() && ok > 0))
        .sides(ok, samples.len() - degenerate)
        .detail(d)])
}

fn fibration_records(exec: Exec) -> Vec<Record> {
    let name = Check::Fibration.name();
    let cells: Vec<(Model, Q)> = Model::ALL
        .into_iter()
        .flat_map(|m| default_parameters().into_iter().map(move |t| (m, t)))
        .collect();
    exec.map(&cells, |(m, t)| match kodaira_profile(*m, t) {
        Ok(p) => {
            let types: Vec<String> = p
                .rows
                .iter()
                .map(|r| format!("{}@{}", r.inferred.as_deref().unwrap_or("?"), r.place))
                .collect();
            let mut d = types.join(" ");
            if !p.unexpected.is_empty() {
                d = format!("{d}; unexpected {}", p.unexpected.join(" "));
            }
            Record::new(name, m.name(), Status::of(p.passed()))
                .at(None, Some(t))
                .sides(p.euler_sum, 24)
                .detail(d)
        }
        Err(e) => Record::from_error(name, m.name(), &e).at(None, Some(t)),
    })
}

fn mat(m: &[[i64; 2]; 2]) -> String {
    format!("[[{},{}],[{},{}]]", m[0][0], m[0][1], m[1][0], m[1][1])
}

fn lattice_records() -> Result<Vec<Record>> {
    let name = Check::Lattice.name();
    let mut out = Vec::new();
    let g = ns_gram_generic()?;
    let ok = g.det.trim_start_matches('-') == "4" && g.signature == (1, 18, 0) && g.orthogonal;
    out.push(
        Record::new(name, "ns-generic", Status::of(ok))
            .sides(&g.det, "±4")
            .detail(format!(
                "signature {:?}; blocks E8(-1) det {}, E8(-1) det {}, U {:?}, gamma^2 {}",
                g.signature, g.l1_det, g.l2_det, g.u1, g.gamma_sq
            )),
    );
    let adm: Vec<String> = admissible_triples().iter().map(|t| format!("{t:?}")).collect();
    let expected: BTreeSet<(i64, i64, i64)> = [(0, 0, 0), (0, 0, 1), (1, 1, 0)].into();
    out.push(
        Record::new(name, "delta-enumeration", Status::of(admissible_triples() == expected))
            .sides(adm.join(" "), "(0, 0, 0) (0, 0, 1) (1, 1, 0)")
            .detail(format!("{} profiles enumerated", delta_enumeration().len())),
    );
    for (e7, g2, g3) in admissible_triples() {
        let g = if g2 == 1 { 2 } else if g3 == 1 { 3 } else { 0 };
        for p_o in 0..4 {
            let p = SectionProfile::optimal(p_o, e7 == 1, g);
            let cm = ns_cm_gram(&p)?;
            let b = cm.block;
            let comp = u2_complement(b[0][0] / 2, b[0][1], b[1][1] / 2)?;
            out.push(
                Record::new(name, format!("cm e7={e7} g2={g2} g3={g3} pO={p_o}"), Status::of(cm.passed() && comp.passed()))
                    .sides(mat(&cm.block), mat(&cm.closed_form))
                    .detail(format!(
                        "{} height {} det {} transcendental {}",
                        cm.class,
                        cm.height,
                        cm.det,
                        mat(&comp.gram)
                    )),
            );
        }
    }
    let t1 = t1_lattice()?;
    out.push(
        Record::new(name, "t1", Status::of(t1.passed()))
            .sides(&t1.ns_det, "-8")
            .detail(format!("height {} transcendental {}", t1.height, mat(&t1.transcendental))),
    );
    for r in verify_table5()? {
        out.push(
            Record::new(name, format!("table5 t={}", r.t), Status::of(r.passed))
                .sides(format!("{:?}", r.abc), &r.class)
                .detail(format!("{}; transcendental {}", r.detail, mat(&r.transcendental))),
        );
    }
    Ok(out)
}

fn cm_records() -> Result<Vec<Record>> {
    let name = Check::Cm.name();
    let mut out = Vec::new();
    for (kind, rows) in [("rational", verify_rational_cm()?), ("quadratic", verify_quadratic_cm()?)] {
        for c in rows {
            out.push(
                Record::new(name, format!("{kind} t={}", c.t), Status::of(c.passed))
                    .sides(&c.pair[0], &c.pair[1])
                    .detail(c.detail),
            );
        }
    }
    Ok(out)
}

/// Odd prime powers in `[lo, hi]`, or the primes only.
pub fn q_range(lo: u64, hi: u64, primes_only: bool) -> Vec<u64> {
    crate::rat::odd_prime_powers(lo, hi)
        .into_iter()
        .filter(|&q| !primes_only || is_prime_u64(q))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qi};

    fn cfg(checks: &[Check]) -> SweepConfig {
        SweepConfig {
            qs: vec![5, 7, 9, 11, 13],
            ts: vec![qi(2), qi(3), q(5, 2)],
            checks: checks.to_vec(),
            ..Default::default()
        }
    }

    #[test]
    fn grid_passes_and_orders() {
        let r = run_sweep(&cfg(&[Check::Bcm, Check::Lemma, Check::Main, Check::Trace])).unwrap();
        assert_eq!(r.count(Status::Fail), 0, "{}", r.to_jsonl());
        assert!(r.count(Status::Pass) > 20);
        let keys: Vec<_> = r.records.iter().map(|x| x.key()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        let lemma = r.records.iter().find(|x| x.check == "lemma" && x.q == Some(7) && x.t.as_deref() == Some("2")).unwrap();
        assert_eq!(lemma.lhs.as_deref(), Some("180"));
    }

    #[test]
    fn parallel_matches_sequential() {
        let mut c = cfg(&[Check::Bcm, Check::Main, Check::Gauss, Check::JMatch]);
        c.samples = 20;
        let a = run_sweep(&c).unwrap();
        c.exec = Exec::Sequential;
        let b = run_sweep(&c).unwrap();
        assert_eq!(a.to_jsonl(), b.to_jsonl());
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn skips_are_records() {
        let mut c = cfg(&[Check::Bcm, Check::Main]);
        c.qs = vec![3, 5];
        c.ts = vec![q(1, 5), qi(1)];
        let r = run_sweep(&c).unwrap();
        let bad = r.records.iter().find(|x| x.check == "bcm" && x.q == Some(5) && x.t.as_deref() == Some("1/5")).unwrap();
        assert_eq!(bad.status, Status::Skip);
        let m3 = r.records.iter().find(|x| x.check == "main" && x.q == Some(3)).unwrap();
        assert_eq!(m3.status, Status::Skip);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn config_errors() {
        let mut c = cfg(&[Check::Bcm]);
        c.ts.clear();
        assert!(matches!(run_sweep(&c), Err(Error::Config(_))));
        c = cfg(&[Check::Bcm]);
        c.qs.push(4);
        assert!(run_sweep(&c).is_err());
        assert!("nope".parse::<Check>().is_err());
        assert!(run_sweep(&cfg(&[])).is_err());
    }

    #[test]
    fn schema_and_csv() {
        let s = report_schema();
        assert_eq!(s["version"], "hgmk3/1");
        let names: Vec<&str> = s["fields"].as_array().unwrap().iter().map(|f| f["name"].as_str().unwrap()).collect();
        assert!(names.contains(&"residual"));
        let r = run_sweep(&cfg(&[Check::Lemma])).unwrap();
        let csv = r.to_csv();
        let header = csv.lines().next().unwrap();
        assert_eq!(header, names[..names.len() - 1].join(","));
        let first: serde_json::Value = serde_json::from_str(r.to_jsonl().lines().next().unwrap()).unwrap();
        let keys: Vec<&String> = first.as_object().unwrap().keys().collect();
        assert_eq!(keys.len(), names.len() - 1);
    }
}
