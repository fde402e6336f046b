use clap::{Args, Parser, Subcommand};
use hgmk3::charsum::{gauss_direct, CharacterSystem};
use hgmk3::cmdata::{classify_t, cm_trace_survey, record, verify_quadratic_cm, verify_rational_cm};
use hgmk3::ecount::{count_points, WeierstrassCurve};
use hgmk3::error::{Error, Result};
use hgmk3::exec::Exec;
use hgmk3::ffield::FieldSpec;
use hgmk3::geomver::catalog::{catalog, find};
use hgmk3::geomver::kodaira::{kodaira_profile, Model};
use hgmk3::geomver::verify_map;
use hgmk3::hyperg::{hg_sum, HGDatum};
use hgmk3::k3count::{count_affine, count_elliptic_surface, trace_transcendental, CountMode, SurfaceInstance};
use hgmk3::nslat::{ns_cm_gram, ns_gram_generic, u2_complement, verify_table5, SectionProfile};
use hgmk3::rat::{fmt_q, parse_q, Q};
use hgmk3::report::{map_record, q_range, report_schema, run_sweep, Check, Format, Report, SweepConfig, DEFAULT_SEED};
use serde_json::json;
use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

#[derive(Parser)]
#[command(name = "hgmk3", version, about = "Exact and numerical verifiers for finite-field hypergeometric sums and the xyz(1-x-y-z) K3 family")]
struct Cli {
    /// Seed for every randomized check.
    #[arg(long, global = true, env = "HGMK3_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Working precision in bits for Gauss tables (53, or up to 106 for double-double).
    #[arg(long, global = true, env = "HGMK3_PRECISION", default_value_t = 53)]
    precision: u32,
    /// Report encoding: jsonl or csv.
    #[arg(long, global = true, default_value = "jsonl")]
    format: String,
    /// Add per-record wall-clock time (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Modulus, generator and size of F_q.
    FieldInfo(FieldArgs),
    /// Residual statistics of the Gauss-sum table.
    GaussCheck {
        #[command(flatten)]
        field: FieldArgs,
        /// Additive twist psi(a x), as an element.
        #[arg(long)]
        twist: Option<String>,
    },
    /// One finite hypergeometric sum.
    Hgsum {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alpha: Vec<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        beta: Vec<String>,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    #[command(subcommand)]
    Curve(CurveCmd),
    #[command(subcommand)]
    Count(CountCmd),
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Runs a list of checks over one grid.
    Sweep {
        #[command(flatten)]
        grid: Grid,
        /// Comma-separated check names.
        #[arg(long, value_delimiter = ',', required = true)]
        checks: Vec<String>,
        #[command(flatten)]
        maps: MapArgs,
    },
    #[command(subcommand)]
    Fibration(FibrationCmd),
    #[command(subcommand)]
    Lattice(LatticeCmd),
    #[command(subcommand)]
    Cm(CmCmd),
    /// Prints the report schema.
    Schema,
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    n: u32,
}

impl FieldArgs {
    fn build(&self) -> Result<Arc<FieldSpec>> {
        Ok(Arc::new(FieldSpec::new(self.p, self.n)?))
    }
}

#[derive(Subcommand)]
enum CurveCmd {
    /// Point count of y^2 = x^3 + a2 x^2 + a4 x + a6.
    Count {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value = "0")]
        a2: String,
        #[arg(long, default_value = "0")]
        a4: String,
        #[arg(long, default_value = "0")]
        a6: String,
    },
}

#[derive(Subcommand)]
enum CountCmd {
    /// |V_t|, |E_t| and T over F_q.
    Surface {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
}

#[derive(Args, Clone)]
struct Grid {
    #[arg(long, default_value_t = 3)]
    pmin: u64,
    #[arg(long)]
    pmax: Option<u64>,
    /// Explicit comma-separated q list; overrides the range.
    #[arg(long, value_delimiter = ',')]
    q: Vec<u64>,
    /// Restrict the range to primes.
    #[arg(long)]
    primes_only: bool,
    /// Comma-separated rationals.
    #[arg(long = "t", value_delimiter = ',', allow_hyphen_values = true)]
    t: Vec<String>,
}

impl Grid {
    fn qs(&self) -> Result<Vec<u64>> {
        if !self.q.is_empty() {
            return Ok(self.q.clone());
        }
        match self.pmax {
            Some(hi) => Ok(q_range(self.pmin, hi, self.primes_only)),
            None => Err(Error::Config("give --q or --pmax".into())),
        }
    }

    fn ts(&self) -> Result<Vec<Q>> {
        self.t.iter().map(|s| parse_q(s.trim())).collect()
    }
}

#[derive(Args, Clone)]
struct MapArgs {
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Size of the random primes.
    #[arg(long, default_value_t = 62)]
    bits: u32,
    /// Random samples for j-match.
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Subcommand)]
enum VerifyCmd {
    Bcm(Grid),
    Lemma(Grid),
    Trace(Grid),
    Main(Grid),
    E1Trace(Grid),
    Delta(Grid),
    CurveTheorem(Grid),
    Gauss(Grid),
    JMatch {
        #[command(flatten)]
        grid: Grid,
        #[command(flatten)]
        maps: MapArgs,
    },
    Maps {
        /// Single catalog entry.
        #[arg(long)]
        only: Option<String>,
        #[command(flatten)]
        maps: MapArgs,
    },
    SiParams(MapArgs),
    Qt(MapArgs),
    #[command(name = "x0-2")]
    X02(MapArgs),
}

#[derive(Subcommand)]
enum FibrationCmd {
    /// Kodaira types from vanishing orders of c4, c6 and the discriminant.
    Profile {
        #[arg(long)]
        model: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    NsGeneric,
    Cm {
        #[arg(long, default_value_t = 0)]
        pe7: i64,
        #[arg(long, default_value_t = 0)]
        pg2: i64,
        #[arg(long, default_value_t = 0)]
        pg3: i64,
        #[arg(long, default_value_t = 0)]
        po: i64,
    },
    Table5,
}

#[derive(Subcommand)]
enum CmCmd {
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    Verify,
    Survey {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value_t = 5)]
        pmin: u64,
        #[arg(long)]
        pmax: u64,
    },
}

enum Outcome {
    Report(Report),
    Json(serde_json::Value, bool),
}

struct Ctx {
    seed: u64,
    bits: u32,
    timing: bool,
    exec: Exec,
}

impl Ctx {
    fn sweep(&self, checks: Vec<Check>, grid: Option<&Grid>, maps: Option<&MapArgs>) -> Result<Outcome> {
        let mut cfg = SweepConfig {
            checks,
            seed: self.seed,
            bits: self.bits,
            exec: self.exec,
            timing: self.timing,
            ..Default::default()
        };
        if let Some(g) = grid {
            cfg.ts = g.ts()?;
            if cfg.checks.iter().any(|c| !matches!(c, Check::Maps | Check::SiParams | Check::Qt | Check::X02 | Check::Fibration | Check::Lattice | Check::Cm)) {
                cfg.qs = g.qs()?;
            }
        }
        if let Some(m) = maps {
            cfg.trials = m.trials;
            cfg.map_bits = m.bits;
            cfg.samples = m.samples;
        }
        Ok(Outcome::Report(run_sweep(&cfg)?))
    }
}

fn field_elem(f: &FieldSpec, s: &str) -> Result<hgmk3::ffield::FqElem> {
    f.parse(s.trim())
}

fn run(cli: Cli) -> Result<Outcome> {
    cli.format.parse::<Format>()?;
    let exec = if cli.jobs == Some(1) { Exec::Sequential } else { Exec::Parallel };
    let ctx = Ctx { seed: cli.seed, bits: cli.precision, timing: cli.timing, exec };
    match cli.cmd {
        Cmd::Schema => Ok(Outcome::Json(report_schema(), true)),
        Cmd::FieldInfo(fa) => {
            let f = fa.build()?;
            Ok(Outcome::Json(
                json!({
                    "p": f.p(), "n": f.n(), "q": f.q(),
                    "modulus": f.modulus(),
                    "generator": f.format(f.generator()),
                }),
                true,
            ))
        }
        Cmd::GaussCheck { field, twist } => {
            let f = field.build()?;
            let a = match twist {
                Some(s) => field_elem(&f, &s)?,
                None => f.one(),
            };
            let cs = CharacterSystem::with_twist(f.clone(), ctx.bits, a)?;
            let q = f.q() as i64;
            let mut direct: f64 = 0.0;
            if q <= 4096 {
                for m in 1..q - 1 {
                    direct = direct.max((cs.gauss(m) - gauss_direct(&f, a, m)).norm());
                }
            }
            let rel = cs.residual() / q as f64;
            Ok(Outcome::Json(
                json!({
                    "q": q, "bits": cs.bits(), "requested_bits": cs.requested_bits(),
                    "max_abs_norm_residual": cs.residual(),
                    "max_rel_norm_residual": rel,
                    "max_direct_difference": direct,
                }),
                rel < 1e-9,
            ))
        }
        Cmd::Hgsum { alpha, beta, field, t } => {
            let parse = |v: &[String]| v.iter().map(|s| parse_q(s.trim())).collect::<Result<Vec<Q>>>();
            let datum = HGDatum::from_parameters(&parse(&alpha)?, &parse(&beta)?)?;
            let f = field.build()?;
            let cs = CharacterSystem::new(f.clone(), ctx.bits)?;
            let te = field_elem(&f, &t)?;
            let v = hg_sum(&datum, &cs, te)?;
            Ok(Outcome::Json(
                json!({
                    "q": f.q(), "t": f.format(te),
                    "complex": [v.value.re, v.value.im],
                    "rounded": fmt_q(&v.exact()),
                    "residual": v.residual,
                }),
                true,
            ))
        }
        Cmd::Curve(CurveCmd::Count { field, a2, a4, a6 }) => {
            let f = field.build()?;
            let e = WeierstrassCurve::new(field_elem(&f, &a2)?, field_elem(&f, &a4)?, field_elem(&f, &a6)?);
            let n = count_points(&f, &e)?;
            Ok(Outcome::Json(json!({"q": f.q(), "count": n, "trace": f.q() as i64 + 1 - n as i64}), true))
        }
        Cmd::Count(CountCmd::Surface { field, t }) => {
            let f = field.build()?;
            let inst = SurfaceInstance::new(f.clone(), &parse_q(&t)?)?;
            let v = count_affine(&inst, CountMode::SolvedZ);
            let mut out = json!({"q": f.q(), "t": t, "affine": v});
            if let Ok(e) = count_elliptic_surface(&inst) {
                out["surface"] = json!(e.total);
                out["fibers"] = e
                    .fibers
                    .iter()
                    .map(|x| json!({"place": x.place, "kind": x.kind, "points": x.points}))
                    .collect();
                out["T"] = json!(trace_transcendental(&inst)?);
            }
            Ok(Outcome::Json(out, true))
        }
        Cmd::Verify(v) => match v {
            VerifyCmd::Bcm(g) => ctx.sweep(vec![Check::Bcm], Some(&g), None),
            VerifyCmd::Lemma(g) => ctx.sweep(vec![Check::Lemma], Some(&g), None),
            VerifyCmd::Trace(g) => ctx.sweep(vec![Check::Trace], Some(&g), None),
            VerifyCmd::Main(g) => ctx.sweep(vec![Check::Main], Some(&g), None),
            VerifyCmd::E1Trace(g) => ctx.sweep(vec![Check::E1Trace], Some(&g), None),
            VerifyCmd::Delta(g) => ctx.sweep(vec![Check::Delta], Some(&g), None),
            VerifyCmd::CurveTheorem(g) => ctx.sweep(vec![Check::CurveTheorem], Some(&g), None),
            VerifyCmd::Gauss(g) => ctx.sweep(vec![Check::Gauss], Some(&g), None),
            VerifyCmd::JMatch { grid, maps } => ctx.sweep(vec![Check::JMatch], Some(&grid), Some(&maps)),
            VerifyCmd::Maps { only: Some(name), maps } => {
                let entry = find(&name).ok_or_else(|| {
                    let names: Vec<String> = catalog().into_iter().map(|e| e.name).collect();
                    Error::Config(format!("unknown map {name:?}; known: {}", names.join(", ")))
                })?;
                let r = verify_map(&entry, maps.trials, maps.bits, ctx.seed, ctx.exec)?;
                Ok(Outcome::Report(Report::new(vec![map_record("maps", &r)])))
            }
            VerifyCmd::Maps { only: None, maps } => ctx.sweep(vec![Check::Maps], None, Some(&maps)),
            VerifyCmd::SiParams(m) => ctx.sweep(vec![Check::SiParams], None, Some(&m)),
            VerifyCmd::Qt(m) => ctx.sweep(vec![Check::Qt], None, Some(&m)),
            VerifyCmd::X02(m) => ctx.sweep(vec![Check::X02], None, Some(&m)),
        },
        Cmd::Sweep { grid, checks, maps } => {
            let checks = checks.iter().map(|s| s.trim().parse()).collect::<Result<Vec<Check>>>()?;
            ctx.sweep(checks, Some(&grid), Some(&maps))
        }
        Cmd::Fibration(FibrationCmd::Profile { model, t }) => {
            let m: Model = model.parse()?;
            let p = kodaira_profile(m, &parse_q(&t)?)?;
            let ok = p.passed();
            Ok(Outcome::Json(serde_json::to_value(&p).expect("serializes"), ok))
        }
        Cmd::Lattice(l) => match l {
            LatticeCmd::NsGeneric => {
                let g = ns_gram_generic()?;
                let ok = g.det.trim_start_matches('-') == "4" && g.signature == (1, 18, 0) && g.orthogonal;
                Ok(Outcome::Json(serde_json::to_value(&g).expect("serializes"), ok))
            }
            LatticeCmd::Cm { pe7, pg2, pg3, po } => {
                let mut p_g = [0, 0, pg2, pg3];
                if pg2 == 0 && pg3 == 0 {
                    p_g[0] = 1;
                }
                let p = SectionProfile { p_o: po, p_e7: pe7, p_f7: 1, p_g };
                let g = ns_cm_gram(&p)?;
                let b = g.block;
                let c = u2_complement(b[0][0] / 2, b[0][1], b[1][1] / 2)?;
                let ok = g.passed() && c.passed();
                let mut v = serde_json::to_value(&g).expect("serializes");
                v["transcendental"] = json!(c.gram);
                Ok(Outcome::Json(v, ok))
            }
            LatticeCmd::Table5 => {
                let rows = verify_table5()?;
                let ok = rows.iter().all(|r| r.passed);
                Ok(Outcome::Json(serde_json::to_value(&rows).expect("serializes"), ok))
            }
        },
        Cmd::Cm(c) => match c {
            CmCmd::Classify { t } => {
                let t = parse_q(&t)?;
                let class = classify_t(&t)?;
                let mut v = json!({"t": fmt_q(&t), "class": class});
                if let Some(r) = record(&t) {
                    v["field"] = json!(r.field);
                    v["order"] = json!(r.order);
                    v["ns"] = json!(r.ns);
                    if let Some(j) = &r.j {
                        v["j"] = json!(fmt_q(j));
                    }
                }
                Ok(Outcome::Json(v, true))
            }
            CmCmd::Verify => {
                let mut rows = verify_rational_cm()?;
                rows.extend(verify_quadratic_cm()?);
                let ok = rows.iter().all(|r| r.passed);
                Ok(Outcome::Json(serde_json::to_value(&rows).expect("serializes"), ok))
            }
            CmCmd::Survey { t, pmin, pmax } => {
                let rows = cm_trace_survey(&parse_q(&t)?, pmin, pmax, ctx.exec)?;
                Ok(Outcome::Json(serde_json::to_value(&rows).expect("serializes"), true))
            }
        },
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs.filter(|&n| n > 1) {
        std::env::set_var("RAYON_NUM_THREADS", n.to_string());
    }
    let format = cli.format.clone();
    match run(cli) {
        Ok(Outcome::Report(r)) => {
            emit(&r.render(format.parse().unwrap_or_default()));
            ExitCode::from(r.exit_code() as u8)
        }
        Ok(Outcome::Json(v, ok)) => {
            emit(&format!("{}\n", serde_json::to_string_pretty(&v).expect("serializes")));
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            let usage = matches!(e, Error::Config(_) | Error::Parse(_) | Error::Field(_) | Error::Datum(_));
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
