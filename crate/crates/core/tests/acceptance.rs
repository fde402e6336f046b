use hgmk3::cmdata::{tables, CmClass};
use hgmk3::charsum::CharacterSystem;
use hgmk3::ecount::{verify_curve_trace_theorem, CurveTheorem};
use hgmk3::exec::Exec;
use hgmk3::ffield::FieldSpec;
use hgmk3::rat::{fmt_q, parse_q, Q};
use hgmk3::report::{q_range, run_sweep, Check, Record, Report, Status, SweepConfig, DEFAULT_SEED};
use std::sync::Arc;
use std::time::{Duration, Instant};

fn grid_t() -> Vec<Q> {
    ["2", "3", "5/2", "-1", "7", "81/256", "-9/16", "10"]
        .iter()
        .map(|s| parse_q(s).unwrap())
        .collect()
}

fn runs() -> Vec<SweepConfig> {
    let base = SweepConfig { seed: DEFAULT_SEED, exec: Exec::Parallel, ..Default::default() };
    vec![
        SweepConfig { qs: q_range(3, 199, false), ts: grid_t(), checks: vec![Check::Bcm], ..base.clone() },
        SweepConfig {
            qs: q_range(3, 199, false),
            ts: grid_t(),
            checks: vec![Check::Lemma, Check::Main, Check::JMatch],
            ..base.clone()
        },
        SweepConfig { qs: vec![5, 7, 11, 13, 25, 49], checks: vec![Check::CurveTheorem], ..base.clone() },
        SweepConfig { qs: q_range(3, 343, false), checks: vec![Check::Gauss], ..base.clone() },
        SweepConfig {
            checks: vec![
                Check::Maps,
                Check::SiParams,
                Check::Qt,
                Check::X02,
                Check::Fibration,
                Check::Lattice,
                Check::Cm,
            ],
            ..base
        },
    ]
}

fn full_run() -> (Report, Duration) {
    let start = Instant::now();
    let mut bcm_time = Duration::ZERO;
    let mut records = Vec::new();
    for (i, cfg) in runs().iter().enumerate() {
        let s = Instant::now();
        records.extend(run_sweep(cfg).expect("valid config").records);
        if i == 0 {
            bcm_time = s.elapsed();
        }
    }
    let _ = start;
    (Report::new(records), bcm_time)
}

fn clean(rs: &[&Record]) -> bool {
    !rs.is_empty() && rs.iter().all(|r| r.status != Status::Fail) && rs.iter().any(|r| r.status == Status::Pass)
}

fn of<'a>(r: &'a Report, check: &str) -> Vec<&'a Record> {
    r.of_check(check)
}

fn find<'a>(r: &'a Report, check: &str, q: u64, t: &str) -> Vec<&'a Record> {
    r.of_check(check).into_iter().filter(|x| x.q == Some(q) && x.t.as_deref() == Some(t)).collect()
}

fn criterion1(r: &Report, bcm_time: Duration) -> bool {
    let rs = of(r, "bcm");
    let max_res = rs.iter().filter_map(|x| x.residual).fold(0.0, f64::max);
    clean(&rs) && max_res < 1e-3 && bcm_time < Duration::from_secs(60)
}

fn criterion2(r: &Report) -> bool {
    let spot = find(r, "lemma", 7, "2");
    clean(&of(r, "lemma"))
        && spot.len() == 1
        && spot[0].lhs.as_deref() == Some("180")
        && spot[0].rhs.as_deref() == Some("180")
        && spot[0].detail.contains("V=28")
}

fn criterion3(r: &Report) -> bool {
    let spot: Vec<&Record> = find(r, "main", 7, "2")
        .into_iter()
        .filter(|x| x.subject.starts_with("S=2,") && x.status == Status::Pass)
        .collect();
    let passed_q: Vec<u64> = of(r, "main").iter().filter(|x| x.status == Status::Pass).filter_map(|x| x.q).collect();
    clean(&of(r, "main"))
        && !spot.is_empty()
        && spot.iter().all(|x| x.lhs.as_deref() == Some("-3") && x.rhs.as_deref() == Some("-3"))
        && passed_q.iter().all(|q| q % 2 == 1 && q % 3 != 0)
}

fn criterion4(r: &Report) -> bool {
    let f = Arc::new(FieldSpec::new(5, 1).unwrap());
    let cs = CharacterSystem::new(f.clone(), 53).unwrap();
    let count = |a, b| match verify_curve_trace_theorem(&cs, f.from_int(a), f.from_int(b)) {
        Ok(CurveTheorem::Checked { count, predicted, .. }) if count as i64 == predicted => Some(count),
        _ => None,
    };
    let rs = of(r, "curve-theorem");
    rs.len() == 6 && rs.iter().all(|x| x.status == Status::Pass) && count(1, 1) == Some(8) && count(1, 2) == Some(3)
}

fn criterion5(r: &Report) -> bool {
    let mut js: Vec<String> = tables()
        .records
        .iter()
        .filter(|x| x.class == CmClass::CmRationalJ)
        .map(|x| fmt_q(x.j.as_ref().unwrap()))
        .collect();
    js.sort();
    let cm = of(r, "cm");
    let jm = of(r, "j-match");
    cm.len() == 15
        && cm.iter().all(|x| x.status == Status::Pass)
        && js == ["-3375", "-3375", "0", "1728", "8000"]
        && jm.len() == 1
        && jm[0].status == Status::Pass
        && jm[0].rhs.as_deref() == Some("200")
}

fn criterion6(r: &Report) -> bool {
    let rs = of(r, "lattice");
    let t5 = rs.iter().filter(|x| x.subject.starts_with("table5")).count();
    let has = |s: &str| rs.iter().any(|x| x.subject == s);
    rs.iter().all(|x| x.status == Status::Pass) && t5 == 15 && has("ns-generic") && has("delta-enumeration")
}

fn criterion7(r: &Report) -> bool {
    let mut rs = of(r, "maps");
    let n_maps = rs.len();
    rs.extend(of(r, "si-params"));
    rs.extend(of(r, "qt"));
    rs.extend(of(r, "x0-2"));
    let h1 = r.of_check("si-params").into_iter().find(|x| x.subject == "si_h1_values");
    let trials_ok = rs.iter().filter(|x| x.lhs.is_some()).all(|x| x.rhs.as_deref() == Some("100"));
    n_maps >= 25
        && rs.iter().all(|x| x.status == Status::Pass)
        && trials_ok
        && h1.is_some_and(|x| x.status == Status::Pass && x.detail == "-40/3, 448/27, -10/3, -56/27, 1")
}

fn criterion8(r: &Report) -> bool {
    let rs = of(r, "fibration");
    rs.len() == 30 && rs.iter().all(|x| x.status == Status::Pass && x.lhs.as_deref() == Some("24"))
}

fn criterion9(r: &Report) -> bool {
    let rs = of(r, "gauss");
    rs.len() == q_range(3, 343, false).len() && rs.iter().all(|x| x.status == Status::Pass)
}

fn main() {
    let start = Instant::now();
    let (report, bcm_time) = full_run();
    let (again, _) = full_run();
    let total = start.elapsed();

    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"));
    let a = report.to_jsonl();
    let b = again.to_jsonl();
    let _ = std::fs::write(dir.join("acceptance_report.jsonl"), &a);
    let _ = std::fs::write(dir.join("acceptance_report.csv"), report.to_csv());

    let results = [
        criterion1(&report, bcm_time),
        criterion2(&report),
        criterion3(&report),
        criterion4(&report),
        criterion5(&report),
        criterion6(&report),
        criterion7(&report),
        criterion8(&report),
        criterion9(&report),
        a == b && report.to_csv() == again.to_csv() && total < Duration::from_secs(600),
    ];
    for (i, ok) in results.iter().enumerate() {
        println!("criterion {}: {}", i + 1, if *ok { "PASS" } else { "FAIL" });
    }
    println!(
        "records {} (pass {}, skip {}, fail {}); bcm grid {:.1}s; two full runs {:.1}s",
        report.records.len(),
        report.count(Status::Pass),
        report.count(Status::Skip),
        report.count(Status::Fail),
        bcm_time.as_secs_f64(),
        total.as_secs_f64()
    );
    for r in report.records.iter().filter(|r| r.status == Status::Fail) {
        println!("failed: {}", serde_json::to_string(r).unwrap());
    }
    if results.iter().any(|ok| !ok) {
        std::process::exit(1);
    }
}
