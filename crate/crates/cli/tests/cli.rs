use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgmk3"))
        .args(args)
        .env_remove("HGMK3_SEED")
        .env_remove("HGMK3_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<serde_json::Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn main_identity_small_grid() {
    let o = run(&["verify", "main", "--pmax", "50", "--t", "2,3,5/2"]);
    assert_eq!(o.status.code(), Some(0));
    let recs = json_lines(&o);
    assert!(recs.iter().all(|r| r["status"] != "fail"));
    let spot: Vec<_> = recs
        .iter()
        .filter(|r| r["q"] == 7 && r["t"] == "2" && r["status"] == "pass")
        .collect();
    assert!(!spot.is_empty());
    assert!(spot.iter().all(|r| r["lhs"] == "-3" && r["rhs"] == "-3"));
}

#[test]
fn extension_field_cell() {
    let o = run(&["verify", "bcm", "--q", "9", "--t", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let recs = json_lines(&o);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["status"], "pass");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["verify", "bcm", "--q", "7", "--t", ""]).status.code(), Some(2));
    assert_eq!(run(&["verify", "bcm", "--t", "2"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "bcm", "--q", "8", "--t", "2"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--checks", "nope", "--q", "7", "--t", "2"]).status.code(), Some(2));
    assert_eq!(run(&["fibration", "profile", "--model", "nope", "--t", "2"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn sweep_is_deterministic() {
    let args = ["sweep", "--checks", "bcm,lemma,main,j-match", "--pmax", "31", "--t", "2,-1,81/256", "--samples", "30"];
    let a = run(&args);
    let b = run(&args);
    let mut seq = args.to_vec();
    seq.extend(["--jobs", "1"]);
    let c = run(&seq);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn seed_from_env() {
    let args = ["verify", "maps", "--only", "psi3", "--trials", "5"];
    let a = run(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_hgmk3")).args(args).env("HGMK3_SEED", "7").output().unwrap();
    let c = run(&["--seed", "7", "verify", "maps", "--only", "psi3", "--trials", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.stdout, c.stdout);
}

#[test]
fn schema_and_csv_header() {
    let s: serde_json::Value = serde_json::from_slice(&run(&["schema"]).stdout).unwrap();
    assert_eq!(s["version"], "hgmk3/1");
    let names: Vec<String> = s["fields"].as_array().unwrap().iter().map(|f| f["name"].as_str().unwrap().to_string()).collect();
    assert!(names.contains(&"residual".to_string()));
    let csv = stdout(&run(&["verify", "lemma", "--q", "7", "--t", "2", "--format", "csv"]));
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), names[..names.len() - 1].join(","));
    assert!(lines.next().unwrap().starts_with("lemma,7,2,,pass,180,180,"));
}

#[test]
fn single_objects() {
    let o = run(&["curve", "count", "--p", "7", "--a2", "5", "--a4", "3", "--a6", "0"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["q"].as_u64(), v["count"].as_u64(), v["trace"].as_i64()), (Some(7), Some(10), Some(-2)));

    let o = run(&["count", "surface", "--p", "7", "--t", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["affine"].as_u64(), v["surface"].as_u64()), (Some(28), Some(180)));

    let o = run(&["hgsum", "--alpha", "1/4,1/2,3/4", "--beta", "0,0,0", "--p", "7", "--t", "4"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rounded"], "-3");

    let o = run(&["fibration", "profile", "--model", "inose", "--t", "-9/16"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["euler_sum"], 24);

    for args in [&["lattice", "ns-generic"][..], &["lattice", "table5"], &["lattice", "cm", "--po", "1"], &["cm", "verify"]] {
        assert_eq!(run(args).status.code(), Some(0), "{args:?}");
    }
    let v: serde_json::Value = serde_json::from_slice(&run(&["cm", "classify", "--t", "-4"]).stdout).unwrap();
    assert_eq!(v["class"], "cm_quadratic_j");
    assert_eq!(v["field"], 5);
}
