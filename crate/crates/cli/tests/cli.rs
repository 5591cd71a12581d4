use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_survopt"));
    c.env_remove("SURVOPT_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn repro_writes_three_files_per_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["repro", "ch2-4.1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for suffix in ["csv", "reference.csv", "diff.csv"] {
        let text = std::fs::read_to_string(dir.path().join(format!("ch2-4.1.{suffix}"))).unwrap();
        assert!(!text.contains('\r'));
    }
    let diff = std::fs::read_to_string(dir.path().join("ch2-4.1.diff.csv")).unwrap();
    assert!(diff.lines().skip(1).all(|l| l.contains(",PASS,")));
}

#[test]
fn repro_all_succeeds_with_doc_cells() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["repro", "all", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 36);
    let diff = std::fs::read_to_string(dir.path().join("ch5-table1.diff.csv")).unwrap();
    assert!(diff.lines().skip(1).all(|l| l.contains(",DOC,")));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(code(&run(&["repro", "ch9-9.9", "--out", out])), 2);
    assert_eq!(code(&run(&["repro", "ch2-4.1", "--strict-print", "--sign-consistent"])), 2);
    assert_eq!(code(&run(&["validate", "everything"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"kind":"srs","payload":{"N":10}}"#).unwrap();
    let o = run(&["solve", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing field `n`"));

    std::fs::write(&bad, r#"{"kind":"horizon","payload":{"a":"x"}}"#).unwrap();
    let o = run(&["solve", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("'a'"));

    let model = run(&["solve", scenario("srs-pop1.json").to_str().unwrap(), "--model", "nope"]);
    assert_eq!(code(&model), 2);
}

#[test]
fn computation_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("flat.json");
    // F = H leaves the release optimum undefined.
    let text = std::fs::read_to_string(scenario("fuzzy-eoq.json")).unwrap().replace("\"H\": 7.5", "\"H\": 8.5");
    std::fs::write(&f, text).unwrap();
    let o = run(&["solve", f.to_str().unwrap()]);
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn validate_emits_json_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.json");
    let o = run(&["validate", "fuzzy", "--seed", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["suite"], "fuzzy");
    assert_eq!(v["seed"], 3);
    assert_eq!(v["passed"], true);
}

#[test]
fn seed_falls_back_to_environment() {
    let o = bin().args(["validate", "fuzzy"]).env("SURVOPT_SEED", "19").output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["seed"], 19);
}

#[test]
fn solve_every_bundled_scenario() {
    for entry in std::fs::read_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")).unwrap() {
        let path = entry.unwrap().path();
        let o = run(&["solve", path.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}: {}", path.display(), String::from_utf8_lossy(&o.stderr));
    }
    let o = run(&["solve", scenario("attribute-two-phase-pop1.json").to_str().unwrap(), "--model", "two-phase"]);
    assert_eq!(code(&o), 0);
    let o = run(&["solve", scenario("attribute-pop1.json").to_str().unwrap(), "--model", "two-phase"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn stratified_scenario_prints_full_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pre.csv");
    let o = run(&["solve", scenario("stratified.json").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("estimator,mse,pre\n"));
    assert_eq!(csv.lines().count(), 10);
    assert!(csv.lines().nth(1).unwrap().ends_with(",100"));
}

#[test]
fn horizon_writes_policy_and_components() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.csv");
    let o = run(&["solve", scenario("horizon.json").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("m,k,t_r,t1,T,Q,TC\n"));
    let comp = std::fs::read_to_string(dir.path().join("h.components.csv")).unwrap();
    assert!(comp.starts_with("m,k,OC,HCr,HCo,DCr,DCo,SC,LC,PC\n"));
}

#[test]
fn seeded_commands_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    let horizon = scenario("horizon.json");
    let h = horizon.to_str().unwrap();
    for (a, b) in [("ga1.csv", "ga2.csv")] {
        assert_eq!(code(&run(&["solve", h, "--ga", "--seed", "7", "--out", &p(a)])), 0);
        assert_eq!(code(&run(&["solve", h, "--ga", "--seed", "7", "--out", &p(b)])), 0);
        assert_eq!(std::fs::read(p(a)).unwrap(), std::fs::read(p(b)).unwrap());
    }
    for (a, b) in [("v1.json", "v2.json")] {
        assert_eq!(code(&run(&["validate", "sampling-mc", "--seed", "42", "--out", &p(a)])), 0);
        assert_eq!(code(&run(&["validate", "sampling-mc", "--seed", "42", "--out", &p(b)])), 0);
        assert_eq!(std::fs::read(p(a)).unwrap(), std::fs::read(p(b)).unwrap());
    }
    let (r1, r2) = (p("r1"), p("r2"));
    assert_eq!(code(&run(&["repro", "all", "--out", &r1])), 0);
    assert_eq!(code(&run(&["repro", "all", "--out", &r2])), 0);
    for entry in std::fs::read_dir(&r1).unwrap() {
        let name = entry.unwrap().file_name();
        let a = std::fs::read(Path::new(&r1).join(&name)).unwrap();
        let b = std::fs::read(Path::new(&r2).join(&name)).unwrap();
        assert_eq!(a, b, "{name:?}");
    }
}

#[test]
fn horizon_sensitivity_sweeps_b() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let o = run(&["solve", scenario("horizon.json").to_str().unwrap(), "--model", "sensitivity", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    let bs: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(bs, ["0.05", "0.1", "0.2"]);
}
