use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_qutrit-qkd"));
    c.env_remove("QUTRIT_QKD_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exact_json() {
    let o = run(&[
        "exact",
        "--inequality",
        "hchsh3",
        "--state",
        "ghz",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let f = v["results"]["violation_factor"].as_f64().unwrap();
    assert!((f - 1.693).abs() < 5e-4);
    assert_eq!(v["command"]["name"], "exact");
    assert!(v["meta"]["version"].is_string());
    assert!(v["seed"].is_null());
}

#[test]
fn usage_and_validation_errors() {
    assert_eq!(
        run(&["exact", "--inequality", "bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let o = run(&["exact", "--noise", "1.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("noise"));
    assert_eq!(run(&["sweep", "--grid", "0.5,0.1"]).status.code(), Some(1));
}

#[test]
fn simulate_emits_key_only_when_asked() {
    let args = [
        "simulate",
        "--variant",
        "3deb",
        "--rounds",
        "500",
        "--key-length",
        "32",
    ];
    let quiet = stdout(&run(&[&args[..], &["--format", "json"]].concat()));
    let v: serde_json::Value = serde_json::from_str(&quiet).unwrap();
    assert!(v["results"]["key"].is_null());
    let loud = run(&[&args[..], &["--format", "json", "--emit-key"]].concat());
    assert_eq!(loud.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&loud)).unwrap();
    assert_eq!(v["results"]["key"].as_str().unwrap().len(), 32);
}

#[test]
fn abort_exits_nonzero_without_key() {
    let o = run(&[
        "simulate",
        "--variant",
        "h3deb",
        "--noise",
        "0.8",
        "--rounds",
        "500",
        "--emit-key",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["results"]["aborted"], true);
    assert!(v["results"]["key"].is_null());
}

#[test]
fn seed_flag_beats_environment() {
    let args = [
        "simulate",
        "--variant",
        "3deb",
        "--rounds",
        "300",
        "--format",
        "json",
    ];
    let with_env = |seed: &str, extra: &[&str]| {
        let o = bin()
            .args(args)
            .args(extra)
            .env("QUTRIT_QKD_SEED", seed)
            .output()
            .unwrap();
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        v["seed"].as_u64().unwrap()
    };
    assert_eq!(with_env("17", &[]), 17);
    assert_eq!(with_env("17", &["--seed", "5"]), 5);
}

#[test]
fn transcript_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rounds.csv");
    let o = run(&[
        "simulate",
        "--variant",
        "h3deb",
        "--rounds",
        "300",
        "--seed",
        "2",
        "--transcript",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "round_index,alice_setting,bob_setting,alice_outcome_exponent,bob_outcome_exponent,sift_class"
    );
    let rows = qutrit_qkd::protocol::transcript::read_transcript(text.as_bytes()).unwrap();
    assert!(rows.len() > 1200);
    assert_eq!(rows.len(), lines.count());
}

#[test]
fn tables_text() {
    let o = run(&["tables", "--variant", "3deb"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.lines().nth(1).unwrap().trim_start().starts_with("0   k"));
}

#[test]
fn sweep_csv() {
    let o = run(&[
        "sweep",
        "--variant",
        "3deb",
        "--grid",
        "0:0.5:0.1",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 7);
}
