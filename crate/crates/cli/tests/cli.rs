use std::path::PathBuf;
use std::process::{Command, Output};

use esbox::boxes::{teleportation_box, AnyBox, ESBox};

fn esbox(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_esbox"))
        .args(args)
        .env_remove("ESBOX_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn verify_teleport_passes() {
    let o = esbox(&["verify", "--box", "teleport"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("completeness") && text.ends_with("result: pass\n"), "{text}");
}

#[test]
fn verify_box_file_with_deleted_branch_fails_completeness() {
    let mut branches = teleportation_box().branches().to_vec();
    branches.pop();
    let broken = AnyBox::from(ESBox::new(branches, false).unwrap());
    let path = scratch("broken.json");
    std::fs::write(&path, broken.to_json().unwrap()).unwrap();

    let o = esbox(&["verify", "--box-file", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let doc = json(&o);
    let failed: Vec<&str> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"completeness"));
    assert!(!failed.contains(&"rank-one") && !failed.contains(&"unitarity"));
    assert_eq!(doc["box_id"], "file:broken");
}

#[test]
fn unreadable_or_malformed_box_file_is_an_input_error() {
    let o = esbox(&["verify", "--box-file", "/nonexistent/box.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());

    let path = scratch("garbage.json");
    std::fs::write(&path, "{\"kind\": \"es_box\", \"branches\": 3}").unwrap();
    let o = esbox(&["verify", "--box-file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn flags_are_validated() {
    assert_eq!(esbox(&["verify"]).status.code(), Some(2));
    assert_eq!(esbox(&["verify", "--box", "teleport", "--box-file", "x.json"]).status.code(), Some(2));
    assert_eq!(esbox(&["report", "--box", "nonsense"]).status.code(), Some(2));
}

#[test]
fn seeded_verify_is_deterministic() {
    let a = esbox(&["verify", "--box", "random4", "--seed", "7", "--format", "json"]);
    let b = esbox(&["verify", "--box", "random4", "--seed", "7", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = esbox(&["verify", "--box", "random4", "--seed", "8", "--format", "json"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn seed_comes_from_environment_unless_flag_given() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_esbox"));
        cmd.args(["verify", "--box", "random8", "--format", "json"]).env_remove("ESBOX_SEED");
        if let Some(v) = env {
            cmd.env("ESBOX_SEED", v);
        }
        if let Some(f) = flag {
            cmd.args(["--seed", f]);
        }
        let doc: serde_json::Value = serde_json::from_slice(&cmd.output().unwrap().stdout).unwrap();
        doc["seed"].as_u64().unwrap()
    };
    assert_eq!(run(None, None), 42);
    assert_eq!(run(Some("11"), None), 11);
    assert_eq!(run(Some("11"), Some("5")), 5);
}

#[test]
fn ghz_report_matches_golden_file() {
    let o = esbox(&["report", "--box", "ghz", "--trials", "50", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let golden = include_str!("golden/ghz_report.json");
    assert_eq!(stdout(&o), golden);

    let doc = json(&o);
    let claims = doc["claims"].as_array().unwrap();
    let sub1: Vec<_> = claims.iter().filter(|c| c["id"] == "SUB1").collect();
    assert_eq!(sub1[0]["value"].as_f64(), Some(1.0));
    // eigenvalues of ½ρ₀ + ½ρ₁ are {3/8, 3/8, 1/8, 1/8}; S(ρ₀) = 1, S(ρ₁) = 2
    let h = |p: f64| -p * p.log2();
    let oracle = 2.0 * h(0.375) + 2.0 * h(0.125) - 1.5;
    assert!((sub1[1]["value"].as_f64().unwrap() - oracle).abs() < 1e-6);
    assert!(sub1[2]["pass"].is_null() && sub1[2]["status"] == "info");
}

#[test]
fn csv_has_one_row_per_claim() {
    let o = esbox(&["report", "--box", "bell-from-ghz", "--trials", "20", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("id,label,value,bound,residual,pass,status"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn out_flag_writes_file() {
    let path = scratch("verify.txt");
    let _ = std::fs::remove_file(&path);
    let o = esbox(&["verify", "--box", "ghz", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().contains("target-state"));
}

#[test]
fn short_optimizer_budget_is_inconclusive() {
    let o = esbox(&[
        "report", "--box", "twirled-teleport", "--trials", "20", "--restarts", "1", "--iters", "5",
        "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let doc = json(&o);
    let cap = doc["claims"].as_array().unwrap().iter().find(|c| c["id"] == "T4-cap").unwrap();
    assert_eq!(cap["status"], "inconclusive");
}

#[test]
fn teleport_report_signals_to_alice() {
    let o = esbox(&[
        "report", "--box", "teleport", "--trials", "40", "--restarts", "2", "--iters", "20",
        "--format", "json",
    ]);
    let doc = json(&o);
    let claims = doc["claims"].as_array().unwrap();
    let find = |id: &'static str| claims.iter().filter(move |c| c["id"] == id);
    assert_eq!(find("T2").next().unwrap()["value"].as_f64(), Some(2.0));
    assert!((find("DC").next().unwrap()["value"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    let alice = find("T4-ns").find(|c| c["label"].as_str().unwrap().starts_with("C->A ")).unwrap();
    assert!(alice["label"].as_str().unwrap().ends_with("true"));
    assert_eq!(o.status.code(), Some(0));
}
