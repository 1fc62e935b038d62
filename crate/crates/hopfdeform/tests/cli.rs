use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hopfdeform"));
    c.env_remove("HOPFDEFORM_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn list_examples() {
    let out = run(&["--list-examples"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["oscillator", "z-cubic", "zd-matrix", "group-hermitian"] {
        assert!(text.contains(name), "{}", text);
    }
}

#[test]
fn every_registry_entry_exits_zero() {
    for e in hopfdeform::registry::EXAMPLES {
        let out = run(&["--example", e.name, "--quiet"]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}: {}",
            e.name,
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn json_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = run(&[
            "--example",
            "zd-matrix",
            "--seed",
            "42",
            "--quiet",
            "--json-out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (ra, rb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!ra.is_empty());
    assert_eq!(ra, rb);
    let v: serde_json::Value = serde_json::from_slice(&ra).unwrap();
    assert_eq!(v["config"]["seed"], 42);
    assert_eq!(v["pass"], true);
    assert!(v["laws"][0]["paper_ref"].is_string());
}

#[test]
fn text_summary_lists_statements() {
    let out = run(&["--example", "oscillator", "--t-grid", "1", "--samples", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS deformation.associativity"));
    assert!(text.contains("mu_t(mu_t(a,b),c) = mu_t(a,mu_t(b,c))"));
    assert!(text.contains("commutator[t=1]((1+0i) x ⊗ (1+0i) xstar) = (1+0i) 1"));
    assert!(text.contains("overall PASS"));
}

#[test]
fn seed_from_environment_and_flag_precedence() {
    let out = bin()
        .env("HOPFDEFORM_SEED", "77")
        .args(["--example", "z-cubic", "--print-config"])
        .output()
        .unwrap();
    let cfg: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cfg["seed"], 77);
    let out = bin()
        .env("HOPFDEFORM_SEED", "77")
        .args(["--example", "z-cubic", "--print-config", "--seed", "5"])
        .output()
        .unwrap();
    let cfg: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cfg["seed"], 5);
}

#[test]
fn malformed_configs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_json = write(dir.path(), "bad.json", "{ not json");
    assert_eq!(run(&["--config", &bad_json]).status.code(), Some(2));
    let unknown = write(
        dir.path(),
        "unknown.json",
        r#"{"instance":{"type":"group_algebra_zd","d":1},"cocycle":{"type":"zero"},"colour":1}"#,
    );
    assert_eq!(run(&["--config", &unknown]).status.code(), Some(2));
    let ok = write(
        dir.path(),
        "ok.json",
        r#"{"instance":{"type":"group_algebra_zd","d":1},"cocycle":{"type":"zero"},"sample_budget":5}"#,
    );
    assert_eq!(run(&["--config", &ok, "--t-grid", "0,x"]).status.code(), Some(2));
    assert_eq!(run(&["--config", &ok, "--samples", "0"]).status.code(), Some(2));
    assert_eq!(run(&["--config", "/nonexistent/cfg.json"]).status.code(), Some(2));
    assert_eq!(run(&["--example", "no-such-example"]).status.code(), Some(2));
    let expr = write(
        dir.path(),
        "expr.json",
        r#"{"instance":{"type":"group_algebra_zd","d":1},"cocycle":{"type":"grouplike_table","expression":"m +* n"}}"#,
    );
    assert_eq!(run(&["--config", &expr]).status.code(), Some(2));
}

#[test]
fn capability_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let split = write(
        dir.path(),
        "split.json",
        r#"{"instance":{"type":"sweedler_h4"},"cocycle":{"type":"zero"},"command":"split","sample_budget":5}"#,
    );
    assert_eq!(run(&["--config", &split]).status.code(), Some(3));
    let star = write(
        dir.path(),
        "star.json",
        r#"{"instance":{"type":"symmetric_star","generators":["x","y"]},"cocycle":{"type":"zero"},"star":true,"sample_budget":5}"#,
    );
    assert_eq!(run(&["--config", &star]).status.code(), Some(3));
}

#[test]
fn law_failures_exit_one_with_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad_cocycle.json",
        r#"{"instance":{"type":"group_algebra_zd","d":1},"cocycle":{"type":"grouplike_table","expression":"m*n^3"},"sample_budget":20,"sampler":{"coord_bound":2}}"#,
    );
    let json = dir.path().join("r.json");
    let out = run(&["--config", &cfg, "--json-out", json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(json).unwrap()).unwrap();
    assert_eq!(v["pass"], false);
    assert_eq!(v["classifier"]["cocycle"], false);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("FAIL generator.cocycle"));
}
