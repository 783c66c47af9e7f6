use std::process::{Command, Output};

use workbench_cli::{ReportDocument, Summary};
use workbench_core::suites::Status;

fn workbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_workbench"))
        .args(args)
        .env_remove("WORKBENCH_SEED")
        .env_remove("SOURCE_DATE_EPOCH")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn verify_a1_borel_passes() {
    let o = workbench(&["verify", "--case", "A1:-"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.ends_with("  pass")).count(), 7, "{out}");
    assert!(out.contains("7 results: 7 pass, 0 fail, 0 hypothesis-gated, 0 skipped"));
}

#[test]
fn gated_cases_fail_only_under_strict_hypotheses() {
    let o = workbench(&["verify", "--case", "A2:1", "--suite", "bc-hypotheses"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("hypothesis-gated"));
    let o = workbench(&["verify", "--case", "A2:1", "--strict-hypotheses"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness: [e[α1], e[α2]]"), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_2() {
    let o = workbench(&["verify", "--case", "A2:7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("\"A2:7\""), "{}", stderr(&o));

    let o = workbench(&["dossier", "--case", "Z9:1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("\"Z9:1\""), "{}", stderr(&o));

    let o = workbench(&["verify", "--suite", "nonsense", "--case", "A1:-"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nonsense"));

    assert_eq!(workbench(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(workbench(&["verify", "--seed", "abc"]).status.code(), Some(2));
    assert_eq!(workbench(&["verify", "--max-word-len", "0"]).status.code(), Some(2));
    assert_eq!(workbench(&["--help"]).status.code(), Some(0));
}

#[test]
fn dossier_a2_gamma1() {
    let o = workbench(&["dossier", "--case", "A2:1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let value = |key: &str| -> String {
        out.lines()
            .find_map(|l| {
                let l = l.trim();
                l.strip_prefix(key).filter(|r| r.starts_with(' ')).map(|r| r.trim().to_string())
            })
            .unwrap_or_else(|| panic!("no {key} row in {out}"))
    };
    assert_eq!(value("dim p"), "6");
    assert_eq!(value("dim C"), "2");
    assert_eq!(value("torus_rank"), "1");
    assert_eq!(value("leaf_dim"), "4");
}

#[test]
fn richardson_prints_certificate() {
    let o = workbench(&["richardson", "--case", "B2:-"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("dim [p, x] = 4 (dim u = 4)"), "{out}");
    assert!(out.contains("torus acts freely: yes"));
}

#[test]
fn json_report_round_trips_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = |p: &std::path::Path| {
        vec![
            "verify".to_string(),
            "--case".into(),
            "A2:1".into(),
            "--case".into(),
            "A1:-".into(),
            "--suite".into(),
            "parabolic-identities".into(),
            "--suite".into(),
            "bc-hypotheses".into(),
            "--json".into(),
            p.display().to_string(),
        ]
    };
    for p in [&a, &b] {
        let argv = args(p);
        let refs: Vec<&str> = argv.iter().map(String::as_str).collect();
        assert_eq!(workbench(&refs).status.code(), Some(0));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());

    let doc = ReportDocument::from_json(&text).unwrap();
    assert_eq!(doc.to_canonical_json(), text);
    assert_eq!(doc.timestamp, "0");
    assert_eq!(doc.cases.len(), 2);
    assert_eq!(doc.summary, Summary::tally(&doc.suites));
    assert_eq!(doc.summary.total, 4);
    assert_eq!(doc.summary.hypothesis_gated, 1);

    // no JSON numbers anywhere; counts, seeds and rationals are strings
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    fn no_numbers(v: &serde_json::Value) -> bool {
        match v {
            serde_json::Value::Number(_) => false,
            serde_json::Value::Array(a) => a.iter().all(no_numbers),
            serde_json::Value::Object(m) => m.values().all(no_numbers),
            _ => true,
        }
    }
    assert!(no_numbers(&v));
    assert_eq!(v["summary"]["hypothesis-gated"], "1");
    assert_eq!(v["suites"][0]["case"]["seed"], "12648430");
    let gated = doc.suites.iter().find(|r| r.status == Status::HypothesisGated).unwrap();
    assert_eq!(gated.suite, "bc-hypotheses");
    assert_eq!(gated.case.label(), "A2:1");
}

#[test]
fn tampered_summary_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    let path = p.display().to_string();
    assert_eq!(
        workbench(&["verify", "--case", "A1:-", "--suite", "algebra", "--json", &path]).status.code(),
        Some(0)
    );
    let text = std::fs::read_to_string(&p).unwrap();
    let tampered = text.replacen("\"pass\": \"1\"", "\"pass\": \"2\"", 1);
    assert_ne!(tampered, text);
    assert!(ReportDocument::from_json(&tampered).is_err());
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |seed: Option<&str>, flag: Option<&str>| {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_workbench"));
        cmd.args(["verify", "--case", "A1:-", "--suite", "embedding", "--json"]).arg(&p);
        cmd.env_remove("WORKBENCH_SEED").env_remove("SOURCE_DATE_EPOCH");
        if let Some(s) = seed {
            cmd.env("WORKBENCH_SEED", s);
        }
        if let Some(f) = flag {
            cmd.args(["--seed", f]);
        }
        assert_eq!(cmd.output().unwrap().status.code(), Some(0));
        ReportDocument::from_json(&std::fs::read_to_string(&p).unwrap()).unwrap()
    };
    assert_eq!(run(Some("77"), None).cases[0].seed, 77);
    assert_eq!(run(None, Some("0x10")).cases[0].seed, 16);
    assert_eq!(run(Some("77"), Some("5")).cases[0].seed, 5);
    assert_eq!(run(None, None).cases[0].seed, 0xC0FFEE);
}

#[test]
fn in_process_entry_point() {
    assert_eq!(workbench_cli::run(["workbench", "verify", "--case", "A1:-", "--suite", "algebra"]), 0);
    assert_eq!(workbench_cli::run(["workbench", "verify", "--case", "A1:9"]), 2);
}
