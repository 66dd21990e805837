use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use torsep::io::{parse_instance, run_command, Command as Cmd, Options, Report};

const M: &str = r#"{"d":2,"weights":[[1,1],[2,0],[0,2]]}"#;
const N: &str = "3 4\n1 0 0\n0 0 1\n1 1 0\n0 1 1\n";
const SIX: &str = "3 5\n1 0 0\n1 1 0\n0 1 2\n0 2 1\n1 0 1\n";

fn torsep(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_torsep"))
        .args(args)
        .env_remove("TORSEP_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut input = child.stdin.take().unwrap();
    input.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(input);
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn decide_m_reports_witness_pair() {
    let out = torsep(
        &[
            "decide",
            "--mode",
            "affine",
            "--property",
            "sp",
            "--format",
            "json",
            "-e",
            M,
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    for key in ["schema", "instance", "command", "verdicts", "seed"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert_eq!(r["schema"], "torsep/1");
    let v = &r["verdicts"][0];
    assert_eq!(v["holds"], false);
    let imp = &v["certificate"]["implication"];
    assert_eq!(
        (imp["vanishing"].as_u64(), imp["forced"].as_u64()),
        (Some(2), Some(1))
    );
}

#[test]
fn text_report_has_status_line() {
    let out = torsep(&["decide", "--mode", "affine", "--property", "sp"], Some(N));
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("SP (affine): HOLDS\n"), "{text}");
    assert!(text.contains("    every ±χi avoids the cone of the others:"));
}

#[test]
fn verify_on_n_agrees_on_all_routes() {
    let out = torsep(&["verify", "--format", "json", "-e", N], None);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let sp = r["cross_checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["property"] == "SP" && c["mode"] == "affine")
        .unwrap();
    assert_eq!(sp["theorem"], true);
    assert_eq!(sp["oracle"], true);
    assert_eq!(sp["pattern_scan"]["result"], "compatible");
    assert_eq!(sp["agreement"], true);
    assert_eq!(r["certificates_verified"], true);
}

#[test]
fn ideal_on_five_weights() {
    let out = torsep(&["ideal", "--format", "json"], Some(SIX));
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let ideal = &r["ideal"];
    assert!(ideal["binomials"].as_array().unwrap().len() >= 3);
    assert_eq!(ideal["spans_kernel"], true);
    assert_eq!(ideal["vanishing"]["failures"].as_array().unwrap().len(), 0);
    let texts: Vec<&str> = ideal["binomials"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["text"].as_str().unwrap())
        .collect();
    assert!(texts.contains(&"x2*x3 - x4*x5"), "{texts:?}");
}

#[test]
fn same_seed_gives_identical_output() {
    let a = torsep(
        &["ideal", "--format", "json", "--seed", "11", "-e", SIX],
        None,
    );
    let b = torsep(
        &["ideal", "--format", "json", "--seed", "11", "-e", SIX],
        None,
    );
    assert_eq!(a.stdout, b.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_torsep"))
        .args(["ideal", "--format", "json", "-e", SIX])
        .env("TORSEP_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
    assert_eq!(json(&a)["seed"], 11);
}

#[test]
fn exit_codes() {
    let bad = torsep(&["decide", "-e", r#"{"d":2,"weights":[[1],[2,0]]}"#], None);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("dimension mismatch"));

    let syntax = torsep(&["decide", "--format", "json", "-e", "2 1\n1 x1"], None);
    assert_eq!(syntax.status.code(), Some(2));

    let line = "2 2\n1 0\n-1 0\n";
    let strict = torsep(
        &[
            "decide",
            "--mode",
            "affine",
            "--property",
            "ssp",
            "-e",
            line,
        ],
        None,
    );
    assert_eq!(strict.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("hypothesis"));

    let all = torsep(&["decide", "--format", "json", "-e", line], None);
    assert_eq!(all.status.code(), Some(0));
    assert!(!json(&all)["skipped"].as_array().unwrap().is_empty());

    let oracle = torsep(&["oracle", "--property", "ssp", "-e", N], None);
    assert_eq!(oracle.status.code(), Some(2));

    let guard = torsep(&["strata", "--max-n", "3", "-e", N], None);
    assert_eq!(guard.status.code(), Some(2));
}

#[test]
fn batch_preserves_input_order() {
    let mut lines = Vec::new();
    for k in 1..=12 {
        lines.push(format!(
            r#"{{"d":1,"weights":[[{k}],[{}]],"label":"case{k}"}}"#,
            k + 1
        ));
    }
    lines.insert(4, "not an instance".into());
    let input = lines.join("\n") + "\n";
    let out = torsep(
        &["decide", "--batch", "--mode", "affine", "--property", "sp"],
        Some(&input),
    );
    assert_eq!(out.status.code(), Some(2));
    let rows: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 13);
    assert_eq!(rows[4]["line"], 5);
    let labels: Vec<&str> = rows
        .iter()
        .filter_map(|r| r["instance"]["label"].as_str())
        .collect();
    let expected: Vec<String> = (1..=12).map(|k| format!("case{k}")).collect();
    assert_eq!(labels, expected);
}

#[test]
fn binary_forms_from_the_command_line() {
    let out = torsep(&["binary", "--format", "json", "-e", "x*y^4"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["binary"]["holds"], true);
    let out = torsep(&["binary", "--format", "json", "-e", "(x^2+y^2)^2"], None);
    assert_eq!(json(&out)["binary"]["holds"], false);
}

#[test]
fn report_json_round_trips() {
    for (cmd, text) in [
        (Cmd::Verify, N),
        (Cmd::Ideal, SIX),
        (Cmd::Chpairs, M),
        (Cmd::Binary, "x^2*y - y^3"),
    ] {
        let instance = parse_instance(text).unwrap();
        let report = run_command(cmd, &instance, &Options::default()).unwrap();
        let s = serde_json::to_string(&report).unwrap();
        let back: Report = serde_json::from_str(&s).unwrap();
        assert_eq!(back, report);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }
}

#[test]
fn disagreement_is_detected() {
    let instance = parse_instance(N).unwrap();
    let mut report = run_command(Cmd::Verify, &instance, &Options::default()).unwrap();
    assert!(!report.disagreement());
    report.cross_checks[0].agreement = false;
    assert!(report.disagreement());
    assert_eq!(
        torsep::io::exit_code(&torsep::Error::Internal("x".into())),
        4
    );
}
