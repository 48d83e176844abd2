use std::process::Command as Proc;

use serde_json::Value;
use snc_cli::{emit_report, fingerprint, run, Command, Format, Record, Report, RunConfig, Source, Status, Summary};
use snc_core::forge::InstanceSpec;
use snc_core::format::parse_instance;
use snc_core::theorems::{snp_set, TheoremId};

fn snc(args: &[&str]) -> (i32, String, String) {
    let out = Proc::new(env!("CARGO_BIN_EXE_snc")).args(args).env_remove("SNC_FORMAT").output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn temp_file(name: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(format!("snc-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn fixture(name: &str) -> Source {
    Source::Fixture { name: name.into() }
}

#[test]
fn verify_single_star_on_st1() {
    let config = RunConfig::new(Command::Verify { theorem: TheoremId::SingleStar }).with_instance(fixture("ST1"));
    let report = run(&config).unwrap();
    assert_eq!(report.records.len(), 1);
    let rec = &report.records[0];
    assert_eq!(rec.status, Status::Verified);
    let cert = rec.certificate.as_ref().unwrap();
    let st1 = snc_core::forge::fixture("ST1").unwrap();
    for w in cert["witnesses"].as_array().unwrap() {
        assert!(snp_set(&st1).contains(w.as_u64().unwrap() as usize));
    }
    assert_eq!(report.exit_code(), 0);
}

#[test]
fn gate_is_not_a_failure() {
    let (code, out, _) = snc(&["verify", "two-stars", "ST1"]);
    assert_eq!(code, 0);
    assert!(out.contains("hypothesis-failed"));
}

#[test]
fn digon_is_a_parse_error_with_line() {
    let path = temp_file("digon.txt", "3 2\n0 1\n1 0\n");
    let (code, _, err) = snc(&["oracle", &path]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
    assert!(err.contains("digon"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(snc(&["bogus"]).0, 2);
    assert_eq!(snc(&["sweep", "no-such-sweep"]).0, 2);
    assert_eq!(snc(&["oracle", "NOPE"]).0, 2);
    assert_eq!(snc(&["median", "C3", "--cap-exact", "0"]).0, 2);
}

#[test]
fn failures_set_the_exit_code() {
    let rec = Record {
        instance: "x".into(),
        fingerprint: fingerprint("x"),
        status: Status::Failed,
        detail: "witness rejected".into(),
        hypotheses: None,
        certificate: None,
        findings: Vec::new(),
        data: Value::Null,
        elapsed_us: None,
    };
    let report = Report {
        tool_version: "t".into(),
        config: RunConfig::new(Command::Oracle),
        records: vec![rec],
        summary: Summary { instances: 1, fail: 1, ..Summary::default() },
    };
    assert_eq!(report.exit_code(), 1);
}

#[test]
fn empty_report_has_zero_counts() {
    let report = Report {
        tool_version: "t".into(),
        config: RunConfig::new(Command::Sweep { family: "gadgets".into() }),
        records: Vec::new(),
        summary: Summary::default(),
    };
    assert!(emit_report(&report, Format::Human).contains("0 instances: 0 pass, 0 fail, 0 finding, 0 hypothesis-failed"));
    let machine = emit_report(&report, Format::Machine);
    let last: Value = serde_json::from_str(machine.lines().last().unwrap()).unwrap();
    assert_eq!(last["kind"], "summary");
    assert_eq!(last["instances"], 0);
}

#[test]
fn sediment_c3_is_periodic() {
    let config = RunConfig::new(Command::Sediment { order: Some("0,1,2".into()) }).with_instance(fixture("C3"));
    let report = run(&config).unwrap();
    assert_eq!(report.records[0].data["outcome"]["Periodic"]["length"], 3);
}

#[test]
fn weights_from_file() {
    let path = temp_file("weighted.txt", "# TT3 with a heavy sink\n3 3\n0 1\n0 2\n1 2\nw 2 5\n");
    let config = RunConfig::new(Command::Median { local: false }).with_instance(Source::resolve(&path));
    let report = run(&config).unwrap();
    let weight = &report.records[0].data["analysis"]["forward_weight"];
    assert_eq!(weight, &serde_json::json!([11, 1]));
}

#[test]
fn machine_format_is_json_lines() {
    let (code, out, _) = snc(&["--format", "machine", "oracle", "LC3"]);
    assert_eq!(code, 0);
    let lines: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["kind"], "run");
    assert_eq!(lines[0]["config"]["command"], "oracle");
    assert_eq!(lines[1]["kind"], "instance");
    for key in ["instance", "fingerprint", "status", "detail", "hypotheses", "certificate", "findings", "data", "elapsed_us"] {
        assert!(lines[1].get(key).is_some(), "missing {key}");
    }
    assert_eq!(lines[2]["pass"], 1);
}

#[test]
fn env_overrides_flags() {
    let out = Proc::new(env!("CARGO_BIN_EXE_snc")).args(["oracle", "C3"]).env("SNC_FORMAT", "machine").output().unwrap();
    let first = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(first.lines().next().unwrap()).unwrap();
    assert_eq!(v["config"]["format"], "machine");
}

#[test]
fn reports_are_deterministic() {
    let config = RunConfig { seed: 11, budget: Some(200), ..RunConfig::new(Command::Sweep { family: "lemma2".into() }) };
    let (a, b) = (run(&config).unwrap(), run(&config).unwrap());
    assert_eq!(a, b);
    assert_eq!(emit_report(&a, Format::Machine), emit_report(&b, Format::Machine));
    let flagged: Vec<&String> = a.records[1..].iter().map(|r| &r.fingerprint).collect();
    let mut sorted = flagged.clone();
    sorted.sort();
    assert_eq!(flagged, sorted);
}

#[test]
fn tournament_sweep() {
    let config = RunConfig::new(Command::Sweep { family: "tournaments-n6".into() });
    let report = run(&config).unwrap();
    assert_eq!(report.records[0].data["checked"], 32768);
    assert_eq!(report.summary.fail, 0);
}

#[test]
fn gen_round_trips() {
    let spec = "star-deleted:n=9,seed=4,leaves=2+1";
    let (code, out, _) = snc(&["gen", spec]);
    assert_eq!(code, 0);
    let (d, w) = parse_instance(&out).unwrap();
    assert!(w.is_none());
    assert_eq!(d, spec.parse::<InstanceSpec>().unwrap().build().unwrap());
}

#[test]
fn out_path_receives_report() {
    let path = std::env::temp_dir().join(format!("snc-cli-{}-out.txt", std::process::id()));
    let p = path.display().to_string();
    let (code, stdout, _) = snc(&["delta", "C4X", "--out", &p]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().contains("fixture:C4X"));
}
