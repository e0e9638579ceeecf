mod common;

use std::path::Path;
use std::process::{Command, Output};

use sirs_open::analysis::{classify_regime, RegimeVerdict};
use sirs_open::dynamics::{integrate, IntegrateOptions, System};
use sirs_open::io::{from_json, parse_csv, to_json, trajectory_csv, RunConfig};

fn sirs(args: &[&str], cfg: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sirs-open"));
    c.args(args);
    if let Some(p) = cfg {
        c.arg(p);
    }
    c.arg("--quiet").output().unwrap()
}

fn reference_config(dir: &Path, extra: &str) -> std::path::PathBuf {
    let path = dir.join("run.cfg");
    let text = RunConfig::new(common::reference_special()).to_text() + extra;
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn verdict_json_round_trips_byte_identically() {
    let pert = sirs_open::analysis::perturb_special_case(&common::reference_special(), 1e-3).unwrap();
    let v = classify_regime(&pert.params).unwrap();
    let first = to_json(&v).unwrap();
    let back: RegimeVerdict = from_json(&first).unwrap();
    assert_eq!(back, v);
    assert_eq!(to_json(&back).unwrap(), first);
}

#[test]
fn trajectory_csv_round_trips() {
    let p = common::reference_special();
    let mut t = integrate(System::Proportions, &p, &[0.2, 0.3, 0.5], 1.0, IntegrateOptions::default()).unwrap();
    t.times.truncate(3);
    t.states.truncate(3);
    let table = parse_csv(&trajectory_csv(&t)).unwrap();
    assert_eq!(table.columns, ["t", "s", "i", "r"]);
    assert_eq!(table.rows.len(), 3);
    for (row, (time, x)) in table.rows.iter().zip(t.times.iter().zip(&t.states)) {
        assert_eq!(row[0], *time);
        assert_eq!(&row[1..], x.as_slice());
    }
}

#[test]
fn config_text_round_trips() {
    let p = common::reference_special();
    let mut c = RunConfig::new(p);
    c.set_option("t_end", "12.5").unwrap();
    let text = c.to_text();
    let back = RunConfig::parse(&text).unwrap();
    assert_eq!(back.params, c.params);
    assert_eq!(back.option("t_end"), Some("12.5"));
    assert_eq!(back.to_text(), text);
}

#[test]
fn config_errors_name_the_line() {
    let good = RunConfig::new(common::reference_special()).to_text();
    let n = good.lines().count();
    let negative = good.replacen("lambda = ", "lambda = -", 1);
    let lambda_line = negative.lines().position(|l| l.starts_with("lambda")).unwrap() + 1;
    for (bad, line) in [
        (negative, lambda_line),
        (good.clone() + "bogus = 1\n", n + 1),
        (good.clone() + "b = 0.5\n", n + 1),
        (good.clone() + "gamma\n", n + 1),
    ] {
        let err = RunConfig::parse(&bad).unwrap_err().to_string();
        assert!(err.contains(&format!("line {line}")), "{err}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = reference_config(dir.path(), "");
    assert_eq!(sirs(&["special-case"], Some(&cfg)).status.code(), Some(0));
    assert_eq!(sirs(&["frobnicate"], Some(&cfg)).status.code(), Some(1));
    assert_eq!(sirs(&["analyze"], Some(&dir.path().join("missing.cfg"))).status.code(), Some(1));
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "b = -1\n").unwrap();
    assert_eq!(sirs(&["analyze"], Some(&bad)).status.code(), Some(1));
    // special-case parameters have boundary rest points on the triangle:
    // the general-case analysis refuses them as a precondition failure
    assert_eq!(sirs(&["analyze"], Some(&cfg)).status.code(), Some(1));
}

#[test]
fn out_flag_writes_the_file_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = reference_config(dir.path(), "s0 = 0.2\ni0 = 0.3\nt_end = 1\n");
    let out = dir.path().join("traj.csv");
    let o = sirs(&["simulate", "--out", out.to_str().unwrap()], Some(&cfg));
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let table = parse_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(table.columns, ["t", "s", "i"]);
    let leftovers: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().contains(".tmp-"))
        .collect();
    assert!(leftovers.is_empty());
}

#[test]
fn special_case_and_index_subcommands_report_expected_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = reference_config(dir.path(), "");
    let sc: serde_json::Value =
        serde_json::from_slice(&sirs(&["special-case"], Some(&cfg)).stdout).unwrap();
    assert!((sc["t0"].as_f64().unwrap() - 1.4).abs() < 1e-12);
    assert!((sc["t3"].as_f64().unwrap() + 0.05).abs() < 1e-12);
    let idx: serde_json::Value =
        serde_json::from_slice(&sirs(&["index", "--curve", "fig32"], Some(&cfg)).stdout).unwrap();
    assert_eq!(idx["curve_index"], 1);
    assert_eq!(idx["mu_plus"], 2);
    assert_eq!(idx["mu_minus"], 1);
}
