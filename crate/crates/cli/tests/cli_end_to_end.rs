use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use werner_cli::state_file;
use werner_core::linalg::{Mat4, IDENTITY_4};
use werner_core::states;

fn werner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_werner"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> Value {
    assert_eq!(code(o), 0, "{}", stderr(o));
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn num(v: &Value, key: &str) -> f64 {
    v[key]
        .as_f64()
        .unwrap_or_else(|| panic!("missing {key} in {v}"))
}

fn csv(o: &Output) -> Vec<Vec<String>> {
    assert_eq!(code(o), 0, "{}", stderr(o));
    String::from_utf8(o.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn write_state(dir: &Path, name: &str, m: &Mat4) -> String {
    let path = dir.join(name);
    std::fs::write(&path, state_file::to_json(m)).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn werner_concurrence_and_eof() {
    let v = json(&werner(&[
        "concurrence",
        "--family",
        "werner",
        "--F",
        "0.8",
    ]));
    assert!((num(&v, "concurrence") - 0.6).abs() < 1e-12);
    assert!((num(&v, "eof") - 0.468996).abs() < 1e-6);
    assert_eq!(v["lambdas"].as_array().unwrap().len(), 4);
}

#[test]
fn werner_fidelity_out_of_range_is_usage_error() {
    let o = werner(&["concurrence", "--family", "werner", "--F", "0.4"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("(1/2, 1]"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn unknown_flags_exit_two() {
    for args in [
        &["--bogus"][..],
        &["concurrence", "--family", "werner", "--F", "0.8", "--bogus"],
        &["sweep", "--g-steps", "3"],
        &["verify", "--suite", "nonsense"],
        &["nonsense"],
        &[],
    ] {
        assert_eq!(code(&werner(args)), 2, "{args:?}");
    }
}

#[test]
fn help_and_version_exit_zero() {
    let o = werner(&["--help"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("concurrence"));
    assert_eq!(code(&werner(&["--version"])), 0);
    assert_eq!(code(&werner(&["sweep", "--help"])), 0);
}

#[test]
fn state_source_rules() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_state(dir.path(), "mixed.json", &IDENTITY_4.scale(0.25));
    for args in [
        &["concurrence"][..],
        &["concurrence", "--F", "0.8"],
        &["concurrence", "--family", "werner"],
        &["concurrence", "--family", "derivative", "--F", "0.8"],
        &[
            "concurrence",
            "--family",
            "werner",
            "--F",
            "0.8",
            "--a",
            "0.6",
        ],
        &[
            "concurrence",
            "--family",
            "werner",
            "--F",
            "0.8",
            "--file",
            &file,
        ],
        &["concurrence", "--file", &file, "--F", "0.8"],
        &["concurrence", "--family", "mems", "--p", "0.5,0.5"],
        &["concurrence", "--family", "bell"],
        &["concurrence", "--family", "bell", "--r=-0.5,-0.2"],
        &[
            "concurrence",
            "--family",
            "bell",
            "--r=-0.5,-0.2,0",
            "--p",
            "1,0,0,0",
        ],
        &["concurrence", "--family", "pure", "--a", "0.3"],
        &["concurrence", "--family", "bell", "--r=-0.9,-0.9,0.9"],
        &["eof", "--concurrence", "1.5"],
        &["eof", "--concurrence", "0.5", "--F", "0.8"],
        &[
            "eof",
            "--concurrence",
            "0.5",
            "--family",
            "werner",
            "--F",
            "0.8",
        ],
    ] {
        let o = werner(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn every_family_is_constructible() {
    let c = |args: &[&str]| num(&json(&werner(args)), "concurrence");
    assert!(
        (c(&[
            "concurrence",
            "--family",
            "derivative",
            "--F",
            "0.8",
            "--a",
            "0.6"
        ]) - 0.585_183_657_883_065_58)
            .abs()
            < 1e-10
    );
    assert!(
        (c(&["concurrence", "--family", "pure", "--a", "0.6"]) - 0.979_795_897_113_271_2).abs()
            < 1e-12
    );
    assert!(
        (c(&["concurrence", "--family", "mems", "--p", "0.7,0.1,0.1,0.1"]) - 0.4).abs() < 1e-12
    );
    assert!((c(&["concurrence", "--family", "bell", "--r=-1,-1,-1"]) - 1.0).abs() < 1e-12);
    assert!(
        (c(&["concurrence", "--family", "bell", "--p", "0.7,0.1,0.1,0.1"]) - 0.4).abs() < 1e-12
    );
}

#[test]
fn eof_from_concurrence_or_state() {
    let v = json(&werner(&["eof", "--concurrence", "0.6"]));
    assert!((num(&v, "eof") - 0.468_995_593_589_281_22).abs() < 1e-12);
    let v = json(&werner(&["eof", "--family", "werner", "--F", "0.8"]));
    assert!((num(&v, "eof") - 0.468_995_593_589_281_22).abs() < 1e-12);
    let v = json(&werner(&["eof", "--concurrence", "0"]));
    assert_eq!(num(&v, "eof"), 0.0);
}

#[test]
fn extractable_reports_target() {
    let v = json(&werner(&[
        "extractable",
        "--family",
        "derivative",
        "--F",
        "0.8",
        "--a",
        "0.6",
    ]));
    assert!((num(&v, "extractable_concurrence") - 0.592_591_289_897_611_29).abs() < 1e-10);
    assert_eq!(v["lqcc_improvable"], Value::Bool(true));
    let r: Vec<f64> = v["target"]["r"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert!(r[0] <= r[1] && r[1] <= r[2] && r[2] <= 0.0, "{r:?}");

    let v = json(&werner(&[
        "extractable",
        "--family",
        "mems",
        "--p",
        "0.4,0.3,0.2,0.1",
    ]));
    assert_eq!(v["target"], Value::Null);
}

#[test]
fn ppt_sign_tracks_entanglement() {
    let v = json(&werner(&["ppt", "--family", "werner", "--F", "1"]));
    assert!((num(&v, "ppt_min_eigenvalue") + 0.5).abs() < 1e-12);
    assert_eq!(v["entangled"], Value::Bool(true));
    let v = json(&werner(&[
        "ppt",
        "--family",
        "derivative",
        "--F",
        "0.6",
        "--a",
        "0.99",
    ]));
    assert_eq!(v["entangled"], Value::Bool(false));
}

#[test]
fn classify_mems_spectra() {
    let v = json(&werner(&[
        "classify",
        "--family",
        "mems",
        "--p",
        "0.7,0.1,0.1,0.1",
    ]));
    assert_eq!(v["mems_class"], "werner");
    assert!((num(&v, "werner_fidelity") - 0.7).abs() < 1e-15);
    assert_eq!(v["entangled"], Value::Bool(true));
    let v = json(&werner(&[
        "classify",
        "--family",
        "mems",
        "--p",
        "0.6,0.3,0.05,0.05",
    ]));
    assert_eq!(v["mems_class"], "lqcc-improvable-mems");
    assert_eq!(v["lqcc_improvable"], Value::Bool(true));
    let v = json(&werner(&["classify", "--family", "werner", "--F", "0.9"]));
    assert_eq!(v["mems_class"], Value::Null);
    assert_eq!(v["lqcc_improvable"], Value::Bool(false));
}

#[test]
fn info_round_trips_the_matrix() {
    let v = json(&werner(&["info", "--family", "werner", "--F", "0.8"]));
    let file: state_file::StateFile = serde_json::from_value(v["matrix"].clone()).unwrap();
    let m = file.to_matrix().unwrap();
    let expected = states::werner(states::WernerParams::new(0.8).unwrap());
    assert!(m.max_abs_diff(expected.matrix()) < 1e-15);
    assert!((num(&v["pauli"], "scalar") - 1.0).abs() < 1e-15);
    let corr = &v["pauli"]["corr"];
    assert!((corr[0][0].as_f64().unwrap() + 2.2 / 3.0).abs() < 1e-12);
    let spectrum: Vec<f64> = v["spectrum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert!((spectrum[0] - 0.8).abs() < 1e-12);
}

#[test]
fn state_file_examples() {
    let dir = tempfile::tempdir().unwrap();
    let mixed = write_state(dir.path(), "mixed.json", &IDENTITY_4.scale(0.25));
    let v = json(&werner(&["concurrence", "--file", &mixed]));
    assert_eq!(num(&v, "concurrence"), 0.0);

    let singlet = states::pure(&states::psi_minus()).unwrap();
    let singlet = write_state(dir.path(), "singlet.json", singlet.matrix());
    let v = json(&werner(&["concurrence", "--file", &singlet]));
    assert!((num(&v, "concurrence") - 1.0).abs() < 1e-12);
    for sub in ["info", "eof", "extractable", "ppt", "classify"] {
        assert_eq!(code(&werner(&[sub, "--file", &singlet])), 0, "{sub}");
    }
}

#[test]
fn invalid_state_files_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let short = write_state(dir.path(), "trace.json", &IDENTITY_4.scale(0.225));
    let o = werner(&["concurrence", "--file", &short]);
    assert_eq!(code(&o), 3);
    let msg = stderr(&o);
    assert!(msg.contains("trace"), "{msg}");
    assert!(msg.contains("magnitude 0.1"), "{msg}");

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{not json").unwrap();
    let o = werner(&["concurrence", "--file", garbage.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("parse"));

    let missing = dir.path().join("missing.json");
    let o = werner(&["concurrence", "--file", missing.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("(io)"));

    let mut skew = IDENTITY_4.scale(0.25);
    skew[(0, 1)].re = 0.1;
    let skew = write_state(dir.path(), "skew.json", &skew);
    let o = werner(&["concurrence", "--file", &skew]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("hermiticity"));

    let negative = write_state(
        dir.path(),
        "neg.json",
        &Mat4::diagonal([0.5, 0.5, 0.25, -0.25]),
    );
    let o = werner(&["concurrence", "--file", &negative]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("positivity"));
}

#[test]
fn csv_format_for_state_commands() {
    let rows = csv(&werner(&[
        "concurrence",
        "--family",
        "werner",
        "--F",
        "0.8",
        "--format",
        "csv",
    ]));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].len(), rows[1].len());
    let i = rows[0].iter().position(|k| k == "concurrence").unwrap();
    assert!((rows[1][i].parse::<f64>().unwrap() - 0.6).abs() < 1e-12);
    assert!(rows[0].contains(&"lambdas.0".to_owned()));
    for sub in ["info", "eof", "extractable", "ppt", "classify"] {
        let rows = csv(&werner(&[
            sub, "--family", "werner", "--F", "0.8", "--format", "csv",
        ]));
        assert_eq!(rows.len(), 2, "{sub}");
    }
}

#[test]
fn out_flag_writes_file_and_leaves_stdout_empty() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let o = werner(&[
        "concurrence",
        "--family",
        "werner",
        "--F",
        "0.8",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!((num(&v, "concurrence") - 0.6).abs() < 1e-12);
}

#[test]
fn unwritable_output_exits_four() {
    let o = werner(&[
        "concurrence",
        "--family",
        "werner",
        "--F",
        "0.8",
        "--out",
        "/nonexistent-dir/c.json",
    ]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("/nonexistent-dir/c.json"));
}

#[test]
fn sweep_csv_and_json() {
    let grid = [
        "--f-min",
        "0.6",
        "--f-max",
        "0.9",
        "--f-steps",
        "3",
        "--a-steps",
        "4",
    ];
    let mut args = vec!["sweep", "--format", "csv"];
    args.extend(grid);
    let rows = csv(&werner(&args));
    assert_eq!(rows.len(), 1 + 12);
    assert!(rows.iter().all(|r| r.len() == 14));
    assert_eq!(rows[0][0], "F");

    let mut args = vec!["sweep"];
    args.extend(grid);
    let v = json(&werner(&args));
    let records = v.as_array().unwrap();
    assert_eq!(records.len(), 12);
    assert!(records[0]["dC_da"].is_number());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let mut args = vec!["sweep", "--format", "csv", "--out", path.to_str().unwrap()];
    args.extend(grid);
    assert_eq!(code(&werner(&args)), 0);
    let file = std::fs::read_to_string(&path).unwrap();
    assert_eq!(file.lines().count(), 13);
}

#[test]
fn sweep_rejects_bad_grid() {
    assert_eq!(code(&werner(&["sweep", "--f-min", "0.4"])), 2);
    assert_eq!(code(&werner(&["sweep", "--a-steps", "1"])), 2);
}

#[test]
fn verify_single_suites() {
    let small = ["--f-max", "0.6", "--f-steps", "8", "--a-steps", "10"];
    for suite in [
        "oracle",
        "max-at-half",
        "monotonicity",
        "boundary",
        "gradients",
        "bell-fixed",
        "pure",
        "mems",
    ] {
        let mut args = vec!["verify", "--suite", suite];
        args.extend(small);
        let o = werner(&args);
        let v = json(&o);
        assert_eq!(v["suite"], suite);
        assert_eq!(v["passed"], Value::Bool(true), "{suite}: {}", stderr(&o));
        assert!(v["elapsed_seconds"].is_number());
    }
    let mut args = vec!["verify", "--suite", "pure", "--format", "csv"];
    args.extend(small);
    let rows = csv(&werner(&args));
    assert_eq!(rows[0][0], "suite");
    assert_eq!(rows[1][1], "pure.singlet-extractable");
}

#[test]
fn verify_exit_code_matches_report() {
    let o = werner(&[
        "verify",
        "--suite",
        "all",
        "--f-steps",
        "12",
        "--a-steps",
        "20",
    ]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let passed = v["passed"].as_bool().unwrap();
    let all_claims = v["claims"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == Value::Bool(true));
    assert_eq!(passed, all_claims);
    assert_eq!(code(&o), if passed { 0 } else { 1 });
    assert!(stderr(&o).contains("PASS"));
}

#[test]
fn bound_suite_fails_only_on_pure_fidelity_row() {
    let o = werner(&[
        "verify",
        "--suite",
        "bound",
        "--f-steps",
        "12",
        "--a-steps",
        "20",
    ]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    for c in v["claims"].as_array().unwrap() {
        if c["name"] == "bound.strict" {
            assert_eq!(c["passed"], Value::Bool(false));
            assert_eq!(c["worst_at"][0].as_f64(), Some(1.0));
        } else {
            assert_eq!(c["passed"], Value::Bool(true), "{c}");
        }
    }
    let o = werner(&[
        "verify",
        "--suite",
        "bound",
        "--f-max",
        "0.99",
        "--f-steps",
        "12",
        "--a-steps",
        "20",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}
