//! End-to-end behavior of the command-line surface: artifact round trips,
//! schema validation with named fields, exit-code mapping, and
//! deterministic report bytes.

use std::fs;
use std::path::Path;

use serde_json::Value;
use wcslab_cli::{io, main_entry};

fn run(args: &[&str]) -> i32 {
    let argv = std::iter::once("wcslab").chain(args.iter().copied());
    main_entry(argv)
}

fn path_str(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().expect("utf8 path").to_string()
}

fn read_json(dir: &Path, name: &str) -> Value {
    let text = fs::read_to_string(dir.join(name)).expect("artifact exists");
    serde_json::from_str(&text).expect("artifact parses")
}

#[test]
fn gen_then_apply_demonstrates_the_adjoint_eigenrelation() {
    let dir = tempfile::tempdir().unwrap();
    let f2 = path_str(dir.path(), "f2.json");
    let out = path_str(dir.path(), "out.json");
    assert_eq!(
        run(&["gen", "--family", "f", "--k", "2", "--degree", "1000", "--out", &f2]),
        0
    );
    assert_eq!(
        run(&["apply", "--op", "wstar", "--n", "2", "--in", &f2, "--out", &out]),
        0
    );
    let input = io::load_vector(Path::new(&f2)).unwrap();
    let output = io::load_vector(Path::new(&out)).unwrap();
    // Output should be input / 4 across the output's trusted range.
    assert!(output.valid_degree() >= 400);
    for j in 0..output.trusted_len() {
        let err = (output.coeff(j) - input.coeff(j) / 4.0).norm();
        assert!(err <= 1e-12, "coefficient {j}: error {err}");
    }
}

#[test]
fn vector_files_round_trip_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("v.json");
    let second = dir.path().join("w.json");
    assert_eq!(
        run(&[
            "gen", "--family", "random", "--degree", "50", "--seed", "9",
            "--out", first.to_str().unwrap(),
        ]),
        0
    );
    let loaded = io::load_vector(&first).unwrap();
    io::save_vector(&second, &loaded).unwrap();
    assert_eq!(
        fs::read(&first).unwrap(),
        fs::read(&second).unwrap(),
        "load + save must reproduce the bytes"
    );
}

#[test]
fn a_missing_field_is_reported_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{"degree": 1, "valid_degree": 1, "exact": true, "tail_bound": 0.0, "re": [1.0, 2.0]}"#,
    )
    .unwrap();
    let err = io::load_vector(&bad).unwrap_err();
    let msg = format!("{err:?}");
    assert!(msg.contains("im"), "message should name the field: {msg}");
    let out = path_str(dir.path(), "out.json");
    assert_eq!(
        run(&["apply", "--op", "w", "--n", "2", "--in", bad.to_str().unwrap(), "--out", &out]),
        2
    );
}

#[test]
fn inconsistent_metadata_is_rejected_at_load() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    // valid_degree beyond storage.
    fs::write(
        &bad,
        r#"{"degree": 2, "valid_degree": 7, "exact": false, "tail_bound": 0.0, "re": [1.0, 0.0, 0.0], "im": [0.0, 0.0, 0.0]}"#,
    )
    .unwrap();
    let err = io::load_vector(&bad).unwrap_err();
    assert!(format!("{err:?}").contains("valid_degree"));
}

#[test]
fn non_finite_coefficients_are_rejected_at_load() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    // JSON has no NaN literal, so a malformed token must fail the parse.
    fs::write(
        &bad,
        r#"{"degree": 0, "valid_degree": 0, "exact": true, "tail_bound": 0.0, "re": [NaN], "im": [0.0]}"#,
    )
    .unwrap();
    assert!(io::load_vector(&bad).is_err());
}

#[test]
fn usage_errors_exit_two_and_help_exits_zero() {
    assert_eq!(run(&["--definitely-not-a-flag"]), 2);
    assert_eq!(run(&["period", "--n", "2"]), 2, "missing required flags");
    assert_eq!(run(&["--help"]), 0);
    assert_eq!(run(&["--version"]), 0);
    assert_eq!(run(&["gen", "--family", "f", "--degree", "10", "--out", "x.json"]), 2,
        "family f without --k is a named precondition failure");
}

#[test]
fn the_sweep_csv_has_the_declared_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = path_str(dir.path(), "sweep.csv");
    assert_eq!(
        run(&["rh-sweep", "--kmax", "4", "--degree", "200", "--out", &out]),
        0
    );
    let text = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "K,distance,condition,D,ridge");
    assert_eq!(lines.len(), 4, "header plus K = 2, 3, 4");
    let distances: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(distances.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert!(distances.iter().all(|d| *d > 0.0));
}

#[test]
fn relative_outputs_land_in_the_configured_directory() {
    let dir = tempfile::tempdir().unwrap();
    std::env::set_var(io::OUT_DIR_ENV, dir.path());
    let code = run(&["gen", "--family", "one", "--degree", "3", "--out", "unit.json"]);
    std::env::remove_var(io::OUT_DIR_ENV);
    assert_eq!(code, 0);
    assert!(dir.path().join("unit.json").is_file());
}

#[test]
fn runtime_failures_write_a_diagnostic_payload_and_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = path_str(dir.path(), "radius.json");
    assert_eq!(
        run(&["radius", "--n", "10", "--m-max", "30", "--out", &out]),
        1
    );
    let report = read_json(dir.path(), "radius.json");
    assert_eq!(report["results"]["error"]["kind"], "index_overflow");
    assert!(report["self_checks"].as_array().unwrap().len() >= 3);
}

#[test]
fn reports_embed_passing_self_checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = path_str(dir.path(), "gram.json");
    assert_eq!(
        run(&["gram", "--family", "g", "--count", "4", "--degree", "300", "--out", &out]),
        0
    );
    let report = read_json(dir.path(), "gram.json");
    for check in report["self_checks"].as_array().unwrap() {
        assert_eq!(check["passed"], true, "self check {:?}", check["name"]);
    }
    assert_eq!(report["results"]["effective_rank"], 4);
    assert_eq!(report["command"], "gram");
    assert_eq!(report["config"]["seed"], 17);
}

#[test]
fn identical_configurations_reproduce_identical_report_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = path_str(dir.path(), "a.json");
    let b = path_str(dir.path(), "b.json");
    for out in [&a, &b] {
        assert_eq!(
            run(&["gram", "--family", "f", "--count", "3", "--degree", "400", "--out", out]),
            0
        );
    }
    let mut bytes_a = fs::read(dir.path().join("a.json")).unwrap();
    let bytes_b = fs::read(dir.path().join("b.json")).unwrap();
    // The only difference should be the echoed out path inside the config.
    let a_text = String::from_utf8(bytes_a.clone()).unwrap().replace("a.json", "b.json");
    bytes_a = a_text.into_bytes();
    assert_eq!(bytes_a, bytes_b);
}

#[test]
fn the_period_command_finds_the_predicted_return() {
    let dir = tempfile::tempdir().unwrap();
    let out = path_str(dir.path(), "period.json");
    assert_eq!(
        run(&[
            "period", "--n", "2", "--alpha-p", "1", "--alpha-q", "1",
            "--degree", "200000", "--tol", "0.01", "--out", &out,
        ]),
        0
    );
    let report = read_json(dir.path(), "period.json");
    assert_eq!(report["results"]["predicted_period"], 2);
    assert_eq!(report["results"]["found"], 2);
}

#[test]
fn the_orbit_command_records_expanding_norms() {
    let dir = tempfile::tempdir().unwrap();
    let unit = path_str(dir.path(), "one.json");
    let out = path_str(dir.path(), "orbit.json");
    assert_eq!(run(&["gen", "--family", "one", "--degree", "0", "--out", &unit]), 0);
    assert_eq!(
        run(&["orbit", "--op", "w", "--n", "2", "--in", &unit, "--steps", "6", "--out", &out]),
        0
    );
    let report = read_json(dir.path(), "orbit.json");
    let norms = report["results"]["norms"].as_array().unwrap();
    assert_eq!(norms.len(), 7);
    for (m, entry) in norms.iter().enumerate() {
        let expected = 2f64.powf(m as f64 / 2.0);
        let got = entry["value"].as_f64().unwrap();
        assert!((got - expected).abs() <= 1e-12 * expected, "step {m}");
    }
    assert_eq!(report["results"]["stopped"], Value::Null);
}
