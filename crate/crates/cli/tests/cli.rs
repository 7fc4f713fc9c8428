use std::process::Command;

use serde_json::Value;
use symdisperse_cli::{run_command, Output, EXIT_CHECK_FAILED, EXIT_ERROR, EXIT_OK};

fn run(args: &[&str]) -> Output {
    run_command(std::iter::once("symdisperse").chain(args.iter().copied()))
}

fn stdout(out: &Output) -> &str {
    std::str::from_utf8(&out.stdout).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn golden_outputs() {
    let cases: [(&[&str], &str); 4] = [
        (&["space", "info", "--space", "A:2"], include_str!("golden/space_info_A2.json")),
        (&["gamma-window", "--n", "2"], include_str!("golden/gamma_window_2.txt")),
        (
            &["admissible", "--n", "3", "--p", "1000000", "--q", "2"],
            include_str!("golden/admissible_isolated.json"),
        ),
        (
            &["admissible", "--n", "3", "--p", "4", "--q", "3", "--with", "8/3,4"],
            include_str!("golden/admissible_pair.json"),
        ),
    ];
    for (args, want) in cases {
        let out = run(args);
        assert_eq!(out.code, EXIT_OK, "{args:?}");
        assert_eq!(stdout(&out), want, "{args:?}");
        assert!(out.stderr.is_empty());
    }
}

#[test]
fn gamma_window_is_plain_text() {
    assert_eq!(stdout(&run(&["gamma-window", "--n", "2"])), "(1, 3)\n");
    assert_eq!(stdout(&run(&["gamma-window", "--n", "4"])), "(1, 2)\n");
}

#[test]
fn space_info_fields() {
    let v = json(&run(&["space", "info", "--space", "B:3complex"]));
    assert_eq!(v["schema"], "symdisperse/1");
    assert_eq!(v["positive_roots"], 9);
    assert_eq!(v["n0"], 12);
    assert_eq!(v["N"], 21);
    assert_eq!(v["dim"], 21);
}

#[test]
fn kernel_eval_with_oracle() {
    // the eps -> 0 extrapolation truncates at ~1e-5 relative once N grows
    for (space, h, tol) in [("A:1", "0.3", 1e-6), ("A:1complex", "0.3", 1e-6), ("B:2", "0.7,0.2", 1e-4)] {
        let out = run(&["kernel", "eval", "--space", space, "--t", "1.0", "--eps", "0", "--H", h, "--oracle"]);
        assert_eq!(out.code, EXIT_OK, "{}", String::from_utf8_lossy(&out.stderr));
        let v = json(&out);
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["schema", "space", "eps", "t", "H", "value_re", "value_im", "modulus", "bound", "oracle"]);
        let modulus = v["modulus"].as_f64().unwrap();
        assert!(modulus <= v["bound"].as_f64().unwrap(), "{space}");
        assert!(v["oracle"]["abs_difference"].as_f64().unwrap() <= tol * modulus, "{space}");
    }
}

#[test]
fn unresolvable_oracle_is_an_error() {
    // k^9 e^{-ik^2} cancels below double precision: report, don't guess
    let out = run(&["kernel", "eval", "--space", "B:2complex", "--t", "1", "--H", "0.7,0.2", "--oracle"]);
    assert_eq!(out.code, EXIT_ERROR);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("did not converge"));
}

#[test]
fn kernel_eval_rejects_points_outside_the_chamber() {
    let out = run(&["kernel", "eval", "--space", "A:2", "--t", "1", "--H", "1,-1"]);
    assert_eq!(out.code, EXIT_ERROR);
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside the closed positive chamber"));
    let out = run(&["kernel", "eval", "--space", "A:2", "--t", "1", "--H", "1"]);
    assert_eq!(out.code, EXIT_ERROR);
}

#[test]
fn negative_times_parse() {
    let a = json(&run(&["kernel", "eval", "--space", "A:1", "--t", "-2", "--H", "0.5"]));
    let b = json(&run(&["kernel", "eval", "--space", "A:1", "--t", "2", "--H", "0.5"]));
    assert_eq!(a["modulus"], b["modulus"]);
    assert_eq!(a["value_im"].as_f64().unwrap(), -b["value_im"].as_f64().unwrap());
}

#[test]
fn dispersive_scan_layout_and_bounds() {
    let out = run(&["dispersive", "scan", "--space", "A:1", "--q", "4", "--t", "1:64:dyadic"]);
    assert_eq!(out.code, EXIT_OK, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let (csv, report) = text.split_at(text.find('{').unwrap());
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,q,functional,majorant,slope_so_far"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 7);
    assert_eq!(rows[0][4], "");
    for row in &rows {
        let functional: f64 = row[2].parse().unwrap();
        let majorant: f64 = row[3].parse().unwrap();
        assert!(functional > 0.0 && functional <= majorant, "{row:?}");
    }
    let v: Value = serde_json::from_str(report).unwrap();
    assert_eq!(v["schema"], "symdisperse/1");
    assert_eq!(v["quantity"], "kunze_stein_functional");
    assert_eq!(v["formula_slope"], -3.0);
    assert_eq!(v["claimed_slope"], -2.0);
    assert_eq!(v["tail_status"], "converged");
    assert_eq!(v["pass"], true);
}

#[test]
fn several_q_are_bundled() {
    let out = run(&["dispersive", "scan", "--space", "A:1", "--q", "3,4", "--t", "1:4:dyadic"]);
    assert_eq!(out.code, EXIT_OK);
    let text = stdout(&out);
    let v: Value = serde_json::from_str(&text[text.find('{').unwrap()..]).unwrap();
    assert_eq!(v["reports"].as_array().unwrap().len(), 2);
}

#[test]
fn scans_are_byte_identical() {
    let args = ["dispersive", "scan", "--space", "A:2", "--q", "4", "--t", "1:128:dyadic"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a, b);
    let args = ["strichartz", "check", "--space", "A:1complex", "--pair", "4,3", "--widths", "0.5,1,2"];
    assert_eq!(run(&args), run(&args));
}

#[test]
fn artifacts_go_to_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scan.csv");
    let json_path = dir.path().join("scan.json");
    let base = ["dispersive", "scan", "--space", "A:1", "--q", "4", "--t", "1:8:dyadic"];
    let to_stdout = run(&base);
    let mut args: Vec<&str> = base.to_vec();
    let (c, j) = (csv.to_str().unwrap(), json_path.to_str().unwrap());
    args.extend(["--csv", c, "--json", j]);
    let out = run(&args);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.is_empty());
    let mut joined = std::fs::read(&csv).unwrap();
    joined.extend(std::fs::read(&json_path).unwrap());
    assert_eq!(joined, to_stdout.stdout);
}

#[test]
fn failed_checks_exit_two() {
    // a radius far too small leaves most of the mass in the tail
    let out = run(&["dispersive", "scan", "--space", "A:1", "--q", "4", "--t", "1:8:dyadic", "--radius", "0.5"]);
    assert_eq!(out.code, EXIT_CHECK_FAILED);
    let text = stdout(&out);
    let v: Value = serde_json::from_str(&text[text.find('{').unwrap()..]).unwrap();
    assert_eq!(v["pass"], false);
    assert_ne!(v["tail_status"], "converged");
}

#[test]
fn usage_and_numeric_errors_exit_one() {
    for args in [
        &["space", "info", "--space", "E:6"][..],
        &["space", "info"],
        &["frobnicate"],
        &["gamma-window", "--n", "0"],
        &["dispersive", "scan", "--space", "A:1", "--q", "2", "--t", "1:8:dyadic"],
        &["dispersive", "scan", "--space", "A:1complex", "--q", "4", "--t", "1:8:dyadic"],
        &["dispersive", "scan", "--space", "A:1", "--q", "4", "--t", "8:1:dyadic"],
        &["strichartz", "check", "--space", "A:2", "--pair", "4,3", "--widths", "1,2"],
        &["strichartz", "check", "--space", "A:1complex", "--pair", "4,4", "--widths", "1,2"],
        &["admissible", "--n", "3", "--p", "4", "--q", "3", "--with", "8,4"],
    ] {
        let out = run(args);
        assert_eq!(out.code, EXIT_ERROR, "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn help_is_not_an_error() {
    let out = run(&["--help"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(stdout(&out).contains("dispersive"));
}

#[test]
fn binary_forwards_streams_and_code() {
    let bin = env!("CARGO_BIN_EXE_symdisperse");
    let ok = Command::new(bin).args(["gamma-window", "--n", "2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(ok.stdout, b"(1, 3)\n");
    let bad = Command::new(bin).args(["space", "info", "--space", "Q:1"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error: unknown space"));
}
