//! End-to-end tests driving the compiled binary. Exit-code contract:
//! 0 success, 2 configuration error, 3 size cap, 4 verification failure.

use std::process::{Command, Output};

fn ost(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ost"))
        .args(args)
        .env_remove("OST_MAX_EXACT_N")
        .output()
        .expect("spawn ost")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn spectrum_reports_the_exact_table() {
    let out = ost(&["spectrum", "--n", "5"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("# trace=274/5"), "{text}");
    assert!(text.contains("# eigenvalues=120"), "{text}");
    assert!(text.contains("shape,tableau_index,eigenvalue,multiplicity"), "{text}");
    let table = ["151/300", "57/100", "157/300", "59/100", "16/25"];
    for (i, value) in table.iter().enumerate() {
        assert!(
            text.contains(&format!("\"3,2\",{i},{value},5")),
            "missing (3,2) line for {value}: {text}"
        );
    }
}

#[test]
fn spectrum_matrix_check_passes_and_reports_deviation() {
    let out = ost(&["spectrum", "--n", "3", "--verify-matrix"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("# matrix_deviation="));
}

#[test]
fn spectrum_beyond_the_tableau_cap_is_refused() {
    let out = ost(&["spectrum", "--n", "20"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(stderr(&out).contains("n <= 14"));
}

#[test]
fn bounds_small_deck_exact_values() {
    let out = ost(&["bounds", "--n", "3", "--t", "1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("t,tv,l2,relaxed"), "{text}");
    assert!(text.contains("1,4/9,14/9,100/27"), "{text}");
    assert!(text.contains("# sandwich_checked=2"), "{text}");
}

#[test]
fn bounds_range_keeps_the_sandwich() {
    let out = ost(&["bounds", "--n", "6", "--t-range", "0..12"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("# sandwich_checked=26"), "{text}");
    // 13 data rows after the header.
    let rows = text.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 14, "{text}");
}

#[test]
fn bounds_float_mode_extends_the_tv_cap() {
    let out = ost(&["bounds", "--n", "8", "--t", "3", "--mode", "float"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let row = text
        .lines()
        .find(|l| l.starts_with("3,"))
        .unwrap_or_else(|| panic!("no t=3 row: {text}"));
    let tv_cell = row.split(',').nth(1).unwrap();
    assert!(!tv_cell.is_empty(), "{text}");
    assert!(tv_cell.parse::<f64>().unwrap() > 0.0, "{text}");
}

#[test]
fn bounds_env_override_unlocks_larger_exact_decks() {
    let out = Command::new(env!("CARGO_BIN_EXE_ost"))
        .args(["bounds", "--n", "7", "--t", "1"])
        .env("OST_MAX_EXACT_N", "7")
        .output()
        .expect("spawn ost");
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let row = text.lines().find(|l| l.starts_with("1,")).unwrap();
    assert!(!row.split(',').nth(1).unwrap().is_empty(), "{text}");

    // Without the override the same deck is over the rational cap.
    let out = ost(&["bounds", "--n", "7", "--t", "1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("# tv=skipped"), "{text}");
}

#[test]
fn bounds_with_nothing_computable_is_a_cap_error() {
    let out = ost(&["bounds", "--n", "50", "--alpha", "1", "--t", "1"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(stderr(&out).contains("no bound is computable"));

    // The predicate sweep shares the tableau cap, so asking for it does not
    // rescue the run.
    let out = ost(&["bounds", "--n", "50", "--alpha", "1", "--t", "1", "--predicates"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
}

#[test]
fn bounds_predicate_sweep_reports_every_family() {
    let out = ost(&["bounds", "--n", "5", "--alpha", "1", "--t", "1", "--predicates"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("# predicates_pass=true"), "{text}");
    assert!(text.contains("# table=predicates"), "{text}");
    // Exponent 1 runs both one-sided families plus the shared predicate.
    let rows: Vec<&str> = text
        .lines()
        .skip_while(|l| *l != "name,pass,cases,counterexample")
        .skip(1)
        .take_while(|l| !l.is_empty())
        .collect();
    assert_eq!(rows.len(), 8, "{text}");
    assert!(rows.iter().all(|r| r.split(',').nth(1) == Some("true")), "{text}");
}

#[test]
fn fixed_point_runs_are_reproducible() {
    let args = [
        "simulate",
        "fixed-points",
        "--n",
        "50",
        "--t-range",
        "0..2",
        "--trials",
        "200",
        "--seed",
        "3",
    ];
    let first = ost(&args);
    let second = ost(&args);
    assert_eq!(code(&first), 0, "{}", stderr(&first));
    assert_eq!(stdout(&first), stdout(&second));
    let text = stdout(&first);
    // Before any shuffle every card is fixed.
    assert!(text.lines().any(|l| l.starts_with("0,1,0,")), "{text}");
    assert!(text.contains("# segment=39..50"), "{text}");
}

#[test]
fn coupon_run_matches_its_expectations() {
    let args = [
        "simulate", "coupon", "--n", "2000", "--c", "4", "--trials", "300", "--seed", "5",
    ];
    let first = ost(&args);
    assert_eq!(code(&first), 0, "{}", stderr(&first));
    let second = ost(&args);
    assert_eq!(stdout(&first), stdout(&second));
    let text = stdout(&first);
    assert!(text.contains("# target=263"), "{text}");
    assert!(text.contains("# expected_hitting="), "{text}");
    assert!(text.contains("mean,stderr,early_fraction"), "{text}");
}

#[test]
fn coupon_window_constant_is_validated() {
    let out = ost(&["simulate", "coupon", "--n", "2000", "--c", "2"]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
    assert!(stderr(&out).contains("chebyshev"));
}

#[test]
fn lift_lists_exact_eigenvalues() {
    let out = ost(&["lift", "--n", "2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("2,0,2/1,1/1"), "{text}");
    assert!(text.contains("\"1,1\",0,1/1,1/2"), "{text}");

    let out = ost(&["lift", "--n", "5", "--shape", "3,2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("# vectors=5"), "{text}");
    // Walk eigenvalues are the (3,2) spectral lines; Q scales them by n.
    for walk in ["151/300", "57/100", "157/300", "59/100", "16/25"] {
        assert!(text.lines().any(|l| l.ends_with(walk)), "missing {walk}: {text}");
    }
    assert!(text.contains(",16/5,16/25"), "{text}");
}

#[test]
fn lift_master_sweep_passes() {
    let out = ost(&["lift", "--n", "3", "--verify-master"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    for a in 1..=4 {
        assert!(text.contains(&format!("# master_residual_a{a}=0/1")), "{text}");
    }
}

#[test]
fn config_errors_exit_two() {
    // Shape size disagrees with the deck size.
    let out = ost(&["lift", "--n", "4", "--shape", "3,2"]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));

    // Conflicting weight flags are a usage error.
    let out = ost(&["bounds", "--n", "3", "--t", "1", "--alpha", "1", "--weights", "w.txt"]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));

    // Missing time specification.
    let out = ost(&["bounds", "--n", "3"]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));

    // Malformed cap override.
    let out = Command::new(env!("CARGO_BIN_EXE_ost"))
        .args(["bounds", "--n", "3", "--t", "1"])
        .env("OST_MAX_EXACT_N", "many")
        .output()
        .expect("spawn ost");
    assert_eq!(code(&out), 2, "{}", stderr(&out));
}

#[test]
fn weight_table_files_are_read_exactly() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("weights.txt");
    std::fs::write(&path, "1\n2\n3\n").expect("write weights");
    let out = ost(&["spectrum", "--n", "3", "--weights", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("# weight=table(3)"), "{text}");
    // w = j matches the exponent-1 walk.
    let exponent = ost(&["spectrum", "--n", "3", "--alpha", "1"]);
    let expected: Vec<String> = stdout(&exponent)
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("shape,"))
        .map(str::to_string)
        .collect();
    for line in expected {
        assert!(text.contains(&line), "missing {line}: {text}");
    }

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1\n-2\n").expect("write weights");
    let out = ost(&["spectrum", "--n", "2", "--weights", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
}

#[test]
fn out_file_receives_the_report() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("report.csv");
    let out = ost(&["bounds", "--n", "3", "--t", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(&path).expect("read report");
    assert!(text.starts_with("# command=bounds"), "{text}");
    assert!(text.contains("1,4/9,14/9,100/27"), "{text}");
}

#[test]
fn json_format_is_valid_and_carries_the_rows() {
    let out = ost(&["lift", "--n", "2", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["config"]["command"], "lift");
    assert_eq!(v["config"]["n"], "2");
    let rows = v["eigenvectors"].as_array().expect("rows");
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["walk_eigenvalue"], "1/1");
    assert_eq!(rows[1]["walk_eigenvalue"], "1/2");
}
