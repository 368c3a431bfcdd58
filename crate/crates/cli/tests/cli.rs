use std::process::Command;

use bestchoice_cli::run_args;

fn run(args: &[&str]) -> (u8, String, String) {
    run_args(std::iter::once("bestchoice").chain(args.iter().copied()))
}

fn ok(args: &[&str]) -> String {
    let (status, out, err) = run(args);
    assert_eq!(status, 0, "{args:?} failed: {err}");
    out
}

#[test]
fn counts_csv_layout() {
    let out = ok(&["counts", "--pattern", "321", "--n", "2..12", "--format", "csv"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 12);
    assert!(lines[0].starts_with("N,k_offset_-11,"));
    assert!(lines[0].ends_with(",k_offset_-1"));
    assert_eq!(lines[1], "2,,,,,,,,,,,1");
    assert_eq!(lines[3], "4,,,,,,,,,6,8,5");
    assert_eq!(lines[11], "12,66,440,1815,5628,14154,29924,53937,82550,104312,100776,58786");
}

#[test]
fn brute_counts_match_closed_form() {
    let closed = ok(&["counts", "--n", "2..9"]);
    let brute = ok(&["counts", "--n", "2..9", "--brute"]);
    assert_eq!(closed, brute);
    let flat = ok(&["counts", "--pattern", "231", "--n", "6", "--brute"]);
    assert_eq!(flat.lines().nth(1), Some("6,,,,,,,42,42,42,42,42"));
}

#[test]
fn pretty_marks_row_maximum() {
    let out = ok(&["counts", "--n", "4", "--format", "pretty"]);
    let row = out.lines().nth(1).unwrap();
    let cells: Vec<&str> = row.split_whitespace().collect();
    assert_eq!(cells, ["4", "6", "8*", "5"]);
    let out = ok(&["probs", "--n", "7", "--format", "pretty"]);
    let cells: Vec<&str> = out.lines().nth(1).unwrap().split_whitespace().collect();
    assert_eq!(cells, ["7", "4.89", "16.3", "33.7", "49.8", "51.7*", "30.7"]);
}

#[test]
fn single_cell_table() {
    let out = ok(&["counts", "--n", "2"]);
    assert_eq!(out.lines().count(), 2);
}

#[test]
fn probs_json_carries_exact_values() {
    let out = ok(&["probs", "--n", "9", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let row = &v["rows"][0];
    assert_eq!(row["N"], 9);
    assert_eq!(row["total"], "4862");
    assert_eq!(row["argmax"], serde_json::json!([6]));
    let cell = row["cells"].as_array().unwrap().iter().find(|c| c["k"] == 6).unwrap();
    assert_eq!(cell["count"], "2442");
    assert_eq!(cell["exact"], "2442/4862");
    assert_eq!(cell["k_offset"], -3);
}

#[test]
fn probs_large_n_uses_ratio_mode() {
    let out = ok(&["probs", "--n", "100000", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let row = &v["rows"][0];
    assert!(row["total"].is_null());
    let best = row["cells"].as_array().unwrap().iter().find(|c| c["k"] == 99997).unwrap();
    assert!((best["percent"].as_f64().unwrap() - 48.4375).abs() < 0.1);
    let (status, _, err) = run(&["probs", "--n", "6000", "--mode", "exact"]);
    assert_eq!(status, 2);
    assert!(err.contains("5000"));
}

#[test]
fn optimal_k_lines() {
    let out = ok(&["optimal-k", "--n", "9"]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["k_star"], 6);
    assert_eq!(format!("{}/{}", v["prob_num"].as_str().unwrap(), v["prob_den"].as_str().unwrap()), "2442/4862");
    let out = ok(&["optimal-k", "--n", "2..20", "--format", "csv"]);
    assert_eq!(out.lines().count(), 20);
    assert!(out.lines().nth(1).unwrap().starts_with("2,1,0;1,1,2,"));
}

#[test]
fn limits_with_provenance() {
    let v: serde_json::Value = serde_json::from_str(&ok(&["limits"])).unwrap();
    assert_eq!(v["models"][0]["limit"], "1/4");
    assert_eq!(v["models"][1]["limit"], "31/64");
    assert_eq!(v["models"][1]["combo"], "3C_{N-1} - 4C_{N-2} - C_{N-3}");
    assert_eq!(v["s_limits"].as_array().unwrap().len(), 11);
}

#[test]
fn bijection_both_directions() {
    let v: serde_json::Value = serde_json::from_str(&ok(&["bijection", "--perm", "41728356"])).unwrap();
    assert_eq!(v["corners"], serde_json::json!([[1, 4], [3, 7], [5, 8]]));
    assert_eq!(v["path"], "NNNNEENNNEENEEEE");
    let back: serde_json::Value = serde_json::from_str(&ok(&["bijection", "--path", "NNNNEENNNEENEEEE"])).unwrap();
    assert_eq!(back["perm"], "41728356");
    let (status, _, err) = run(&["bijection", "--perm", "321"]);
    assert_eq!(status, 2);
    assert!(!err.is_empty());
}

#[test]
fn simulate_is_deterministic() {
    let args = ["simulate", "--n", "8", "--k", "6", "--trials", "20000", "--seed", "7", "--streams", "3"];
    let a = ok(&args);
    assert_eq!(a, ok(&args));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys.len(), 4);
    assert_eq!(v["trials"], 20000);
}

#[test]
fn verify_passes_at_ten() {
    let out = ok(&["verify", "--n-max", "10"]);
    assert!(out.lines().all(|l| l.starts_with("ok ")), "{out}");
    assert!(out.contains("unique-extension"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["counts", "--n", "5..2"][..],
        &["counts", "--n", "1"],
        &["counts", "--format", "xml"],
        &["bijection"],
        &["bijection", "--perm", "12", "--path", "NE"],
        &["simulate", "--n", "3", "--k", "3"],
        &["nope"],
    ] {
        assert_eq!(run(args).0, 2, "{args:?}");
    }
}

#[test]
fn output_is_byte_stable() {
    for args in [
        &["counts", "--n", "2..12", "--format", "json"][..],
        &["probs", "--n", "2..18,100000", "--format", "pretty"],
        &["limits", "--format", "json"],
    ] {
        assert_eq!(ok(args), ok(args));
    }
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("counts.csv");
    let p = path.to_str().unwrap();
    assert_eq!(ok(&["counts", "--n", "2..5", "--output", p]), "");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), ok(&["counts", "--n", "2..5"]));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_bestchoice");
    let s = Command::new(bin).args(["counts", "--n", "4"]).output().unwrap();
    assert_eq!(s.status.code(), Some(0));
    assert_eq!(String::from_utf8(s.stdout).unwrap().lines().nth(1), Some("4,,,,,,,,,6,8,5"));
    let s = Command::new(bin).args(["counts", "--n", "x"]).output().unwrap();
    assert_eq!(s.status.code(), Some(2));
}
