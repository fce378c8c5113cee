use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chipfire")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const C4: &str = r#"{"n": 4, "adj": [[0,1,0,1],[1,0,1,0],[0,1,0,1],[1,0,1,0]]}"#;

#[test]
fn rank_of_a_single_chip_on_the_four_cycle() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c4.json", C4);
    let o = run(&["rank", "--graph", s(&g), "--divisor", "1,0,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rank"], 0);
    assert_eq!(v["witness_failure"], serde_json::json!([0, 0, 0, 1]));
}

#[test]
fn negative_leading_entry_is_accepted() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c4.json", C4);
    let o = run(&["rank", "--graph", s(&g), "--divisor", "-1,1,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rank"], -1);
}

#[test]
fn toric_rank_on_a_tree() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "p3.json", r#"{"n": 3, "adj": [[0,1,0],[1,0,1],[0,1,0]]}"#);
    let o = run(&["toric-rank", "--graph", s(&g), "--divisor", "2,-1,1", "--seed", "5", "--trials", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rank"], 2);
    assert_eq!(v["anomalies"], serde_json::json!([]));
}

#[test]
fn rr_checks_pass_and_write_reports() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c4.json", C4);
    let out = dir.path().join("r.csv");
    let o = run(&["rr-check", "--graph", s(&g), "--divisor", "2,0,-1,0", "--out", s(&out), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("case_index,vertices,genus,graph,divisor,"));
    assert_eq!(csv.lines().count(), 2);
    let o = run(&["toric-rr-check", "--graph", s(&g), "--divisor", "0,0,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["residual"], 0);
    assert_eq!(v["toric_residual"], 0);
}

#[test]
fn tiny_field_produces_a_violation_exit_code() {
    // Over F_2 most generic entries vanish, so toric effectivity of K4's zero
    // divisor fails while the graph rank is 0.
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k4.json", r#"{"n": 4, "adj": [[0,1,1,1],[1,0,1,1],[1,1,0,1],[1,1,1,0]]}"#);
    let o = run(&["toric-rr-check", "--graph", s(&g), "--divisor", "0,0,0,0", "--prime", "2", "--trials", "1"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn config_and_io_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "c4.json", C4);
    let bad = write(&dir, "bad.json", r#"{"n": 2, "adj": [[0,1],[2,0]]}"#);
    let missing = dir.path().join("missing.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["rank", "--graph", s(&bad), "--divisor", "0,0"],
        vec!["rank", "--graph", s(&missing), "--divisor", "0,0"],
        vec!["rank", "--graph", s(&g), "--divisor", "1,0"],
        vec!["rank", "--graph", s(&g), "--divisor", "1,x,0,0"],
        vec!["toric-rank", "--graph", s(&g), "--divisor", "1,0,0,0", "--prime", "10"],
        vec!["toric-rank", "--graph", s(&g), "--divisor", "1,0,0,0", "--trials", "0"],
        vec!["exhaustive", "--max-vertices", "3", "--genus-max", "1", "--window", "-1"],
        vec!["exhaustive", "--max-vertices", "3"],
        vec!["random-sweep", "--cases", "1", "--max-vertices", "5", "--min-genus", "9"],
        vec!["exhaustive", "--max-vertices", "3", "--genus-max", "1", "--out", "/nonexistent-dir/x.json"],
        vec!["frobnicate"],
    ];
    for args in cases {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn exhaustive_json_report_shape() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.json");
    let o = run(&["exhaustive", "--max-vertices", "3", "--genus-max", "2", "--toric", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["schema"], "chipfire-report/1");
    assert_eq!(v["config"]["mode"], "exhaustive");
    let records = v["records"].as_array().unwrap();
    assert_eq!(v["summary"]["cases"].as_u64().unwrap() as usize, records.len());
    assert_eq!(v["summary"]["failed"], 0);
    assert!(records.iter().all(|r| r["residual"] == 0 && r["toric_residual"] == 0));
}

#[test]
fn report_goes_to_stdout_without_out() {
    let o = run(&["exhaustive", "--max-vertices", "2", "--genus-max", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("case_index,"));
    // the 2-cycle (double edge) has g = 1: one degree-0 divisor per entry in [-1, 1]
    assert_eq!(text.lines().count(), 1 + 3);
}

#[test]
fn seeds_change_random_sweeps() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (seed, out) in [("1", &a), ("2", &b)] {
        let o = run(&["random-sweep", "--cases", "3", "--max-vertices", "6", "--seed", seed, "--out", s(out)]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
