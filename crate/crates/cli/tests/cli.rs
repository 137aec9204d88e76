use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monogamy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monogamy"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", stdout(o)))
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn info_values(v: &Value) -> Vec<(Vec<u64>, f64)> {
    v["info"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let s = e["subset"]
                .as_array()
                .unwrap()
                .iter()
                .map(|q| q.as_u64().unwrap())
                .collect();
            (s, e["I"].as_f64().unwrap())
        })
        .collect()
}

#[test]
fn report_w3_json() {
    let o = run(&["report", "--state", "w:3", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let info = info_values(&v);
    assert_eq!(info.len(), 7);
    for (s, val) in &info {
        let want = match s.len() {
            1 => 1.0 / 9.0,
            2 => 0.0,
            _ => 24.0 / 9.0,
        };
        assert!((val - want).abs() < 1e-12, "{s:?}: {val}");
    }
    assert!(v["passed"].as_bool().unwrap());
}

#[test]
fn report_ghz4_table() {
    let o = run(&["report", "--state", "ghz:4"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let line = text.lines().find(|l| l.trim_start().starts_with("{1,2,3,4}")).unwrap();
    assert!(line.contains(" 8 "), "{line}");
    let comb = text.lines().find(|l| l.contains("partition-combination")).unwrap();
    assert!(comb.contains("PASS"), "{comb}");

    let v = json(&run(&[
        "report",
        "--state",
        "ghz:4",
        "--format",
        "json",
        "--identity",
        "eq26",
    ]));
    let ids = v["identities"].as_array().unwrap();
    assert_eq!(ids.len(), 1);
    assert!(ids[0]["residual"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn report_from_bell_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bell.json");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let doc = serde_json::json!({
        "kind": "pure",
        "n": 2,
        "amplitudes": [[h, 0.0], [0.0, 0.0], [0.0, 0.0], [h, 0.0]]
    });
    std::fs::write(&path, doc.to_string()).unwrap();
    let spec = format!("file:{}", path.display());
    let o = run(&["report", "--state", &spec, "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let info = info_values(&v);
    assert!((info[2].1 - 2.0).abs() < 1e-12);
    assert!((v["concurrence_sq"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn report_csv_has_every_subset() {
    let o = run(&["report", "--state", "ghz:3", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("subset,size,I"));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 7);
    assert!(rows[6].starts_with("1 2 3,3,"));
}

#[test]
fn report_export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w4.json");
    let out_s = out.to_str().unwrap();
    assert_eq!(
        code(&run(&["report", "--state", "w:4", "--format", "json", "--out", out_s])),
        0
    );
    let first: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();

    let spec = format!("file:{out_s}");
    let second = json(&run(&["report", "--state", &spec, "--format", "json"]));
    assert_eq!(info_values(&first), info_values(&second));
    assert_eq!(first["state"], second["state"]);
}

#[test]
fn json_output_is_byte_identical() {
    let args = ["report", "--state", "random:5", "--seed", "11", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["fuzz", "--n", "4", "--trials", "50", "--seed", "3", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn odd_qubit_report_omits_tangle() {
    let v = json(&run(&["report", "--state", "w:3", "--format", "json"]));
    assert!(v.get("n_tangle").is_none());
}

#[test]
fn fuzz_tangle_relation() {
    let o = run(&[
        "fuzz",
        "--n",
        "4",
        "--trials",
        "1000",
        "--seed",
        "7",
        "--identity",
        "eq12",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let run0 = &v["runs"][0];
    assert_eq!(run0["identity"], "tangle-relation");
    assert_eq!(run0["trials"], 1000);
    assert!(run0["max_abs_residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn fuzz_smallest_case() {
    let o = run(&[
        "fuzz",
        "--n",
        "2",
        "--trials",
        "1",
        "--seed",
        "0",
        "--identity",
        "eq1b",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["runs"][0]["max_abs_residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn fuzz_pair_partitions() {
    let o = run(&[
        "fuzz",
        "--n",
        "5",
        "--trials",
        "200",
        "--identity",
        "eq20",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let r = &json(&o)["runs"][0];
    assert_eq!(r["failures"], 0);
    // 10 pairs of 5 qubits
    assert_eq!(r["checks"], 2000);
}

#[test]
fn fuzz_size_range_and_table() {
    let o = run(&["fuzz", "--n", "2-5", "--trials", "20"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.lines().skip(1).all(|l| l.starts_with("PASS")), "{text}");
    assert!(text.contains("tangle-relation"));
}

#[test]
fn fuzz_failure_writes_witness() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(
        dir.path(),
        &[
            "fuzz",
            "--n",
            "3",
            "--trials",
            "5",
            "--identity",
            "eq1b",
            "--tol",
            "1e-300",
        ],
    );
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stderr));
    let witness = dir.path().join("witness-complementarity-n3.json");
    let text = std::fs::read_to_string(&witness).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["kind"], "pure");
    assert_eq!(v["n"], 3);

    // the witness is itself a loadable state
    let spec = format!("file:{}", witness.display());
    assert_eq!(code(&run(&["report", "--state", &spec])), 0);
}

#[test]
fn mixed_random_pair() {
    let o = run(&[
        "mixed-check",
        "--random",
        "--m",
        "2",
        "--rank",
        "4",
        "--trials",
        "500",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let pair = v["runs"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["identity"] == "mixed-pair")
        .unwrap();
    assert!(pair["max_abs_residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn mixed_maximally_mixed_triple() {
    let o = run(&["mixed-check", "--rho", "maximally-mixed:3", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let triple = v["identities"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["identity"] == "mixed-triple")
        .unwrap();
    assert!((triple["lhs"].as_f64().unwrap() - 0.875).abs() < 1e-12);
    assert!((triple["rhs"].as_f64().unwrap() - 0.875).abs() < 1e-12);
}

#[test]
fn non_psd_matrix_is_a_load_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rho.json");
    // Hermitian, unit trace, eigenvalues 1.5 and -0.5
    let doc = serde_json::json!({
        "kind": "mixed",
        "m": 1,
        "matrix": [[[0.5, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.5, 0.0]]]
    });
    std::fs::write(&path, doc.to_string()).unwrap();
    let spec = format!("file:{}", path.display());
    let o = run(&["mixed-check", "--rho", &spec]);
    assert_eq!(code(&o), 2);
    assert!(!o.stderr.is_empty());
}

#[test]
fn bench_both_paths() {
    let o = run(&["bench", "--n", "6", "--repeats", "2", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["entries"], 63);
    assert!(v["max_abs_diff"].as_f64().unwrap() <= 1e-9);
    assert!(v["enumeration_seconds"].as_f64().is_some());
}

#[test]
fn bench_single_qubit() {
    let o = run(&["bench", "--n", "1", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["entries"], 1);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["report", "--state", "ghz:0"][..],
        &["report", "--state", "nonsense:3"],
        &["report", "--state", "w:3", "--identity", "eq99"],
        &["report", "--state", "w:3", "--tol", "-1"],
        &["fuzz", "--n", "2", "--trials", "1", "--identity", "eq20"],
        &["fuzz", "--n", "4", "--trials", "0"],
        &["mixed-check"],
        &["mixed-check", "--rho", "file:/does/not/exist.json"],
        &["report"],
    ] {
        assert_eq!(code(&run(args)), 2, "{args:?}");
    }
}
