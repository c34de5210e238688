use std::process::{Command, Output};

use dqre::report::{read_csv, Row, CSV_HEADER};
use serde_json::Value;

fn dqre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dqre"))
        .args(args)
        .output()
        .expect("run dqre")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_rows(o: &Output) -> (Value, Vec<Row>) {
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = serde_json::from_value(doc["rows"].clone()).unwrap();
    (doc, rows)
}

#[test]
fn monolithic_ising_estimate() {
    let out = dqre(&["estimate", "--app", "ising", "--monolithic"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (doc, rows) = json_rows(&out);
    let rep = &doc["representative"];
    assert_eq!(rep["nodes"], 1);
    let q = rep["total_physical_qubits"].as_f64().unwrap();
    let t = rep["runtime_s"].as_f64().unwrap();
    assert!(q > 0.0913e6 / 2.0 && q < 0.0913e6 * 2.0, "{q}");
    assert!(t > 7.92 / 2.0 && t < 7.92 * 2.0, "{t}");
    let i = doc["representative_index"].as_u64().unwrap() as usize;
    assert_eq!(rows[i].qubits_total, Some(q as u64));
    assert_eq!(rows[i].overhead, Some(1.0));
}

#[test]
fn distributed_estimate_reports_frontier() {
    let out = dqre(&[
        "estimate",
        "--app",
        "ising",
        "--preset",
        "fast-optimistic",
        "--eta",
        "10e6",
        "--node-size",
        "45000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let (doc, rows) = json_rows(&out);
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.feasible && r.nodes.unwrap() >= 1));
    assert!(rows
        .windows(2)
        .all(|w| w[0].qubits_total < w[1].qubits_total && w[0].runtime_s > w[1].runtime_s));
    assert_eq!(doc["settings"]["eta_mode"], "strict");
    assert_eq!(doc["hardware"]["node_size"], 45000);
    assert!(doc["baseline"].is_object());
}

#[test]
fn exit_codes() {
    let overflow = dqre(&["estimate", "--app", "ising", "--node-size", "100"]);
    assert_eq!(overflow.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&overflow.stderr).contains("node overflow"));
    assert_eq!(dqre(&["estimate", "--app", "nosuchapp"]).status.code(), Some(1));
    assert_eq!(
        dqre(&["estimate", "--app", "ising", "--eta", "-5"]).status.code(),
        Some(1)
    );
    assert_eq!(
        dqre(&["estimate", "--app", "ising", "--budget-weights", "1,1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        dqre(&["estimate", "--app", "ising", "--config", "/nonexistent.toml"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(dqre(&["validate", "--cycle-factor", "100"]).status.code(), Some(3));
    assert_eq!(dqre(&["--help"]).status.code(), Some(0));
}

#[test]
fn csv_and_json_agree() {
    let base = [
        "sweep-node-size",
        "--app",
        "ising",
        "--preset",
        "slow-optimistic-bell5",
        "--sizes",
        "800,5000,45000",
    ];
    let json = dqre(&base);
    let csv = dqre(&[&base[..], &["--format", "csv"]].concat());
    assert!(json.status.success() && csv.status.success());
    let (doc, from_json) = json_rows(&json);
    let text = stdout(&csv);
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    let from_csv: Vec<Row> = read_csv(&text).unwrap();
    assert_eq!(from_csv, from_json);
    // The too-small node stays in the table as an infeasible row.
    assert_eq!(from_csv.len(), 3);
    assert!(!from_csv[0].feasible && from_csv[0].qubits_total.is_none());
    assert_eq!(doc["errors"].as_array().unwrap().len(), 1);
    assert!(from_csv[1..].iter().all(|r| r.feasible));
}

#[test]
fn single_point_sweep_matches_estimate() {
    let common = [
        "--app",
        "heisenberg",
        "--preset",
        "fast-optimistic-bell5",
        "--eta",
        "2e6",
    ];
    let est = dqre(&[&["estimate"][..], &common].concat());
    let sweep = dqre(&[&["sweep-eta"][..], &common, &["--eta-min", "2e6", "--eta-max", "2e6"]].concat());
    let (doc, _) = json_rows(&est);
    let (_, rows) = json_rows(&sweep);
    assert_eq!(rows.len(), 1);
    let i = doc["representative_index"].as_u64().unwrap() as usize;
    let (_, est_rows) = json_rows(&est);
    let rep = Row {
        axis: rows[0].axis,
        ..est_rows[i].clone()
    };
    assert_eq!(rows[0], rep);
}

#[test]
fn config_file_and_flags() {
    let dir = std::env::temp_dir().join(format!("dqre-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.toml");
    std::fs::write(
        &path,
        "[hardware]\npreset = \"slow-optimistic-bell5\"\neta = 10e3\nnode_size = 25000\n\n\
         [application]\nname = \"ising\"\n\n[estimator]\naccounting = \"packed\"\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let out = dqre(&["estimate", "--config", p]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (doc, _) = json_rows(&out);
    assert_eq!(doc["hardware"]["node_size"], 25000);
    assert_eq!(doc["settings"]["accounting"], "packed");
    assert_eq!(doc["application"]["data_qubits"], 100);

    let flagged = dqre(&[
        "estimate",
        "--config",
        p,
        "--node-size",
        "45000",
        "--accounting",
        "whole-nodes",
    ]);
    let (doc, _) = json_rows(&flagged);
    assert_eq!(doc["hardware"]["node_size"], 45000);
    assert_eq!(doc["settings"]["accounting"], "whole_nodes");

    std::fs::write(&path, "[hardware]\nspeed = 1\n").unwrap();
    let bad = dqre(&["estimate", "--app", "ising", "--config", p]);
    assert_eq!(bad.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn list_factories_meets_target() {
    let out = dqre(&[
        "list-factories",
        "--target",
        "1e-9",
        "--preset",
        "fast-optimistic-bell5",
    ]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["kind"] == "edf"));
    assert!(rows.iter().any(|r| r["kind"] == "msdf"));
    assert!(rows.iter().all(|r| r["output_error"].as_f64().unwrap() <= 1e-9));
    let csv = dqre(&["list-factories", "--target", "1e-9", "--kind", "edf", "--format", "csv"]);
    let text = stdout(&csv);
    assert!(text.starts_with("kind,label,physical_qubits"));
    assert!(text.lines().skip(1).all(|l| l.starts_with("edf,")));
}

#[test]
fn output_is_deterministic_and_written_to_file() {
    let dir = std::env::temp_dir().join(format!("dqre-det-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for path in [&a, &b] {
        let out = dqre(&[
            "sweep-eta",
            "--app",
            "ising",
            "--eta-min",
            "1e4",
            "--eta-max",
            "1e8",
            "--per-decade",
            "3",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    std::fs::remove_dir_all(&dir).ok();
}
