//! Integration tests for the `rse` binary: exit codes, determinism, and
//! file outputs for every subcommand.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rse"))
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rse-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn small_config(dir: &PathBuf) -> PathBuf {
    // small scenario so the whole suite stays fast
    let path = dir.join("config.json");
    fs::write(
        &path,
        r#"{
  "n": 6,
  "alpha": 2.0,
  "horizon": 12.0,
  "grid_step": 0.05,
  "iterations": 3,
  "n_max": 5,
  "n_values": [4, 9, 16, 25],
  "restarts": 8,
  "max_evals": 1500,
  "dim": 30
}"#,
    )
    .unwrap();
    path
}

fn run(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn trace_writes_outputs_and_is_deterministic() {
    let dir = tmp_dir("trace");
    let cfg = small_config(&dir);
    let out_a = dir.join("a");
    let out_b = dir.join("b");
    for out in [&out_a, &out_b] {
        let o = bin()
            .args(["trace", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(out)
            .output()
            .unwrap();
        assert_eq!(run(&o), 0, "stderr: {}", String::from_utf8_lossy(&o.stderr));
    }
    for name in ["trace_matched.csv", "trace_mismatched.csv", "summary.json"] {
        let a = fs::read(out_a.join(name)).unwrap();
        let b = fs::read(out_b.join(name)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{name} not byte-identical across reruns");
    }
    let matched = fs::read_to_string(out_a.join("trace_matched.csv")).unwrap();
    assert!(matched.starts_with("t,fidelity\n"));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_a.join("summary.json")).unwrap()).unwrap();
    assert!(summary["matched_peak"].as_f64().unwrap() > 0.999);
    assert!(summary["transfer_time_bound"].as_f64().unwrap()
        > summary["transfer_time_closed_form"].as_f64().unwrap());
}

#[test]
fn trace_require_fidelity_exit_code() {
    let dir = tmp_dir("trace-req");
    let cfg = small_config(&dir);
    // impossible requirement -> exit 4
    let o = bin()
        .args(["trace", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("o"))
        .args(["--require-fidelity", "1.1"])
        .output()
        .unwrap();
    assert_eq!(run(&o), 4);
}

#[test]
fn bad_config_is_exit_2_and_missing_file_exit_3() {
    let dir = tmp_dir("bad");
    let bad = dir.join("bad.json");
    fs::write(&bad, r#"{ "grid_step": -1.0 }"#).unwrap();
    let o = bin()
        .args(["trace", "--config"])
        .arg(&bad)
        .arg("--out")
        .arg(dir.join("o"))
        .output()
        .unwrap();
    assert_eq!(run(&o), 2);

    let o = bin()
        .args(["trace", "--config"])
        .arg(dir.join("nope.json"))
        .arg("--out")
        .arg(dir.join("o"))
        .output()
        .unwrap();
    assert_eq!(run(&o), 3);
}

#[test]
fn optimize_then_export_gates_roundtrip() {
    let dir = tmp_dir("opt");
    let cfg = small_config(&dir);
    let o = bin()
        .args(["optimize", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&dir)
        .args(["--seed", "3"])
        .output()
        .unwrap();
    assert_eq!(run(&o), 0, "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let record: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("optimized_params.json")).unwrap())
            .unwrap();
    assert_eq!(record["N"].as_u64().unwrap(), 3);
    assert!(record["achieved_fidelity"].as_f64().unwrap() > 0.9);

    let o = bin()
        .args(["export-gates", "--config"])
        .arg(&cfg)
        .arg("--params")
        .arg(dir.join("optimized_params.json"))
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(run(&o), 0, "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let program = fs::read_to_string(dir.join("gates.txt")).unwrap();
    // 3 iterations × (SNAP + D + SNAP + D) with no final phase for K = 1
    assert_eq!(program.lines().count(), 12);
    assert!(program.lines().all(|l| l.starts_with("D ") || l.starts_with("SNAP")));
}

#[test]
fn superpose_reports_matching_fidelities() {
    let dir = tmp_dir("sup");
    let cfg_path = dir.join("config.json");
    fs::write(
        &cfg_path,
        r#"{
  "target": [
    { "level": 4, "weight": 0.4 },
    { "level": 7, "weight": 0.6 }
  ],
  "alpha": 2.0,
  "iterations": 4,
  "restarts": 12,
  "max_evals": 2000,
  "dim": 30
}"#,
    )
    .unwrap();
    let o = bin()
        .args(["superpose", "--config"])
        .arg(&cfg_path)
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(run(&o), 0, "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("superpose_summary.json")).unwrap())
            .unwrap();
    assert!(summary["difference"].as_f64().unwrap() < 1e-9);
    assert!(summary["full_fidelity"].as_f64().unwrap() > 0.99);
}

#[test]
fn scaling_table_and_plot_svg() {
    let dir = tmp_dir("scale");
    let cfg = small_config(&dir);
    let o = bin()
        .args(["scaling", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(run(&o), 0, "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let table = fs::read_to_string(dir.join("scaling.csv")).unwrap();
    assert!(table.starts_with("n,T_eq5,T_bound,N_min\n"));
    assert_eq!(table.lines().filter(|l| l.starts_with('#')).count(), 2);
    assert_eq!(table.lines().count(), 1 + 4 + 2);

    let o = bin()
        .arg("plot")
        .arg(dir.join("scaling.csv"))
        .args(["--output", "scaling.svg"])
        .arg("--out")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(run(&o), 0, "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let svg = fs::read_to_string(dir.join("scaling.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<polyline").count(), 3); // T_eq5, T_bound, N_min

    // plot with no input -> exit 2
    let o = bin().arg("plot").output().unwrap();
    assert_eq!(run(&o), 2);
}
