use std::process::{Command, Output};

use serde_json::Value;
use sparse_ldp::io::read_directed;
use sparse_ldp::randgen::sample_network;
use sparse_ldp::spectral::spectral_norm_dense;
use sparse_ldp::transforms::clique_reduce;
use sparse_ldp::{RngHandle, WeibullSpec};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sparse-ldp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stderr_json(o: &Output) -> Value {
    let text = String::from_utf8(o.stderr.clone()).unwrap();
    assert_eq!(text.lines().count(), 1, "stderr: {text}");
    serde_json::from_str(&text).unwrap()
}

#[test]
fn rate_query() {
    let o = run(&["theory", "--op", "rate", "--alpha", "1", "--delta", "0.5", "--tail", "upper"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["value"], 0.5);
}

#[test]
fn error_exit_codes() {
    let o = run(&["norm", "--in", "definitely/missing.net"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "io");

    let o = run(&["sample", "--n", "10", "--d", "20", "--alpha", "1", "--out", "unused.net"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"], "domain");

    let o = run(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr_json(&o)["usage"].as_str().unwrap().contains("Usage"));
}

#[test]
fn parse_error_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.net");
    std::fs::write(&bad, "directed n=3\n0,1,abc\n").unwrap();
    let o = run(&["norm", "--in", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "parse");
}

#[test]
fn help_and_version() {
    for sub in ["sample", "reduce", "norm", "structure", "theory", "experiment", "replay"] {
        let o = run(&[sub, "--help"]);
        assert_eq!(o.status.code(), Some(0), "{sub} --help");
    }
    let o = run(&["--version"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn sample_reduce_norm_match_library() {
    let dir = tempfile::tempdir().unwrap();
    let z_path = dir.path().join("z.net");
    let h_path = dir.path().join("h.net");
    let map_path = dir.path().join("split.map");
    let z = z_path.to_str().unwrap();
    let o = run(&["sample", "--n", "60", "--d", "2", "--alpha", "1.5", "--seed", "17", "--out", z]);
    assert_eq!(o.status.code(), Some(0));

    let spec = WeibullSpec::new(1.5).unwrap();
    let direct = sample_network(60, 2.0, &spec, &mut RngHandle::new(17, 0).rng()).unwrap();
    let from_file = read_directed(&z_path).unwrap();
    assert_eq!(from_file, direct);

    let o = run(&[
        "reduce",
        "--in",
        z,
        "--out",
        h_path.to_str().unwrap(),
        "--emit-split-map",
        map_path.to_str().unwrap(),
        "--abs",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = clique_reduce(&direct.abs()).unwrap();
    assert_eq!(stdout_json(&o)["edges"], r.h.edge_count());
    let map = std::fs::read_to_string(&map_path).unwrap();
    assert_eq!(map.lines().count(), r.split_map.retained_count());

    let o = run(&["norm", "--in", z, "--engine", "dense"]);
    assert_eq!(o.status.code(), Some(0));
    let expected = serde_json::to_string(&spectral_norm_dense(&direct).unwrap()).unwrap();
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim_end(), expected);

    let o = run(&["structure", "--in", z, "--d", "2", "--alpha", "1.5", "--delta", "1", "--epsilon", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout_json(&o)["flags"]["edge_count"].is_boolean());
}

#[test]
fn experiment_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&[
        "experiment", "census", "--alpha", "1", "--d", "2", "--delta", "1", "--epsilon", "2",
        "--n-list", "100,200", "--trials", "20", "--seed", "3", "--out-dir", out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let manifest = stdout_json(&o)["manifest"].as_str().unwrap().to_string();
    let o = run(&["replay", "--manifest", &manifest]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["matches"], true);

    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"alpha": 0.5, "d": 2.0, "n_list": [100], "trials": 4, "master_seed": 1}"#,
    )
    .unwrap();
    let o = run(&["experiment", "lln", "--config", cfg.to_str().unwrap(), "--out-dir", out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("lln.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 4);
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_sparse-ldp"))
        .args(["experiment", "lln", "--alpha", "0.5", "--d", "2", "--n-list", "50", "--trials", "2"])
        .env("SPARSE_LDP_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("lln.manifest.json").exists());
}
