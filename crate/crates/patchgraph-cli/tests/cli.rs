//! End-to-end tests of the `patchgraph` binary: every subcommand, exit-code
//! contract, and determinism of file outputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_patchgraph");

/// Per-test scratch directory under the system temp dir.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("patchgraph-cli-{name}-{}", std::process::id()));
    if dir.exists() {
        fs::remove_dir_all(&dir).unwrap();
    }
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn binary")
}

fn run_ok(args: &[&str]) -> serde_json::Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn p(path: &Path) -> String {
    path.to_str().unwrap().to_string()
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("Usage"));
}

#[test]
fn missing_subcommand_is_usage_error() {
    let out = run(&[]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = run(&["synth", "--seed", "1", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_input_file_is_data_error() {
    let dir = scratch("missing-input");
    let out = run(&[
        "decode",
        "--psl",
        "/definitely/not/here.json",
        "--out",
        &p(&dir.join("g.json")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn corrupt_input_file_is_data_error() {
    let dir = scratch("corrupt-input");
    let bad = dir.join("bad.json");
    fs::write(&bad, b"{ this is not json ").unwrap();
    let out = run(&["decode", "--psl", &p(&bad), "--out", &p(&dir.join("g.json"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn synth_is_deterministic_per_seed() {
    let dir = scratch("synth-determinism");
    let (a, b, c) = (dir.join("a.json"), dir.join("b.json"), dir.join("c.json"));
    for out in [&a, &b] {
        run_ok(&[
            "synth",
            "--size",
            "256",
            "--seed",
            "11",
            "--out-graph",
            &p(out),
        ]);
    }
    run_ok(&[
        "synth",
        "--size",
        "256",
        "--seed",
        "12",
        "--out-graph",
        &p(&c),
    ]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn pipeline_decode_is_deterministic_and_faithful() {
    let dir = scratch("pipeline");
    let gt = dir.join("gt.json");
    let psl = dir.join("psl.json");
    let dec1 = dir.join("dec1.json");
    let dec2 = dir.join("dec2.json");
    let opt = dir.join("opt.json");

    run_ok(&["synth", "--size", "512", "--seed", "3", "--out-graph", &p(&gt)]);
    run_ok(&["encode", "--graph", &p(&gt), "--out", &p(&psl)]);
    for out in [&dec1, &dec2] {
        run_ok(&["decode", "--psl", &p(&psl), "--out", &p(out)]);
    }
    assert_eq!(
        fs::read(&dec1).unwrap(),
        fs::read(&dec2).unwrap(),
        "decode must be byte-deterministic"
    );

    let rep = run_ok(&["optimize", "--graph", &p(&dec1), "--out", &p(&opt)]);
    assert!(rep["edges_after"].as_u64().unwrap() > 0);

    let eval = run_ok(&["eval", "--pred", &p(&opt), "--target", &p(&gt)]);
    assert!(eval["apls"].as_f64().unwrap() >= 0.95);
    assert!(eval["pf1"]["f1"].as_f64().unwrap() >= 0.98);
}

#[test]
fn loss_is_zero_against_itself() {
    let dir = scratch("loss-zero");
    let gt = dir.join("gt.json");
    let psl = dir.join("psl.json");
    run_ok(&["synth", "--size", "256", "--seed", "4", "--out-graph", &p(&gt)]);
    run_ok(&["encode", "--graph", &p(&gt), "--out", &p(&psl)]);
    let rep = run_ok(&["loss", "--pred", &p(&psl), "--target", &p(&psl)]);
    for key in ["l_p", "l_s", "l_l", "l_graph", "total"] {
        let v = rep[key].as_f64().unwrap();
        assert!(v.abs() < 1e-9, "{key} = {v} should vanish at the target");
    }
}

#[test]
fn skeletonize_recovers_mask_topology() {
    let dir = scratch("skeletonize");
    let gt = dir.join("gt.json");
    let mask = dir.join("gt.pgm");
    let sk = dir.join("sk.json");
    run_ok(&[
        "synth",
        "--size",
        "512",
        "--seed",
        "6",
        "--out-graph",
        &p(&gt),
        "--out-mask",
        &p(&mask),
    ]);
    let rep = run_ok(&["skeletonize", "--mask", &p(&mask), "--out", &p(&sk)]);
    assert!(rep["nodes"].as_u64().unwrap() > 0);
    let eval = run_ok(&["eval", "--pred", &p(&sk), "--target", &p(&gt)]);
    assert!(
        eval["apls"].as_f64().unwrap() >= 0.8,
        "baseline APLS too low: {eval}"
    );
}

#[test]
fn roundtrip_reports_clean_scene_summary() {
    let rep = run_ok(&[
        "roundtrip",
        "--size",
        "512",
        "--scenes",
        "2",
        "--seed",
        "40",
    ]);
    assert_eq!(rep["scenes"].as_u64().unwrap(), 2);
    assert_eq!(rep["exact_scenes"].as_u64().unwrap(), 2);
    assert!(rep["mean_apls"].as_f64().unwrap() > 0.95);
    assert_eq!(rep["per_scene"].as_array().unwrap().len(), 2);
}

#[test]
fn roundtrip_under_noise_still_reports() {
    let rep = run_ok(&[
        "roundtrip",
        "--size",
        "512",
        "--scenes",
        "2",
        "--seed",
        "41",
        "--p-drop",
        "0.2",
    ]);
    let apls = rep["mean_apls"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&apls));
}

#[test]
fn bench_reports_timings() {
    let rows = run_ok(&["bench", "--sizes", "64", "--seed", "2"]);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["patches"].as_u64().unwrap(), 64 * 64);
    assert!(rows[0]["decode_ms"].as_f64().unwrap() > 0.0);
}
