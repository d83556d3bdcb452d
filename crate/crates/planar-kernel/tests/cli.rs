//! Golden-file and exit-code tests for the command-line interface.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_planar-kernel")
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

fn golden_path(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "`{}` failed: {}",
        args.join(" "),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn gen_star_matches_golden() {
    let out = stdout_of(&["gen", "--family", "star", "--n", "5"]);
    assert_eq!(out, golden("star5.pg"));
}

#[test]
fn gen_triangulation_matches_golden() {
    let out = stdout_of(&["gen", "--family", "triangulation", "--n", "12", "--seed", "3"]);
    assert_eq!(out, golden("tri12.pg"));
}

#[test]
fn approx_ds_matches_golden() {
    let out = stdout_of(&["approx-ds", "--epsilon", "1", &golden_path("star5.pg")]);
    assert_eq!(out, golden("approx_ds_star5.txt"));
}

#[test]
fn approx_vc_with_ledger_matches_golden() {
    let out = stdout_of(&[
        "approx-vc",
        "--epsilon",
        "1/2",
        &golden_path("tri12.pg"),
        "--ledger",
    ]);
    assert_eq!(out, golden("approx_vc_tri12.txt"));
}

#[test]
fn kernel_ds_alber_matches_golden() {
    let out = stdout_of(&["kernel-ds-alber", &golden_path("tri12.pg"), "--ledger"]);
    assert_eq!(out, golden("alber_tri12.txt"));
}

#[test]
fn kernel_ds_region_matches_golden() {
    let out = stdout_of(&[
        "kernel-ds-region",
        &golden_path("tri12.pg"),
        "--k",
        "4",
        "--ledger",
    ]);
    assert_eq!(out, golden("kernel_ds_tri12.txt"));
}

#[test]
fn kernel_vc_region_matches_golden() {
    let out = stdout_of(&["kernel-vc-region", &golden_path("tri12.pg"), "--k", "8"]);
    assert_eq!(out, golden("kernel_vc_tri12.txt"));
}

#[test]
fn regions_auto_matches_golden() {
    let out = stdout_of(&[
        "regions",
        "--cv",
        "1",
        "--ce",
        "1",
        "--anchors",
        "auto",
        &golden_path("tri12.pg"),
    ]);
    assert_eq!(out, golden("regions_tri12.txt"));
}

#[test]
fn solve_brute_matches_golden() {
    let out = stdout_of(&["solve-brute", "--problem", "vc", &golden_path("tri12.pg")]);
    assert_eq!(out, golden("brute_vc_tri12.txt"));
}

#[test]
fn verify_equivalent_instances() {
    let p = golden_path("tri12.pg");
    let out = run(&["verify", "--problem", "ds", &p, &p]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "equivalent\n");
}

#[test]
fn verify_inequivalent_exits_one() {
    let out = run(&[
        "verify",
        "--problem",
        "vc",
        &golden_path("star5.pg"),
        &golden_path("tri12.pg"),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn undersized_k_is_a_bound_failure() {
    let out = run(&["kernel-vc-region", &golden_path("star5.pg"), "--k", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bound"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["no-such-subcommand"]).status.code(), Some(2));
    assert_eq!(
        run(&["approx-ds", "--epsilon", "3", &golden_path("star5.pg")])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["approx-ds", "/nonexistent/file.pg"]).status.code(),
        Some(2)
    );
}

#[test]
fn output_flag_writes_file_and_keeps_stdout_empty() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.txt");
    let out = run(&[
        "approx-ds",
        "--epsilon",
        "1",
        &golden_path("star5.pg"),
        "--output",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(target).unwrap(),
        golden("approx_ds_star5.txt")
    );
}

#[test]
fn diagnostics_go_to_stderr() {
    let out = run(&["kernel-ds-region", &golden_path("star5.pg"), "--k", "0"]);
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}
