use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn reconf(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reconf"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn generate_then_solve_min_min() {
    let dir = tempfile::tempdir().unwrap();
    let gen = reconf(&["gen", "--family", "full-grid-uniform", "--rows", "4", "--cols", "4", "-o", "g.json"], dir.path());
    assert!(gen.status.success());
    let solve = reconf(&["solve", "g.json", "--algorithm", "minmin"], dir.path());
    assert!(solve.status.success());
    assert!(stdout(&solve).contains("\"energy\": 224"));
    let bounds = reconf(&["bounds", "g.json"], dir.path());
    assert!(stdout(&bounds).contains("(634/3)"));
}

#[test]
fn seeded_generation_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["gen", "--rows", "6", "--cols", "6", "--p", "0.2", "--seed", "4"];
    let a = stdout(&reconf(&args, dir.path()));
    let b = stdout(&reconf(&args, dir.path()));
    assert_eq!(a, b);
    assert!(a.contains("\"nodes\": 36"));
}

#[test]
fn randomized_paths_need_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let gen = reconf(&["gen", "--rows", "4", "--cols", "4", "--p", "0.1"], dir.path());
    assert_eq!(gen.status.code(), Some(1));
    reconf(&["gen", "--family", "cycle-opposite", "--size", "8", "-o", "c.json"], dir.path());
    assert_eq!(reconf(&["solve", "c.json", "-a", "ride"], dir.path()).status.code(), Some(1));
    let ok = reconf(&["solve", "c.json", "-a", "ride", "--seed", "3", "--trace-out", "t.json"], dir.path());
    assert!(ok.status.success());
    assert!(stdout(&ok).contains("\"energy\": 4"));
    assert!(fs::read_to_string(dir.path().join("t.json")).unwrap().contains("\"steps\""));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.json"), "{\"nodes\": 2, \"root\": 0, \"edges\": [], \"demands\": [0, 1]}").unwrap();
    assert_eq!(reconf(&["solve", "bad.json", "-a", "lm"], dir.path()).status.code(), Some(1));
    assert_eq!(reconf(&["frobnicate"], dir.path()).status.code(), Some(1));
    reconf(&["gen", "--family", "full-grid-uniform", "--rows", "3", "--cols", "3", "-o", "g.json"], dir.path());
    let refused = reconf(&["solve", "g.json", "-a", "brute_force", "--cap", "10"], dir.path());
    assert_eq!(refused.status.code(), Some(2));
    let exact = reconf(&["solve", "g.json", "-a", "brute_force"], dir.path());
    assert!(stdout(&exact).contains("\"energy\": 52"));
}

#[test]
fn bench_csv_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "bench", "--rows", "5", "--cols", "5", "--p", "0.05,0.2", "--instances", "2", "--seeds", "1,2",
        "--algorithms", "dfs,ride,lm,be:dfs", "--no-timing", "--summary", "summary.txt",
    ];
    let a = reconf(&args, dir.path());
    assert!(a.status.success());
    let b = reconf(&args, dir.path());
    assert_eq!(a.stdout, b.stdout);
    let csv = stdout(&a);
    assert!(csv.starts_with("instance,algorithm,seed,energy,relax_bound,cut_bound,gap,time_s\n"));
    // Per instance: three seeded algorithms twice each plus LM once.
    assert_eq!(csv.lines().count(), 1 + 4 * 7);
    let summary = fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    assert_eq!(summary.lines().count(), 1 + 2 * 4);
}

#[test]
fn export_lp_reports_counts() {
    let dir = tempfile::tempdir().unwrap();
    reconf(&["gen", "--family", "full-grid-uniform", "--rows", "3", "--cols", "3", "-o", "g.json"], dir.path());
    let out = reconf(&["export-lp", "g.json", "-o", "g.lp"], dir.path());
    assert!(out.status.success());
    // 12 flows, 12 selectors and 2·12·7 directed indicators.
    assert!(stdout(&out).contains("variables 192 (binary 180), rows 142"));
    assert!(fs::read_to_string(dir.path().join("g.lp")).unwrap().contains("Binaries"));
    let unwritable = reconf(&["export-lp", "g.json", "-o", "missing/g.lp"], dir.path());
    assert_eq!(unwritable.status.code(), Some(1));
}
