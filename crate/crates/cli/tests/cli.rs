use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn cutquery(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cutquery")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn edge_count(text: &str) -> usize {
    text.lines().next().unwrap().split_whitespace().nth(1).unwrap().parse().unwrap()
}

#[test]
fn gen_families() {
    let path = cutquery(&["gen", "--family", "path", "--n", "4"]);
    assert!(path.status.success());
    assert_eq!(edge_count(&stdout(&path)), 3);
    let clique = cutquery(&["gen", "--family", "clique", "--n", "5"]);
    assert_eq!(edge_count(&stdout(&clique)), 10);
}

#[test]
fn gen_is_deterministic_per_seed() {
    let a = stdout(&cutquery(&["gen", "--family", "gnp:0.5", "--n", "20", "--seed", "7"]));
    let b = stdout(&cutquery(&["gen", "--family", "gnp:0.5", "--n", "20", "--seed", "7"]));
    let c = stdout(&cutquery(&["gen", "--family", "gnp:0.5", "--n", "20", "--seed", "8"]));
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn gen_writes_file() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.txt");
    assert!(cutquery(&["gen", "--family", "cycle", "--n", "6", "--out", path_str(&g)]).status.success());
    assert_eq!(edge_count(&std::fs::read_to_string(g).unwrap()), 6);
}

#[test]
fn run_gomory_hu_on_a_path() {
    let out = cutquery(&["run", "--family", "path", "--n", "5", "--algo", "gomory-hu"]);
    assert!(out.status.success());
    let report = json(&out);
    assert_eq!(report["algorithm"], "gomory_hu");
    assert_eq!(report["verification"]["ok"], true);
    assert_eq!(report["artifact"]["kind"], "gomory_hu");
    assert_eq!(report["artifact"]["edges"].as_array().unwrap().len(), 4);
    let phases: u64 = report["phases"].as_object().unwrap().values().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(phases, report["queries"].as_u64().unwrap());
    assert!(report["wall_ms"].is_number());
}

#[test]
fn run_ni_on_k5() {
    let out = cutquery(&["run", "--family", "clique", "--n", "5", "--algo", "ni", "--override", "k=2"]);
    assert!(out.status.success());
    let report = json(&out);
    let forests = report["artifact"]["forests"].as_array().unwrap();
    assert_eq!(forests.len(), 2);
    assert_eq!(forests.iter().map(|f| f.as_array().unwrap().len()).sum::<usize>(), 7);
}

#[test]
fn star_contraction_above_max_degree_is_identity() {
    let out = cutquery(&["run", "--family", "gnp:0.5", "--n", "12", "--algo", "star-contraction", "--override", "tau=12"]);
    assert!(out.status.success());
    let a = &json(&out)["artifact"];
    assert_eq!(a["blocks"].as_array().unwrap().len(), 12);
    assert!(a["contracted_edges"].as_array().unwrap().is_empty());
}

#[test]
fn every_algorithm_verifies_on_a_small_graph() {
    for algo in ["single-source", "isolating", "friendly-sparsifier", "star-contraction", "ni", "cut-sparsifier", "expander"] {
        let out = cutquery(&["run", "--family", "two_cliques_bridge:1", "--n", "12", "--algo", algo]);
        assert!(out.status.success(), "{algo}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json(&out)["verification"]["ok"], true, "{algo}");
    }
}

#[test]
fn verify_accepts_and_rejects() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.txt");
    let t = dir.path().join("t.json");
    assert!(cutquery(&["gen", "--family", "gnp:0.4", "--n", "10", "--seed", "2", "--out", path_str(&g)]).status.success());
    let run = cutquery(&["run", "--graph", path_str(&g), "--out", path_str(&t)]);
    assert!(run.status.success());
    assert!(json(&run).get("artifact").is_none());
    let ok = cutquery(&["verify", "--graph", path_str(&g), "--artifact", path_str(&t)]);
    assert_eq!(ok.status.code(), Some(0));

    let mut tree: Value = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
    let unit: i128 = tree["unit"].as_str().unwrap().parse().unwrap();
    let first = &mut tree["edges"][0][2];
    let w: i128 = first.as_str().unwrap().parse().unwrap();
    *first = (w + unit).to_string().into();
    std::fs::write(&t, serde_json::to_string(&tree).unwrap()).unwrap();
    let bad = cutquery(&["verify", "--graph", path_str(&g), "--artifact", path_str(&t)]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["ok"], false);
}

#[test]
fn errors_exit_with_two() {
    assert_eq!(cutquery(&["run", "--n", "5", "--override", "colour=blue"]).status.code(), Some(2));
    assert_eq!(cutquery(&["run", "--graph", "/nonexistent/graph.txt"]).status.code(), Some(2));
    assert_eq!(cutquery(&["run", "--family", "path", "--n", "5", "--algo", "single-source", "--override", "pivot=9"]).status.code(), Some(2));
}

#[test]
fn config_file_and_override_precedence() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "family = clique\nn = 6\nalgo = ni\nk = 1\n").unwrap();
    let out = cutquery(&["run", "--config", path_str(&cfg), "--override", "k=3"]);
    assert!(out.status.success());
    let a = &json(&out)["artifact"];
    assert_eq!(a["k"], 3);
    assert_eq!(a["edge_count"], 5 + 4 + 3);
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn bench_header_totals_and_baseline() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("bench.cfg");
    std::fs::write(&cfg, "family = gnp:0.5\nn = 8, 16, 32\nseeds = 0..2\n").unwrap();
    let out = cutquery(&["bench", "--config", path_str(&cfg)]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "family,n,seed,phase,queries,success,baseline");
    let rows = csv_rows(&text);
    let totals: Vec<(u64, u64, u64)> = rows
        .iter()
        .filter(|r| r[3] == "total")
        .map(|r| (r[1].parse().unwrap(), r[4].parse().unwrap(), r[6].parse().unwrap()))
        .collect();
    assert_eq!(totals.len(), 6);
    for &(n, _, baseline) in &totals {
        assert_eq!(baseline, 3 * n * (n - 1) / 2);
    }
    let sum = |n: u64| totals.iter().filter(|t| t.0 == n).map(|t| t.1).sum::<u64>();
    assert!(sum(8) < sum(16) && sum(16) < sum(32));
    assert!(rows.iter().all(|r| r[5] == "true"));
}

#[test]
fn bench_without_sizes_is_header_only() {
    let out = cutquery(&["bench"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "family,n,seed,phase,queries,success,baseline\n");
}
