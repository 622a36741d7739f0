use std::path::Path;
use std::process::{Command, Output};

fn bench(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msqw-bench"))
        .current_dir(dir)
        .env_remove("MSQW_BENCH_THREADS")
        .args(args)
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) {
    let out = bench(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

fn json(dir: &Path, name: &str) -> serde_json::Value {
    serde_json::from_str(&read(dir, name)).unwrap()
}

#[test]
fn gen_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["gen", "--n", "5", "--count", "3", "--seed", "9", "--out", "a.jsonl"]);
    ok(d, &["gen", "--n", "5", "--count", "3", "--seed", "9", "--out", "b.jsonl"]);
    let a = read(d, "a.jsonl");
    assert_eq!(a, read(d, "b.jsonl"));
    let ids: Vec<String> = a
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["id"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(ids, ["sk-n5-s9", "sk-n5-s10", "sk-n5-s11"]);
    assert!(a.lines().all(|l| l.ends_with(r#""e0":null,"z_star":null,"degeneracy":null}"#)));
    let meta = json(d, "a.jsonl.meta.json");
    assert_eq!(meta["config"]["seed"], 9);
    assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn solve_fills_ground_states() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["gen", "--n", "8", "--count", "100", "--seed", "1", "--out", "i.jsonl"]);
    ok(d, &["solve", "--in", "i.jsonl", "--out", "s.jsonl"]);
    let lines: Vec<serde_json::Value> = read(d, "s.jsonl").lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 100);
    for v in &lines {
        assert!(v["e0"].as_f64().unwrap().is_finite());
        assert!(v["degeneracy"].as_u64().unwrap() >= 1);
        assert!(v["z_star"].as_u64().unwrap() < 256);
    }
}

#[test]
fn scan_requires_solved_instance() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["gen", "--n", "4", "--out", "i.jsonl"]);
    let out = bench(d, &["scan", "--in", "i.jsonl", "--out", "g.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("run solve first"));
}

#[test]
fn single_stage_scan_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["gen", "--n", "5", "--seed", "4", "--out", "i.jsonl"]);
    ok(d, &["solve", "--in", "i.jsonl"]);
    ok(d, &["scan", "--in", "i.jsonl", "--out", "g.csv"]);
    let csv = read(d, "g.csv");
    assert_eq!(csv.lines().count(), 401);
    assert_eq!(csv.lines().next().unwrap(), "axis1,axis2,energy,success_prob");
    let s = json(d, "g.json");
    assert_eq!(s["axis1"], "gamma");
    assert_eq!(s["instance_id"], "sk-n5-s4");
    assert!(s["min_energy"]["value"].as_f64().unwrap() < 0.0);
    assert!(s["max_success_prob"]["axis2"].is_number());
    ok(d, &["scan", "--in", "i.jsonl", "--out", "q.csv", "--protocol", "qaoa", "--grid-points", "7"]);
    assert_eq!(read(d, "q.csv").lines().count(), 50);
}

#[test]
fn multistage_scan_is_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["gen", "--n", "4", "--seed", "2", "--out", "i.jsonl"]);
    ok(d, &["solve", "--in", "i.jsonl"]);
    let args = |out: &'static str, threads: &'static str| {
        vec![
            "scan", "--in", "i.jsonl", "--out", out, "--stages", "5", "--grid-points", "4", "--samples", "200",
            "--seed", "5", "--threads", threads,
        ]
    };
    ok(d, &args("a.csv", "1"));
    ok(d, &args("b.csv", "3"));
    assert_eq!(read(d, "a.csv"), read(d, "b.csv"));
    assert_eq!(read(d, "a.json"), read(d, "b.json").replace("b.csv", "a.csv"));
    assert!(read(d, "a.csv").starts_with("axis1,axis2,energy,success_prob,energy_se,success_prob_se\n"));
    assert_eq!(json(d, "a.json")["axis2"], "dgamma");
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["gen", "--n", "4", "--out", "i.jsonl"]);
    ok(d, &["solve", "--in", "i.jsonl"]);
    let bad = bench(d, &["scan", "--in", "i.jsonl", "--out", "g.csv", "--protocol", "adiabatic"]);
    assert_eq!(bad.status.code(), Some(2));
    assert_eq!(bench(d, &["gen", "--n", "4", "--count", "0", "--out", "x.jsonl"]).status.code(), Some(2));
    assert_eq!(bench(d, &["gen", "--n", "20", "--out", "x.jsonl"]).status.code(), Some(2));
    assert_eq!(bench(d, &["profile", "--out", "p.csv", "--dgamma", "1.5"]).status.code(), Some(2));
    assert_eq!(bench(d, &["frobnicate"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_names_path() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = bench(d, &["gen", "--n", "4", "--out", "missing/dir/i.jsonl"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing/dir/i.jsonl"));
}

#[test]
fn compare_writes_one_row_per_instance() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["gen", "--n", "4", "--count", "5", "--seed", "30", "--out", "i.jsonl"]);
    ok(d, &["solve", "--in", "i.jsonl"]);
    ok(d, &["compare", "--in", "i.jsonl", "--out", "c.csv", "--grid-points", "8"]);
    let csv = read(d, "c.csv");
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "instance_id,qw_best_energy,qaoa_best_energy,qw_best_prob,qaoa_best_prob"
    );
    assert_eq!(lines.count(), 5);
    let s = json(d, "c.json");
    assert_eq!(s["instances"], 5);
    assert!(s["qw_both_wins"].as_u64().unwrap() <= s["qw_energy_wins"].as_u64().unwrap());
}

#[test]
fn scaling_writes_six_rows() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["gen", "--n", "5", "--seed", "8", "--out", "i.jsonl"]);
    ok(d, &["solve", "--in", "i.jsonl"]);
    ok(d, &["scaling", "--in", "i.jsonl", "--out", "s.csv", "--pvals", "4,8,16,32,64,128"]);
    let csv = read(d, "s.csv");
    assert_eq!(csv.lines().next().unwrap(), "p,err_qaoa1,err_qaoa2,err_msqw");
    assert_eq!(csv.lines().count(), 7);
    let r = json(d, "s.json");
    let slope = r["fitted_slopes"]["qaoa1"].as_f64().unwrap();
    assert!((-1.15..=-0.85).contains(&slope));
    assert!(r["commutator_norm"].as_f64().unwrap() > 0.0);
    assert!(r["reference_steps"].as_u64().unwrap() >= 1024);

    ok(d, &["scaling", "--in", "i.jsonl", "--out", "m.csv", "--pvals", "2,4", "--methods", "msqw"]);
    let m = read(d, "m.csv");
    assert!(m.lines().nth(1).unwrap().starts_with("2,,,"));
}

#[test]
fn profile_reproduces_annealing_shape() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["profile", "--gamma0", "20", "--dgamma", "0.3", "--stages", "200", "--out", "p.csv"]);
    assert_eq!(read(d, "p.csv").lines().count(), 201);
    let s = json(d, "p.json");
    assert_eq!(s["alpha_strictly_decreasing"], true);
    assert_eq!(s["beta_strictly_increasing"], true);
    assert_eq!(s["crossings"], 1);
}
