use std::path::Path;
use std::process::{Command, Output};

use adaptive_ccb::bench::{gen_paper_instance, instance_lambda, CSV_HEADER};
use adaptive_ccb::env::CausalInstance;

fn ccb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccb")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = ccb(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn fails_with(args: &[&str], needle: &str) {
    let out = ccb(args);
    assert!(!out.status.success(), "{args:?} should fail");
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(needle), "{args:?}: {err}");
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_then_lambda() {
    let dir = tempfile::tempdir().unwrap();
    let inst_path = dir.path().join("paper.json");
    let trace = dir.path().join("trace.csv");
    ok(&["gen", "--kind", "paper", "--n", "4", "--k", "3", "--m", "3", "--out", p(&inst_path)]);
    let inst = CausalInstance::load(&inst_path).unwrap();
    assert_eq!(inst, gen_paper_instance(4, 3, 0.3, 3, 0).unwrap());

    let stdout = ok(&["lambda", "--instance", p(&inst_path), "--trace", p(&trace)]);
    let mut lines = stdout.lines();
    let lambda: f64 = lines.next().unwrap().strip_prefix("lambda,").unwrap().parse().unwrap();
    assert!((lambda - instance_lambda(&inst).unwrap()).abs() < 1e-12);
    assert_eq!(lines.next(), Some("intervention,frequency"));
    let freqs: Vec<(String, f64)> = lines
        .map(|l| {
            let (a, f) = l.split_once(',').unwrap();
            (a.to_string(), f.parse().unwrap())
        })
        .collect();
    assert_eq!(freqs.len(), 9);
    assert_eq!(freqs[0].0, "do()");
    assert_eq!(freqs[2].0, "do(X1=1)");
    assert!((freqs.iter().map(|x| x.1).sum::<f64>() - 1.0).abs() < 1e-9);

    let trace = std::fs::read_to_string(trace).unwrap();
    assert!(trace.starts_with("iteration,objective\n"));
    assert!(trace.lines().count() > 1);
}

#[test]
fn lower_bound_generation() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lb.json");
    ok(&["gen", "--kind", "lowerbound", "--k", "4", "--m", "2,3,2,2", "--beta", "0.1", "--target-context", "2", "--target-var", "3", "--out", p(&out)]);
    let inst = CausalInstance::load(&out).unwrap();
    assert_eq!((inst.k, inst.n), (4, 3));

    fails_with(&["gen", "--kind", "lowerbound", "--k", "4", "--out", p(&out)], "--beta");
    fails_with(
        &["gen", "--kind", "lowerbound", "--k", "3", "--beta", "0.1", "--target-var", "3", "--out", p(&out)],
        "probability of being 1",
    );
}

#[test]
fn run_is_reproducible_without_timing() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("r.json");
    ok(&["gen", "--kind", "random", "--n", "2", "--k", "3", "--seed", "4", "--out", p(&inst)]);
    let run = |jobs: &str, name: &str| {
        let out = dir.path().join(name);
        ok(&[
            "run", "--instance", p(&inst), "--algo", "rr-ts", "--budget", "300", "--runs", "20", "--seed", "8",
            "--jobs", jobs, "--out", p(&out), "--no-timing",
        ]);
        std::fs::read_to_string(out).unwrap()
    };
    let a = run("1", "a.csv");
    assert_eq!(a, run("3", "b.csv"));
    let mut lines = a.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "rr-ts");
    assert_eq!(row[1], "300");
    assert_eq!(row[6], "20");
    assert_eq!(row[10], "0.0");
    assert!(lines.next().is_none());
}

#[test]
fn sweep_writes_one_row_per_point_and_algo() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    ok(&[
        "sweep", "--axis", "lambda", "--grid", "2,3", "--algo", "convexplore,unif", "--n", "4", "--k", "3",
        "--budget", "300", "--runs", "5", "--seed", "1", "--out", p(&out),
    ]);
    let text = std::fs::read_to_string(out).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), ["convexplore", "unif", "convexplore", "unif"]);
    assert_eq!(rows.iter().map(|r| r[4]).collect::<Vec<_>>(), ["2", "2", "3", "3"]);
}

#[test]
fn bad_input_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let missing = dir.path().join("missing.json");
    fails_with(
        &["run", "--instance", p(&missing), "--algo", "ucb", "--budget", "10", "--runs", "1", "--seed", "0", "--out", p(&out)],
        "error:",
    );
    fails_with(
        &["run", "--instance", p(&missing), "--algo", "eps-greedy", "--budget", "10", "--runs", "1", "--seed", "0", "--out", p(&out)],
        "eps-greedy",
    );
    fails_with(
        &["sweep", "--axis", "budget", "--grid", "500,300", "--runs", "1", "--seed", "0", "--out", p(&out)],
        "strictly increasing",
    );
    assert!(!ccb(&[]).status.success());
}
