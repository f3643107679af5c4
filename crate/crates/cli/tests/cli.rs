use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const M1: &str = r#"{"cardinalities":[2,2],"valuations":[[1.0,0.0,0.0,1.0],[0.0,1.0,1.0,0.0]]}"#;

fn attrhide(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_attrhide"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn solve_methods_on_m1() {
    let dir = TempDir::new().unwrap();
    let m1 = write(&dir, "m1.json", M1);

    let tree = attrhide(&["solve", &m1, "--method", "tree"]);
    assert!(tree.status.success());
    assert!(stdout(&tree).contains("gain: 2\n"));
    assert!(stdout(&tree).contains(r#"scheme: ["??"]"#));

    let ub = attrhide(&["solve", &m1, "--method", "ub"]);
    assert!(ub.status.success());
    assert!(stdout(&ub).contains("gain: 3\n"));
    assert!(stdout(&ub).contains("variables: 5\n"));

    let exact = attrhide(&["solve", &m1, "--method", "exact"]);
    assert!(stdout(&exact).contains("gain: 2\n"));
    assert!(stdout(&exact).contains("Proven"));

    let matching = attrhide(&["solve", &m1, "--method", "match"]);
    assert!(stdout(&matching).contains("gain: 2\n"));
}

#[test]
fn lp_dump_is_written() {
    let dir = TempDir::new().unwrap();
    let m1 = write(&dir, "m1.json", M1);
    let lp = dir.path().join("m1.lp");
    let out = attrhide(&["solve", &m1, "--method", "ub", "--lp-dump", lp.to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(lp).unwrap();
    assert!(text.contains(" c7: z3 + z4 <= 1\n"));
    assert!(text.ends_with("End\n"));
}

#[test]
fn malformed_input_exits_with_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", &M1[..30]);
    let out = attrhide(&["solve", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read"));

    let missing = dir.path().join("missing.json");
    assert_eq!(attrhide(&["solve", missing.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(attrhide(&["solve"]).status.code(), Some(2));
    assert_eq!(attrhide(&["solve", &bad, "--method", "simplex"]).status.code(), Some(2));
}

#[test]
fn matching_rejects_non_binary() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "t.json", r#"{"cardinalities":[3],"valuations":[[1,0,0],[0,1,0]]}"#);
    let out = attrhide(&["solve", &inst, "--method", "match"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("binary"));
}

#[test]
fn experiment_csv_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = attrhide(&[
            "experiment", "--setup", "3,2,3", "--setup", "2,3,2", "--trials", "20", "--seed", "9", "--csv",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        assert!(stdout(&out).contains("Setup"));
        fs::read(path).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().nth(2).unwrap().contains(",NA,"));
}

#[test]
fn generators_produce_loadable_instances() {
    let dir = TempDir::new().unwrap();
    let random = dir.path().join("r.json");
    assert!(attrhide(&["gen-random", "--k", "3", "--bidders", "3", "--seed", "4", "-o", random.to_str().unwrap()])
        .status
        .success());
    assert!(attrhide(&["solve", random.to_str().unwrap()]).status.success());

    let gap = attrhide(&["gen-gap", "--k", "3"]);
    assert!(gap.status.success());
    let gap_path = write(&dir, "gap.json", &stdout(&gap));
    let exact = attrhide(&["solve", &gap_path, "--method", "exact"]);
    assert!(stdout(&exact).contains("revenue: 4\n"));
    assert_eq!(attrhide(&["gen-gap", "--k", "1"]).status.code(), Some(1));
}

#[test]
fn reduction_generation_and_verification() {
    let dir = TempDir::new().unwrap();
    let formula = write(&dir, "f.cnf", "c single clause\np cnf 3 1\n1 2 3 0\n");
    let out_path = dir.path().join("red.json");
    let out = attrhide(&["gen-sat", &formula, "-o", out_path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("13 attributes, 20 bidders, 9 helpful bundles"));
    assert!(Path::new(&out_path).exists());

    let verify = attrhide(&["verify-reduction", &formula, "--samples", "1000"]);
    assert!(verify.status.success());
    assert!(stdout(&verify).ends_with("ok\n"));

    let bad = write(&dir, "bad.cnf", "p cnf 3 1\n1 2 -3 0\n");
    assert_eq!(attrhide(&["verify-reduction", &bad]).status.code(), Some(2));
    assert_eq!(
        attrhide(&["gen-sat", &formula, "--epsilon", "2"]).status.code(),
        Some(1)
    );
}
