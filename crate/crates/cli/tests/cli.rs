use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pglca")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn build_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ca.txt");
    let starters = data("k30_starters.txt");
    let b = run(&["build", "--g", "3", "--k", "30", "--starters", starters.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(b.status.success(), "{}", String::from_utf8_lossy(&b.stderr));
    let v = run(&["verify", "--in", out.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).contains("4-CA(363,30,3): VALID"), "{}", stdout(&v));
}

#[test]
fn verify_reports_invalid_array() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ca.txt");
    let b = run(&["build", "--g", "3", "--u", "0011*0*10", "--out", out.to_str().unwrap()]);
    assert!(b.status.success());
    let v = run(&["verify", "--in", out.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(1));
    assert!(stdout(&v).contains("INVALID"));
}

#[test]
fn starter_check_lists_deficient_classes() {
    let starters = data("k21_starters.txt");
    let o = run(&["starter-check", "--g", "3", "--starters", starters.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("d[1,2,2] | 10"), "{text}");
    assert!(text.contains("9 of 285 classes deficient"), "{text}");

    let ok = run(&["starter-check", "--g", "3", "--starters", data("k30_starters.txt").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn coverage_of_single_vector() {
    let o = run(&["coverage", "--g", "3", "--u", "100*0***1001*11*"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("n=99"), "{}", stdout(&o));
}

#[test]
fn postopt_keeps_a_covering_array() {
    let dir = tempfile::tempdir().unwrap();
    let ca = dir.path().join("ca.txt");
    let small = dir.path().join("small.txt");
    let starters = data("k21_starters.txt");
    let c1 = data("k21_c1.txt");
    let b = run(&[
        "build",
        "--g",
        "3",
        "--starters",
        starters.to_str().unwrap(),
        "--c1",
        c1.to_str().unwrap(),
        "--out",
        ca.to_str().unwrap(),
    ]);
    assert!(b.status.success(), "{}", String::from_utf8_lossy(&b.stderr));
    let p = run(&["postopt", "--in", ca.to_str().unwrap(), "--out", small.to_str().unwrap(), "--budget", "50", "--seed", "3"]);
    assert!(p.status.success(), "{}", String::from_utf8_lossy(&p.stderr));
    let v = run(&["verify", "--in", small.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify"]).status.code(), Some(2));
    assert_eq!(run(&["starter-check", "--g", "3", "--u", "01x*"]).status.code(), Some(2));
    assert_eq!(run(&["classes", "--k", "3"]).status.code(), Some(2));
    assert_eq!(run(&["search", "--g", "3", "--k", "8"]).status.code(), Some(2));
}
