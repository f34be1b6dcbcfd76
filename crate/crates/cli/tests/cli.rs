use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(file)
}

fn hlnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hlnet")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_accepts_the_corpus() {
    let files: Vec<String> = std::fs::read_dir(corpus(""))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e != "steps"))
        .map(|p| p.display().to_string())
        .collect();
    let mut args = vec!["check"];
    args.extend(files.iter().map(String::as_str));
    let out = hlnet(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("ok ")).count(), files.len());
}

#[test]
fn check_reports_location_of_syntax_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.hk");
    std::fs::write(&bad, "module m {\n  places { p : ; }\n}\n").unwrap();
    let out = hlnet(&["check", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.hk:2:"), "{err}");
}

#[test]
fn composed_branch_exposes_enter_and_leave() {
    let out = hlnet(&[
        "compose",
        path(&corpus("entry.hk")),
        path(&corpus("guest_area.hk")),
        path(&corpus("kitchen.hk")),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("left {\n    trans enter;\n  }"), "{text}");
    assert!(text.contains("right {\n    trans leave;\n  }"), "{text}");
}

#[test]
fn simulate_then_validate() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("r.hkrun");
    let out = hlnet(&["simulate", path(&corpus("branch.hksys")), "--seed", "3", "--steps", "25", "-o", path(&run)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = hlnet(&["validate-run", path(&run), path(&corpus("branch.hksys"))]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn scripted_simulation_matches_reference() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("a0.hkrun");
    let sys = corpus("branch.hksys");
    let script = corpus("a0.steps");
    let out = hlnet(&["simulate", path(&sys), "--script", path(&script), "-o", path(&run)]);
    assert!(out.status.success());
    assert!(hlnet(&["validate-run", path(&run), path(&sys)]).status.success());
}

#[test]
fn invalid_run_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("bad.hkrun");
    let text = std::fs::read_to_string(corpus("a0.hkrun")).unwrap().replace("rice_from_t2 -> serve_alice;", "");
    std::fs::write(&run, text).unwrap();
    let out = hlnet(&["validate-run", path(&run), path(&corpus("branch.hksys"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("serve_alice"));
}

#[test]
fn segments_compose_and_validate() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("a0.hkrun");
    let out = hlnet(&[
        "compose-runs",
        path(&corpus("a0_begin.hkrun")),
        path(&corpus("a0_middle.hkrun")),
        path(&corpus("a0_end.hkrun")),
        "-o",
        path(&run),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(hlnet(&["validate-run", path(&run), path(&corpus("branch.hksys"))]).status.success());
    let middle = corpus("a0_middle.hkrun");
    let sys = corpus("branch.hksys");
    assert_eq!(hlnet(&["validate-run", path(&middle), path(&sys)]).status.code(), Some(1));
    assert!(hlnet(&["validate-run", "--segment", path(&middle), path(&sys)]).status.success());
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(hlnet(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hlnet(&["simulate"]).status.code(), Some(2));
    assert_eq!(hlnet(&["reach", "/nonexistent/x.hksys"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let sys = corpus("branch.hksys");
    for args in [
        vec!["simulate", path(&sys), "--seed", "11", "--steps", "40"],
        vec!["export", "--dot", path(&sys)],
        vec!["invariants", path(&corpus("branch_single.hksys"))],
    ] {
        let a = hlnet(&args);
        let b = hlnet(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn reach_reports_counts_and_truncation() {
    let single = corpus("branch_single.hksys");
    for extra in [&[][..], &["--grounded"][..]] {
        let mut args = vec!["reach", path(&single)];
        args.extend_from_slice(extra);
        let text = stdout(&hlnet(&args));
        assert!(text.contains("nodes: 9\nedges: 10\ntruncated: false"), "{text}");
    }
    let text = stdout(&hlnet(&["reach", path(&single), "--max-nodes", "1", "--max-edges", "0"]));
    assert!(text.contains("truncated: true"), "{text}");
}

#[test]
fn instantiate_prints_a_system() {
    let dir = tempfile::tempdir().unwrap();
    let module = dir.path().join("branch.hk");
    let composed = hlnet(&[
        "compose",
        path(&corpus("entry.hk")),
        path(&corpus("guest_area.hk")),
        path(&corpus("kitchen.hk")),
        "-o",
        path(&module),
    ]);
    assert!(composed.status.success());
    let out = hlnet(&["instantiate", path(&module), path(&corpus("s0_pair.hks")), "--sig", path(&corpus("sigma0.hksig"))]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("free_tables: t1, t2;"), "{text}");
}
