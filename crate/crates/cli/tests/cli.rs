use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_keyregion"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn outer_reports_one_bit_for_triple_copy() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["outer", path(&fixture("pmf/triple_copy.json"))]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("outer box: (1.000000, 0.000000, 0.000000)"), "{}", stdout(&o));
    let csv = std::fs::read_to_string(dir.path().join("outer.csv")).unwrap();
    assert_eq!(csv, "b0,b1,b2\n1,0,0\n");
    assert!(dir.path().join("outer.record.json").exists());
}

#[test]
fn independent_source_has_only_the_origin() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["region", path(&fixture("pmf/independent.json"))]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("corners: 1\n"));
    let csv = std::fs::read_to_string(dir.path().join("frontier.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    let values: Vec<f64> = rows[0].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(values, [0.0, 0.0, 0.0]);
}

#[test]
fn corollary_labels() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["corollary", path(&fixture("pmf/cor1.json"))]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("Corollary 1 "), "{}", stdout(&o));
    assert!(stdout(&o).contains("capacity: 0 <= R0 <= 0,"));

    let o = run(dir.path(), &["corollary", path(&fixture("pmf/cor5.json"))]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("achievable (inner bound only)"), "{}", stdout(&o));

    let o = run(dir.path(), &["corollary", path(&fixture("pmf/all_zero_a.json"))]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("all rates zero"), "{}", stdout(&o));
}

#[test]
fn trivial_simulation_is_error_free() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["simulate", path(&fixture("sim_trivial.json"))]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("n,err_common"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(row[0], 8.0);
    assert!(row[1..].iter().all(|&v| v == 0.0), "{row:?}");
}

#[test]
fn generic_source_passes_the_check() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["check", path(&fixture("pmf/generic.json"))]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("contained: "));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let code = |args: &[&str]| run(&out, args).status.code().unwrap();

    assert_eq!(code(&["outer", path(&dir.path().join("missing.json"))]), 2);
    assert_eq!(code(&["outer", path(&fixture("pmf/malformed.json"))]), 2);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"alphabet_sizes":[2,2,2,2],"probs":[0.5,0.5,0.5,0,0,0,0,0,0,0,0,0,0,0,0,0]}"#)
        .unwrap();
    assert_eq!(code(&["outer", path(&bad)]), 3);

    assert_eq!(code(&["corollary", path(&fixture("pmf/generic.json"))]), 4);

    let corners = dir.path().join("corners.csv");
    std::fs::write(&corners, "r0,r1,r2\n2,0,0\n").unwrap();
    let pmf = fixture("pmf/triple_copy.json");
    let args = ["check", path(&pmf), "--frontier", path(&corners)];
    let o = run(&out, &args);
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).starts_with("violation: "));
}
