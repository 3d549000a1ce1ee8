use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

fn ncspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncspec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn records<'a>(text: &'a str, kind: &str) -> Vec<Vec<&'a str>> {
    text.lines()
        .map(|l| l.split('\t').collect::<Vec<_>>())
        .filter(|f| f[0] == kind)
        .collect()
}

const NON_SELF_ADJOINT: &str = "\
dim 2
generator
  1 0
  0 0
end
dirac
  0 1
  2 0
end
gamma
  1 0
  0 -1
end
j
  1 0
  0 1
end
";

#[test]
fn gallery_triple_passes() {
    let o = ncspec(&["verify-n1", "two-point"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("ncspec-report 1\n"));
    assert!(text.contains("input gallery two-point\n"));
    assert!(text.ends_with("verdict\tpass\n"));
}

#[test]
fn non_self_adjoint_dirac_is_a_failing_entry() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.txt");
    fs::write(&path, NON_SELF_ADJOINT).unwrap();
    let o = ncspec(&["verify-n1", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let failing: Vec<&str> = records(&text, "check")
        .into_iter()
        .filter(|f| f[4] == "fail")
        .map(|f| f[1])
        .collect();
    assert!(failing.contains(&"n1.dirac-self-adjoint"), "{text}");
}

#[test]
fn extend_names_the_failed_precondition() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.txt");
    fs::write(&path, NON_SELF_ADJOINT).unwrap();
    let o = ncspec(&["extend", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("precondition failed (n1.dirac-self-adjoint"), "{text}");
    assert!(!text.contains("n11."));
}

#[test]
fn malformed_row_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.txt");
    fs::write(&path, "dim 2\ngamma\n1 0\n0 -1 7\nend\n").unwrap();
    let o = ncspec(&["verify-n1", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 4: `gamma` row 2 has 3 entries"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn unknown_input_and_variant_are_input_errors() {
    assert_eq!(ncspec(&["verify-n1", "no-such-example"]).status.code(), Some(2));
    assert_eq!(
        ncspec(&["check-mult", "trivial", "trivial", "--variants", "v9"]).status.code(),
        Some(2)
    );
    assert_eq!(ncspec(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ncspec(&["verify-n1", "two-point", "--tol", "-1"]).status.code(), Some(2));
}

#[test]
fn output_flag_writes_the_same_report() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("report.txt");
    let direct = ncspec(&["extend", "two-point"]);
    let o = ncspec(&["extend", "two-point", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn wrong_hodge_breaks_the_hodge_relations() {
    let o = ncspec(&["extend", "two-point", "--hodge", "gamma-tensor-1"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let failing: Vec<&str> = records(&text, "check")
        .into_iter()
        .filter(|f| f[4] == "fail")
        .map(|f| f[1])
        .collect();
    assert!(failing.contains(&"n11.d-hodge"), "{failing:?}");
    assert!(failing.iter().all(|id| id.contains("hodge")), "{failing:?}");
}

#[test]
fn candidate_file_verifies() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("candidate.txt");
    let o = ncspec(&["extend", "two-point-b", "--candidate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = ncspec(&["verify-n11", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn seeded_perturbation_is_reproducible_and_seed_dependent() {
    let args = |seed: &'static str| ["extend", "m2", "--perturbation", "0.1", "--seed", seed];
    let a = ncspec(&args("1"));
    let b = ncspec(&args("1"));
    let c = ncspec(&args("2"));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn check_mult_rows() {
    let o = ncspec(&["check-mult", "two-point", "two-point-b"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows = records(&text, "variant");
    let names: Vec<&str> = rows.iter().map(|r| r[1]).collect();
    assert_eq!(names, ["main", "v1", "v2", "v3", "v4", "v5"]);
    assert_eq!(rows[0][4], "equal");
    assert!(rows[1..].iter().all(|r| r[4] == "unequal"));
    assert!(rows.iter().all(|r| r[5] == "valid"));

    let o = ncspec(&["check-mult", "two-point", "two-point-b", "--variants=main"]);
    let text = stdout(&o);
    let names: Vec<&str> = records(&text, "variant").iter().map(|r| r[1]).collect();
    assert_eq!(names, ["main"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn trivial_pair_flags_degenerate_equality() {
    let o = ncspec(&["check-mult", "trivial", "trivial"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(records(&text, "variant").iter().all(|r| r[4] == "equal"));
    assert!(text.contains("degenerate equality: v1,v2,v3,v4,v5"));
    assert!(records(&text, "check").iter().all(|r| r[4] == "pass"));
}

#[test]
fn list_gallery_names_every_example() {
    let o = ncspec(&["list-gallery"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let names: Vec<&str> = records(&text, "example").iter().map(|r| r[1]).collect();
    assert_eq!(
        names,
        ["trivial", "two-point", "two-point-b", "m2", "two-point-squared", "n11-scalar", "n11-pauli"]
    );
}
