use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn nfold(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nfold")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn read_json(path: &std::path::Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn path_str(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_shipped_objects() {
    let ok = nfold(&["validate", path_str(&fixture("xxx_q_x3.json"))]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    assert!(stdout(&ok).contains("valid 3-fold"));
    let bad = nfold(&["validate", path_str(&fixture("invalid_q_x3.json"))]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn input_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    assert_eq!(code(&nfold(&["validate", path_str(&garbage)])), 3);
    assert_eq!(code(&nfold(&["validate", path_str(&dir.path().join("missing.json"))])), 3);
    // ring file disagrees with the ring inside the document
    let out = nfold(&["--ring", path_str(&fixture("ring_q_x2.json")), "validate", path_str(&fixture("xxx_q_x3.json"))]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn unsupported_ring_exits_4() {
    // stable Hom is only computed over commutative rings
    let dir = tempfile::tempdir().unwrap();
    let x = dir.path().join("theta.json");
    let ring = fixture("ring_f4_frob_x2.json");
    let out = nfold(&["--ring", path_str(&ring), "theta", "--n", "2", "--json", path_str(&x)]);
    assert_eq!(code(&out), 0);
    let out = nfold(&["stable-hom", path_str(&x), path_str(&x)]);
    assert_eq!(code(&out), 4, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn homotopy_and_stable_hom_of_the_two_fold_object() {
    let out = nfold(&["homotopy-check", path_str(&fixture("identity_xx_q_x2.json"))]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("not null-homotopic"));
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("hom.json");
    let x = fixture("xx_q_x2.json");
    let out = nfold(&["stable-hom", path_str(&x), path_str(&x), "--json", path_str(&rep)]);
    assert_eq!(code(&out), 0);
    assert_eq!(read_json(&rep)["k_dimension"], Value::from(1));
    let out = nfold(&["stably-zero", path_str(&x)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("not null-homotopic"));
}

#[test]
fn cokernel_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let (c, x, d) = (dir.path().join("c.json"), dir.path().join("x.json"), dir.path().join("d.json"));
    let obj = fixture("xxx_q_x3.json");
    assert_eq!(code(&nfold(&["cok0", path_str(&obj), "--json", path_str(&c)])), 0);
    assert_eq!(read_json(&c), read_json(&fixture("cok0_xxx_q_x3.json")));
    assert_eq!(code(&nfold(&["lift", path_str(&c), "--json", path_str(&x)])), 0);
    assert_eq!(code(&nfold(&["validate", path_str(&x)])), 0);
    assert_eq!(code(&nfold(&["cok0", path_str(&x), "--json", path_str(&d)])), 0);
    let out = nfold(&["chain-iso", path_str(&c), path_str(&d)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("isomorphic"));
}

#[test]
fn gamma_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let (g, x) = (dir.path().join("g.json"), dir.path().join("x.json"));
    let obj = fixture("xxx_q_x3.json");
    assert_eq!(code(&nfold(&["phi", path_str(&obj), "--json", path_str(&g)])), 0);
    assert_eq!(code(&nfold(&["psi", path_str(&g), "--json", path_str(&x)])), 0);
    assert_eq!(read_json(&x)["maps"], read_json(&obj)["maps"]);
}

#[test]
fn functors_compose_on_files() {
    let dir = tempfile::tempdir().unwrap();
    let (f, p) = (dir.path().join("face.json"), dir.path().join("proj.json"));
    let obj = fixture("xx_q_x2.json");
    let out = nfold(&["functor", "face", path_str(&obj), "--index", "1", "--json", path_str(&f)]);
    assert_eq!(code(&out), 0);
    assert_eq!(read_json(&f)["n"], Value::from(3));
    let out = nfold(&["functor", "degeneracy", path_str(&f), "--index", "1", "--json", path_str(&p)]);
    assert_eq!(code(&out), 0);
    assert_eq!(read_json(&p)["maps"], read_json(&obj)["maps"]);
    let out = nfold(&["functor", "shift", path_str(&obj), "--power", "-1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&nfold(&["functor", "nonsense", path_str(&obj)])), 3);
}

#[test]
fn recollement_on_shipped_objects() {
    let out = nfold(&["recollement", "2", "1", path_str(&fixture("xx_q_x2.json"))]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("adjunction triangles hold"));
    let out = nfold(&["recollement", "3", "2", path_str(&fixture("xxx_q_x3.json"))]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&nfold(&["recollement", "3", "3", path_str(&fixture("xxx_q_x3.json"))])), 3);
    let out = nfold(&["--ring", path_str(&fixture("ring_f5_x2x1.json")), "recollement", "4", "2"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn laws_are_deterministic_and_pass() {
    let dir = tempfile::tempdir().unwrap();
    let ring = fixture("ring_q_x3.json");
    let mut reports = Vec::new();
    for i in 0..2 {
        let out_path = dir.path().join(format!("laws{i}.json"));
        let out = nfold(&[
            "--ring", path_str(&ring), "--n", "3", "--seed", "42", "--suite", "lemmas", "--cases", "12", "laws", "--json",
            path_str(&out_path),
        ]);
        assert_eq!(code(&out), 0, "{}", stdout(&out));
        reports.push(std::fs::read(&out_path).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    assert_eq!(code(&nfold(&["--ring", path_str(&ring), "--suite", "bogus", "laws"])), 3);
}
