use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use torus_morse::deformation::Report;

fn field(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fields")
        .join(name);
    p.to_str().unwrap().to_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torus-morse"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn analyze_egg_carton() {
    let o = run(&["analyze", "-f", &field("eggcarton.toml")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = Report::from_json(&stdout(&o)).unwrap();
    assert_eq!(report.classification.name(), "F0");
    assert_eq!(report.verification.as_ref().unwrap().len(), 7);
    assert!(report.passed());
}

#[test]
fn shipped_fields_never_fail_verification() {
    for name in ["tilted.toml", "doubled_y.toml", "shifted.json"] {
        let o = run(&["analyze", "-f", &field(name)]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{name}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let report = Report::from_json(&stdout(&o)).unwrap();
        assert_eq!(report.classification.name(), "F1", "{name}");
        assert_eq!(report.verification.as_ref().unwrap().len(), 10, "{name}");
    }
}

#[test]
fn reports_are_deterministic_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let json = json.to_str().unwrap();
    let args = ["analyze", "-f", &field("tilted.toml"), "--json", json];
    assert_eq!(run(&args).status.code(), Some(0));
    let first = fs::read_to_string(json).unwrap();
    assert_eq!(run(&args).status.code(), Some(0));
    assert_eq!(fs::read_to_string(json).unwrap(), first);

    let o = run(&["verify", "--from-report", json]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), first);
}

#[test]
fn groups_is_symbolic() {
    let o = run(&["groups", "-f", &field("eggcarton.toml")]);
    assert_eq!(o.status.code(), Some(0));
    let report = Report::from_json(&stdout(&o)).unwrap();
    assert!(report.verification.is_none());
    assert_eq!(report.nodes["S"], "wrCP(Atom(S:D1)*Atom(S:D2);1,2)");
}

#[test]
fn reeb_dot_of_tilted_torus() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("reeb.dot");
    let o = run(&["reeb", "-f", &field("tilted.toml"), "--dot", dot.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let dot = fs::read_to_string(dot).unwrap();
    assert!(dot.starts_with("graph reeb {"));
    assert_eq!(dot.matches("[label=").count(), 4);
    assert_eq!(dot.matches("style=bold").count(), 2);
    assert_eq!(dot.matches(" -- ").count(), 4);
}

#[test]
fn given_symmetry_and_cyclic_index_are_noted() {
    let o = run(&[
        "groups",
        "-f",
        &field("doubled_x.toml"),
        "--symmetry",
        "1/2,0",
        "--cyclic-index",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = Report::from_json(&stdout(&o)).unwrap();
    assert_eq!(report.notes.len(), 2);
    assert!(report.notes[1].contains("cyclic index 3"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let constant = dir.path().join("constant.toml");
    fs::write(&constant, "[[terms]]\na = 1.0\np = 0\nq = 0\n").unwrap();

    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["analyze"]).status.code(), Some(1));
    assert_eq!(run(&["analyze", "-f", "/nonexistent.toml"]).status.code(), Some(1));
    assert_eq!(
        run(&["analyze", "-f", constant.to_str().unwrap()]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["analyze", "-f", &field("tilted.toml"), "--grid", "4"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["analyze", "-f", &field("tilted.toml"), "--symmetry", "1/2"])
            .status
            .code(),
        Some(1)
    );
    // trees have no cyclic index to override
    let o = run(&["analyze", "-f", &field("eggcarton.toml"), "--cyclic-index", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty() && o.stdout.is_empty());
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn wreath_batch() {
    let dir = tempfile::tempdir().unwrap();
    let batch = dir.path().join("batch.txt");
    fs::write(
        &batch,
        "# products in the cyclic wreath product\n\
         mul | wrC(Z_2;2) | ((1,0),1) | ((0,1),1)\n\
         inv | wrZ(Z_3;2) | ((1,2),5)\n\
         central | wrC(Z_2;2) | ((1,1),0)\n",
    )
    .unwrap();
    let o = run(&["wreath", "--batch", batch.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let lines: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "((0,0),0)");
    assert_eq!(lines[2], "true");
}
