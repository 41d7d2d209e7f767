use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use princ::io::{read_lattice, read_poset};
use princ::order_iso;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn template_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/templates")
}

fn princ(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_princ"))
        .args(args)
        .env_remove("PRINC_TEMPLATES")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Node and edge counts of a DOT file written by `export-dot`.
fn dot_shape(dot: &str) -> (usize, usize) {
    let nodes = dot
        .lines()
        .filter(|l| l.contains("rank=same"))
        .map(|l| l.matches("\"").count() / 2)
        .sum();
    (nodes, dot.matches("->").count())
}

#[test]
fn build_b2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k.json");
    let o = princ(&["build", "--poset", p(&fixture("b2.json")), "--out", p(&out)]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("|K| = 8\n"));
    assert!(text.contains("length = 3\n"));
    assert!(text.contains("Cp instances = 2\n"));
    let k = read_lattice(&out).unwrap();
    assert_eq!(k.len(), 8);
    assert!(fs::read_to_string(&out).unwrap().contains("\"anchors\""));
}

#[test]
fn build_four_chain() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k.json");
    let o = princ(&[
        "build",
        "--poset",
        p(&fixture("chain4.json")),
        "--out",
        p(&out),
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("|K| = 13\n"));
    assert!(text.contains("length = 5\n"));
    assert!(text.contains("S instances = 1\n"));
}

#[test]
fn verify_exit_codes() {
    let ok = princ(&["verify", "--poset", p(&fixture("vee.json"))]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).ends_with("Princ K ≅ P\n"));

    let bad_input = princ(&["verify", "--poset", p(&fixture("unbounded.json"))]);
    assert_eq!(bad_input.status.code(), Some(2));

    let missing = princ(&["verify", "--poset", "/nonexistent/poset.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn corrupted_templates_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(template_dir()).unwrap() {
        let entry = entry.unwrap();
        fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    let s = dir.path().join("S.json");
    let text = fs::read_to_string(&s)
        .unwrap()
        .replace("    [\"d\", \"f\"],\n", "");
    fs::write(&s, text).unwrap();

    let o = Command::new(env!("CARGO_BIN_EXE_princ"))
        .args(["verify", "--poset", p(&fixture("chain4.json"))])
        .env("PRINC_TEMPLATES", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("template stage"));

    let o = princ(&[
        "verify",
        "--poset",
        p(&fixture("chain4.json")),
        "--templates",
        p(&template_dir()),
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn fuzz_rejects_empty_runs() {
    let o = princ(&["fuzz", "--max-size", "0", "--samples", "3", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fuzz_small_run() {
    let o = princ(&[
        "fuzz",
        "--max-size",
        "6",
        "--samples",
        "10",
        "--seed",
        "5",
        "--jobs",
        "2",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(
        text.lines().filter(|l| l.starts_with("sample ")).count(),
        10
    );
    assert!(text.ends_with("RESULT pass=10 fail=0\n"));
}

#[test]
fn congruences_of_small_lattices() {
    let c3 = princ(&["con", "--lattice", p(&fixture("c3.json"))]);
    assert_eq!(
        stdout(&c3).lines().filter(|l| l.starts_with("  [")).count(),
        4
    );
    let m3 = princ(&["con", "--lattice", p(&fixture("m3.json"))]);
    assert_eq!(
        stdout(&m3),
        "[\n  [[\"i\"], [\"o\"], [\"x\"], [\"y\"], [\"z\"]],\n  [[\"i\", \"o\", \"x\", \"y\", \"z\"]]\n]\n"
    );
}

#[test]
fn congruences_of_k_b2() {
    let dir = tempfile::tempdir().unwrap();
    let k = dir.path().join("k.json");
    assert!(
        princ(&["build", "--poset", p(&fixture("b2.json")), "--out", p(&k)])
            .status
            .success()
    );
    let con = princ(&["con", "--lattice", p(&k)]);
    assert_eq!(
        stdout(&con)
            .lines()
            .filter(|l| l.starts_with("  ["))
            .count(),
        5
    );
    let princ_out = princ(&["princ", "--lattice", p(&k)]);
    assert_eq!(stdout(&princ_out).lines().count(), 4);
}

#[test]
fn principal_congruences_of_c3() {
    let o = princ(&["princ", "--lattice", p(&fixture("c3.json"))]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().all(|l| l.starts_with("con(")));
    let m3 = princ(&["princ", "--lattice", p(&fixture("m3.json"))]);
    assert_eq!(stdout(&m3).lines().count(), 2);
}

#[test]
fn valuations() {
    let o = princ(&["valuation", "--lattice", p(&fixture("c3.json"))]);
    let text = stdout(&o);
    let mut values: Vec<&str> = text.lines().map(|l| l.split(' ').nth(2).unwrap()).collect();
    values.sort();
    assert_eq!(values, ["0", "1", "1", "1"]);
}

#[test]
fn princ_order_round_trips_to_p() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["b2.json", "chain4.json", "vee.json"] {
        let k = dir.path().join("k.json");
        let order = dir.path().join("princ.json");
        assert!(
            princ(&["build", "--poset", p(&fixture(name)), "--out", p(&k)])
                .status
                .success()
        );
        assert!(princ(&["princ", "--lattice", p(&k), "--out", p(&order)])
            .status
            .success());
        let got = read_poset(&order).unwrap();
        let want = read_poset(&fixture(name)).unwrap();
        assert!(order_iso(&got, &want).is_some(), "{name}");
    }
}

#[test]
fn dot_export_shapes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.dot");
    let cases = [
        (fixture("chain2.json"), (2, 1)),
        (fixture("m3.json"), (5, 6)),
        (template_dir().join("S.json"), (11, 15)),
    ];
    for (lattice, shape) in cases {
        let o = princ(&["export-dot", "--lattice", p(&lattice), "--out", p(&out)]);
        assert!(o.status.success());
        assert_eq!(dot_shape(&fs::read_to_string(&out).unwrap()), shape);
    }
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| -> Vec<Vec<u8>> {
        let k = dir.path().join(format!("k{tag}.json"));
        let dot = dir.path().join(format!("k{tag}.dot"));
        let order = dir.path().join(format!("p{tag}.json"));
        let mut outs = vec![
            princ(&[
                "build",
                "--poset",
                p(&fixture("chain4.json")),
                "--out",
                p(&k),
            ])
            .stdout,
            princ(&["verify", "--poset", p(&fixture("vee.json"))]).stdout,
            princ(&["fuzz", "--max-size", "7", "--samples", "12", "--seed", "9"]).stdout,
            princ(&["con", "--lattice", p(&k)]).stdout,
            princ(&["princ", "--lattice", p(&k), "--out", p(&order)]).stdout,
            princ(&["valuation", "--lattice", p(&k)]).stdout,
            princ(&["export-dot", "--lattice", p(&k), "--out", p(&dot)]).stdout,
        ];
        for f in [&k, &dot, &order] {
            outs.push(fs::read(f).unwrap());
        }
        outs
    };
    assert_eq!(run("a"), run("b"));
}
