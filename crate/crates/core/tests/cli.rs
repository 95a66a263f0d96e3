use std::path::Path;
use std::process::Command;

use median_fraisse::cli::run;
use median_fraisse::io::{self, Document};
use median_fraisse::median::{superextension, MedianAlgebra};
use serde_json::Value;

fn mf(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let argv = std::iter::once("median-fraisse").chain(args.iter().copied());
    let code = run(argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn report(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.push("--json-report");
    let (code, text) = mf(&full);
    (code, serde_json::from_str(text.trim()).unwrap())
}

fn write_algebra(dir: &Path, name: &str, alg: &MedianAlgebra) -> String {
    let path = dir.join(name);
    std::fs::write(&path, io::algebra_to_json(alg).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn validate() {
    let dir = tempfile::tempdir().unwrap();
    let sq = write_algebra(dir.path(), "sq.json", &MedianAlgebra::cube(2));
    assert_eq!(mf(&["validate", &sq]).0, 0);

    let bad = path(dir.path(), "bad.json");
    std::fs::write(
        &bad,
        r#"{"dim": 3, "points": ["000", "011", "101", "110"], "schema_version": 1}"#,
    )
    .unwrap();
    let (code, rep) = report(&["validate", &bad]);
    assert_eq!(code, 2);
    assert_eq!(rep["error"], "NotMedianClosed");

    let malformed = path(dir.path(), "malformed.json");
    std::fs::write(&malformed, "{\"dim\": 2, ").unwrap();
    let (code, rep) = report(&["validate", &malformed]);
    assert_eq!((code, rep["error"].as_str().unwrap()), (2, "ParseError"));

    let future = path(dir.path(), "future.json");
    std::fs::write(
        &future,
        r#"{"dim": 0, "points": [""], "schema_version": 2}"#,
    )
    .unwrap();
    assert_eq!(report(&["validate", &future]).1["error"], "SchemaVersion");
}

#[test]
fn lambda() {
    assert_eq!(mf(&["lambda", "3"]), (0, "4\n".into()));
    assert_eq!(mf(&["lambda", "2"]), (0, "2\n".into()));
    assert_eq!(mf(&["lambda", "4"]), (0, "12\n".into()));
    let (code, rep) = report(&["lambda", "9"]);
    assert_eq!(
        (code, rep["error"].as_str().unwrap()),
        (2, "GroundSizeTooLarge")
    );

    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "l3.json");
    assert_eq!(mf(&["lambda", "3", "--out", &out]).0, 0);
    match io::read_document(Path::new(&out)).unwrap() {
        Document::Lambda(alg, systems) => {
            assert_eq!(alg, superextension(3).unwrap().0);
            assert_eq!(systems.len(), 4);
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(mf(&["validate", &out]).0, 0);
}

#[test]
fn fraisse_writes_sequence_and_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let one = path(dir.path(), "one");
    assert_eq!(mf(&["fraisse", "--levels", "1", "--out", &one]).0, 0);
    let seq = io::read_sequence(&dir.path().join("one/sequence.json")).unwrap();
    assert_eq!(seq.len(), 1);
    assert_eq!(seq.stages()[0].len(), 1);

    let two = path(dir.path(), "two");
    assert_eq!(
        mf(&["fraisse", "--levels", "2", "--bound", "2", "--out", &two]).0,
        0
    );
    let seq = io::read_sequence(&dir.path().join("two/sequence.json")).unwrap();
    let cert = seq.certificate(1).unwrap();
    // the tuple whose N is the 2-point algebra (catalog class 1)
    assert!(cert.entries.iter().any(|e| e.n == 1));
    assert_eq!(
        mf(&["validate", &path(dir.path(), "two/sequence.json")]).0,
        0
    );

    let (code, rep) = report(&[
        "fraisse",
        "--levels",
        "2",
        "--cap",
        "1",
        "--out",
        &path(dir.path(), "c"),
    ]);
    assert_eq!(code, 3);
    assert!(rep["message"].as_str().unwrap().contains("stage 1"));
}

#[test]
fn fraisse_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a", "b"] {
        let out = path(dir.path(), name);
        assert_eq!(
            mf(&["fraisse", "--levels", "3", "--bound", "3", "--out", &out]).0,
            0
        );
    }
    for file in [io::SEQUENCE_FILE, io::CERTIFICATES_FILE] {
        let a = std::fs::read(dir.path().join("a").join(file)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "s");
    mf(&["fraisse", "--levels", "3", "--bound", "3", "--out", &out]);
    let seq = path(dir.path(), "s/sequence.json");

    let (code, rep) = report(&["check", "m2", &seq, "--stage", "1", "--a", "0", "--a", "2"]);
    assert_eq!((code, rep["error"].as_str().unwrap()), (2, "NotLinked"));
    let (code, rep) = report(&[
        "check", "m1", &seq, "--stage", "1", "--a", "0", "--b", "1,2",
    ]);
    assert_eq!((code, rep["stage"].as_u64().unwrap()), (0, 1));
    let (code, rep) = report(&["check", "baf", &seq, &seq]);
    assert_eq!((code, rep["depth"].as_u64().unwrap()), (0, 2));
    // a chain end never holds two disjoint halfspaces
    let (code, rep) = report(&["check", "m3", &seq, "--stage", "1", "--a", "0"]);
    assert_eq!((code, rep["status"].as_str().unwrap()), (1, "not_found"));

    let f = path(dir.path(), "f.json");
    std::fs::write(&f, r#"{"source": {"dim": 1, "points": ["0", "1"]}, "target": {"dim": 0, "points": [""]}, "map": [0, 0], "schema_version": 1}"#).unwrap();
    let (code, rep) = report(&["check", "ext", &seq, "--stage", "0", "--morphism", &f]);
    assert_eq!((code, rep["stage"].as_u64().unwrap()), (0, 1));
}

#[test]
fn export_dot() {
    let dir = tempfile::tempdir().unwrap();
    let two = write_algebra(dir.path(), "two.json", &MedianAlgebra::chain(2));
    let (code, dot) = mf(&["export", &two]);
    assert_eq!(code, 0);
    assert_eq!(dot.matches("--").count(), 1);

    let sq = write_algebra(dir.path(), "sq.json", &MedianAlgebra::cube(2));
    let dot = mf(&["export", &sq, "--format", "dot"]).1;
    let edges: Vec<&str> = dot
        .lines()
        .filter(|l| l.contains("--"))
        .map(str::trim)
        .collect();
    assert_eq!(edges, ["0 -- 1;", "0 -- 2;", "1 -- 3;", "2 -- 3;"]);

    // λ3 is a star around ξ3, the system of pairs
    let (l3, systems) = superextension(3).unwrap();
    let center = systems
        .iter()
        .position(|s| s.members() == vec![0b011, 0b101, 0b110, 0b111])
        .unwrap();
    let l3_path = write_algebra(dir.path(), "l3.json", &l3);
    let dot = mf(&["export", &l3_path]).1;
    let edges: Vec<(usize, usize)> = dot
        .lines()
        .filter_map(|l| l.trim().strip_suffix(';')?.split_once(" -- "))
        .map(|(a, b)| (a.parse().unwrap(), b.parse().unwrap()))
        .collect();
    assert_eq!(edges.len(), 3);
    assert!(edges.iter().all(|&(a, b)| a == center || b == center));
}

#[test]
fn dot_edges_are_hamming_neighbours_in_canonical_form() {
    let catalog = median_fraisse::fraisse::Catalog::up_to(7).unwrap();
    for k in catalog.algebras() {
        let by_interval = k.median_graph_edges();
        let mut by_hamming = Vec::new();
        for a in 0..k.len() {
            for b in a + 1..k.len() {
                if k.point(a).xor(k.point(b)).count_ones() == 1 {
                    by_hamming.push((a, b));
                }
            }
        }
        assert_eq!(by_interval, by_hamming);
    }
}

#[test]
fn iso() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_algebra(dir.path(), "a.json", &MedianAlgebra::cube(2));
    let b = write_algebra(dir.path(), "b.json", &MedianAlgebra::chain(4));
    assert_eq!(mf(&["iso", &a, &a]).0, 0);
    assert_eq!(mf(&["iso", &a, &b]).0, 1);
}

#[test]
fn binary_exit_codes_and_cap_variable() {
    let bin = env!("CARGO_BIN_EXE_median-fraisse");
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(bin)
        .args(["fraisse", "--levels", "2", "--bound", "2", "--out"])
        .arg(dir.path())
        .env("MEDIAN_FRAISSE_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(3));
    let status = Command::new(bin).args(["lambda", "3"]).output().unwrap();
    assert_eq!(status.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&status.stdout).trim(), "4");
    let status = Command::new(bin)
        .args(["no-such-command"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
}
