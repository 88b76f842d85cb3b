//! End-to-end runs of the `homalg` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use homalg::document::parse_structure;
use homalg::report::Report;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/corpus")
        .join(name)
}

fn homalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homalg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_passes_with_exit_zero() {
    let o = homalg(&["check", path(&corpus("hom3dim_ab.json"))]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("check hom-algebra: pass"));
    assert!(out.contains("oracle: agrees"));
}

#[test]
fn check_failure_prints_witness_and_exits_one() {
    let o = homalg(&[
        "check",
        path(&corpus("hom3dim_ab_plain.json")),
        "--no-oracle",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(
        out.contains("hom-associativity at (e1, e1, e3): lhs = 4·e3, rhs = 2·e3"),
        "{out}"
    );
}

#[test]
fn invalid_documents_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"format-version\": 1").unwrap();
    assert_eq!(
        homalg(&["check", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );

    let text = fs::read_to_string(corpus("unital2.json")).unwrap();
    let wrong_version = text.replacen("\"format-version\": 1", "\"format-version\": 99", 1);
    fs::write(&bad, wrong_version).unwrap();
    assert_eq!(
        homalg(&["check", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );

    let o = homalg(&[
        "check",
        path(&corpus("unital2.json")),
        "--kind",
        "no-such-check",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn counit_mode_is_selectable() {
    // Δ(e) = e⊗e, ε(e) = 1, α = 0: (ε⊗α)Δ = α² holds, (ε⊗id)Δ = α does not.
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("zero_alpha.json");
    fs::write(
        &file,
        r#"{"format-version": 1, "kind": "hom-coalgebra", "dimension": 1, "field": "rational",
            "sections": {"delta": [[["1"]]], "alpha": [["0"]], "counit": ["1"]}}"#,
    )
    .unwrap();
    let file = file.to_str().unwrap();
    assert_eq!(
        homalg(&["check", file, "--no-oracle"]).status.code(),
        Some(0)
    );
    let o = homalg(&["check", file, "--no-oracle", "--counit-mode", "eq8"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("counit-left"));
}

#[test]
fn machine_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = homalg(&[
        "check",
        path(&corpus("ex1.json")),
        "--kind",
        "all",
        "--format",
        "machine",
        "--witness-cap",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let text = fs::read_to_string(&out).unwrap();
    let report = Report::from_machine(&text).unwrap();
    assert_eq!(report.to_machine(), text);
    assert!(report.annotations.iter().any(|a| a == "paper-discrepancy"));
    let bialg = report
        .checks
        .iter()
        .find(|c| c.check == "hom-bialgebra")
        .unwrap();
    assert!(bialg.failing.iter().any(|f| f == "delta-alpha"));
    let per_axiom = bialg
        .witnesses
        .iter()
        .filter(|w| w.axiom == "comultiplicativity")
        .count();
    assert!(per_axiom <= 2);
}

#[test]
fn morphism_documents_find_their_structures() {
    let o = homalg(&["check", path(&corpus("unital2_flip.json")), "--no-oracle"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("preserves-unit"));
    let o = homalg(&["check", path(&corpus("cubic_alpha.json"))]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn search_counts_print_last() {
    for (p, count) in [
        ("2", "count: 4 of 4 candidates"),
        ("3", "count: 7 of 9 candidates"),
    ] {
        let o = homalg(&[
            "search",
            "--kind",
            "hom-algebra",
            "--dim",
            "1",
            "--prime",
            p,
        ]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o).lines().last(), Some(count));
    }
}

#[test]
fn search_is_deterministic_and_writes_documents() {
    let args = [
        "search",
        "--kind",
        "hom-leibniz",
        "--dim",
        "2",
        "--prime",
        "2",
        "--format",
        "machine",
    ];
    let first = homalg(&args);
    let second = homalg(&args);
    assert_eq!(first.stdout, second.stdout);
    let out = stdout(&first);
    assert_eq!(
        out.lines().last(),
        Some("{\"count\":508,\"candidates\":4096}")
    );

    let dir = tempfile::tempdir().unwrap();
    let o = homalg(&[
        "search",
        "--kind",
        "hom-algebra",
        "--dim",
        "1",
        "--prime",
        "3",
        "--cap",
        "3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last(), Some("count: 7 of 9 candidates"));
    let written = fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(written, 3);
    let doc = fs::read_to_string(dir.path().join("00000000.json")).unwrap();
    assert_eq!(parse_structure(&doc).unwrap().to_canonical_string(), doc);
}

#[test]
fn search_over_budget_is_refused() {
    let o = homalg(&[
        "search",
        "--kind",
        "hom-algebra",
        "--dim",
        "3",
        "--prime",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn kaplansky_constructions_report_their_checks() {
    let dir = tempfile::tempdir().unwrap();
    let k1 = dir.path().join("k1.json");
    let o = homalg(&[
        "construct",
        "k1",
        path(&corpus("unital2.json")),
        "--out",
        k1.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(
        out.contains("hom-bialgebra: pass, infinitesimal: pass"),
        "{out}"
    );
    let doc = parse_structure(&fs::read_to_string(&k1).unwrap()).unwrap();
    assert_eq!(doc.basis[0], "e0");
    assert_eq!(doc.structure.dim(), 3);

    let k2 = dir.path().join("k2.json");
    let o = homalg(&[
        "construct",
        "k2",
        path(&corpus("unital2.json")),
        "--out",
        k2.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(
        out.contains("hom-bialgebra: pass, infinitesimal: fail(infinitesimal at (e2, e2)"),
        "{out}"
    );
}

#[test]
fn constructions_reproduce_corpus_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cubic_twisted.json");
    let o = homalg(&[
        "construct",
        "twist",
        path(&corpus("cubic.json")),
        "--alpha",
        path(&corpus("cubic_alpha.json")),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        fs::read_to_string(&out).unwrap(),
        fs::read_to_string(corpus("cubic_twisted.json")).unwrap()
    );
}

#[test]
fn ineligible_construction_input_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    // The twisted cubic algebra has lost its unit.
    let o = homalg(&[
        "construct",
        "k1",
        path(&corpus("cubic_twisted.json")),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn corpus_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        homalg(&["corpus", dir.path().to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    for name in ["unital2.json", "unital2_flip.json"] {
        fs::copy(corpus(name), dir.path().join(name)).unwrap();
    }
    let d = dir.path().to_str().unwrap();
    assert_eq!(
        homalg(&["corpus", d]).status.code(),
        Some(2),
        "no expected table yet"
    );
    assert_eq!(homalg(&["corpus", d, "--bless"]).status.code(), Some(0));
    assert_eq!(homalg(&["corpus", d]).status.code(), Some(0));

    let flip = dir.path().join("unital2_flip.json");
    let text = fs::read_to_string(&flip).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["sections"]["map"] = serde_json::json!([["1", "0"], ["0", "1"]]);
    fs::write(&flip, v.to_string()).unwrap();
    let o = homalg(&["corpus", d]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("drift"));
}
