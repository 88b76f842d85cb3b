//! Fixture corpus: a directory of documents plus `expected.json`, the
//! committed verdict table. Running the corpus re-checks every fixture with
//! every applicable suite (and every morphism fixture, before and after
//! twisting) and reports drift against the table.
//!
//! Fixture metadata may carry:
//! - `annotations`: free-text flags, e.g. `"paper-discrepancy"`;
//! - `paper-claims`: suites the source text says pass. A failing verdict on
//!   one of them is reported as `expected-fail, paper-claims-pass`;
//! - for morphisms, `source`/`target` (and optionally `twisted-source` and
//!   `twisted-target`) naming fixtures in the same directory.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::axioms::{applicable_suites, check_morphism, CheckOptions};
use crate::document::{parse, AnyDocument, Document, MorphismDocument};
use crate::report::{check_report, run_checks, OracleConfig, Status, WitnessReport};

pub const EXPECTED_FILE: &str = "expected.json";
pub const PAPER_DISCREPANCY: &str = "paper-discrepancy";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}: {message}")]
    Fixture { path: PathBuf, message: String },
    #[error("corpus directory {0} has no fixtures")]
    Empty(PathBuf),
    #[error("expected table: {0}")]
    Table(String),
}

/// One committed verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Expected {
    pub status: Status,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failing: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<WitnessReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotation: Option<String>,
}

/// `fixture → check → verdict`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ExpectedTable {
    pub format_version: u64,
    pub fixtures: BTreeMap<String, BTreeMap<String, Expected>>,
}

impl ExpectedTable {
    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub fixture: String,
    pub check: String,
    pub actual: Expected,
    pub expected: Option<Expected>,
    /// The source text claims this check passes.
    pub paper_claims_pass: bool,
    pub oracle_agrees: bool,
}

impl Row {
    pub fn matches(&self) -> bool {
        self.oracle_agrees && self.expected.as_ref() == Some(&self.actual)
    }

    /// A failure the source text claims is a pass.
    pub fn is_discrepancy(&self) -> bool {
        self.paper_claims_pass && self.actual.status == Status::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summary {
    pub rows: Vec<Row>,
    /// Table entries with no matching fixture check.
    pub stale: Vec<String>,
}

impl Summary {
    pub fn drift(&self) -> Vec<&Row> {
        self.rows.iter().filter(|r| !r.matches()).collect()
    }

    pub fn clean(&self) -> bool {
        self.drift().is_empty() && self.stale.is_empty()
    }

    pub fn table(&self) -> ExpectedTable {
        let mut t = ExpectedTable {
            format_version: 1,
            ..Default::default()
        };
        for r in &self.rows {
            t.fixtures
                .entry(r.fixture.clone())
                .or_default()
                .insert(r.check.clone(), r.actual.clone());
        }
        t
    }

    pub fn render(&self) -> String {
        let width = self.rows.iter().map(|r| r.fixture.len()).max().unwrap_or(0);
        let cw = self.rows.iter().map(|r| r.check.len()).max().unwrap_or(0);
        let mut out = String::new();
        for r in &self.rows {
            let status = match r.actual.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
            };
            let state = if r.matches() {
                "ok"
            } else if r.expected.is_none() {
                "NEW"
            } else if !r.oracle_agrees {
                "ORACLE"
            } else {
                "DRIFT"
            };
            let mut line = format!("{:width$}  {:cw$}  {status}  {state}", r.fixture, r.check);
            if r.is_discrepancy() {
                line.push_str("  paper-discrepancy: expected-fail, paper-claims-pass");
            } else if r.actual.annotation.is_some() {
                line.push_str("  paper-discrepancy: recorded");
            }
            if !r.actual.failing.is_empty() {
                line.push_str(&format!("  [{}]", r.actual.failing.join(", ")));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        for s in &self.stale {
            out.push_str(&format!("stale expectation: {s}\n"));
        }
        let drift = self.drift().len();
        let discrepancies = self.rows.iter().filter(|r| r.is_discrepancy()).count();
        out.push_str(&format!(
            "{} checks, {} drift, {} stale, {} documented paper discrepancies\n",
            self.rows.len(),
            drift,
            self.stale.len(),
            discrepancies
        ));
        out
    }
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub path: PathBuf,
    pub doc: AnyDocument,
}

fn strings(meta: &serde_json::Map<String, Value>, key: &str) -> Vec<String> {
    meta.get(key)
        .and_then(Value::as_array)
        .map(|a| {
            a.iter()
                .filter_map(|v| v.as_str().map(str::to_string))
                .collect()
        })
        .unwrap_or_default()
}

/// Loads every `*.json` document in `dir` except the expected table, sorted
/// by fixture name (the file stem).
pub fn load(dir: &Path) -> Result<Vec<Fixture>, CorpusError> {
    let io = |e: std::io::Error| CorpusError::Io {
        path: dir.to_path_buf(),
        message: e.to_string(),
    };
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        let is_json = path.extension().is_some_and(|e| e == "json");
        if !is_json || path.file_name().is_some_and(|n| n == EXPECTED_FILE) {
            continue;
        }
        let text = fs::read_to_string(&path).map_err(|e| CorpusError::Io {
            path: path.clone(),
            message: e.to_string(),
        })?;
        let doc = parse(&text).map_err(|e| CorpusError::Fixture {
            path: path.clone(),
            message: e.to_string(),
        })?;
        let name = path
            .file_stem()
            .expect("json file")
            .to_string_lossy()
            .into_owned();
        out.push(Fixture { name, path, doc });
    }
    if out.is_empty() {
        return Err(CorpusError::Empty(dir.to_path_buf()));
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

pub fn load_expected(dir: &Path) -> Result<ExpectedTable, CorpusError> {
    let path = dir.join(EXPECTED_FILE);
    let text = fs::read_to_string(&path).map_err(|e| CorpusError::Io {
        path,
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| CorpusError::Table(e.to_string()))
}

fn expected_of(c: &crate::report::CheckReport, annotation: Option<String>) -> Expected {
    Expected {
        status: c.status,
        failing: c.failing.clone(),
        witnesses: c.witnesses.clone(),
        annotation,
    }
}

fn structure_rows(
    f: &Fixture,
    d: &Document,
    opts: &CheckOptions,
    oracle: OracleConfig,
) -> Result<Vec<Row>, CorpusError> {
    let claims = strings(&d.metadata, "paper-claims");
    let annotated = strings(&d.metadata, "annotations")
        .iter()
        .any(|a| a == PAPER_DISCREPANCY);
    let suites = applicable_suites(d.structure.kind());
    let report = run_checks(d, &suites, opts, Some(oracle)).map_err(|e| CorpusError::Fixture {
        path: f.path.clone(),
        message: e.to_string(),
    })?;
    Ok(report
        .checks
        .iter()
        .map(|c| {
            let paper_claims_pass = claims.contains(&c.check);
            let annotation =
                (annotated && paper_claims_pass).then(|| PAPER_DISCREPANCY.to_string());
            Row {
                fixture: f.name.clone(),
                check: c.check.clone(),
                actual: expected_of(c, annotation),
                expected: None,
                paper_claims_pass,
                oracle_agrees: c.oracle.as_ref().is_none_or(|o| o.agrees),
            }
        })
        .collect())
}

fn morphism_rows(
    f: &Fixture,
    m: &MorphismDocument,
    by_name: &BTreeMap<&str, &Fixture>,
    opts: &CheckOptions,
    oracle: OracleConfig,
) -> Result<Vec<Row>, CorpusError> {
    let err = |message: String| CorpusError::Fixture {
        path: f.path.clone(),
        message,
    };
    let lookup = |key: &str| -> Result<Option<&Document>, CorpusError> {
        let Some(name) = m.metadata.get(key).and_then(Value::as_str) else {
            return Ok(None);
        };
        match by_name.get(name).map(|f| &f.doc) {
            Some(AnyDocument::Structure(d)) => Ok(Some(d)),
            _ => Err(err(format!("{key} {name:?} is not a structure fixture"))),
        }
    };
    let mut rows = Vec::new();
    for (check, src_key, dst_key) in [
        ("morphism", "source", "target"),
        ("morphism-twisted", "twisted-source", "twisted-target"),
    ] {
        let (Some(src), Some(dst)) = (lookup(src_key)?, lookup(dst_key)?) else {
            if check == "morphism" {
                return Err(err("morphism fixture needs source and target".into()));
            }
            continue;
        };
        let v = check_morphism(&m.map, &src.structure, &dst.structure, opts)
            .map_err(|e| err(e.to_string()))?;
        let steps = crate::axioms::Step {
            scope: String::new(),
            leaf: crate::axioms::Leaf::Morphism {
                map: m.map.clone(),
                src: src.structure.clone(),
                dst: dst.structure.clone(),
            },
        };
        let o = crate::oracle::crosscheck(
            std::slice::from_ref(&steps),
            &v,
            opts,
            oracle.samples,
            oracle.seed,
        );
        let c = check_report(&v, &src.basis);
        rows.push(Row {
            fixture: f.name.clone(),
            check: check.to_string(),
            actual: expected_of(&c, None),
            expected: None,
            paper_claims_pass: false,
            oracle_agrees: o.agrees(),
        });
    }
    Ok(rows)
}

/// Evaluates every fixture; `expected` fills in the committed verdicts.
pub fn evaluate(
    fixtures: &[Fixture],
    expected: Option<&ExpectedTable>,
    opts: &CheckOptions,
    oracle: OracleConfig,
) -> Result<Summary, CorpusError> {
    let by_name: BTreeMap<&str, &Fixture> = fixtures.iter().map(|f| (f.name.as_str(), f)).collect();
    let per_fixture: Vec<Result<Vec<Row>, CorpusError>> = fixtures
        .par_iter()
        .map(|f| match &f.doc {
            AnyDocument::Structure(d) => structure_rows(f, d, opts, oracle),
            AnyDocument::Morphism(m) => morphism_rows(f, m, &by_name, opts, oracle),
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_fixture {
        rows.extend(r?);
    }
    let mut stale = Vec::new();
    if let Some(t) = expected {
        for row in rows.iter_mut() {
            row.expected = t
                .fixtures
                .get(&row.fixture)
                .and_then(|c| c.get(&row.check))
                .cloned();
        }
        for (fixture, checks) in &t.fixtures {
            for check in checks.keys() {
                if !rows
                    .iter()
                    .any(|r| &r.fixture == fixture && &r.check == check)
                {
                    stale.push(format!("{fixture}/{check}"));
                }
            }
        }
    }
    Ok(Summary { rows, stale })
}

/// Loads `dir` and its expected table and compares.
pub fn run(dir: &Path, opts: &CheckOptions, oracle: OracleConfig) -> Result<Summary, CorpusError> {
    let fixtures = load(dir)?;
    let expected = load_expected(dir)?;
    evaluate(&fixtures, Some(&expected), opts, oracle)
}

/// Rewrites the expected table from the current verdicts. Refuses when the
/// oracle disagrees with any basis verdict.
pub fn bless(
    dir: &Path,
    opts: &CheckOptions,
    oracle: OracleConfig,
) -> Result<Summary, CorpusError> {
    let fixtures = load(dir)?;
    let mut summary = evaluate(&fixtures, None, opts, oracle)?;
    if let Some(r) = summary.rows.iter().find(|r| !r.oracle_agrees) {
        return Err(CorpusError::Table(format!(
            "oracle disagrees on {}/{}; not writing",
            r.fixture, r.check
        )));
    }
    let path = dir.join(EXPECTED_FILE);
    fs::write(&path, summary.table().to_text()).map_err(|e| CorpusError::Io {
        path,
        message: e.to_string(),
    })?;
    for r in summary.rows.iter_mut() {
        r.expected = Some(r.actual.clone());
    }
    Ok(summary)
}

/// The corpus bundled with the crate.
pub fn bundled_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}
