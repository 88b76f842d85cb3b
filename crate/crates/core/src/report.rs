//! Check reports: what ran, what failed, the witnesses, and whether the
//! random-vector oracle agreed. Rendered as JSON (machine) or text (human).

use serde::{Deserialize, Serialize};

use crate::axioms::{check, plan, CheckError, CheckOptions, Suite, Verdict, Witness};
use crate::document::{default_basis, Document};
use crate::linalg::decode_tuple;
use crate::oracle::{crosscheck, DEFAULT_SAMPLES, DEFAULT_SEED};
use crate::structures::validate;

pub const REPORT_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct WitnessReport {
    pub axiom: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub scope: String,
    pub tuple: Vec<usize>,
    pub labels: Vec<String>,
    /// Both sides as coordinates in `W^{⊗order}`.
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
    pub order: usize,
    pub out_dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct OracleStatus {
    pub seed: u64,
    pub samples: usize,
    pub laws: usize,
    pub agrees: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub disagreements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct CheckReport {
    pub check: String,
    pub status: Status,
    pub laws: usize,
    pub failing: Vec<String>,
    pub witnesses: Vec<WitnessReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub advisories: Vec<WitnessReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleStatus>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Report {
    pub format_version: u64,
    pub structure: String,
    pub kind: String,
    pub dimension: usize,
    pub field: String,
    pub basis: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<String>,
    pub checks: Vec<CheckReport>,
}

impl Report {
    /// Every check passed and the oracle never disagreed.
    pub fn passed(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.passed() && c.oracle.as_ref().is_none_or(|o| o.agrees))
    }

    pub fn to_machine(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }

    pub fn from_machine(text: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_human(&self) -> String {
        let mut out = format!(
            "{} ({}, dim {}, {})\n",
            self.structure, self.kind, self.dimension, self.field
        );
        for w in &self.warnings {
            out.push_str(&format!("  warning: {w}\n"));
        }
        for a in &self.annotations {
            out.push_str(&format!("  annotation: {a}\n"));
        }
        for c in &self.checks {
            let status = if c.passed() { "pass" } else { "FAIL" };
            out.push_str(&format!("check {}: {status} ({} laws)\n", c.check, c.laws));
            if !c.failing.is_empty() {
                out.push_str(&format!("  failing: {}\n", c.failing.join(", ")));
            }
            for w in &c.witnesses {
                out.push_str(&format!("  {}\n", render_witness(w, &self.basis)));
            }
            for w in &c.advisories {
                out.push_str(&format!("  advisory {}\n", render_witness(w, &self.basis)));
            }
            for n in &c.notes {
                out.push_str(&format!("  note: {n}\n"));
            }
            if let Some(o) = &c.oracle {
                let state = if o.agrees { "agrees" } else { "DISAGREES" };
                out.push_str(&format!(
                    "  oracle: {state} ({} laws, {} samples, seed {})\n",
                    o.laws, o.samples, o.seed
                ));
                for d in &o.disagreements {
                    out.push_str(&format!("    {d}\n"));
                }
            }
        }
        out
    }
}

fn render_witness(w: &WitnessReport, basis: &[String]) -> String {
    let at = w.labels.join(", ");
    let law = if w.scope.is_empty() {
        w.axiom.clone()
    } else {
        format!("{}:{}", w.scope, w.axiom)
    };
    format!(
        "{law} at ({at}): lhs = {}, rhs = {}",
        render_tensor(&w.lhs, w.order, w.out_dim, basis),
        render_tensor(&w.rhs, w.order, w.out_dim, basis)
    )
}

/// `2·e1⊗e2 - e2⊗e1` style rendering of a flattened tensor. `basis` names
/// the output space; the default labels are used when its length differs
/// (morphism witnesses land in the target space).
pub fn render_tensor(coords: &[String], order: usize, out_dim: usize, basis: &[String]) -> String {
    if order == 0 {
        return coords.first().cloned().unwrap_or_else(|| "0".into());
    }
    let labels = if basis.len() == out_dim {
        basis.to_vec()
    } else {
        default_basis(out_dim)
    };
    let mut out = String::new();
    for (idx, c) in coords.iter().enumerate() {
        if c == "0" {
            continue;
        }
        let term: Vec<&str> = decode_tuple(idx, out_dim, order)
            .into_iter()
            .map(|i| labels[i].as_str())
            .collect();
        let term = term.join("⊗");
        let (neg, mag) = match c.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, c.as_str()),
        };
        let coef = if mag == "1" {
            String::new()
        } else {
            format!("{mag}·")
        };
        match (out.is_empty(), neg) {
            (true, false) => out.push_str(&format!("{coef}{term}")),
            (true, true) => out.push_str(&format!("-{coef}{term}")),
            (false, false) => out.push_str(&format!(" + {coef}{term}")),
            (false, true) => out.push_str(&format!(" - {coef}{term}")),
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn witness_report(w: &Witness, basis: &[String]) -> WitnessReport {
    let labels = w
        .tuple
        .iter()
        .map(|&i| {
            basis
                .get(i)
                .cloned()
                .unwrap_or_else(|| format!("e{}", i + 1))
        })
        .collect();
    WitnessReport {
        axiom: w.axiom.clone(),
        scope: w.scope.clone(),
        tuple: w.tuple.clone(),
        labels,
        lhs: w.lhs.coords().iter().map(|c| c.literal()).collect(),
        rhs: w.rhs.coords().iter().map(|c| c.literal()).collect(),
        order: w.order,
        out_dim: w.out_dim,
    }
}

/// Summary of a verdict, without oracle status.
pub fn check_report(v: &Verdict, basis: &[String]) -> CheckReport {
    let mut failing = Vec::new();
    for w in &v.witnesses {
        let id = if w.scope.is_empty() {
            w.axiom.clone()
        } else {
            format!("{}:{}", w.scope, w.axiom)
        };
        if !failing.contains(&id) {
            failing.push(id);
        }
    }
    CheckReport {
        check: v.check.clone(),
        status: if v.passed() {
            Status::Pass
        } else {
            Status::Fail
        },
        laws: v.laws.len(),
        failing,
        witnesses: v
            .witnesses
            .iter()
            .map(|w| witness_report(w, basis))
            .collect(),
        advisories: v
            .advisories
            .iter()
            .map(|w| witness_report(w, basis))
            .collect(),
        notes: v.notes.clone(),
        oracle: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub samples: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
        }
    }
}

fn annotations(doc: &Document) -> Vec<String> {
    match doc.metadata.get("annotations") {
        Some(serde_json::Value::Array(a)) => a
            .iter()
            .filter_map(|v| v.as_str().map(str::to_string))
            .collect(),
        _ => Vec::new(),
    }
}

/// Header of a report on `doc`, with no checks yet.
pub fn empty_report(doc: &Document) -> Report {
    let s = &doc.structure;
    Report {
        format_version: REPORT_VERSION,
        structure: doc.name().unwrap_or("unnamed").to_string(),
        kind: s.kind().to_string(),
        dimension: s.dim(),
        field: s.field().descriptor(),
        basis: doc.basis.clone(),
        warnings: validate(s).warnings.iter().map(|w| w.to_string()).collect(),
        annotations: annotations(doc),
        checks: Vec::new(),
    }
}

/// Runs `suites` on the document's structure, each followed by the oracle
/// cross-check unless `oracle` is `None`.
pub fn run_checks(
    doc: &Document,
    suites: &[Suite],
    opts: &CheckOptions,
    oracle: Option<OracleConfig>,
) -> Result<Report, CheckError> {
    let mut report = empty_report(doc);
    for &suite in suites {
        let verdict = check(suite, &doc.structure, opts)?;
        let mut c = check_report(&verdict, &doc.basis);
        if let Some(cfg) = oracle {
            let steps = plan(suite, &doc.structure)?;
            let o = crosscheck(&steps, &verdict, opts, cfg.samples, cfg.seed);
            c.oracle = Some(OracleStatus {
                seed: cfg.seed,
                samples: o.samples,
                laws: o.laws,
                agrees: o.agrees(),
                disagreements: o.disagreements,
            });
        }
        report.checks.push(c);
    }
    Ok(report)
}
