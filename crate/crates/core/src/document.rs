//! The structure document: a versioned JSON file holding one structure or
//! one morphism.
//!
//! ```json
//! {
//!   "format-version": 1,
//!   "kind": "hom-algebra",
//!   "dimension": 2,
//!   "field": "rational",
//!   "basis": ["e1", "e2"],
//!   "sections": {
//!     "mu": [[["1", "0"], ["0", "1"]], [["0", "1"], ["0", "1"]]],
//!     "alpha": [["0", "0"], ["1", "1"]],
//!     "unit": ["1", "0"]
//!   },
//!   "metadata": {"name": "unital2"}
//! }
//! ```
//!
//! Products are nested `[i][j][k]` (coefficient of `e_k` in `μ(e_i, e_j)`),
//! coproducts `[k][i][j]` (coefficient of `e_i⊗e_j` in `Δ(e_k)`), endomorphisms
//! and morphisms are lists of rows, units and counits flat lists. Scalars are
//! decimal strings `"n"` or `"n/d"`; bare JSON integers are accepted on input.
//!
//! [`to_canonical_string`] fixes the layout, so a canonical file survives
//! `serialize∘parse` byte for byte.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::linalg::{CoproductTensor, LinearMap, ProductTensor, Vector};
use crate::scalar::{Field, Scalar};
use crate::structures::{
    section_type, Section, SectionData, SectionType, Structure, StructureKind,
};

pub const FORMAT_VERSION: u64 = 1;

pub const MORPHISM_KIND: &str = "morphism";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DocumentError {
    #[error("not valid JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Format(String),
}

fn fmt_err(msg: impl Into<String>) -> DocumentError {
    DocumentError::Format(msg.into())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub structure: Structure,
    pub basis: Vec<String>,
    pub metadata: Map<String, Value>,
}

/// A linear map between two structures, stored as rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismDocument {
    pub map: LinearMap,
    pub metadata: Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyDocument {
    Structure(Document),
    Morphism(MorphismDocument),
}

pub fn default_basis(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

impl Document {
    pub fn new(structure: Structure) -> Document {
        let basis = default_basis(structure.dim());
        Document {
            structure,
            basis,
            metadata: Map::new(),
        }
    }

    pub fn named(structure: Structure, name: &str) -> Document {
        let mut d = Document::new(structure);
        d.metadata.insert("name".into(), Value::String(name.into()));
        d
    }

    pub fn name(&self) -> Option<&str> {
        self.metadata.get("name").and_then(Value::as_str)
    }

    pub fn to_value(&self) -> Value {
        let s = &self.structure;
        let mut sections = Map::new();
        for (name, sec) in s.sections() {
            sections.insert(name.to_string(), section_value(sec));
        }
        let mut top = Map::new();
        top.insert("format-version".into(), FORMAT_VERSION.into());
        top.insert("kind".into(), s.kind().as_str().into());
        top.insert("dimension".into(), s.dim().into());
        top.insert("field".into(), s.field().descriptor().into());
        top.insert(
            "basis".into(),
            self.basis.iter().cloned().map(Value::String).collect(),
        );
        top.insert("sections".into(), Value::Object(sections));
        top.insert("metadata".into(), Value::Object(self.metadata.clone()));
        Value::Object(top)
    }

    pub fn to_canonical_string(&self) -> String {
        to_canonical_string(&self.to_value())
    }
}

impl MorphismDocument {
    pub fn to_value(&self) -> Value {
        let mut sections = Map::new();
        sections.insert("map".into(), rows_value(&self.map));
        let mut top = Map::new();
        top.insert("format-version".into(), FORMAT_VERSION.into());
        top.insert("kind".into(), MORPHISM_KIND.into());
        top.insert("dimension".into(), self.map.cols().into());
        top.insert("target-dimension".into(), self.map.rows().into());
        top.insert("field".into(), self.map.field().descriptor().into());
        top.insert("sections".into(), Value::Object(sections));
        top.insert("metadata".into(), Value::Object(self.metadata.clone()));
        Value::Object(top)
    }

    pub fn to_canonical_string(&self) -> String {
        to_canonical_string(&self.to_value())
    }
}

impl AnyDocument {
    pub fn to_canonical_string(&self) -> String {
        match self {
            AnyDocument::Structure(d) => d.to_canonical_string(),
            AnyDocument::Morphism(m) => m.to_canonical_string(),
        }
    }
}

fn lit(s: &Scalar) -> Value {
    Value::String(s.literal())
}

fn rows_value(m: &LinearMap) -> Value {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| lit(m.entry(r, c))).collect::<Value>())
        .collect()
}

fn cube_value(n: usize, at: impl Fn(usize, usize, usize) -> Scalar) -> Value {
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| (0..n).map(|c| lit(&at(a, b, c))).collect::<Value>())
                .collect::<Value>()
        })
        .collect()
}

fn section_value(sec: Section<'_>) -> Value {
    match sec {
        Section::Product(p) => cube_value(p.dim(), |i, j, k| p.entry(i, j, k).clone()),
        Section::Coproduct(q) => cube_value(q.dim(), |k, i, j| q.entry(k, i, j).clone()),
        Section::Endo(m) => rows_value(m),
        Section::Element(v) => v.coords().iter().map(lit).collect(),
        Section::Form(m) => (0..m.cols()).map(|c| lit(m.entry(0, c))).collect(),
    }
}

/// Pretty JSON with every innermost array on one line and object keys in
/// insertion order.
pub fn to_canonical_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn depth(v: &Value) -> usize {
    match v {
        Value::Array(a) => 1 + a.iter().map(depth).max().unwrap_or(0),
        Value::Object(o) if !o.is_empty() => usize::MAX,
        _ => 0,
    }
}

/// Scalar lists always fit on one line; lists of them only inside another
/// list (product planes), so matrices keep one row per line.
fn inline(v: &Value, in_array: bool) -> bool {
    match depth(v) {
        0 | 1 => true,
        2 => in_array,
        _ => false,
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    write_nested(out, v, indent, false)
}

fn write_nested(out: &mut String, v: &Value, indent: usize, in_array: bool) {
    let pad = "  ".repeat(indent + 1);
    let close = "  ".repeat(indent);
    match v {
        Value::Array(a) if inline(v, in_array) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_nested(out, x, indent, true);
            }
            out.push(']');
        }
        Value::Array(a) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad);
                write_nested(out, x, indent + 1, true);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{close}]");
        }
        Value::Object(o) if o.is_empty() => out.push_str("{}"),
        Value::Object(o) => {
            out.push_str("{\n");
            for (i, (k, x)) in o.iter().enumerate() {
                let _ = write!(out, "{pad}{}: ", Value::String(k.clone()));
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < o.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{close}}}");
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

fn scalar(field: Field, v: &Value, path: &str) -> Result<Scalar, DocumentError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        other => {
            return Err(fmt_err(format!(
                "{path}: expected a scalar literal, found {other}"
            )))
        }
    };
    Scalar::parse(field, &text).map_err(|e| fmt_err(format!("{path}: {e}")))
}

fn array<'v>(v: &'v Value, len: usize, path: &str) -> Result<&'v Vec<Value>, DocumentError> {
    match v {
        Value::Array(a) if a.len() == len => Ok(a),
        Value::Array(a) => Err(fmt_err(format!(
            "{path}: expected {len} entries, found {}",
            a.len()
        ))),
        _ => Err(fmt_err(format!("{path}: expected an array"))),
    }
}

fn flat(field: Field, v: &Value, len: usize, path: &str) -> Result<Vec<Scalar>, DocumentError> {
    array(v, len, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| scalar(field, x, &format!("{path}[{i}]")))
        .collect()
}

fn rows(
    field: Field,
    v: &Value,
    r: usize,
    c: usize,
    path: &str,
) -> Result<Vec<Scalar>, DocumentError> {
    let mut out = Vec::with_capacity(r * c);
    for (i, row) in array(v, r, path)?.iter().enumerate() {
        out.extend(flat(field, row, c, &format!("{path}[{i}]"))?);
    }
    Ok(out)
}

fn cube(field: Field, v: &Value, n: usize, path: &str) -> Result<Vec<Scalar>, DocumentError> {
    let mut out = Vec::with_capacity(n * n * n);
    for (i, plane) in array(v, n, path)?.iter().enumerate() {
        out.extend(rows(field, plane, n, n, &format!("{path}[{i}]"))?);
    }
    Ok(out)
}

fn parse_section(
    field: Field,
    n: usize,
    name: &str,
    v: &Value,
) -> Result<SectionData, DocumentError> {
    let t = section_type(name).ok_or_else(|| fmt_err(format!("unknown section {name:?}")))?;
    let shape = |e: crate::linalg::LinalgError| fmt_err(format!("{name}: {e}"));
    Ok(match t {
        SectionType::Product => SectionData::Product(
            ProductTensor::new(field, n, cube(field, v, n, name)?).map_err(shape)?,
        ),
        SectionType::Coproduct => SectionData::Coproduct(
            CoproductTensor::new(field, n, cube(field, v, n, name)?).map_err(shape)?,
        ),
        SectionType::Endo => SectionData::Endo(
            LinearMap::from_rows(field, n, n, rows(field, v, n, n, name)?).map_err(shape)?,
        ),
        SectionType::Element => {
            SectionData::Element(Vector::new(field, flat(field, v, n, name)?).map_err(shape)?)
        }
        SectionType::Form => SectionData::Form(
            LinearMap::from_rows(field, 1, n, flat(field, v, n, name)?).map_err(shape)?,
        ),
    })
}

fn take_usize(top: &Map<String, Value>, key: &str) -> Result<usize, DocumentError> {
    top.get(key)
        .and_then(Value::as_u64)
        .map(|d| d as usize)
        .ok_or_else(|| fmt_err(format!("{key} must be a non-negative integer")))
}

/// Parses either kind of document.
pub fn parse(text: &str) -> Result<AnyDocument, DocumentError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| DocumentError::Json(e.to_string()))?;
    let Value::Object(top) = value else {
        return Err(fmt_err("document must be a JSON object"));
    };
    match top.get("format-version").and_then(Value::as_u64) {
        Some(FORMAT_VERSION) => {}
        Some(v) => return Err(fmt_err(format!("unsupported format-version {v}"))),
        None => return Err(fmt_err("missing format-version")),
    }
    let kind = top
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| fmt_err("missing kind"))?;
    let allowed: &[&str] = if kind == MORPHISM_KIND {
        &[
            "format-version",
            "kind",
            "dimension",
            "target-dimension",
            "field",
            "sections",
            "metadata",
        ]
    } else {
        &[
            "format-version",
            "kind",
            "dimension",
            "field",
            "basis",
            "sections",
            "metadata",
        ]
    };
    if let Some(extra) = top.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(fmt_err(format!("unknown key {extra:?}")));
    }
    let n = take_usize(&top, "dimension")?;
    if n == 0 {
        return Err(fmt_err("dimension must be positive"));
    }
    let field_text = top
        .get("field")
        .and_then(Value::as_str)
        .ok_or_else(|| fmt_err("missing field"))?;
    let field = Field::parse_descriptor(field_text).map_err(|e| fmt_err(e.to_string()))?;
    let metadata = match top.get("metadata") {
        None => Map::new(),
        Some(Value::Object(m)) => m.clone(),
        Some(_) => return Err(fmt_err("metadata must be an object")),
    };
    let sections = match top.get("sections") {
        Some(Value::Object(s)) => s,
        _ => return Err(fmt_err("sections must be an object")),
    };

    if kind == MORPHISM_KIND {
        let m = take_usize(&top, "target-dimension")?;
        if let Some(extra) = sections.keys().find(|k| *k != "map") {
            return Err(fmt_err(format!("unknown morphism section {extra:?}")));
        }
        let v = sections
            .get("map")
            .ok_or_else(|| fmt_err("missing section map"))?;
        let map = LinearMap::from_rows(field, m, n, rows(field, v, m, n, "map")?)
            .map_err(|e| fmt_err(e.to_string()))?;
        return Ok(AnyDocument::Morphism(MorphismDocument { map, metadata }));
    }

    let kind = StructureKind::parse(kind).map_err(|e| fmt_err(e.to_string()))?;
    let basis = match top.get("basis") {
        None => default_basis(n),
        Some(Value::Array(a)) if a.len() == n => a
            .iter()
            .map(|l| l.as_str().map(str::to_string))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| fmt_err("basis labels must be strings"))?,
        Some(_) => return Err(fmt_err(format!("basis must list {n} labels"))),
    };
    let mut data = BTreeMap::new();
    for (name, v) in sections {
        data.insert(name.clone(), parse_section(field, n, name, v)?);
    }
    let structure = Structure::from_sections(kind, data).map_err(|e| fmt_err(e.to_string()))?;
    Ok(AnyDocument::Structure(Document {
        structure,
        basis,
        metadata,
    }))
}

pub fn parse_structure(text: &str) -> Result<Document, DocumentError> {
    match parse(text)? {
        AnyDocument::Structure(d) => Ok(d),
        AnyDocument::Morphism(_) => Err(fmt_err("expected a structure, found a morphism")),
    }
}

pub fn parse_morphism(text: &str) -> Result<MorphismDocument, DocumentError> {
    match parse(text)? {
        AnyDocument::Morphism(m) => Ok(m),
        AnyDocument::Structure(_) => Err(fmt_err("expected a morphism document")),
    }
}
