//! Exhaustive search over prime fields: structures passing a checker suite,
//! morphisms between two structures, and isomorphism classes.
//!
//! Candidates are numbered lexicographically over the free structure
//! constants, sections in kind order, each section in its storage order, with
//! the first free constant most significant. Workers take contiguous index
//! ranges and results are merged back by index.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use thiserror::Error;

use crate::axioms::{check, check_morphism, CheckOptions, Suite};
use crate::linalg::{CoproductTensor, LinearMap, ProductTensor, Vector};
use crate::scalar::{Field, Scalar};
use crate::structures::{
    kind_sections, section_type, Section, SectionData, SectionType, Structure, StructureKind,
};

/// Largest raw candidate count a search may visit.
pub const BUDGET: u128 = 1 << 32;

const CHUNK: u64 = 1 << 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("budget exceeded: {count} candidates, limit {BUDGET}")]
    Budget { count: u128 },
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("{0}")]
    Spec(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    pub kind: StructureKind,
    /// Checker suite; `None` uses the kind's own suite.
    pub suite: Option<Suite>,
    pub dim: usize,
    pub prime: u32,
    /// Partially specified sections in storage order; `None` entries are free.
    pub fixed: BTreeMap<String, Vec<Option<u32>>>,
    /// Makes `e1` the unit of every product and records it.
    pub require_unit: bool,
    /// Maximum number of structures returned; the count is always exact.
    pub cap: Option<usize>,
    pub options: CheckOptions,
}

impl SearchSpec {
    pub fn new(kind: StructureKind, dim: usize, prime: u32) -> SearchSpec {
        SearchSpec {
            kind,
            suite: None,
            dim,
            prime,
            fixed: BTreeMap::new(),
            require_unit: false,
            cap: None,
            options: CheckOptions::default(),
        }
    }

    pub fn suite(&self) -> Suite {
        self.suite.unwrap_or_else(|| Suite::for_kind(self.kind))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    /// Raw candidates visited.
    pub candidates: u64,
    /// Candidates passing the suite.
    pub count: u64,
    /// The first passing structures, in enumeration order, with their index.
    pub structures: Vec<(u64, Structure)>,
}

/// Where every constant of a candidate comes from.
struct Layout {
    field: Field,
    dim: usize,
    prime: u32,
    /// Section name, type and per-entry fixed value.
    sections: Vec<(&'static str, SectionType, Vec<Option<u32>>)>,
    /// Number of free entries.
    free: usize,
    unit: bool,
}

fn section_len(t: SectionType, n: usize) -> usize {
    match t {
        SectionType::Product | SectionType::Coproduct => n * n * n,
        SectionType::Endo => n * n,
        SectionType::Element | SectionType::Form => n,
    }
}

fn candidate_count(p: u32, free: usize) -> u128 {
    let mut c: u128 = 1;
    for _ in 0..free {
        c = c.saturating_mul(p as u128);
        if c > BUDGET {
            return c;
        }
    }
    c
}

impl Layout {
    fn of(spec: &SearchSpec) -> Result<Layout, SearchError> {
        let field = Field::prime(spec.prime).map_err(|_| SearchError::NotPrime(spec.prime))?;
        let n = spec.dim;
        if n == 0 {
            return Err(SearchError::Spec("dimension must be positive".into()));
        }
        for name in spec.fixed.keys() {
            if !kind_sections(spec.kind)
                .iter()
                .any(|(s, req)| s == name && *req)
            {
                return Err(SearchError::Spec(format!(
                    "{name} is not searchable for {}",
                    spec.kind
                )));
            }
        }
        let mut sections = Vec::new();
        let mut has_unit_slot = false;
        for &(name, required) in kind_sections(spec.kind) {
            let t = section_type(name).expect("known section");
            if !required {
                has_unit_slot |= name == "unit";
                continue;
            }
            if matches!(t, SectionType::Element | SectionType::Form) {
                return Err(SearchError::Spec(format!(
                    "{} needs a {name}; search only covers products, coproducts and endomorphisms",
                    spec.kind
                )));
            }
            let len = section_len(t, n);
            let mut entries = match spec.fixed.get(name) {
                Some(v) if v.len() != len => {
                    return Err(SearchError::Spec(format!(
                        "fixed {name} has {} entries, expected {len}",
                        v.len()
                    )))
                }
                Some(v) => v.iter().map(|e| e.map(|x| x % spec.prime)).collect(),
                None => vec![None; len],
            };
            if spec.require_unit && t == SectionType::Product && name.starts_with("mu") {
                for j in 0..n {
                    for k in 0..n {
                        let v = u32::from(j == k);
                        entries[j * n + k] = Some(v);
                        entries[(j * n) * n + k] = Some(v);
                    }
                }
            }
            sections.push((name, t, entries));
        }
        if spec.require_unit && !has_unit_slot {
            return Err(SearchError::Spec(format!("{} has no unit", spec.kind)));
        }
        let free = sections
            .iter()
            .map(|(_, _, e)| e.iter().filter(|x| x.is_none()).count())
            .sum();
        Ok(Layout {
            field,
            dim: n,
            prime: spec.prime,
            sections,
            free,
            unit: spec.require_unit,
        })
    }

    fn count(&self) -> Result<u64, SearchError> {
        let c = candidate_count(self.prime, self.free);
        if c > BUDGET {
            Err(SearchError::Budget { count: c })
        } else {
            Ok(c as u64)
        }
    }

    fn build(&self, kind: StructureKind, mut index: u64) -> Structure {
        let p = self.prime as u64;
        let mut digits = vec![0u32; self.free];
        for d in digits.iter_mut().rev() {
            *d = (index % p) as u32;
            index /= p;
        }
        let mut digits = digits.into_iter();
        let n = self.dim;
        let mut out = BTreeMap::new();
        for (name, t, entries) in &self.sections {
            let values: Vec<Scalar> = entries
                .iter()
                .map(|e| {
                    let v = e.unwrap_or_else(|| digits.next().expect("one digit per free entry"));
                    Scalar::from_i64(self.field, v as i64)
                })
                .collect();
            let data = match t {
                SectionType::Product => {
                    SectionData::Product(ProductTensor::new(self.field, n, values).expect("n³"))
                }
                SectionType::Coproduct => {
                    SectionData::Coproduct(CoproductTensor::new(self.field, n, values).expect("n³"))
                }
                _ => SectionData::Endo(LinearMap::from_rows(self.field, n, n, values).expect("n²")),
            };
            out.insert(name.to_string(), data);
        }
        if self.unit {
            out.insert(
                "unit".into(),
                SectionData::Element(Vector::basis(self.field, n, 0)),
            );
        }
        Structure::from_sections(kind, out).expect("layout follows the kind")
    }
}

fn fast(opts: &CheckOptions) -> CheckOptions {
    CheckOptions {
        witness_cap: 1,
        stop_on_failure: true,
        ..*opts
    }
}

/// Runs `keep` over `0..total` in parallel chunks; returns the exact number
/// of hits and the first `cap` of them in index order.
fn scan<T: Send>(
    total: u64,
    cap: usize,
    keep: impl Fn(u64) -> Option<T> + Sync,
) -> (u64, Vec<(u64, T)>) {
    let chunks = total.div_ceil(CHUNK);
    let parts: Vec<(u64, Vec<(u64, T)>)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut hits = 0;
            let mut kept = Vec::new();
            for i in c * CHUNK..((c + 1) * CHUNK).min(total) {
                if let Some(t) = keep(i) {
                    hits += 1;
                    if kept.len() < cap {
                        kept.push((i, t));
                    }
                }
            }
            (hits, kept)
        })
        .collect();
    let mut count = 0;
    let mut out = Vec::new();
    for (hits, kept) in parts {
        count += hits;
        let room = cap - out.len().min(cap);
        out.extend(kept.into_iter().take(room));
    }
    (count, out)
}

/// Every assignment of the free constants whose structure passes the suite.
pub fn enumerate(spec: &SearchSpec) -> Result<SearchResult, SearchError> {
    let layout = Layout::of(spec)?;
    let total = layout.count()?;
    let suite = spec.suite();
    let opts = fast(&spec.options);
    let probe = layout.build(spec.kind, 0);
    check(suite, &probe, &opts).map_err(|e| SearchError::Spec(e.to_string()))?;
    let (count, structures) = scan(total, spec.cap.unwrap_or(usize::MAX), |i| {
        let s = layout.build(spec.kind, i);
        let pass = check(suite, &s, &opts).map(|v| v.passed()).unwrap_or(false);
        pass.then_some(s)
    });
    Ok(SearchResult {
        candidates: total,
        count,
        structures,
    })
}

fn prime_of(s: &Structure) -> Option<u32> {
    match s.field() {
        Field::Prime(p) => Some(p),
        Field::Rational => None,
    }
}

/// All `dim(dst)×dim(src)` matrices over `F_p` that are morphisms.
pub fn find_morphisms(
    src: &Structure,
    dst: &Structure,
    prime: u32,
    opts: &CheckOptions,
) -> Result<Vec<LinearMap>, SearchError> {
    let field = Field::prime(prime).map_err(|_| SearchError::NotPrime(prime))?;
    if prime_of(src) != Some(prime) || prime_of(dst) != Some(prime) {
        return Err(SearchError::Spec(format!(
            "both structures must be over {field}"
        )));
    }
    let (n, m) = (src.dim(), dst.dim());
    let c = candidate_count(prime, n * m);
    if c > BUDGET {
        return Err(SearchError::Budget { count: c });
    }
    let opts = fast(opts);
    check_morphism(&LinearMap::zero(field, m, n), src, dst, &opts)
        .map_err(|e| SearchError::Spec(e.to_string()))?;
    let matrix = |mut i: u64| {
        let mut vals = vec![Scalar::zero(field); n * m];
        for v in vals.iter_mut().rev() {
            *v = Scalar::from_i64(field, (i % prime as u64) as i64);
            i /= prime as u64;
        }
        LinearMap::from_rows(field, m, n, vals).expect("m×n")
    };
    let (_, hits) = scan(c as u64, usize::MAX, |i| {
        let f = matrix(i);
        check_morphism(&f, src, dst, &opts)
            .is_ok_and(|v| v.passed())
            .then_some(f)
    });
    Ok(hits.into_iter().map(|(_, f)| f).collect())
}

/// `(g·s)`: the structure making `g` an isomorphism `s → g·s`.
pub fn transport(s: &Structure, g: &LinearMap, g_inv: &LinearMap) -> Structure {
    let gg = g.kron(g).expect("square");
    let gi2 = g_inv.kron(g_inv).expect("square");
    s.map_sections(|_, sec| match sec {
        Section::Product(p) => SectionData::Product(
            ProductTensor::from_map(
                g.compose(p.as_map())
                    .and_then(|m| m.compose(&gi2))
                    .expect("n×n²"),
            )
            .expect("n×n²"),
        ),
        Section::Coproduct(q) => SectionData::Coproduct(
            CoproductTensor::from_map(
                gg.compose(q.as_map())
                    .and_then(|m| m.compose(g_inv))
                    .expect("n²×n"),
            )
            .expect("n²×n"),
        ),
        Section::Endo(a) => {
            SectionData::Endo(g.compose(a).and_then(|m| m.compose(g_inv)).expect("n×n"))
        }
        Section::Element(v) => SectionData::Element(g.apply(v).expect("n")),
        Section::Form(e) => SectionData::Form(e.compose(g_inv).expect("1×n")),
    })
}

fn key(s: &Structure) -> Vec<Scalar> {
    let mut out = Vec::new();
    for (_, sec) in s.sections() {
        match sec {
            Section::Product(p) => out.extend(p.flat_entries()),
            Section::Coproduct(q) => out.extend(q.flat_entries()),
            Section::Endo(m) | Section::Form(m) => out.extend(m.entries().iter().cloned()),
            Section::Element(v) => out.extend(v.coords().iter().cloned()),
        }
    }
    out
}

/// `GL_n(F_p)` paired with inverses, in lexicographic order.
pub fn general_linear(n: usize, prime: u32) -> Result<Vec<(LinearMap, LinearMap)>, SearchError> {
    let field = Field::prime(prime).map_err(|_| SearchError::NotPrime(prime))?;
    let c = candidate_count(prime, n * n);
    if c > 1 << 16 {
        return Err(SearchError::Budget { count: c });
    }
    let mut out = Vec::new();
    for mut i in 0..c as u64 {
        let mut vals = vec![Scalar::zero(field); n * n];
        for v in vals.iter_mut().rev() {
            *v = Scalar::from_i64(field, (i % prime as u64) as i64);
            i /= prime as u64;
        }
        let g = LinearMap::from_rows(field, n, n, vals).expect("n×n");
        if let Some(inv) = g.inverse() {
            out.push((g, inv));
        }
    }
    Ok(out)
}

/// Groups structures of one kind and dimension over `F_p` into isomorphism
/// classes. Each class lists indices into `structures` in increasing order.
pub fn isomorphism_classes(
    structures: &[Structure],
    prime: u32,
) -> Result<Vec<Vec<usize>>, SearchError> {
    let Some(first) = structures.first() else {
        return Ok(Vec::new());
    };
    let n = first.dim();
    if structures
        .iter()
        .any(|s| s.dim() != n || s.kind() != first.kind())
    {
        return Err(SearchError::Spec(
            "structures differ in kind or dimension".into(),
        ));
    }
    let group = general_linear(n, prime)?;
    let index: HashMap<Vec<Scalar>, usize> = structures
        .iter()
        .enumerate()
        .map(|(i, s)| (key(s), i))
        .collect();
    let mut class = vec![usize::MAX; structures.len()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in 0..structures.len() {
        if class[i] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![i];
        class[i] = id;
        for (g, g_inv) in &group {
            if let Some(&j) = index.get(&key(&transport(&structures[i], g, g_inv))) {
                if class[j] == usize::MAX {
                    class[j] = id;
                    members.push(j);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    Ok(out)
}
