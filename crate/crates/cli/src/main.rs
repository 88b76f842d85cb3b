//! `homalg`: check, construct, search and corpus verbs over structure
//! documents.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails (or
//! a construction is ineligible, a search exceeds its budget, the corpus
//! drifts), 2 on unreadable or invalid input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use homalg::axioms::{
    applicable_suites, check, check_morphism, CheckError, CheckOptions, CounitMode, Suite,
};
use homalg::constructions::{self as cons, Assembly, BracketVariant, ConstructionError};
use homalg::corpus;
use homalg::document::{parse, AnyDocument, Document, MorphismDocument};
use homalg::linalg::LinearMap;
use homalg::oracle::DEFAULT_SEED;
use homalg::report::{check_report, render_tensor, run_checks, OracleConfig};
use homalg::search::{enumerate, find_morphisms, isomorphism_classes, SearchError, SearchSpec};
use homalg::structures::{HomAlgebra, HomBialgebra, HomCoalgebra, Structure, StructureKind};

#[derive(Parser)]
#[command(
    name = "homalg",
    version,
    about = "Exact checks and constructions for hom-type algebraic structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a document and run checker suites on it.
    Check(CheckArgs),
    /// Build a new structure from existing documents.
    Construct(ConstructArgs),
    /// Enumerate structures or morphisms over a prime field.
    Search(SearchArgs),
    /// Re-check the fixture corpus against its expected verdict table.
    Corpus(CorpusArgs),
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Human,
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum CounitArg {
    Eq7,
    Eq8,
}

#[derive(Args, Clone)]
struct CheckFlags {
    /// Counit law variant.
    #[arg(long, value_enum, default_value = "eq7")]
    counit_mode: CounitArg,
    /// Check dialgebra products for plain associativity.
    #[arg(long)]
    strict_assoc: bool,
    /// Witnesses kept per axiom.
    #[arg(long, default_value_t = homalg::axioms::DEFAULT_WITNESS_CAP)]
    witness_cap: usize,
}

impl CheckFlags {
    fn options(&self) -> CheckOptions {
        CheckOptions {
            witness_cap: self.witness_cap,
            counit_mode: match self.counit_mode {
                CounitArg::Eq7 => CounitMode::Eq7,
                CounitArg::Eq8 => CounitMode::Eq8,
            },
            strict_assoc: self.strict_assoc,
            stop_on_failure: false,
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    /// Structure or morphism document.
    path: PathBuf,
    /// Suite to run (default: the document kind's own suite; `all` runs
    /// every applicable suite).
    #[arg(long)]
    kind: Option<String>,
    /// Source structure, when PATH is a morphism.
    #[arg(long)]
    source: Option<PathBuf>,
    /// Target structure, when PATH is a morphism.
    #[arg(long)]
    target: Option<PathBuf>,
    #[command(flatten)]
    flags: CheckFlags,
    /// Oracle seed.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Skip the random-vector cross-check.
    #[arg(long)]
    no_oracle: bool,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Verb {
    Twist,
    K1,
    K2,
    Assemble,
    Tensor,
    Op,
    Cop,
    DialgFromDiff,
    LeibnizFromDiff,
    Bracket,
    HlsdaFromAffine,
    AffineFromHlsda,
    TrivialDialg,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(value_enum)]
    verb: Verb,
    /// Input documents.
    inputs: Vec<PathBuf>,
    /// Output document.
    #[arg(long)]
    out: PathBuf,
    /// Second output (the B2 half of a b1b2 assembly).
    #[arg(long)]
    out2: Option<PathBuf>,
    /// Twisting map, as a morphism document (twist).
    #[arg(long)]
    alpha: Option<PathBuf>,
    /// b1, b1b2 or 2-2 (assemble).
    #[arg(long, default_value = "b1")]
    assembly: String,
    /// paper or loday (bracket).
    #[arg(long, default_value = "loday")]
    variant: String,
    /// Name recorded in the output metadata.
    #[arg(long)]
    name: Option<String>,
    #[command(flatten)]
    flags: CheckFlags,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
}

#[derive(Args)]
struct SearchArgs {
    /// Structure kind to enumerate.
    #[arg(long, required_unless_present = "morphisms")]
    kind: Option<String>,
    /// Checker suite (default: the kind's own).
    #[arg(long)]
    suite: Option<String>,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, default_value_t = 2)]
    prime: u32,
    /// Fix e1 as the unit of every product.
    #[arg(long)]
    require_unit: bool,
    /// Fix constants: NAME=v,v,_,... in storage order, `_` for free.
    #[arg(long, value_name = "NAME=ENTRIES")]
    fixed: Vec<String>,
    /// Emit at most this many structures (the count stays exact).
    #[arg(long)]
    cap: Option<usize>,
    /// Group the emitted structures into isomorphism classes.
    #[arg(long)]
    classes: bool,
    /// Find all morphisms between two documents instead.
    #[arg(long, num_args = 2, value_names = ["SOURCE", "TARGET"])]
    morphisms: Option<Vec<PathBuf>>,
    #[command(flatten)]
    flags: CheckFlags,
    /// Write one document per result into this directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
}

#[derive(Args)]
struct CorpusArgs {
    /// Corpus directory (default: the bundled corpus).
    dir: Option<PathBuf>,
    /// Rewrite the expected table from the current verdicts.
    #[arg(long)]
    bless: bool,
    #[command(flatten)]
    flags: CheckFlags,
    /// Oracle seed.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// An error with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn invalid(e: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 2,
        error: e.into(),
    }
}

fn failed(e: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 1,
        error: e.into(),
    }
}

type Outcome = Result<u8, Failure>;

fn read_doc(path: &Path) -> Result<AnyDocument, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(invalid)?;
    parse(&text)
        .with_context(|| format!("{}", path.display()))
        .map_err(invalid)
}

fn read_structure(path: &Path) -> Result<Document, Failure> {
    match read_doc(path)? {
        AnyDocument::Structure(d) => Ok(d),
        AnyDocument::Morphism(_) => Err(invalid(anyhow!(
            "{}: expected a structure document",
            path.display()
        ))),
    }
}

fn read_morphism(path: &Path) -> Result<MorphismDocument, Failure> {
    match read_doc(path)? {
        AnyDocument::Morphism(m) => Ok(m),
        AnyDocument::Structure(_) => Err(invalid(anyhow!(
            "{}: expected a morphism document",
            path.display()
        ))),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("cannot write {}", p.display()))
            .map_err(invalid),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check_error(e: CheckError) -> Failure {
    invalid(anyhow!(e))
}

fn parse_suite(s: &str) -> Result<Suite, Failure> {
    Suite::parse(s).ok_or_else(|| invalid(anyhow!("unknown check {s:?}")))
}

fn cmd_check(a: CheckArgs) -> Outcome {
    let opts = a.flags.options();
    match read_doc(&a.path)? {
        AnyDocument::Structure(doc) => {
            let suites = match a.kind.as_deref() {
                None => vec![Suite::for_kind(doc.structure.kind())],
                Some("all") => applicable_suites(doc.structure.kind()),
                Some(s) => vec![parse_suite(s)?],
            };
            let oracle = (!a.no_oracle).then_some(OracleConfig {
                seed: a.seed,
                ..OracleConfig::default()
            });
            let report = run_checks(&doc, &suites, &opts, oracle).map_err(check_error)?;
            let text = match a.format {
                Format::Human => report.to_human(),
                Format::Machine => report.to_machine(),
            };
            emit(&text, a.out.as_deref())?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        AnyDocument::Morphism(m) => {
            let base = a.path.parent().unwrap_or(Path::new("."));
            let resolve = |flag: &Option<PathBuf>, key: &str| -> Result<PathBuf, Failure> {
                if let Some(p) = flag {
                    return Ok(p.clone());
                }
                m.metadata
                    .get(key)
                    .and_then(Value::as_str)
                    .map(|n| base.join(format!("{n}.json")))
                    .ok_or_else(|| invalid(anyhow!("morphism check needs --{key}")))
            };
            let src = read_structure(&resolve(&a.source, "source")?)?;
            let dst = read_structure(&resolve(&a.target, "target")?)?;
            let v = check_morphism(&m.map, &src.structure, &dst.structure, &opts)
                .map_err(check_error)?;
            let c = check_report(&v, &src.basis);
            let text = match a.format {
                Format::Human => {
                    let mut r = homalg::report::empty_report(&src);
                    r.structure = format!(
                        "{} -> {}",
                        src.name().unwrap_or("source"),
                        dst.name().unwrap_or("target")
                    );
                    r.checks.push(c.clone());
                    r.to_human()
                }
                Format::Machine => serde_json::to_string_pretty(&c).expect("plain data") + "\n",
            };
            emit(&text, a.out.as_deref())?;
            Ok(if c.passed() { 0 } else { 1 })
        }
    }
}

fn construction_error(e: ConstructionError) -> Failure {
    match e {
        ConstructionError::Invalid(_) => invalid(anyhow!(e)),
        _ => failed(anyhow!(e)),
    }
}

fn name_of(d: &Document, path: &Path) -> String {
    d.name().map(str::to_string).unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    })
}

fn with_meta(s: Structure, name: String, verb: &str, inputs: &[String]) -> Document {
    let mut d = Document::named(s, &name);
    d.metadata.insert("construction".into(), verb.into());
    d.metadata.insert(
        "inputs".into(),
        inputs.iter().cloned().map(Value::String).collect(),
    );
    d
}

fn inputs<const N: usize>(a: &ConstructArgs) -> Result<[Document; N], Failure> {
    if a.inputs.len() != N {
        return Err(invalid(anyhow!(
            "this construction takes {N} input document(s)"
        )));
    }
    let docs: Vec<Document> = a
        .inputs
        .iter()
        .map(|p| read_structure(p))
        .collect::<Result<_, _>>()?;
    Ok(docs
        .try_into()
        .unwrap_or_else(|_| unreachable!("length checked")))
}

fn algebra_of(d: &Document) -> Result<HomAlgebra, Failure> {
    match &d.structure {
        Structure::HomAlgebra(a) => Ok(a.clone()),
        other => Err(invalid(anyhow!(
            "expected a hom-algebra, found {}",
            other.kind()
        ))),
    }
}

/// Adds the adjoined unit label in front of the old basis.
fn extended_basis(old: &[String]) -> Vec<String> {
    let mut b = vec!["e0".to_string()];
    b.extend(old.iter().cloned());
    if b[1..].contains(&b[0]) {
        b[0] = "u0".into();
    }
    b
}

fn cmd_construct(a: ConstructArgs) -> Outcome {
    let opts = a.flags.options();
    let verb = a
        .verb
        .to_possible_value()
        .expect("named verb")
        .get_name()
        .to_string();
    let mut outputs: Vec<(Document, PathBuf)> = Vec::new();
    let mut claims: Vec<Suite> = Vec::new();
    let named = |default: String| a.name.clone().unwrap_or(default);
    match a.verb {
        Verb::Twist => {
            let [d] = inputs::<1>(&a)?;
            let alpha_path = a
                .alpha
                .as_ref()
                .ok_or_else(|| invalid(anyhow!("twist needs --alpha")))?;
            let alpha = read_morphism(alpha_path)?.map;
            let s = cons::yau_twist(&d.structure, &alpha, &opts).map_err(construction_error)?;
            claims.push(Suite::for_kind(s.kind()));
            let n = name_of(&d, &a.inputs[0]);
            let mut out = with_meta(s, named(format!("{n}_twisted")), &verb, &[n]);
            out.basis = d.basis.clone();
            outputs.push((out, a.out.clone()));
        }
        Verb::K1 | Verb::K2 => {
            let [d] = inputs::<1>(&a)?;
            let alg = algebra_of(&d)?;
            let b = match a.verb {
                Verb::K1 => cons::kaplansky_k1(&alg),
                _ => cons::kaplansky_k2(&alg),
            }
            .map_err(construction_error)?;
            claims.extend([Suite::HomBialgebra, Suite::Infinitesimal]);
            let n = name_of(&d, &a.inputs[0]);
            let mut out = with_meta(
                Structure::HomBialgebra(b),
                named(format!("{n}_{verb}")),
                &verb,
                &[n],
            );
            out.basis = extended_basis(&d.basis);
            out.metadata.insert(
                "embedding".into(),
                format!(
                    "{} is the adjoined unit; input basis vector i is output basis vector i + 1",
                    out.basis[0]
                )
                .into(),
            );
            outputs.push((out, a.out.clone()));
        }
        Verb::Assemble => {
            let [d1, d2] = inputs::<2>(&a)?;
            let kind = Assembly::parse(&a.assembly).ok_or_else(|| {
                invalid(anyhow!("unknown assembly {:?} (b1, b1b2, 2-2)", a.assembly))
            })?;
            let parts = cons::assemble_two(kind, &algebra_of(&d1)?, &algebra_of(&d2)?)
                .map_err(construction_error)?;
            let names = [name_of(&d1, &a.inputs[0]), name_of(&d2, &a.inputs[1])];
            let mut paths = vec![a.out.clone()];
            if parts.len() > 1 {
                paths.push(
                    a.out2.clone().ok_or_else(|| {
                        invalid(anyhow!("b1b2 writes two documents; pass --out2"))
                    })?,
                );
            }
            for (i, (t, path)) in parts.into_iter().zip(paths).enumerate() {
                let s = Structure::TwoHom(t);
                claims.push(Suite::for_kind(s.kind()));
                let default = format!(
                    "{}_{}_{}{}",
                    names[0],
                    names[1],
                    a.assembly,
                    if i > 0 { "_cop" } else { "" }
                );
                let name = match (&a.name, i) {
                    (Some(_), 1..) => path
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or(default),
                    _ => named(default),
                };
                let mut out = with_meta(s, name, &verb, &names);
                out.basis = extended_basis(&d1.basis);
                outputs.push((out, path));
            }
            claims.dedup();
        }
        Verb::Tensor => {
            let [d1, d2] = inputs::<2>(&a)?;
            let t = cons::tensor_product(&algebra_of(&d1)?, &algebra_of(&d2)?)
                .map_err(construction_error)?;
            claims.push(Suite::HomAlgebra);
            let names = [name_of(&d1, &a.inputs[0]), name_of(&d2, &a.inputs[1])];
            let mut out = with_meta(
                Structure::HomAlgebra(t),
                named(format!("{}_x_{}", names[0], names[1])),
                &verb,
                &names,
            );
            out.basis = d1
                .basis
                .iter()
                .flat_map(|x| d2.basis.iter().map(move |y| format!("{x}⊗{y}")))
                .collect();
            outputs.push((out, a.out.clone()));
        }
        Verb::Op | Verb::Cop => {
            let [d] = inputs::<1>(&a)?;
            let s = match (a.verb, &d.structure) {
                (Verb::Op, Structure::HomAlgebra(x)) => Structure::HomAlgebra(HomAlgebra {
                    mu: cons::opposite(&x.mu),
                    ..x.clone()
                }),
                (Verb::Op, Structure::HomBialgebra(x)) => Structure::HomBialgebra(HomBialgebra {
                    mu: cons::opposite(&x.mu),
                    ..x.clone()
                }),
                (Verb::Cop, Structure::HomCoalgebra(x)) => Structure::HomCoalgebra(HomCoalgebra {
                    delta: cons::coopposite(&x.delta),
                    ..x.clone()
                }),
                (Verb::Cop, Structure::HomBialgebra(x)) => Structure::HomBialgebra(HomBialgebra {
                    delta: cons::coopposite(&x.delta),
                    ..x.clone()
                }),
                (_, other) => {
                    return Err(invalid(anyhow!(
                        "{verb} does not apply to {}",
                        other.kind()
                    )))
                }
            };
            claims.push(Suite::for_kind(s.kind()));
            let n = name_of(&d, &a.inputs[0]);
            let mut out = with_meta(s, named(format!("{n}_{verb}")), &verb, &[n]);
            out.basis = d.basis.clone();
            outputs.push((out, a.out.clone()));
        }
        Verb::DialgFromDiff | Verb::LeibnizFromDiff => {
            let [d] = inputs::<1>(&a)?;
            let Structure::Differential(diff) = &d.structure else {
                return Err(invalid(anyhow!("expected a differential-hom-algebra")));
            };
            let s = match a.verb {
                Verb::DialgFromDiff => Structure::HomDialgebra(
                    cons::dialgebra_from_differential(diff, &opts).map_err(construction_error)?,
                ),
                _ => Structure::HomLeibniz(
                    cons::leibniz_from_differential(diff, &opts).map_err(construction_error)?,
                ),
            };
            claims.push(Suite::for_kind(s.kind()));
            let n = name_of(&d, &a.inputs[0]);
            let suffix = if matches!(a.verb, Verb::DialgFromDiff) {
                "dialg"
            } else {
                "leibniz"
            };
            let mut out = with_meta(s, named(format!("{n}_{suffix}")), &verb, &[n]);
            out.basis = d.basis.clone();
            outputs.push((out, a.out.clone()));
        }
        Verb::Bracket => {
            let [d] = inputs::<1>(&a)?;
            let variant = BracketVariant::parse(&a.variant).ok_or_else(|| {
                invalid(anyhow!(
                    "unknown bracket variant {:?} (paper, loday)",
                    a.variant
                ))
            })?;
            let dialg = match &d.structure {
                Structure::HomDialgebra(x) => x.clone(),
                Structure::Hlsda(x) => x.clone().into(),
                other => {
                    return Err(invalid(anyhow!(
                        "bracket needs a dialgebra, found {}",
                        other.kind()
                    )))
                }
            };
            let l =
                cons::bracket_from_dialgebra(&dialg, variant, &opts).map_err(construction_error)?;
            claims.push(Suite::HomLeibniz);
            let n = name_of(&d, &a.inputs[0]);
            let mut out = with_meta(
                Structure::HomLeibniz(l),
                named(format!("{n}_bracket_{}", variant.as_str())),
                &verb,
                &[n],
            );
            out.metadata
                .insert("variant".into(), variant.as_str().into());
            out.basis = d.basis.clone();
            outputs.push((out, a.out.clone()));
        }
        Verb::HlsdaFromAffine | Verb::AffineFromHlsda => {
            let [d] = inputs::<1>(&a)?;
            let s = match (a.verb, &d.structure) {
                (Verb::HlsdaFromAffine, Structure::Affine(x)) => {
                    Structure::Hlsda(cons::hlsda_from_affine(x, &opts).map_err(construction_error)?)
                }
                (Verb::AffineFromHlsda, Structure::Hlsda(x)) => Structure::Affine(
                    cons::affine_from_hlsda(x, &opts).map_err(construction_error)?,
                ),
                (Verb::AffineFromHlsda, Structure::HomDialgebra(x)) => Structure::Affine(
                    cons::affine_from_hlsda(&x.clone().into(), &opts)
                        .map_err(construction_error)?,
                ),
                (_, other) => {
                    return Err(invalid(anyhow!(
                        "{verb} does not apply to {}",
                        other.kind()
                    )))
                }
            };
            claims.push(Suite::for_kind(s.kind()));
            let n = name_of(&d, &a.inputs[0]);
            let suffix = if matches!(a.verb, Verb::HlsdaFromAffine) {
                "hlsda"
            } else {
                "affine"
            };
            let mut out = with_meta(s, named(format!("{n}_{suffix}")), &verb, &[n]);
            out.basis = d.basis.clone();
            outputs.push((out, a.out.clone()));
        }
        Verb::TrivialDialg => {
            let [d] = inputs::<1>(&a)?;
            let s = Structure::HomDialgebra(
                cons::trivial_dialgebra(&algebra_of(&d)?, &opts).map_err(construction_error)?,
            );
            claims.push(Suite::HomDialgebra);
            let n = name_of(&d, &a.inputs[0]);
            let mut out = with_meta(s, named(format!("{n}_trivial_dialg")), &verb, &[n]);
            out.basis = d.basis.clone();
            outputs.push((out, a.out.clone()));
        }
    }

    let mut lines = Vec::new();
    for (doc, path) in &outputs {
        fs::write(path, doc.to_canonical_string())
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(invalid)?;
        let mut parts = Vec::new();
        for suite in claims
            .iter()
            .filter(|s| applicable_suites(doc.structure.kind()).contains(s))
        {
            let v = check(*suite, &doc.structure, &opts).map_err(check_error)?;
            let c = check_report(&v, &doc.basis);
            let verdict = match c.witnesses.first() {
                None => "pass".to_string(),
                Some(w) => format!(
                    "fail({} at ({}): {} vs {})",
                    w.axiom,
                    w.labels.join(", "),
                    render_tensor(&w.lhs, w.order, w.out_dim, &doc.basis),
                    render_tensor(&w.rhs, w.order, w.out_dim, &doc.basis)
                ),
            };
            parts.push((suite.as_str().to_string(), verdict, c));
        }
        match a.format {
            Format::Human => lines.push(format!(
                "{} ({}, dim {}) -> {}\n  {}\n",
                doc.name().unwrap_or(""),
                doc.structure.kind(),
                doc.structure.dim(),
                path.display(),
                parts
                    .iter()
                    .map(|(s, v, _)| format!("{s}: {v}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            )),
            Format::Machine => {
                let checks: Vec<Value> = parts
                    .iter()
                    .map(|(_, _, c)| serde_json::to_value(c).expect("plain data"))
                    .collect();
                lines.push(
                    serde_json::to_string_pretty(&serde_json::json!({
                        "output": path.display().to_string(),
                        "name": doc.name(),
                        "kind": doc.structure.kind().as_str(),
                        "dimension": doc.structure.dim(),
                        "checks": checks,
                    }))
                    .expect("plain data")
                        + "\n",
                )
            }
        }
    }
    print!("{}", lines.concat());
    Ok(0)
}

fn search_error(e: SearchError) -> Failure {
    match e {
        SearchError::Budget { .. } => failed(anyhow!(e)),
        _ => invalid(anyhow!(e)),
    }
}

fn parse_fixed(spec: &str, prime: u32) -> Result<(String, Vec<Option<u32>>), Failure> {
    let (name, entries) = spec
        .split_once('=')
        .ok_or_else(|| invalid(anyhow!("--fixed expects NAME=ENTRIES, got {spec:?}")))?;
    let field = homalg::scalar::Field::prime(prime).map_err(invalid)?;
    let values = entries
        .split(',')
        .map(|e| match e.trim() {
            "_" => Ok(None),
            lit => {
                let s = homalg::scalar::Scalar::parse(field, lit).map_err(invalid)?;
                Ok(Some(s.literal().parse::<u32>().expect("residue")))
            }
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok((name.to_string(), values))
}

fn cmd_search(a: SearchArgs) -> Outcome {
    let opts = a.flags.options();
    if let Some(paths) = &a.morphisms {
        let src = read_structure(&paths[0])?;
        let dst = read_structure(&paths[1])?;
        let maps =
            find_morphisms(&src.structure, &dst.structure, a.prime, &opts).map_err(search_error)?;
        for (i, f) in maps.iter().enumerate() {
            let doc = MorphismDocument {
                map: f.clone(),
                metadata: serde_json::Map::from_iter([
                    ("source".to_string(), Value::from(name_of(&src, &paths[0]))),
                    ("target".to_string(), Value::from(name_of(&dst, &paths[1]))),
                ]),
            };
            emit_result(&a, i as u64, &AnyDocument::Morphism(doc), &morphism_line(f))?;
        }
        emit_count(&a, maps.len() as u64, None);
        return Ok(0);
    }
    let kind_text = a.kind.as_deref().expect("clap requires --kind");
    let kind = StructureKind::parse(kind_text).map_err(invalid)?;
    let mut spec = SearchSpec::new(kind, a.dim, a.prime);
    spec.suite = a.suite.as_deref().map(parse_suite).transpose()?;
    spec.require_unit = a.require_unit;
    spec.cap = a.cap;
    spec.options = opts;
    for f in &a.fixed {
        let (name, values) = parse_fixed(f, a.prime)?;
        spec.fixed.insert(name, values);
    }
    let result = enumerate(&spec).map_err(search_error)?;
    for (index, s) in &result.structures {
        let name = format!("{kind}-{}-gf{}-{index}", a.dim, a.prime);
        let mut doc = Document::named(s.clone(), &name);
        doc.metadata.insert("search-index".into(), (*index).into());
        let line = format!("#{index}");
        emit_result(&a, *index, &AnyDocument::Structure(doc), &line)?;
    }
    if a.classes {
        let all: Vec<Structure> = result.structures.iter().map(|(_, s)| s.clone()).collect();
        let classes = isomorphism_classes(&all, a.prime).map_err(search_error)?;
        for (i, c) in classes.iter().enumerate() {
            let members: Vec<String> = c
                .iter()
                .map(|&j| format!("#{}", result.structures[j].0))
                .collect();
            match a.format {
                Format::Human => println!("class {i}: {}", members.join(" ")),
                Format::Machine => println!(
                    "{}",
                    serde_json::json!({ "class": i, "members": c.iter().map(|&j| result.structures[j].0).collect::<Vec<_>>() })
                ),
            }
        }
    }
    emit_count(&a, result.count, Some(result.candidates));
    Ok(0)
}

fn morphism_line(f: &LinearMap) -> String {
    let rows: Vec<String> = (0..f.rows())
        .map(|r| {
            (0..f.cols())
                .map(|c| f.entry(r, c).literal())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    format!("[{}]", rows.join("; "))
}

fn emit_result(a: &SearchArgs, index: u64, doc: &AnyDocument, line: &str) -> Result<(), Failure> {
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).map_err(invalid)?;
        let path = dir.join(format!("{index:08}.json"));
        fs::write(&path, doc.to_canonical_string())
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(invalid)?;
    }
    match a.format {
        Format::Human => {
            let summary = match doc {
                AnyDocument::Structure(d) => summarize(&d.structure),
                AnyDocument::Morphism(_) => String::new(),
            };
            println!("{line} {summary}");
        }
        Format::Machine => {
            let v = match doc {
                AnyDocument::Structure(d) => d.to_value(),
                AnyDocument::Morphism(m) => m.to_value(),
            };
            println!("{}", serde_json::to_string(&v).expect("plain data"));
        }
    }
    Ok(())
}

/// Nonzero structure constants, one section after another.
fn summarize(s: &Structure) -> String {
    let doc = Document::new(s.clone()).to_value();
    let mut parts = Vec::new();
    if let Some(Value::Object(sections)) = doc.get("sections") {
        for (name, v) in sections {
            parts.push(format!(
                "{name}={}",
                serde_json::to_string(v)
                    .expect("plain data")
                    .replace('"', "")
            ));
        }
    }
    parts.join(" ")
}

fn emit_count(a: &SearchArgs, count: u64, candidates: Option<u64>) {
    match a.format {
        Format::Human => match candidates {
            Some(c) => println!("count: {count} of {c} candidates"),
            None => println!("count: {count}"),
        },
        Format::Machine => println!(
            "{}",
            serde_json::json!({ "count": count, "candidates": candidates })
        ),
    }
}

fn cmd_corpus(a: CorpusArgs) -> Outcome {
    let opts = a.flags.options();
    let dir = a.dir.clone().unwrap_or_else(corpus::bundled_dir);
    let oracle = OracleConfig {
        seed: a.seed,
        ..OracleConfig::default()
    };
    let result = if a.bless {
        corpus::bless(&dir, &opts, oracle)
    } else {
        corpus::run(&dir, &opts, oracle)
    };
    let summary = match result {
        Ok(s) => s,
        Err(e @ corpus::CorpusError::Table(_)) if a.bless => return Err(failed(anyhow!(e))),
        Err(e) => return Err(invalid(anyhow!(e))),
    };
    let text = match a.format {
        Format::Human => summary.render(),
        Format::Machine => {
            let rows: Vec<Value> = summary
                .rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "fixture": r.fixture,
                        "check": r.check,
                        "status": r.actual.status,
                        "failing": r.actual.failing,
                        "matches": r.matches(),
                        "oracle-agrees": r.oracle_agrees,
                        "paper-discrepancy": r.is_discrepancy(),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&serde_json::json!({
                "format-version": 1,
                "rows": rows,
                "stale": summary.stale,
                "clean": summary.clean(),
            }))
            .expect("plain data")
                + "\n"
        }
    };
    emit(&text, a.out.as_deref())?;
    Ok(if a.bless || summary.clean() { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Check(a) => cmd_check(a),
        Command::Construct(a) => cmd_construct(a),
        Command::Search(a) => cmd_search(a),
        Command::Corpus(a) => cmd_corpus(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
