//! Axiom checkers.
//!
//! Every identity is an equation between two linear maps out of `V^{⊗k}`,
//! assembled from the structure maps with [`LinearMap::compose`] and
//! [`LinearMap::kron`]. By multilinearity it holds everywhere iff the two
//! matrices agree column by column; each disagreeing column is a witness.
//!
//! A check is run as a plan of leaf steps (see [`plan`]). Suites such as the
//! unital hom-bialgebra or the 2-hom variants are just longer plans, so their
//! witness lists are the union of the constituent ones.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::linalg::{decode_tuple, LinearMap, ProductTensor, Vector};
use crate::scalar::Field;
use crate::structures::{
    validate, AffineStructure, Defect, DifferentialHomAlgebra, Hlsda, HomAlgebra, HomBialgebra,
    HomCoalgebra, HomDialgebra, HomLeibniz, HomPreLie, Section, Structure, StructureKind,
    TwoHomStructure,
};

pub const DEFAULT_WITNESS_CAP: usize = 16;

/// Which form of the hom-counital law to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CounitMode {
    /// `(ε⊗α)Δ = (α⊗ε)Δ = α²`
    #[default]
    Eq7,
    /// `(ε⊗id)Δ = (id⊗ε)Δ = α`
    Eq8,
}

impl CounitMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CounitMode::Eq7 => "eq7",
            CounitMode::Eq8 => "eq8",
        }
    }

    pub fn parse(s: &str) -> Option<CounitMode> {
        match s {
            "eq7" => Some(CounitMode::Eq7),
            "eq8" => Some(CounitMode::Eq8),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// Maximum witnesses kept per axiom.
    pub witness_cap: usize,
    pub counit_mode: CounitMode,
    /// Check dialgebra products for plain associativity instead of the
    /// α-twisted form.
    pub strict_assoc: bool,
    /// Stop at the first failing tuple (used by search, where only the
    /// pass/fail bit matters).
    pub stop_on_failure: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            witness_cap: DEFAULT_WITNESS_CAP,
            counit_mode: CounitMode::Eq7,
            strict_assoc: false,
            stop_on_failure: false,
        }
    }
}

/// A failing basis tuple for one axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub axiom: String,
    /// Which constituent of a composite check this came from; empty for
    /// plain checks.
    pub scope: String,
    /// Basis indices of the arguments (0-based).
    pub tuple: Vec<usize>,
    /// Both sides, flattened in `W^{⊗order}` where `W` has dimension `out_dim`.
    pub lhs: Vector,
    pub rhs: Vector,
    pub order: usize,
    pub out_dim: usize,
}

/// Outcome of a check. It passes iff `witnesses` is empty; advisories are
/// reported but never make a check fail.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Verdict {
    pub check: String,
    pub witnesses: Vec<Witness>,
    pub advisories: Vec<Witness>,
    /// `(scope, axiom)` pairs that were evaluated.
    pub laws: Vec<(String, String)>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }

    /// Distinct failing axiom ids.
    pub fn failed_axioms(&self) -> BTreeSet<String> {
        self.witnesses.iter().map(|w| w.axiom.clone()).collect()
    }

    pub fn failed(&self, axiom: &str) -> bool {
        self.witnesses.iter().any(|w| w.axiom == axiom)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("check {suite} does not apply to a {kind} structure")]
    KindMismatch { suite: String, kind: StructureKind },
    #[error("structure is invalid: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Defect>),
    #[error("check {suite} needs a {section} map")]
    Absent {
        suite: String,
        section: &'static str,
    },
    #[error("morphism shape {rows}×{cols} does not fit {src}-dimensional source and {dst}-dimensional target")]
    MorphismShape {
        rows: usize,
        cols: usize,
        src: usize,
        dst: usize,
    },
}

/// Named checker suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    HomAlgebra,
    HomCoalgebra,
    HomBialgebra,
    BialgebraCompat,
    Infinitesimal,
    TwoHomAssocAlgebra,
    TwoHomAssocBialgebra,
    TwoHomBialgebra,
    TwoTwoHomBialgebra,
    HomDialgebra,
    Differential,
    HomLeibniz,
    HomPreLie,
    Hlsda,
    Affine,
}

impl Suite {
    pub const ALL: [Suite; 15] = [
        Suite::HomAlgebra,
        Suite::HomCoalgebra,
        Suite::HomBialgebra,
        Suite::BialgebraCompat,
        Suite::Infinitesimal,
        Suite::TwoHomAssocAlgebra,
        Suite::TwoHomAssocBialgebra,
        Suite::TwoHomBialgebra,
        Suite::TwoTwoHomBialgebra,
        Suite::HomDialgebra,
        Suite::Differential,
        Suite::HomLeibniz,
        Suite::HomPreLie,
        Suite::Hlsda,
        Suite::Affine,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::HomAlgebra => "hom-algebra",
            Suite::HomCoalgebra => "hom-coalgebra",
            Suite::HomBialgebra => "hom-bialgebra",
            Suite::BialgebraCompat => "bialgebra-compat",
            Suite::Infinitesimal => "infinitesimal",
            Suite::TwoHomAssocAlgebra => "2-hom-assoc-algebra",
            Suite::TwoHomAssocBialgebra => "2-hom-assoc-bialgebra",
            Suite::TwoHomBialgebra => "2-hom-bialgebra",
            Suite::TwoTwoHomBialgebra => "2-2-hom-bialgebra",
            Suite::HomDialgebra => "hom-dialgebra",
            Suite::Differential => "differential-hom-algebra",
            Suite::HomLeibniz => "hom-leibniz",
            Suite::HomPreLie => "hom-prelie",
            Suite::Hlsda => "hlsda",
            Suite::Affine => "affine",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|k| k.as_str() == s)
    }

    /// The suite a structure of the given kind is checked against by default.
    pub fn for_kind(kind: StructureKind) -> Suite {
        match kind {
            StructureKind::HomAlgebra => Suite::HomAlgebra,
            StructureKind::HomCoalgebra => Suite::HomCoalgebra,
            StructureKind::HomBialgebra => Suite::HomBialgebra,
            StructureKind::TwoHomAssocAlgebra => Suite::TwoHomAssocAlgebra,
            StructureKind::TwoHomAssocBialgebra => Suite::TwoHomAssocBialgebra,
            StructureKind::TwoHomBialgebra => Suite::TwoHomBialgebra,
            StructureKind::TwoTwoHomBialgebra => Suite::TwoTwoHomBialgebra,
            StructureKind::HomDialgebra => Suite::HomDialgebra,
            StructureKind::DifferentialHomAlgebra => Suite::Differential,
            StructureKind::HomLeibniz => Suite::HomLeibniz,
            StructureKind::HomPreLie => Suite::HomPreLie,
            StructureKind::Hlsda => Suite::Hlsda,
            StructureKind::Affine => Suite::Affine,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The data one leaf checker looks at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Leaf {
    HomAlgebra(HomAlgebra),
    HomCoalgebra(HomCoalgebra),
    /// Compatibility of `μ, Δ, ε, α` only.
    Compat(HomBialgebra),
    /// The unital hom-infinitesimal relation only.
    Infinitesimal(HomBialgebra),
    HomDialgebra(HomDialgebra),
    /// Leibniz rule, `d² = 0` and `dα = αd` only.
    Differential(DifferentialHomAlgebra),
    HomLeibniz(HomLeibniz),
    HomPreLie(HomPreLie),
    Hlsda(Hlsda),
    /// The `∇` identities only.
    Affine(AffineStructure),
    Morphism {
        map: LinearMap,
        src: Structure,
        dst: Structure,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub scope: String,
    pub leaf: Leaf,
}

impl Step {
    fn new(scope: impl Into<String>, leaf: Leaf) -> Step {
        Step {
            scope: scope.into(),
            leaf,
        }
    }
}

/// One identity `lhs = rhs` between maps `V^{⊗arity} → W^{⊗order}`.
struct Law<'a> {
    id: &'static str,
    arity: usize,
    order: usize,
    fatal: bool,
    build: Box<dyn Fn() -> (LinearMap, LinearMap) + 'a>,
}

impl<'a> Law<'a> {
    fn new(
        id: &'static str,
        arity: usize,
        order: usize,
        build: impl Fn() -> (LinearMap, LinearMap) + 'a,
    ) -> Self {
        Law {
            id,
            arity,
            order,
            fatal: true,
            build: Box::new(build),
        }
    }

    fn advisory(mut self) -> Self {
        self.fatal = false;
        self
    }
}

// Shapes are validated before any law is built, so the matrix calculus
// cannot fail here.
fn k(a: &LinearMap, b: &LinearMap) -> LinearMap {
    a.kron(b).expect("validated shapes")
}

fn c(a: &LinearMap, b: &LinearMap) -> LinearMap {
    a.compose(b).expect("validated shapes")
}

fn add(a: &LinearMap, b: &LinearMap) -> LinearMap {
    a.add(b).expect("validated shapes")
}

fn sub(a: &LinearMap, b: &LinearMap) -> LinearMap {
    a.sub(b).expect("validated shapes")
}

struct Ctx {
    field: Field,
    n: usize,
}

impl Ctx {
    fn of(field: Field, n: usize) -> Ctx {
        Ctx { field, n }
    }

    fn id(&self) -> LinearMap {
        LinearMap::identity(self.field, self.n)
    }

    fn perm(&self, p: &[usize]) -> LinearMap {
        LinearMap::tensor_permutation(self.field, self.n, p)
    }
}

/// `x⊗y⊗z ↦ y⊗x⊗z`
const SWAP12: [usize; 3] = [1, 0, 2];
/// `x⊗y⊗z ↦ x⊗z⊗y`
const SWAP23: [usize; 3] = [0, 2, 1];
/// `x⊗y ↦ y⊗x`
const TAU: [usize; 2] = [1, 0];

fn hom_algebra_laws<'a>(a: &'a HomAlgebra) -> Vec<Law<'a>> {
    let cx = Ctx::of(a.field(), a.dim());
    let m = a.mu.as_map();
    let al = &a.alpha;
    let mut laws = vec![
        Law::new("multiplicativity", 2, 1, move || {
            (c(al, m), c(m, &k(al, al)))
        }),
        Law::new("hom-associativity", 3, 1, move || {
            (c(m, &k(al, m)), c(m, &k(m, al)))
        }),
    ];
    if let Some(u) = &a.unit {
        let um = LinearMap::from_vector(u);
        let id = cx.id();
        let (um2, id2) = (um.clone(), id.clone());
        laws.push(Law::new("unit-left", 1, 1, move || {
            (c(m, &k(&um, &id)), id.clone())
        }));
        laws.push(Law::new("unit-right", 1, 1, move || {
            (c(m, &k(&id2, &um2)), id2.clone())
        }));
    }
    laws
}

fn hom_coalgebra_laws<'a>(co: &'a HomCoalgebra, mode: CounitMode) -> Vec<Law<'a>> {
    let cx = Ctx::of(co.field(), co.dim());
    let d = co.delta.as_map();
    let al = &co.alpha;
    let mut laws = vec![
        Law::new("comultiplicativity", 1, 2, move || {
            (c(&k(al, al), d), c(d, al))
        }),
        Law::new("hom-coassociativity", 1, 3, move || {
            (c(&k(al, d), d), c(&k(d, al), d))
        }),
    ];
    if let Some(e) = &co.counit {
        let (side, target) = match mode {
            CounitMode::Eq7 => (al.clone(), c(al, al)),
            CounitMode::Eq8 => (cx.id(), al.clone()),
        };
        let (side2, target2) = (side.clone(), target.clone());
        laws.push(Law::new("counit-left", 1, 1, move || {
            (c(&k(e, &side), d), target.clone())
        }));
        laws.push(Law::new("counit-right", 1, 1, move || {
            (c(&k(&side2, e), d), target2.clone())
        }));
    }
    laws
}

fn compat_laws(b: &HomBialgebra) -> Vec<Law<'_>> {
    let cx = Ctx::of(b.field(), b.dim());
    let m = b.mu.as_map();
    let d = b.delta.as_map();
    let e = &b.counit;
    let al = &b.alpha;
    // (x₁⊗x₂)⊗(y₁⊗y₂) ↦ x₁⊗y₁⊗x₂⊗y₂ feeds the product on V⊗V.
    let mid = cx.perm(&[0, 2, 1, 3]);
    vec![
        Law::new("delta-multiplicative", 2, 2, move || {
            (c(d, m), c(&k(m, m), &c(&mid, &k(d, d))))
        }),
        Law::new("delta-alpha", 1, 2, move || (c(d, al), c(&k(al, al), d))),
        Law::new("counit-multiplicative", 2, 0, move || (c(e, m), k(e, e))),
        Law::new("counit-alpha", 1, 0, move || (c(e, al), e.clone())),
    ]
}

fn infinitesimal_laws(b: &HomBialgebra) -> Vec<Law<'_>> {
    let m = b.mu.as_map();
    let d = b.delta.as_map();
    let al = &b.alpha;
    vec![Law::new("infinitesimal", 2, 2, move || {
        let first = c(&k(m, al), &k(al, d));
        let second = c(&k(al, m), &k(d, al));
        let corr = k(&c(al, al), al);
        (c(d, m), sub(&add(&first, &second), &corr))
    })]
}

fn dialgebra_laws(dg: &HomDialgebra, strict: bool) -> Vec<Law<'_>> {
    let cx = Ctx::of(dg.field(), dg.dim());
    let l = dg.left.as_map();
    let r = dg.right.as_map();
    let al = &dg.alpha;
    let tw = if strict { cx.id() } else { al.clone() };
    let tw2 = tw.clone();
    let (la, ra) = if strict {
        ("left-associativity", "right-associativity")
    } else {
        ("left-hom-associativity", "right-hom-associativity")
    };
    vec![
        Law::new("left-multiplicativity", 2, 1, move || {
            (c(al, l), c(l, &k(al, al)))
        }),
        Law::new("right-multiplicativity", 2, 1, move || {
            (c(al, r), c(r, &k(al, al)))
        }),
        Law::new(la, 3, 1, move || (c(l, &k(&tw, l)), c(l, &k(l, &tw)))),
        Law::new(ra, 3, 1, move || (c(r, &k(&tw2, r)), c(r, &k(r, &tw2)))),
        // α(x)⊣(y⊣z) = α(x)⊣(y⊢z)
        Law::new("left-bar", 3, 1, move || (c(l, &k(al, l)), c(l, &k(al, r)))),
        // (x⊢y)⊣α(z) = α(x)⊢(y⊣z)
        Law::new("middle", 3, 1, move || (c(l, &k(r, al)), c(r, &k(al, l)))),
        // (x⊢y)⊢α(z) = (x⊣y)⊢α(z)
        Law::new("right-bar", 3, 1, move || {
            (c(r, &k(r, al)), c(r, &k(l, al)))
        }),
    ]
}

fn differential_laws(dg: &DifferentialHomAlgebra) -> Vec<Law<'_>> {
    let cx = Ctx::of(dg.field(), dg.dim());
    let m = dg.algebra.mu.as_map();
    let al = &dg.algebra.alpha;
    let d = &dg.d;
    let id = cx.id();
    vec![
        Law::new("leibniz-rule", 2, 1, move || {
            (c(d, m), add(&c(m, &k(d, &id)), &c(m, &k(&id, d))))
        }),
        Law::new("d-squared", 1, 1, move || {
            (c(d, d), LinearMap::zero(d.field(), d.rows(), d.cols()))
        }),
        Law::new("d-alpha", 1, 1, move || (c(d, al), c(al, d))),
    ]
}

fn leibniz_laws(lb: &HomLeibniz) -> Vec<Law<'_>> {
    let cx = Ctx::of(lb.field(), lb.dim());
    let b = lb.bracket.as_map();
    let al = &lb.alpha;
    let s23 = cx.perm(&SWAP23);
    let tau = cx.perm(&TAU);
    vec![
        // [[x,y],αz] = [[x,z],αy] + [αx,[y,z]]
        Law::new("leibniz-identity", 3, 1, move || {
            let outer = c(b, &k(b, al));
            (outer.clone(), add(&c(&outer, &s23), &c(b, &k(al, b))))
        }),
        Law::new("bracket-multiplicativity", 2, 1, move || {
            (c(al, b), c(b, &k(al, al)))
        })
        .advisory(),
        Law::new("skew-symmetry", 2, 1, move || {
            let neg = LinearMap::zero(b.field(), b.rows(), b.cols());
            (b.clone(), sub(&neg, &c(b, &tau)))
        })
        .advisory(),
    ]
}

fn prelie_laws(p: &HomPreLie) -> Vec<Law<'_>> {
    let cx = Ctx::of(p.field(), p.dim());
    let m = p.product.as_map();
    let al = &p.alpha;
    let s12 = cx.perm(&SWAP12);
    vec![Law::new("left-symmetry", 3, 1, move || {
        let assoc = sub(&c(m, &k(al, m)), &c(m, &k(m, al)));
        let swapped = c(&assoc, &s12);
        (assoc, swapped)
    })]
}

fn hlsda_laws(s: &Hlsda) -> Vec<Law<'_>> {
    let cx = Ctx::of(s.field(), s.dim());
    let l = s.left.as_map();
    let r = s.right.as_map();
    let al = &s.alpha;
    let s12 = cx.perm(&SWAP12);
    let s12b = s12.clone();
    vec![
        // α(x)⊣(y⊣z) = α(x)⊣(y⊢z)
        Law::new("left-bar", 3, 1, move || (c(l, &k(al, l)), c(l, &k(al, r)))),
        // (x⊢y)⊢α(z) = (x⊣y)⊢α(z)
        Law::new("right-bar", 3, 1, move || {
            (c(r, &k(r, al)), c(r, &k(l, al)))
        }),
        // α(x)⊣(y⊣z) − (x⊣y)⊣α(z) = α(y)⊢(x⊣z) − (y⊢x)⊣α(z)
        Law::new("left-symmetric-mixed", 3, 1, move || {
            let lhs = sub(&c(l, &k(al, l)), &c(l, &k(l, al)));
            let rhs = c(&sub(&c(r, &k(al, l)), &c(l, &k(r, al))), &s12);
            (lhs, rhs)
        }),
        // α(x)⊢(y⊢z) − (x⊢y)⊢α(z) = α(y)⊢(x⊢z) − (y⊢x)⊢α(z)
        Law::new("left-symmetric-right", 3, 1, move || {
            let assoc = sub(&c(r, &k(al, r)), &c(r, &k(r, al)));
            let swapped = c(&assoc, &s12b);
            (assoc, swapped)
        }),
    ]
}

fn affine_laws(a: &AffineStructure) -> Vec<Law<'_>> {
    let cx = Ctx::of(a.field(), a.dim());
    let b = a.leibniz.bracket.as_map();
    let al = &a.leibniz.alpha;
    let n1 = a.nabla1.as_map();
    let n2 = a.nabla2.as_map();
    let tau = cx.perm(&TAU);
    let s12 = cx.perm(&SWAP12);
    let s12b = s12.clone();
    vec![
        // ∇₂(x,y) − ∇₁(y,x) = [x,y]
        Law::new("bracket-compatibility", 2, 1, move || {
            (sub(n2, &c(n1, &tau)), b.clone())
        }),
        // ∇₁(∇₁(x,y),αz) = ∇₁(∇₂(x,y),αz)
        Law::new("nabla1-bar", 3, 1, move || {
            (c(n1, &k(n1, al)), c(n1, &k(n2, al)))
        }),
        // ∇₂(αx,∇₂(y,z)) = ∇₂(αx,∇₁(y,z))
        Law::new("nabla2-bar", 3, 1, move || {
            (c(n2, &k(al, n2)), c(n2, &k(al, n1)))
        }),
        // ∇₂(αx,∇₂(y,z)) − ∇₁(αy,∇₂(x,z)) = ∇₂([x,y],αz)
        Law::new("nabla2-symmetry", 3, 1, move || {
            let lhs = sub(&c(n2, &k(al, n2)), &c(&c(n1, &k(al, n2)), &s12));
            (lhs, c(n2, &k(b, al)))
        }),
        // ∇₁(αx,∇₁(y,z)) − ∇₁(αy,∇₁(x,z)) = ∇₁([x,y],αz)
        Law::new("nabla1-symmetry", 3, 1, move || {
            let t = c(n1, &k(al, n1));
            (sub(&t, &c(&t, &s12b)), c(n1, &k(b, al)))
        }),
    ]
}

fn morphism_laws<'a>(f: &'a LinearMap, src: &'a Structure, dst: &'a Structure) -> Vec<Law<'a>> {
    let mut laws = Vec::new();
    let targets = dst.sections();
    for (name, sec) in src.sections() {
        let Some((_, other)) = targets.iter().find(|(n, _)| *n == name) else {
            continue;
        };
        let id: &'static str = match name {
            "mu" => "preserves-mu",
            "mu2" => "preserves-mu2",
            "left" => "preserves-left",
            "right" => "preserves-right",
            "bracket" => "preserves-bracket",
            "nabla1" => "preserves-nabla1",
            "nabla2" => "preserves-nabla2",
            "delta" => "preserves-delta",
            "delta2" => "preserves-delta2",
            "alpha" => "preserves-alpha",
            "d" => "preserves-d",
            "unit" => "preserves-unit",
            "counit" => "preserves-counit",
            "counit2" => "preserves-counit2",
            _ => "preserves-map",
        };
        match (sec, *other) {
            (Section::Product(p), Section::Product(q)) => {
                laws.push(Law::new(id, 2, 1, move || {
                    (c(f, p.as_map()), c(q.as_map(), &k(f, f)))
                }))
            }
            (Section::Coproduct(p), Section::Coproduct(q)) => {
                laws.push(Law::new(id, 1, 2, move || {
                    (c(&k(f, f), p.as_map()), c(q.as_map(), f))
                }))
            }
            (Section::Endo(p), Section::Endo(q)) => {
                laws.push(Law::new(id, 1, 1, move || (c(f, p), c(q, f))))
            }
            (Section::Element(u), Section::Element(v)) => {
                laws.push(Law::new(id, 0, 1, move || {
                    (c(f, &LinearMap::from_vector(u)), LinearMap::from_vector(v))
                }))
            }
            (Section::Form(e), Section::Form(e2)) => {
                laws.push(Law::new(id, 1, 0, move || (c(e2, f), e.clone())))
            }
            _ => {}
        }
    }
    laws
}

/// Dimension of the argument space and of the value space of a leaf.
fn leaf_dims(leaf: &Leaf) -> (usize, usize) {
    match leaf {
        Leaf::HomAlgebra(a) => (a.dim(), a.dim()),
        Leaf::HomCoalgebra(co) => (co.dim(), co.dim()),
        Leaf::Compat(b) | Leaf::Infinitesimal(b) => (b.dim(), b.dim()),
        Leaf::HomDialgebra(d) => (d.dim(), d.dim()),
        Leaf::Differential(d) => (d.dim(), d.dim()),
        Leaf::HomLeibniz(l) => (l.dim(), l.dim()),
        Leaf::HomPreLie(p) => (p.dim(), p.dim()),
        Leaf::Hlsda(s) => (s.dim(), s.dim()),
        Leaf::Affine(a) => (a.dim(), a.dim()),
        Leaf::Morphism { src, dst, .. } => (src.dim(), dst.dim()),
    }
}

fn leaf_laws<'a>(leaf: &'a Leaf, opts: &CheckOptions) -> Vec<Law<'a>> {
    match leaf {
        Leaf::HomAlgebra(a) => hom_algebra_laws(a),
        Leaf::HomCoalgebra(co) => hom_coalgebra_laws(co, opts.counit_mode),
        Leaf::Compat(b) => compat_laws(b),
        Leaf::Infinitesimal(b) => infinitesimal_laws(b),
        Leaf::HomDialgebra(d) => dialgebra_laws(d, opts.strict_assoc),
        Leaf::Differential(d) => differential_laws(d),
        Leaf::HomLeibniz(l) => leibniz_laws(l),
        Leaf::HomPreLie(p) => prelie_laws(p),
        Leaf::Hlsda(s) => hlsda_laws(s),
        Leaf::Affine(a) => affine_laws(a),
        Leaf::Morphism { map, src, dst } => morphism_laws(map, src, dst),
    }
}

/// Axiom ids a leaf evaluates, in evaluation order, with their arities.
pub fn leaf_axioms(leaf: &Leaf, opts: &CheckOptions) -> Vec<(&'static str, usize, bool)> {
    leaf_laws(leaf, opts)
        .iter()
        .map(|l| (l.id, l.arity, l.fatal))
        .collect()
}

/// Columns where `lhs` and `rhs` differ, lexicographically, at most `cap`.
fn differing_columns(lhs: &LinearMap, rhs: &LinearMap, cap: usize) -> Vec<usize> {
    assert_eq!(
        (lhs.rows(), lhs.cols()),
        (rhs.rows(), rhs.cols()),
        "law sides disagree in shape"
    );
    let mut out = Vec::new();
    for col in 0..lhs.cols() {
        if out.len() >= cap {
            break;
        }
        if (0..lhs.rows()).any(|row| lhs.entry(row, col) != rhs.entry(row, col)) {
            out.push(col);
        }
    }
    out
}

/// Runs every step of a plan and collects the verdict.
pub fn run_plan(check: &str, steps: &[Step], opts: &CheckOptions) -> Verdict {
    let mut verdict = Verdict {
        check: check.to_string(),
        ..Verdict::default()
    };
    let cap = if opts.stop_on_failure {
        1
    } else {
        opts.witness_cap.max(1)
    };
    'steps: for step in steps {
        let (n_in, n_out) = leaf_dims(&step.leaf);
        for law in leaf_laws(&step.leaf, opts) {
            verdict.laws.push((step.scope.clone(), law.id.to_string()));
            let (lhs, rhs) = (law.build)();
            for col in differing_columns(&lhs, &rhs, cap) {
                let w = Witness {
                    axiom: law.id.to_string(),
                    scope: step.scope.clone(),
                    tuple: decode_tuple(col, n_in, law.arity),
                    lhs: lhs.column(col),
                    rhs: rhs.column(col),
                    order: law.order,
                    out_dim: n_out,
                };
                if law.fatal {
                    verdict.witnesses.push(w);
                } else {
                    verdict.advisories.push(w);
                }
            }
            if opts.stop_on_failure && !verdict.witnesses.is_empty() {
                break 'steps;
            }
        }
    }
    verdict
}

fn single(check: &str, leaf: Leaf, opts: &CheckOptions) -> Verdict {
    run_plan(check, &[Step::new("", leaf)], opts)
}

/// Multiplicativity and hom-associativity of `μ`, plus the unit laws when a
/// unit is declared.
pub fn check_hom_algebra(a: &HomAlgebra, opts: &CheckOptions) -> Verdict {
    single("hom-algebra", Leaf::HomAlgebra(a.clone()), opts)
}

/// Comultiplicativity, hom-coassociativity and (with a counit) the
/// hom-counital law in the selected mode.
pub fn check_hom_coalgebra(co: &HomCoalgebra, opts: &CheckOptions) -> Verdict {
    single("hom-coalgebra", Leaf::HomCoalgebra(co.clone()), opts)
}

/// `Δ` and `ε` are hom-algebra morphisms.
pub fn check_bialgebra_compat(b: &HomBialgebra, opts: &CheckOptions) -> Verdict {
    single("bialgebra-compat", Leaf::Compat(b.clone()), opts)
}

/// The unital hom-infinitesimal relation, with the underlying algebra and
/// coalgebra checks reported alongside.
pub fn check_infinitesimal(b: &HomBialgebra, opts: &CheckOptions) -> Verdict {
    run_plan("infinitesimal", &infinitesimal_steps("", b), opts)
}

pub fn check_dialgebra(d: &HomDialgebra, opts: &CheckOptions) -> Verdict {
    single("hom-dialgebra", Leaf::HomDialgebra(d.clone()), opts)
}

/// The differential laws together with the underlying hom-algebra check.
pub fn check_differential(d: &DifferentialHomAlgebra, opts: &CheckOptions) -> Verdict {
    let steps = [
        Step::new("", Leaf::HomAlgebra(d.algebra.clone())),
        Step::new("", Leaf::Differential(d.clone())),
    ];
    run_plan("differential-hom-algebra", &steps, opts)
}

/// The hom-Leibniz identity. Multiplicativity of the bracket and skew
/// symmetry are reported as advisories.
pub fn check_hom_leibniz(l: &HomLeibniz, opts: &CheckOptions) -> Verdict {
    single("hom-leibniz", Leaf::HomLeibniz(l.clone()), opts)
}

pub fn check_hom_prelie(p: &HomPreLie, opts: &CheckOptions) -> Verdict {
    single("hom-prelie", Leaf::HomPreLie(p.clone()), opts)
}

pub fn check_hlsda(s: &Hlsda, opts: &CheckOptions) -> Verdict {
    single("hlsda", Leaf::Hlsda(s.clone()), opts)
}

/// The affine identities together with the hom-Leibniz check of the bracket.
pub fn check_affine(a: &AffineStructure, opts: &CheckOptions) -> Verdict {
    let steps = [
        Step::new("", Leaf::HomLeibniz(a.leibniz.clone())),
        Step::new("", Leaf::Affine(a.clone())),
    ];
    run_plan("affine", &steps, opts)
}

/// `f` intertwines every map the two structures carry.
pub fn check_morphism(
    f: &LinearMap,
    src: &Structure,
    dst: &Structure,
    opts: &CheckOptions,
) -> Result<Verdict, CheckError> {
    Ok(run_plan("morphism", &morphism_steps(f, src, dst)?, opts))
}

fn morphism_steps(
    f: &LinearMap,
    src: &Structure,
    dst: &Structure,
) -> Result<Vec<Step>, CheckError> {
    if src.kind() != dst.kind() {
        return Err(CheckError::KindMismatch {
            suite: format!("morphism to {}", dst.kind()),
            kind: src.kind(),
        });
    }
    for s in [src, dst] {
        let v = validate(s);
        if !v.is_clean() {
            return Err(CheckError::Invalid(v.defects));
        }
    }
    if f.rows() != dst.dim() || f.cols() != src.dim() {
        return Err(CheckError::MorphismShape {
            rows: f.rows(),
            cols: f.cols(),
            src: src.dim(),
            dst: dst.dim(),
        });
    }
    Ok(vec![Step::new(
        "",
        Leaf::Morphism {
            map: f.clone(),
            src: src.clone(),
            dst: dst.clone(),
        },
    )])
}

fn bialgebra_steps(scope: &str, b: &HomBialgebra) -> Vec<Step> {
    vec![
        Step::new(scope, Leaf::HomAlgebra(b.algebra())),
        Step::new(scope, Leaf::HomCoalgebra(b.coalgebra())),
        Step::new(scope, Leaf::Compat(b.clone())),
    ]
}

fn infinitesimal_steps(scope: &str, b: &HomBialgebra) -> Vec<Step> {
    vec![
        Step::new(scope, Leaf::HomAlgebra(b.algebra())),
        Step::new(scope, Leaf::HomCoalgebra(b.coalgebra())),
        Step::new(scope, Leaf::Infinitesimal(b.clone())),
    ]
}

/// Drops steps whose leaf data already appeared earlier in the plan.
fn dedup(steps: Vec<Step>) -> Vec<Step> {
    let mut out: Vec<Step> = Vec::new();
    for s in steps {
        if !out.iter().any(|o| o.leaf == s.leaf) {
            out.push(s);
        }
    }
    out
}

fn view(suite: Suite, t: &TwoHomStructure, i: usize, j: usize) -> Result<HomBialgebra, CheckError> {
    t.bialgebra_view(i, j).ok_or_else(|| {
        let section = if t.unit.is_none() {
            "unit"
        } else if j == 1 {
            if t.delta1.is_none() {
                "delta"
            } else {
                "counit"
            }
        } else if t.delta2.is_none() {
            "delta2"
        } else {
            "counit2"
        };
        CheckError::Absent {
            suite: suite.as_str().to_string(),
            section,
        }
    })
}

fn scope(i: usize, j: usize) -> String {
    let mu = if i == 1 { "mu" } else { "mu2" };
    let delta = if j == 1 { "delta" } else { "delta2" };
    format!("{mu},{delta}")
}

fn two_hom_steps(suite: Suite, t: &TwoHomStructure) -> Result<Vec<Step>, CheckError> {
    let mut steps = Vec::new();
    match suite {
        Suite::TwoHomAssocAlgebra => {
            steps.push(Step::new("mu", Leaf::HomAlgebra(t.algebra_view(1))));
            steps.push(Step::new("mu2", Leaf::HomAlgebra(t.algebra_view(2))));
        }
        Suite::TwoHomAssocBialgebra => {
            steps.extend(bialgebra_steps(&scope(1, 1), &view(suite, t, 1, 1)?));
            steps.extend(infinitesimal_steps(&scope(2, 1), &view(suite, t, 2, 1)?));
        }
        Suite::TwoHomBialgebra => {
            for (i, j) in [(1, 1), (2, 2), (1, 2), (2, 1)] {
                steps.extend(bialgebra_steps(&scope(i, j), &view(suite, t, i, j)?));
            }
        }
        Suite::TwoTwoHomBialgebra => {
            for (i, j) in [(1, 1), (2, 2)] {
                steps.extend(bialgebra_steps(&scope(i, j), &view(suite, t, i, j)?));
            }
            for (i, j) in [(1, 2), (2, 1)] {
                steps.extend(infinitesimal_steps(&scope(i, j), &view(suite, t, i, j)?));
            }
        }
        _ => unreachable!("not a two-product suite"),
    }
    Ok(dedup(steps))
}

/// Type `(1-1)`, `(1-2)`, `(2-1)` or `(2-2)` by equality of the two products
/// and of the two coproducts.
pub fn two_hom_type(t: &TwoHomStructure) -> Option<&'static str> {
    let same_mu = t.mu1 == t.mu2;
    let same_delta = t.delta1.as_ref()? == t.delta2.as_ref()?;
    Some(match (same_mu, same_delta) {
        (true, true) => "(1-1)",
        (true, false) => "(1-2)",
        (false, true) => "(2-1)",
        (false, false) => "(2-2)",
    })
}

fn mismatch(suite: Suite, s: &Structure) -> CheckError {
    CheckError::KindMismatch {
        suite: suite.as_str().to_string(),
        kind: s.kind(),
    }
}

fn prelie_of(mu: &ProductTensor, alpha: &LinearMap) -> HomPreLie {
    HomPreLie {
        product: mu.clone(),
        alpha: alpha.clone(),
    }
}

/// The steps a suite runs on a structure.
pub fn plan(suite: Suite, s: &Structure) -> Result<Vec<Step>, CheckError> {
    let v = validate(s);
    if !v.is_clean() {
        return Err(CheckError::Invalid(v.defects));
    }
    let steps = match (suite, s) {
        (Suite::HomAlgebra, Structure::HomAlgebra(a)) => {
            vec![Step::new("", Leaf::HomAlgebra(a.clone()))]
        }
        (Suite::HomAlgebra, Structure::HomBialgebra(b)) => {
            vec![Step::new("", Leaf::HomAlgebra(b.algebra()))]
        }
        (Suite::HomAlgebra, Structure::Differential(d)) => {
            vec![Step::new("", Leaf::HomAlgebra(d.algebra.clone()))]
        }
        (Suite::HomCoalgebra, Structure::HomCoalgebra(co)) => {
            vec![Step::new("", Leaf::HomCoalgebra(co.clone()))]
        }
        (Suite::HomCoalgebra, Structure::HomBialgebra(b)) => {
            vec![Step::new("", Leaf::HomCoalgebra(b.coalgebra()))]
        }
        (Suite::HomBialgebra, Structure::HomBialgebra(b)) => bialgebra_steps("", b),
        (Suite::BialgebraCompat, Structure::HomBialgebra(b)) => {
            vec![Step::new("", Leaf::Compat(b.clone()))]
        }
        (Suite::Infinitesimal, Structure::HomBialgebra(b)) => infinitesimal_steps("", b),
        (
            Suite::TwoHomAssocAlgebra
            | Suite::TwoHomAssocBialgebra
            | Suite::TwoHomBialgebra
            | Suite::TwoTwoHomBialgebra,
            Structure::TwoHom(t),
        ) => two_hom_steps(suite, t)?,
        (Suite::HomDialgebra, Structure::HomDialgebra(d)) => {
            vec![Step::new("", Leaf::HomDialgebra(d.clone()))]
        }
        (Suite::HomDialgebra, Structure::Hlsda(h)) => {
            vec![Step::new("", Leaf::HomDialgebra(h.clone().into()))]
        }
        (Suite::Differential, Structure::Differential(d)) => vec![
            Step::new("", Leaf::HomAlgebra(d.algebra.clone())),
            Step::new("", Leaf::Differential(d.clone())),
        ],
        (Suite::HomLeibniz, Structure::HomLeibniz(l)) => {
            vec![Step::new("", Leaf::HomLeibniz(l.clone()))]
        }
        (Suite::HomLeibniz, Structure::Affine(a)) => {
            vec![Step::new("", Leaf::HomLeibniz(a.leibniz.clone()))]
        }
        (Suite::HomPreLie, Structure::HomPreLie(p)) => {
            vec![Step::new("", Leaf::HomPreLie(p.clone()))]
        }
        (Suite::HomPreLie, Structure::HomAlgebra(a)) => {
            vec![Step::new("", Leaf::HomPreLie(prelie_of(&a.mu, &a.alpha)))]
        }
        (Suite::Hlsda, Structure::Hlsda(h)) => vec![Step::new("", Leaf::Hlsda(h.clone()))],
        (Suite::Hlsda, Structure::HomDialgebra(d)) => {
            vec![Step::new("", Leaf::Hlsda(d.clone().into()))]
        }
        (Suite::Affine, Structure::Affine(a)) => vec![
            Step::new("", Leaf::HomLeibniz(a.leibniz.clone())),
            Step::new("", Leaf::Affine(a.clone())),
        ],
        _ => return Err(mismatch(suite, s)),
    };
    Ok(steps)
}

/// Runs a suite on a structure.
pub fn check(suite: Suite, s: &Structure, opts: &CheckOptions) -> Result<Verdict, CheckError> {
    let steps = plan(suite, s)?;
    let mut verdict = run_plan(suite.as_str(), &steps, opts);
    if let (Suite::TwoHomBialgebra | Suite::TwoTwoHomBialgebra, Structure::TwoHom(t)) = (suite, s) {
        if let Some(ty) = two_hom_type(t) {
            verdict.notes.push(format!("type {ty}"));
        }
    }
    Ok(verdict)
}

/// `check` with the suite chosen from the structure's own kind.
pub fn check_structure(s: &Structure, opts: &CheckOptions) -> Result<Verdict, CheckError> {
    check(Suite::for_kind(s.kind()), s, opts)
}

/// Suites that apply to a structure of the given kind.
pub fn applicable_suites(kind: StructureKind) -> Vec<Suite> {
    use StructureKind as K;
    match kind {
        K::HomAlgebra => vec![Suite::HomAlgebra, Suite::HomPreLie],
        K::HomCoalgebra => vec![Suite::HomCoalgebra],
        K::HomBialgebra => vec![
            Suite::HomBialgebra,
            Suite::HomAlgebra,
            Suite::HomCoalgebra,
            Suite::BialgebraCompat,
            Suite::Infinitesimal,
        ],
        K::TwoHomAssocAlgebra => vec![Suite::TwoHomAssocAlgebra],
        K::TwoHomAssocBialgebra => vec![Suite::TwoHomAssocBialgebra, Suite::TwoHomAssocAlgebra],
        K::TwoHomBialgebra | K::TwoTwoHomBialgebra => vec![
            Suite::TwoHomBialgebra,
            Suite::TwoTwoHomBialgebra,
            Suite::TwoHomAssocBialgebra,
            Suite::TwoHomAssocAlgebra,
        ],
        K::HomDialgebra => vec![Suite::HomDialgebra, Suite::Hlsda],
        K::DifferentialHomAlgebra => vec![Suite::Differential, Suite::HomAlgebra],
        K::HomLeibniz => vec![Suite::HomLeibniz],
        K::HomPreLie => vec![Suite::HomPreLie],
        K::Hlsda => vec![Suite::Hlsda, Suite::HomDialgebra],
        K::Affine => vec![Suite::Affine, Suite::HomLeibniz],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CoproductTensor;

    const Q: Field = Field::Rational;

    fn hom3(a: i64, b: i64, alpha: &[i64]) -> HomAlgebra {
        let (n, mut c) = (3, vec![0i64; 27]);
        let mut set = |i: usize, j: usize, k: usize, v: i64| c[(i * n + j) * n + k] = v;
        set(0, 0, 0, a);
        set(1, 1, 1, a);
        set(0, 1, 1, a);
        set(1, 0, 1, a);
        set(1, 2, 2, b);
        set(0, 2, 2, b);
        set(2, 0, 2, b);
        let mu = ProductTensor::from_i64(Q, 3, &c);
        HomAlgebra::new(mu, LinearMap::from_i64(Q, 3, 3, alpha))
    }

    fn counital(eps: [i64; 2]) -> HomCoalgebra {
        // Δ(e1) = Δ(e2) = e2⊗e2, α(e1) = α(e2) = e2
        HomCoalgebra {
            delta: CoproductTensor::from_i64(Q, 2, &[0, 0, 0, 1, 0, 0, 0, 1]),
            alpha: LinearMap::from_i64(Q, 2, 2, &[0, 0, 1, 1]),
            counit: Some(LinearMap::from_i64(Q, 1, 2, &eps)),
        }
    }

    fn ex1() -> HomBialgebra {
        HomBialgebra {
            mu: ProductTensor::from_i64(Q, 2, &[1, 0, 0, 1, 0, 1, 0, 1]),
            unit: Vector::basis(Q, 2, 0),
            delta: CoproductTensor::from_i64(Q, 2, &[1, 0, 0, 0, 1, 0, 0, 0]),
            counit: LinearMap::from_i64(Q, 1, 2, &[1, 0]),
            alpha: LinearMap::from_i64(Q, 2, 2, &[0, 0, 1, 1]),
        }
    }

    #[test]
    fn three_dim_example() {
        let opts = CheckOptions::default();
        let a = hom3(1, 2, &[1, 0, 0, 0, 1, 0, 0, 0, 2]);
        assert!(check_hom_algebra(&a, &opts).passed());

        let plain = hom3(1, 2, &[1, 0, 0, 0, 1, 0, 0, 0, 1]);
        let v = check_hom_algebra(&plain, &opts);
        let w = v
            .witnesses
            .iter()
            .find(|w| w.axiom == "hom-associativity" && w.tuple == [0, 0, 2])
            .expect("witness at (e1,e1,e3)");
        // μ(e1, μ(e1, e3)) = 4e3, μ(μ(e1, e1), e3) = 2e3
        assert_eq!(w.lhs, Vector::from_i64(Q, &[0, 0, 4]));
        assert_eq!(w.rhs, Vector::from_i64(Q, &[0, 0, 2]));
        assert_eq!(w.rhs.sub(&w.lhs).unwrap(), Vector::from_i64(Q, &[0, 0, -2]));
    }

    #[test]
    fn counit_modes() {
        let opts = CheckOptions::default();
        assert!(check_hom_coalgebra(&counital([0, 1]), &opts).passed());
        let bad = check_hom_coalgebra(&counital([1, 0]), &opts);
        let w = &bad.witnesses[0];
        assert_eq!(
            (w.axiom.as_str(), w.tuple.as_slice()),
            ("counit-left", &[0][..])
        );
        assert_eq!(w.lhs, Vector::from_i64(Q, &[0, 0]));
        assert_eq!(w.rhs, Vector::from_i64(Q, &[0, 1]));
    }

    #[test]
    fn ex1_failures() {
        let opts = CheckOptions::default();
        let v = check_bialgebra_compat(&ex1(), &opts);
        assert_eq!(
            v.failed_axioms().into_iter().collect::<Vec<_>>(),
            ["counit-alpha", "delta-alpha"]
        );
        let w = v
            .witnesses
            .iter()
            .find(|w| w.axiom == "delta-alpha")
            .unwrap();
        assert_eq!(w.tuple, [0]);
        assert_eq!(w.lhs, Vector::from_i64(Q, &[1, 0, 0, 0]));
        assert_eq!(w.rhs, Vector::from_i64(Q, &[0, 0, 0, 1]));

        let inf = check_infinitesimal(&ex1(), &opts);
        let w = inf
            .witnesses
            .iter()
            .find(|w| w.axiom == "infinitesimal")
            .unwrap();
        assert_eq!(w.tuple, [0, 0]);
        assert_eq!(w.lhs, Vector::from_i64(Q, &[1, 0, 0, 0]));
        assert_eq!(w.rhs, Vector::from_i64(Q, &[0, 0, 0, 1]));
    }

    #[test]
    fn one_dimensional_bialgebra() {
        let b = HomBialgebra {
            mu: ProductTensor::from_i64(Q, 1, &[1]),
            unit: Vector::basis(Q, 1, 0),
            delta: CoproductTensor::from_i64(Q, 1, &[1]),
            counit: LinearMap::from_i64(Q, 1, 1, &[1]),
            alpha: LinearMap::identity(Q, 1),
        };
        let s = Structure::HomBialgebra(b.clone());
        let opts = CheckOptions::default();
        assert!(check(Suite::HomBialgebra, &s, &opts).unwrap().passed());
        assert!(check_infinitesimal(&b, &opts).passed());
    }

    #[test]
    fn witness_cap_and_stop() {
        let plain = hom3(1, 2, &[1, 0, 0, 0, 1, 0, 0, 0, 1]);
        let mut opts = CheckOptions {
            witness_cap: 1,
            ..CheckOptions::default()
        };
        assert_eq!(check_hom_algebra(&plain, &opts).witnesses.len(), 1);
        opts.witness_cap = 100;
        let all = check_hom_algebra(&plain, &opts).witnesses;
        let tuples: Vec<_> = all.iter().map(|w| w.tuple.clone()).collect();
        let mut sorted = tuples.clone();
        sorted.sort();
        assert_eq!(tuples, sorted);
        opts.stop_on_failure = true;
        assert_eq!(check_hom_algebra(&plain, &opts).witnesses.len(), 1);
    }

    #[test]
    fn morphism_flip_fails_and_alpha_passes() {
        let opts = CheckOptions::default();
        let mu = ProductTensor::from_i64(Q, 2, &[1, 0, 0, 1, 0, 1, 0, 1]);
        let alpha = LinearMap::from_i64(Q, 2, 2, &[0, 0, 1, 1]);
        let s = Structure::HomAlgebra(HomAlgebra::new(mu, alpha.clone()));
        let flip = LinearMap::from_i64(Q, 2, 2, &[0, 1, 1, 0]);
        assert!(!check_morphism(&flip, &s, &s, &opts).unwrap().passed());
        assert!(check_morphism(&alpha, &s, &s, &opts).unwrap().passed());
        let id = LinearMap::identity(Q, 2);
        assert!(check_morphism(&id, &s, &s, &opts).unwrap().passed());
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        let s = Structure::HomCoalgebra(counital([0, 1]));
        assert!(matches!(
            check(Suite::HomDialgebra, &s, &CheckOptions::default()),
            Err(CheckError::KindMismatch { .. })
        ));
    }

    #[test]
    fn suite_names_roundtrip() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.as_str()), Some(s));
        }
    }
}
