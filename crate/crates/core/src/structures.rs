//! Structure records for every hom-algebraic species handled by the toolkit,
//! and structural validation.

use std::fmt;

use thiserror::Error;

use crate::linalg::{apply_bilinear, CoproductTensor, LinearMap, ProductTensor, Vector};
use crate::scalar::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("structure declares no {0}")]
    Absent(&'static str),
    #[error("unknown structure kind {0:?}")]
    UnknownKind(String),
    #[error("section {0} is required for this kind")]
    Missing(String),
    #[error("section {0} has the wrong type")]
    SectionType(String),
    #[error("section {0} is not used by this kind")]
    Unexpected(String),
}

/// `(V, μ, α)` with an optional unit `η(1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomAlgebra {
    pub mu: ProductTensor,
    pub alpha: LinearMap,
    pub unit: Option<Vector>,
}

impl HomAlgebra {
    pub fn new(mu: ProductTensor, alpha: LinearMap) -> Self {
        HomAlgebra {
            mu,
            alpha,
            unit: None,
        }
    }

    pub fn with_unit(mut self, unit: Vector) -> Self {
        self.unit = Some(unit);
        self
    }

    /// The classical algebra `(V, μ)` viewed with `α = id`.
    pub fn classical(mu: ProductTensor) -> Self {
        let alpha = LinearMap::identity(mu.field(), mu.dim());
        HomAlgebra::new(mu, alpha)
    }

    pub fn dim(&self) -> usize {
        self.mu.dim()
    }

    pub fn field(&self) -> Field {
        self.mu.field()
    }
}

/// `(V, Δ, α)` with an optional counit `ε` stored as a `1×n` map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomCoalgebra {
    pub delta: CoproductTensor,
    pub alpha: LinearMap,
    pub counit: Option<LinearMap>,
}

impl HomCoalgebra {
    pub fn dim(&self) -> usize {
        self.delta.dim()
    }

    pub fn field(&self) -> Field {
        self.delta.field()
    }
}

/// `(V, μ, η, Δ, ε, α)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomBialgebra {
    pub mu: ProductTensor,
    pub unit: Vector,
    pub delta: CoproductTensor,
    pub counit: LinearMap,
    pub alpha: LinearMap,
}

impl HomBialgebra {
    pub fn dim(&self) -> usize {
        self.mu.dim()
    }

    pub fn field(&self) -> Field {
        self.mu.field()
    }

    pub fn algebra(&self) -> HomAlgebra {
        HomAlgebra {
            mu: self.mu.clone(),
            alpha: self.alpha.clone(),
            unit: Some(self.unit.clone()),
        }
    }

    pub fn coalgebra(&self) -> HomCoalgebra {
        HomCoalgebra {
            delta: self.delta.clone(),
            alpha: self.alpha.clone(),
            counit: Some(self.counit.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TwoHomVariant {
    /// Two hom-associative products sharing `α` (and the unit, if any).
    AssocAlgebra,
    /// `(μ₁, Δ)` a unital hom-bialgebra, `(μ₂, Δ)` unital infinitesimal.
    AssocBialgebra,
    /// All four pairings `(μ_i, Δ_j)` unital hom-bialgebras.
    Bialgebra,
    /// `(μ_i, Δ_i)` hom-bialgebras, `(μ_i, Δ_j)` (`i ≠ j`) infinitesimal.
    TwoTwoBialgebra,
}

impl TwoHomVariant {
    pub fn kind(self) -> StructureKind {
        match self {
            TwoHomVariant::AssocAlgebra => StructureKind::TwoHomAssocAlgebra,
            TwoHomVariant::AssocBialgebra => StructureKind::TwoHomAssocBialgebra,
            TwoHomVariant::Bialgebra => StructureKind::TwoHomBialgebra,
            TwoHomVariant::TwoTwoBialgebra => StructureKind::TwoTwoHomBialgebra,
        }
    }

    fn required(self) -> &'static [&'static str] {
        match self {
            TwoHomVariant::AssocAlgebra => &[],
            TwoHomVariant::AssocBialgebra => &["unit", "delta", "counit"],
            TwoHomVariant::Bialgebra | TwoHomVariant::TwoTwoBialgebra => {
                &["unit", "delta", "delta2", "counit", "counit2"]
            }
        }
    }
}

/// A space with two products and, depending on the variant, one or two
/// coproducts. The `(μ_i, Δ_j)` bialgebra views are built on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoHomStructure {
    pub variant: TwoHomVariant,
    pub mu1: ProductTensor,
    pub mu2: ProductTensor,
    pub unit: Option<Vector>,
    pub delta1: Option<CoproductTensor>,
    pub delta2: Option<CoproductTensor>,
    pub counit1: Option<LinearMap>,
    pub counit2: Option<LinearMap>,
    pub alpha: LinearMap,
}

impl TwoHomStructure {
    pub fn dim(&self) -> usize {
        self.mu1.dim()
    }

    pub fn field(&self) -> Field {
        self.mu1.field()
    }

    fn product(&self, i: usize) -> &ProductTensor {
        if i == 1 {
            &self.mu1
        } else {
            &self.mu2
        }
    }

    /// `(V, μ_i, η, α)` for `i ∈ {1, 2}`.
    pub fn algebra_view(&self, i: usize) -> HomAlgebra {
        HomAlgebra {
            mu: self.product(i).clone(),
            alpha: self.alpha.clone(),
            unit: self.unit.clone(),
        }
    }

    /// `(V, μ_i, η, Δ_j, ε_j, α)`; `None` when a required map is absent.
    pub fn bialgebra_view(&self, i: usize, j: usize) -> Option<HomBialgebra> {
        let (delta, counit) = if j == 1 {
            (self.delta1.as_ref()?, self.counit1.as_ref()?)
        } else {
            (self.delta2.as_ref()?, self.counit2.as_ref()?)
        };
        Some(HomBialgebra {
            mu: self.product(i).clone(),
            unit: self.unit.clone()?,
            delta: delta.clone(),
            counit: counit.clone(),
            alpha: self.alpha.clone(),
        })
    }
}

/// `(D, ⊣, ⊢, α)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomDialgebra {
    pub left: ProductTensor,
    pub right: ProductTensor,
    pub alpha: LinearMap,
}

impl HomDialgebra {
    pub fn dim(&self) -> usize {
        self.left.dim()
    }

    pub fn field(&self) -> Field {
        self.left.field()
    }
}

/// A hom-algebra with a differential `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialHomAlgebra {
    pub algebra: HomAlgebra,
    pub d: LinearMap,
}

impl DifferentialHomAlgebra {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomLeibniz {
    pub bracket: ProductTensor,
    pub alpha: LinearMap,
}

impl HomLeibniz {
    pub fn dim(&self) -> usize {
        self.bracket.dim()
    }

    pub fn field(&self) -> Field {
        self.bracket.field()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomPreLie {
    pub product: ProductTensor,
    pub alpha: LinearMap,
}

impl HomPreLie {
    pub fn dim(&self) -> usize {
        self.product.dim()
    }

    pub fn field(&self) -> Field {
        self.product.field()
    }
}

/// Hom-left symmetric dialgebra `(S, ⊣, ⊢, α)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hlsda {
    pub left: ProductTensor,
    pub right: ProductTensor,
    pub alpha: LinearMap,
}

impl Hlsda {
    pub fn dim(&self) -> usize {
        self.left.dim()
    }

    pub fn field(&self) -> Field {
        self.left.field()
    }
}

impl From<HomDialgebra> for Hlsda {
    fn from(d: HomDialgebra) -> Self {
        Hlsda {
            left: d.left,
            right: d.right,
            alpha: d.alpha,
        }
    }
}

impl From<Hlsda> for HomDialgebra {
    fn from(s: Hlsda) -> Self {
        HomDialgebra {
            left: s.left,
            right: s.right,
            alpha: s.alpha,
        }
    }
}

/// Pair `∇₁, ∇₂` over a hom-Leibniz algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineStructure {
    pub leibniz: HomLeibniz,
    pub nabla1: ProductTensor,
    pub nabla2: ProductTensor,
}

impl AffineStructure {
    pub fn dim(&self) -> usize {
        self.leibniz.dim()
    }

    pub fn field(&self) -> Field {
        self.leibniz.field()
    }
}

/// A linear map between two structures of the same kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub map: LinearMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureKind {
    HomAlgebra,
    HomCoalgebra,
    HomBialgebra,
    TwoHomAssocAlgebra,
    TwoHomAssocBialgebra,
    TwoHomBialgebra,
    TwoTwoHomBialgebra,
    HomDialgebra,
    DifferentialHomAlgebra,
    HomLeibniz,
    HomPreLie,
    Hlsda,
    Affine,
}

impl StructureKind {
    pub const ALL: [StructureKind; 13] = [
        StructureKind::HomAlgebra,
        StructureKind::HomCoalgebra,
        StructureKind::HomBialgebra,
        StructureKind::TwoHomAssocAlgebra,
        StructureKind::TwoHomAssocBialgebra,
        StructureKind::TwoHomBialgebra,
        StructureKind::TwoTwoHomBialgebra,
        StructureKind::HomDialgebra,
        StructureKind::DifferentialHomAlgebra,
        StructureKind::HomLeibniz,
        StructureKind::HomPreLie,
        StructureKind::Hlsda,
        StructureKind::Affine,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StructureKind::HomAlgebra => "hom-algebra",
            StructureKind::HomCoalgebra => "hom-coalgebra",
            StructureKind::HomBialgebra => "hom-bialgebra",
            StructureKind::TwoHomAssocAlgebra => "2-hom-assoc-algebra",
            StructureKind::TwoHomAssocBialgebra => "2-hom-assoc-bialgebra",
            StructureKind::TwoHomBialgebra => "2-hom-bialgebra",
            StructureKind::TwoTwoHomBialgebra => "2-2-hom-bialgebra",
            StructureKind::HomDialgebra => "hom-dialgebra",
            StructureKind::DifferentialHomAlgebra => "differential-hom-algebra",
            StructureKind::HomLeibniz => "hom-leibniz",
            StructureKind::HomPreLie => "hom-prelie",
            StructureKind::Hlsda => "hlsda",
            StructureKind::Affine => "affine",
        }
    }

    pub fn parse(s: &str) -> Result<StructureKind, StructureError> {
        StructureKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| StructureError::UnknownKind(s.to_string()))
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Any structure the toolkit knows about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    HomAlgebra(HomAlgebra),
    HomCoalgebra(HomCoalgebra),
    HomBialgebra(HomBialgebra),
    TwoHom(TwoHomStructure),
    HomDialgebra(HomDialgebra),
    Differential(DifferentialHomAlgebra),
    HomLeibniz(HomLeibniz),
    HomPreLie(HomPreLie),
    Hlsda(Hlsda),
    Affine(AffineStructure),
}

/// Borrowed view of one named map of a structure.
#[derive(Debug, Clone, Copy)]
pub enum Section<'a> {
    Product(&'a ProductTensor),
    Coproduct(&'a CoproductTensor),
    /// Endomorphism `V → V` (`α`, `d`).
    Endo(&'a LinearMap),
    /// Vector in `V` (the unit).
    Element(&'a Vector),
    /// Linear form `V → K` (a counit).
    Form(&'a LinearMap),
}

impl Section<'_> {
    pub fn field(&self) -> Field {
        match self {
            Section::Product(p) => p.field(),
            Section::Coproduct(q) => q.field(),
            Section::Endo(m) | Section::Form(m) => m.field(),
            Section::Element(v) => v.field(),
        }
    }
}

/// Owned counterpart of [`Section`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SectionData {
    Product(ProductTensor),
    Coproduct(CoproductTensor),
    Endo(LinearMap),
    Element(Vector),
    Form(LinearMap),
}

impl From<Section<'_>> for SectionData {
    fn from(s: Section<'_>) -> Self {
        match s {
            Section::Product(p) => SectionData::Product(p.clone()),
            Section::Coproduct(q) => SectionData::Coproduct(q.clone()),
            Section::Endo(m) => SectionData::Endo(m.clone()),
            Section::Element(v) => SectionData::Element(v.clone()),
            Section::Form(m) => SectionData::Form(m.clone()),
        }
    }
}

/// What a section name holds, independent of the kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionType {
    Product,
    Coproduct,
    Endo,
    Element,
    Form,
}

pub fn section_type(name: &str) -> Option<SectionType> {
    Some(match name {
        "mu" | "mu2" | "left" | "right" | "bracket" | "nabla1" | "nabla2" => SectionType::Product,
        "delta" | "delta2" => SectionType::Coproduct,
        "alpha" | "d" => SectionType::Endo,
        "unit" => SectionType::Element,
        "counit" | "counit2" => SectionType::Form,
        _ => return None,
    })
}

/// Section names a kind accepts, required ones first flagged `true`.
pub fn kind_sections(kind: StructureKind) -> &'static [(&'static str, bool)] {
    use StructureKind as K;
    match kind {
        K::HomAlgebra => &[("mu", true), ("alpha", true), ("unit", false)],
        K::HomCoalgebra => &[("delta", true), ("alpha", true), ("counit", false)],
        K::HomBialgebra => &[
            ("mu", true),
            ("delta", true),
            ("alpha", true),
            ("unit", true),
            ("counit", true),
        ],
        K::TwoHomAssocAlgebra => &[
            ("mu", true),
            ("mu2", true),
            ("alpha", true),
            ("unit", false),
        ],
        K::TwoHomAssocBialgebra => &[
            ("mu", true),
            ("mu2", true),
            ("delta", true),
            ("alpha", true),
            ("unit", true),
            ("counit", true),
        ],
        K::TwoHomBialgebra | K::TwoTwoHomBialgebra => &[
            ("mu", true),
            ("mu2", true),
            ("delta", true),
            ("delta2", true),
            ("alpha", true),
            ("unit", true),
            ("counit", true),
            ("counit2", true),
        ],
        K::HomDialgebra | K::Hlsda => &[("left", true), ("right", true), ("alpha", true)],
        K::DifferentialHomAlgebra => &[("mu", true), ("alpha", true), ("d", true), ("unit", false)],
        K::HomLeibniz => &[("bracket", true), ("alpha", true)],
        K::HomPreLie => &[("mu", true), ("alpha", true)],
        K::Affine => &[
            ("bracket", true),
            ("alpha", true),
            ("nabla1", true),
            ("nabla2", true),
        ],
    }
}

macro_rules! push_opt {
    ($out:ident, $name:literal, $opt:expr, $variant:ident) => {
        if let Some(x) = $opt.as_ref() {
            $out.push(($name, Section::$variant(x)));
        }
    };
}

impl Structure {
    pub fn kind(&self) -> StructureKind {
        match self {
            Structure::HomAlgebra(_) => StructureKind::HomAlgebra,
            Structure::HomCoalgebra(_) => StructureKind::HomCoalgebra,
            Structure::HomBialgebra(_) => StructureKind::HomBialgebra,
            Structure::TwoHom(t) => t.variant.kind(),
            Structure::HomDialgebra(_) => StructureKind::HomDialgebra,
            Structure::Differential(_) => StructureKind::DifferentialHomAlgebra,
            Structure::HomLeibniz(_) => StructureKind::HomLeibniz,
            Structure::HomPreLie(_) => StructureKind::HomPreLie,
            Structure::Hlsda(_) => StructureKind::Hlsda,
            Structure::Affine(_) => StructureKind::Affine,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Structure::HomAlgebra(a) => a.dim(),
            Structure::HomCoalgebra(c) => c.dim(),
            Structure::HomBialgebra(b) => b.dim(),
            Structure::TwoHom(t) => t.dim(),
            Structure::HomDialgebra(d) => d.dim(),
            Structure::Differential(d) => d.dim(),
            Structure::HomLeibniz(l) => l.dim(),
            Structure::HomPreLie(p) => p.dim(),
            Structure::Hlsda(s) => s.dim(),
            Structure::Affine(a) => a.dim(),
        }
    }

    /// Field of the structure's leading map.
    pub fn field(&self) -> Field {
        self.sections()[0].1.field()
    }

    pub fn alpha(&self) -> &LinearMap {
        match self {
            Structure::HomAlgebra(a) => &a.alpha,
            Structure::HomCoalgebra(c) => &c.alpha,
            Structure::HomBialgebra(b) => &b.alpha,
            Structure::TwoHom(t) => &t.alpha,
            Structure::HomDialgebra(d) => &d.alpha,
            Structure::Differential(d) => &d.algebra.alpha,
            Structure::HomLeibniz(l) => &l.alpha,
            Structure::HomPreLie(p) => &p.alpha,
            Structure::Hlsda(s) => &s.alpha,
            Structure::Affine(a) => &a.leibniz.alpha,
        }
    }

    /// Every map the structure carries, under its document section name.
    pub fn sections(&self) -> Vec<(&'static str, Section<'_>)> {
        let mut out = Vec::new();
        match self {
            Structure::HomAlgebra(a) => {
                out.push(("mu", Section::Product(&a.mu)));
                out.push(("alpha", Section::Endo(&a.alpha)));
                push_opt!(out, "unit", a.unit, Element);
            }
            Structure::HomCoalgebra(c) => {
                out.push(("delta", Section::Coproduct(&c.delta)));
                out.push(("alpha", Section::Endo(&c.alpha)));
                push_opt!(out, "counit", c.counit, Form);
            }
            Structure::HomBialgebra(b) => {
                out.push(("mu", Section::Product(&b.mu)));
                out.push(("delta", Section::Coproduct(&b.delta)));
                out.push(("alpha", Section::Endo(&b.alpha)));
                out.push(("unit", Section::Element(&b.unit)));
                out.push(("counit", Section::Form(&b.counit)));
            }
            Structure::TwoHom(t) => {
                out.push(("mu", Section::Product(&t.mu1)));
                out.push(("mu2", Section::Product(&t.mu2)));
                push_opt!(out, "delta", t.delta1, Coproduct);
                push_opt!(out, "delta2", t.delta2, Coproduct);
                out.push(("alpha", Section::Endo(&t.alpha)));
                push_opt!(out, "unit", t.unit, Element);
                push_opt!(out, "counit", t.counit1, Form);
                push_opt!(out, "counit2", t.counit2, Form);
            }
            Structure::HomDialgebra(d) => {
                out.push(("left", Section::Product(&d.left)));
                out.push(("right", Section::Product(&d.right)));
                out.push(("alpha", Section::Endo(&d.alpha)));
            }
            Structure::Differential(d) => {
                out.push(("mu", Section::Product(&d.algebra.mu)));
                out.push(("alpha", Section::Endo(&d.algebra.alpha)));
                out.push(("d", Section::Endo(&d.d)));
                push_opt!(out, "unit", d.algebra.unit, Element);
            }
            Structure::HomLeibniz(l) => {
                out.push(("bracket", Section::Product(&l.bracket)));
                out.push(("alpha", Section::Endo(&l.alpha)));
            }
            Structure::HomPreLie(p) => {
                out.push(("mu", Section::Product(&p.product)));
                out.push(("alpha", Section::Endo(&p.alpha)));
            }
            Structure::Hlsda(s) => {
                out.push(("left", Section::Product(&s.left)));
                out.push(("right", Section::Product(&s.right)));
                out.push(("alpha", Section::Endo(&s.alpha)));
            }
            Structure::Affine(a) => {
                out.push(("bracket", Section::Product(&a.leibniz.bracket)));
                out.push(("alpha", Section::Endo(&a.leibniz.alpha)));
                out.push(("nabla1", Section::Product(&a.nabla1)));
                out.push(("nabla2", Section::Product(&a.nabla2)));
            }
        }
        out
    }

    /// Builds a structure of `kind` from named sections.
    pub fn from_sections(
        kind: StructureKind,
        mut sections: std::collections::BTreeMap<String, SectionData>,
    ) -> Result<Structure, StructureError> {
        let allowed = kind_sections(kind);
        for name in sections.keys() {
            if !allowed.iter().any(|(a, _)| a == name) {
                return Err(StructureError::Unexpected(name.clone()));
            }
        }
        for (name, required) in allowed {
            if *required && !sections.contains_key(*name) {
                return Err(StructureError::Missing(name.to_string()));
            }
        }
        let mut take = |name: &str| sections.remove(name);
        fn product(
            name: &str,
            s: Option<SectionData>,
        ) -> Result<Option<ProductTensor>, StructureError> {
            match s {
                None => Ok(None),
                Some(SectionData::Product(p)) => Ok(Some(p)),
                Some(_) => Err(StructureError::SectionType(name.into())),
            }
        }
        fn coproduct(
            name: &str,
            s: Option<SectionData>,
        ) -> Result<Option<CoproductTensor>, StructureError> {
            match s {
                None => Ok(None),
                Some(SectionData::Coproduct(q)) => Ok(Some(q)),
                Some(_) => Err(StructureError::SectionType(name.into())),
            }
        }
        fn endo(name: &str, s: Option<SectionData>) -> Result<Option<LinearMap>, StructureError> {
            match s {
                None => Ok(None),
                Some(SectionData::Endo(m)) => Ok(Some(m)),
                Some(_) => Err(StructureError::SectionType(name.into())),
            }
        }
        fn element(name: &str, s: Option<SectionData>) -> Result<Option<Vector>, StructureError> {
            match s {
                None => Ok(None),
                Some(SectionData::Element(v)) => Ok(Some(v)),
                Some(_) => Err(StructureError::SectionType(name.into())),
            }
        }
        fn form(name: &str, s: Option<SectionData>) -> Result<Option<LinearMap>, StructureError> {
            match s {
                None => Ok(None),
                Some(SectionData::Form(m)) => Ok(Some(m)),
                Some(_) => Err(StructureError::SectionType(name.into())),
            }
        }
        // Required sections were checked above.
        let p = |n: &str, s| product(n, s).map(Option::unwrap);
        let alpha = endo("alpha", take("alpha"))?.expect("required");
        use StructureKind as K;
        Ok(match kind {
            K::HomAlgebra => Structure::HomAlgebra(HomAlgebra {
                mu: p("mu", take("mu"))?,
                alpha,
                unit: element("unit", take("unit"))?,
            }),
            K::HomCoalgebra => Structure::HomCoalgebra(HomCoalgebra {
                delta: coproduct("delta", take("delta"))?.expect("required"),
                alpha,
                counit: form("counit", take("counit"))?,
            }),
            K::HomBialgebra => Structure::HomBialgebra(HomBialgebra {
                mu: p("mu", take("mu"))?,
                delta: coproduct("delta", take("delta"))?.expect("required"),
                alpha,
                unit: element("unit", take("unit"))?.expect("required"),
                counit: form("counit", take("counit"))?.expect("required"),
            }),
            K::TwoHomAssocAlgebra
            | K::TwoHomAssocBialgebra
            | K::TwoHomBialgebra
            | K::TwoTwoHomBialgebra => {
                let variant = match kind {
                    K::TwoHomAssocAlgebra => TwoHomVariant::AssocAlgebra,
                    K::TwoHomAssocBialgebra => TwoHomVariant::AssocBialgebra,
                    K::TwoHomBialgebra => TwoHomVariant::Bialgebra,
                    _ => TwoHomVariant::TwoTwoBialgebra,
                };
                Structure::TwoHom(TwoHomStructure {
                    variant,
                    mu1: p("mu", take("mu"))?,
                    mu2: p("mu2", take("mu2"))?,
                    unit: element("unit", take("unit"))?,
                    delta1: coproduct("delta", take("delta"))?,
                    delta2: coproduct("delta2", take("delta2"))?,
                    counit1: form("counit", take("counit"))?,
                    counit2: form("counit2", take("counit2"))?,
                    alpha,
                })
            }
            K::HomDialgebra => Structure::HomDialgebra(HomDialgebra {
                left: p("left", take("left"))?,
                right: p("right", take("right"))?,
                alpha,
            }),
            K::Hlsda => Structure::Hlsda(Hlsda {
                left: p("left", take("left"))?,
                right: p("right", take("right"))?,
                alpha,
            }),
            K::DifferentialHomAlgebra => Structure::Differential(DifferentialHomAlgebra {
                algebra: HomAlgebra {
                    mu: p("mu", take("mu"))?,
                    alpha,
                    unit: element("unit", take("unit"))?,
                },
                d: endo("d", take("d"))?.expect("required"),
            }),
            K::HomLeibniz => Structure::HomLeibniz(HomLeibniz {
                bracket: p("bracket", take("bracket"))?,
                alpha,
            }),
            K::HomPreLie => Structure::HomPreLie(HomPreLie {
                product: p("mu", take("mu"))?,
                alpha,
            }),
            K::Affine => Structure::Affine(AffineStructure {
                leibniz: HomLeibniz {
                    bracket: p("bracket", take("bracket"))?,
                    alpha,
                },
                nabla1: p("nabla1", take("nabla1"))?,
                nabla2: p("nabla2", take("nabla2"))?,
            }),
        })
    }

    /// Rebuilds the structure with every section passed through `f`.
    pub fn map_sections(&self, mut f: impl FnMut(&str, Section<'_>) -> SectionData) -> Structure {
        let sections = self
            .sections()
            .into_iter()
            .map(|(name, sec)| (name.to_string(), f(name, sec)))
            .collect();
        Structure::from_sections(self.kind(), sections).expect("same kind and section names")
    }

    /// Products the declared unit must be a two-sided unit for.
    fn unital_products(&self) -> Vec<(&'static str, &ProductTensor, &Vector)> {
        match self {
            Structure::HomAlgebra(HomAlgebra {
                mu, unit: Some(u), ..
            }) => vec![("mu", mu, u)],
            Structure::HomBialgebra(b) => vec![("mu", &b.mu, &b.unit)],
            Structure::TwoHom(TwoHomStructure {
                mu1,
                mu2,
                unit: Some(u),
                ..
            }) => vec![("mu", mu1, u), ("mu2", mu2, u)],
            Structure::Differential(DifferentialHomAlgebra {
                algebra: HomAlgebra {
                    mu, unit: Some(u), ..
                },
                ..
            }) => vec![("mu", mu, u)],
            _ => Vec::new(),
        }
    }

    fn declared_unit(&self) -> Option<&Vector> {
        match self {
            Structure::HomAlgebra(a) => a.unit.as_ref(),
            Structure::HomBialgebra(b) => Some(&b.unit),
            Structure::TwoHom(t) => t.unit.as_ref(),
            Structure::Differential(d) => d.algebra.unit.as_ref(),
            _ => None,
        }
    }
}

/// The stored unit `η(1)`.
pub fn unit_vector(s: &Structure) -> Result<&Vector, StructureError> {
    s.declared_unit().ok_or(StructureError::Absent("unit"))
}

/// The stored counit `ε` (the first one for two-coproduct structures).
pub fn counit_map(s: &Structure) -> Result<&LinearMap, StructureError> {
    let counit = match s {
        Structure::HomCoalgebra(c) => c.counit.as_ref(),
        Structure::HomBialgebra(b) => Some(&b.counit),
        Structure::TwoHom(t) => t.counit1.as_ref(),
        _ => None,
    };
    counit.ok_or(StructureError::Absent("counit"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitSide {
    Left,
    Right,
}

/// A structural problem that makes a structure unusable for checking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Defect {
    Shape {
        section: String,
        expected: String,
        found: String,
    },
    FieldMode {
        section: String,
        expected: Field,
        found: Field,
    },
    Missing {
        section: String,
    },
    /// `μ(u, e_basis)` (left) or `μ(e_basis, u)` (right) is `got`, not `e_basis`.
    Unit {
        product: String,
        side: UnitSide,
        basis: usize,
        got: Vector,
    },
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::Shape {
                section,
                expected,
                found,
            } => write!(f, "shape of {section}: expected {expected}, found {found}"),
            Defect::FieldMode {
                section,
                expected,
                found,
            } => write!(f, "field of {section}: expected {expected}, found {found}"),
            Defect::Missing { section } => write!(f, "missing section {section}"),
            Defect::Unit {
                product,
                side,
                basis,
                got,
            } => {
                let e = basis + 1;
                match side {
                    UnitSide::Left => {
                        write!(f, "unit defect: {product}(u, e{e}) = {got:?} ≠ e{e}")
                    }
                    UnitSide::Right => {
                        write!(f, "unit defect: {product}(e{e}, u) = {got:?} ≠ e{e}")
                    }
                }
            }
        }
    }
}

/// Non-fatal observations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    /// `α(u) ≠ u`; the Kaplansky constructions cannot extend `α` by `α(u) = u`
    /// without changing it.
    NotKaplanskyEligible { alpha_of_unit: Vector },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::NotKaplanskyEligible { alpha_of_unit } => write!(
                f,
                "not Kaplansky-eligible: α(unit) = {alpha_of_unit:?} differs from the unit"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Validation {
    pub defects: Vec<Defect>,
    pub warnings: Vec<Warning>,
}

impl Validation {
    pub fn is_clean(&self) -> bool {
        self.defects.is_empty()
    }
}

/// Structural validation: shapes, field modes, required maps, unit behaviour.
pub fn validate(s: &Structure) -> Validation {
    let mut v = Validation::default();
    let n = s.dim();
    let sections = s.sections();
    let field = sections[0].1.field();

    for (name, sec) in &sections {
        if sec.field() != field {
            v.defects.push(Defect::FieldMode {
                section: name.to_string(),
                expected: field,
                found: sec.field(),
            });
        }
        let (expected, found) = match sec {
            Section::Product(p) => (format!("{n}³"), format!("{}³", p.dim())),
            Section::Coproduct(q) => (format!("{n}³"), format!("{}³", q.dim())),
            Section::Endo(m) => (format!("{n}×{n}"), format!("{}×{}", m.rows(), m.cols())),
            Section::Form(m) => (format!("1×{n}"), format!("{}×{}", m.rows(), m.cols())),
            Section::Element(u) => (format!("{n}"), format!("{}", u.dim())),
        };
        if expected != found {
            v.defects.push(Defect::Shape {
                section: name.to_string(),
                expected,
                found,
            });
        }
    }

    if let Structure::TwoHom(t) = s {
        let present: Vec<&str> = sections.iter().map(|(name, _)| *name).collect();
        for req in t.variant.required() {
            if !present.contains(req) {
                v.defects.push(Defect::Missing {
                    section: req.to_string(),
                });
            }
        }
    }

    if !v.defects.is_empty() {
        return v;
    }

    for (name, mu, u) in s.unital_products() {
        for b in 0..n {
            let e = Vector::basis(field, n, b);
            let left = apply_bilinear(mu, u, &e).expect("validated shapes");
            if left != e {
                v.defects.push(Defect::Unit {
                    product: name.to_string(),
                    side: UnitSide::Left,
                    basis: b,
                    got: left,
                });
            }
            let right = apply_bilinear(mu, &e, u).expect("validated shapes");
            if right != e {
                v.defects.push(Defect::Unit {
                    product: name.to_string(),
                    side: UnitSide::Right,
                    basis: b,
                    got: right,
                });
            }
        }
    }

    if let Some(u) = s.declared_unit() {
        let au = s.alpha().apply(u).expect("validated shapes");
        if &au != u {
            v.warnings
                .push(Warning::NotKaplanskyEligible { alpha_of_unit: au });
        }
    }
    v
}
