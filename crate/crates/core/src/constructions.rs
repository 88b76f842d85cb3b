//! Constructions: Yau twists, Kaplansky extensions, assemblies of 2-hom
//! structures, tensor products, opposites and the derived products and
//! brackets of dialgebras.
//!
//! Kaplansky outputs have dimension `n + 1`. The adjoined unit is basis
//! index 0 and old basis index `i` becomes `i + 1`.

use thiserror::Error;

use crate::axioms::{
    check_affine, check_dialgebra, check_differential, check_hlsda, check_hom_algebra,
    check_morphism, CheckOptions, Verdict,
};
use crate::linalg::{CoproductTensor, LinearMap, ProductTensor, Vector};
use crate::scalar::{Field, Scalar};
use crate::structures::{
    validate, AffineStructure, Defect, DifferentialHomAlgebra, Hlsda, HomAlgebra, HomBialgebra,
    HomDialgebra, HomLeibniz, Structure, TwoHomStructure, TwoHomVariant,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("input is invalid: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Defect>),
    #[error("not eligible: {0}")]
    Ineligible(String),
    #[error("inputs do not match: {0}")]
    Mismatch(String),
    #[error("twist input must be untwisted (α = id)")]
    NotClassical,
    #[error("twisting map is not an endomorphism ({} failing axioms)", .0.failed_axioms().len())]
    NotEndomorphism(Box<Verdict>),
    #[error("prerequisite check {} fails", .0.check)]
    Prerequisite(Box<Verdict>),
    #[error("{0} structures cannot be twisted")]
    Unsupported(String),
}

type Result<T> = std::result::Result<T, ConstructionError>;

fn ensure_valid(s: &Structure) -> Result<()> {
    let v = validate(s);
    if v.is_clean() {
        Ok(())
    } else {
        Err(ConstructionError::Invalid(v.defects))
    }
}

fn require(v: Verdict) -> Result<()> {
    if v.passed() {
        Ok(())
    } else {
        Err(ConstructionError::Prerequisite(Box::new(v)))
    }
}

fn twist_product(alpha: &LinearMap, p: &ProductTensor) -> ProductTensor {
    ProductTensor::from_map(alpha.compose(p.as_map()).expect("validated shapes")).expect("n×n² map")
}

fn unit_survives(mu: &ProductTensor, u: &Vector) -> bool {
    let n = mu.dim();
    (0..n).all(|j| {
        let e = Vector::basis(mu.field(), n, j);
        crate::linalg::apply_bilinear(mu, u, &e).ok().as_ref() == Some(&e)
            && crate::linalg::apply_bilinear(mu, &e, u).ok().as_ref() == Some(&e)
    })
}

/// Replaces every product `p` of an untwisted structure by `α∘p` and sets
/// the twisting map to `α`.
///
/// `α` must be an endomorphism of the untwisted structure. A declared unit is
/// kept only when it is still a two-sided unit of the twisted product.
pub fn yau_twist(s: &Structure, alpha: &LinearMap, opts: &CheckOptions) -> Result<Structure> {
    ensure_valid(s)?;
    if !s.alpha().is_identity() {
        return Err(ConstructionError::NotClassical);
    }
    // Endomorphism test on the bare products; preserving the unit is not
    // required.
    let bare = match s {
        Structure::HomAlgebra(a) => Structure::HomAlgebra(HomAlgebra {
            unit: None,
            ..a.clone()
        }),
        Structure::TwoHom(t) if t.variant == TwoHomVariant::AssocAlgebra => {
            Structure::TwoHom(TwoHomStructure {
                unit: None,
                ..t.clone()
            })
        }
        Structure::HomDialgebra(_) | Structure::HomLeibniz(_) | Structure::Hlsda(_) => s.clone(),
        other => return Err(ConstructionError::Unsupported(other.kind().to_string())),
    };
    let verdict = check_morphism(alpha, &bare, &bare, opts)
        .map_err(|e| ConstructionError::Mismatch(e.to_string()))?;
    if !verdict.passed() {
        return Err(ConstructionError::NotEndomorphism(Box::new(verdict)));
    }
    let tw = |p: &ProductTensor| twist_product(alpha, p);
    let keep = |mu: &ProductTensor, u: &Option<Vector>| u.clone().filter(|u| unit_survives(mu, u));
    Ok(match s {
        Structure::HomAlgebra(a) => {
            let mu = tw(&a.mu);
            let unit = keep(&mu, &a.unit);
            Structure::HomAlgebra(HomAlgebra {
                mu,
                alpha: alpha.clone(),
                unit,
            })
        }
        Structure::TwoHom(t) => {
            let (mu1, mu2) = (tw(&t.mu1), tw(&t.mu2));
            let unit = keep(&mu1, &t.unit).filter(|u| unit_survives(&mu2, u));
            Structure::TwoHom(TwoHomStructure {
                mu1,
                mu2,
                unit,
                alpha: alpha.clone(),
                ..t.clone()
            })
        }
        Structure::HomDialgebra(d) => Structure::HomDialgebra(HomDialgebra {
            left: tw(&d.left),
            right: tw(&d.right),
            alpha: alpha.clone(),
        }),
        Structure::HomLeibniz(l) => Structure::HomLeibniz(HomLeibniz {
            bracket: tw(&l.bracket),
            alpha: alpha.clone(),
        }),
        Structure::Hlsda(h) => Structure::Hlsda(Hlsda {
            left: tw(&h.left),
            right: tw(&h.right),
            alpha: alpha.clone(),
        }),
        _ => unreachable!("filtered above"),
    })
}

/// How a unital algebra qualifies for the Kaplansky constructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Eligibility {
    /// `α(u) = u`; the extension keeps `α` on the old space.
    Fixed,
    /// The unit is basis vector `index` but `α` moves it. The extension
    /// sets `α̃(u) = u` and `α̃ = α` on the other basis vectors.
    BasisOverride(usize),
}

pub fn kaplansky_eligibility(a: &HomAlgebra) -> Result<Eligibility> {
    ensure_valid(&Structure::HomAlgebra(a.clone()))?;
    let u = a
        .unit
        .as_ref()
        .ok_or_else(|| ConstructionError::Ineligible("algebra has no unit".into()))?;
    if &a.alpha.apply(u).expect("validated shapes") == u {
        return Ok(Eligibility::Fixed);
    }
    match u.as_basis_index() {
        Some(i) => Ok(Eligibility::BasisOverride(i)),
        None => Err(ConstructionError::Ineligible(
            "α moves the unit and the unit is not a basis vector".into(),
        )),
    }
}

/// Shared pieces of both Kaplansky extensions.
struct Extension {
    field: Field,
    /// New dimension `n + 1`.
    m: usize,
    mu: ProductTensor,
    alpha: LinearMap,
    /// The old unit, embedded.
    u: Vector,
    e0: Vector,
    counit: LinearMap,
}

fn embed(v: &Vector) -> Vector {
    let field = v.field();
    let mut coords = vec![Scalar::zero(field)];
    coords.extend(v.coords().iter().cloned());
    Vector::new(field, coords).expect("single field")
}

fn extend(a: &HomAlgebra) -> Result<Extension> {
    let elig = kaplansky_eligibility(a)?;
    let field = a.field();
    let n = a.dim();
    let m = n + 1;
    let e0 = Vector::basis(field, m, 0);
    let mut images = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(m);
        for j in 0..m {
            row.push(match (i, j) {
                (0, j) => Vector::basis(field, m, j),
                (i, 0) => Vector::basis(field, m, i),
                (i, j) => embed(&a.mu.image(i - 1, j - 1)),
            });
        }
        images.push(row);
    }
    let mu = ProductTensor::from_images(field, &images).expect("square table");
    let mut cols = vec![e0.clone()];
    for j in 0..n {
        let img = match elig {
            Eligibility::BasisOverride(ub) if ub == j => Vector::basis(field, m, j + 1),
            _ => embed(&a.alpha.column(j)),
        };
        cols.push(img);
    }
    let alpha = LinearMap::from_columns(field, m, &cols).expect("square map");
    let u = embed(a.unit.as_ref().expect("eligible"));
    let mut eps = vec![Scalar::zero(field); m];
    eps[0] = Scalar::one(field);
    let counit = LinearMap::from_rows(field, 1, m, eps).expect("1×m form");
    Ok(Extension {
        field,
        m,
        mu,
        alpha,
        u,
        e0,
        counit,
    })
}

fn tensor(a: &Vector, b: &Vector) -> Vector {
    a.tensor(b).expect("single field")
}

fn sum(terms: &[Vector]) -> Vector {
    terms[1..]
        .iter()
        .fold(terms[0].clone(), |acc, t| acc.add(t).expect("same shape"))
}

fn neg(v: &Vector) -> Vector {
    v.scale(&Scalar::from_i64(v.field(), -1))
}

fn bialgebra(ext: Extension, delta_images: Vec<Vector>) -> HomBialgebra {
    HomBialgebra {
        mu: ext.mu,
        unit: ext.e0,
        delta: CoproductTensor::from_images(ext.field, &delta_images).expect("square"),
        counit: ext.counit,
        alpha: ext.alpha,
    }
}

/// First Kaplansky extension: `Δ(e₀) = e₀⊗e₀` and
/// `Δ(x) = α̃x⊗e₀ + e₀⊗α̃x − u⊗α̃x` on the old basis.
pub fn kaplansky_k1(a: &HomAlgebra) -> Result<HomBialgebra> {
    let ext = extend(a)?;
    let mut images = vec![tensor(&ext.e0, &ext.e0)];
    for j in 1..ext.m {
        let ax = ext.alpha.column(j);
        images.push(sum(&[
            tensor(&ax, &ext.e0),
            tensor(&ext.e0, &ax),
            neg(&tensor(&ext.u, &ax)),
        ]));
    }
    Ok(bialgebra(ext, images))
}

/// Second Kaplansky extension: `Δ(e₀) = e₀⊗e₀`,
/// `Δ(u) = u⊗e₀ + e₀⊗u − u⊗u` and
/// `Δ(x) = (e₀−u)⊗α̃x + α̃x⊗(e₀−u)` on the other old basis vectors.
///
/// The unit must be a basis vector, since the case split is only linear in
/// a basis containing it.
pub fn kaplansky_k2(a: &HomAlgebra) -> Result<HomBialgebra> {
    let ub = a
        .unit
        .as_ref()
        .and_then(|u| u.as_basis_index())
        .ok_or_else(|| ConstructionError::Ineligible("the unit is not a basis vector".into()))?;
    let ext = extend(a)?;
    let diff = ext.e0.sub(&ext.u).expect("same shape");
    let mut images = vec![tensor(&ext.e0, &ext.e0)];
    for j in 1..ext.m {
        if j == ub + 1 {
            images.push(sum(&[
                tensor(&ext.u, &ext.e0),
                tensor(&ext.e0, &ext.u),
                neg(&tensor(&ext.u, &ext.u)),
            ]));
        } else {
            let ax = ext.alpha.column(j);
            images.push(sum(&[tensor(&diff, &ax), tensor(&ax, &diff)]));
        }
    }
    Ok(bialgebra(ext, images))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Assembly {
    /// `(μ̃₁, μ̃₂, Δ₁)` from the first extension: a 2-hom-associative
    /// bialgebra.
    B1,
    /// The pair `(μ̃₁, μ̃₂, Δ₁, Δ₂)` and `(μ̃₁, μ̃₂, Δ₁^cop, Δ₂)`, with `Δ₁`
    /// from the first extension and `Δ₂` from the second: 2-hom-bialgebras.
    B1B2,
    /// `(μ̃₁, μ̃₂, Δ₁, Δ₂)` with both coproducts from the first extension:
    /// a 2-2-hom-bialgebra.
    TwoTwo,
}

impl Assembly {
    pub fn parse(s: &str) -> Option<Assembly> {
        match s {
            "b1" => Some(Assembly::B1),
            "b1b2" => Some(Assembly::B1B2),
            "2-2" => Some(Assembly::TwoTwo),
            _ => None,
        }
    }
}

/// Bundles the Kaplansky extensions of two unital algebras on the same
/// space with the same `α` and unit.
pub fn assemble_two(
    kind: Assembly,
    a: &HomAlgebra,
    b: &HomAlgebra,
) -> Result<Vec<TwoHomStructure>> {
    if a.dim() != b.dim() {
        return Err(ConstructionError::Mismatch(format!(
            "dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    if a.field() != b.field() {
        return Err(ConstructionError::Mismatch("field modes differ".into()));
    }
    if a.alpha != b.alpha {
        return Err(ConstructionError::Mismatch("twisting maps differ".into()));
    }
    if a.unit != b.unit {
        return Err(ConstructionError::Mismatch("units differ".into()));
    }
    let k1a = kaplansky_k1(a)?;
    let k1b = kaplansky_k1(b)?;
    let base = |variant, delta2: Option<CoproductTensor>| TwoHomStructure {
        variant,
        mu1: k1a.mu.clone(),
        mu2: k1b.mu.clone(),
        unit: Some(k1a.unit.clone()),
        delta1: Some(k1a.delta.clone()),
        counit1: Some(k1a.counit.clone()),
        counit2: delta2.as_ref().map(|_| k1a.counit.clone()),
        delta2,
        alpha: k1a.alpha.clone(),
    };
    Ok(match kind {
        Assembly::B1 => vec![base(TwoHomVariant::AssocBialgebra, None)],
        Assembly::TwoTwo => vec![base(
            TwoHomVariant::TwoTwoBialgebra,
            Some(k1b.delta.clone()),
        )],
        Assembly::B1B2 => {
            let k2a = kaplansky_k2(a)?;
            let b1 = base(TwoHomVariant::Bialgebra, Some(k2a.delta.clone()));
            let b2 = TwoHomStructure {
                delta1: Some(coopposite(&k1a.delta)),
                ..b1.clone()
            };
            vec![b1, b2]
        }
    })
}

/// `(V⊗W, μ⊗μ', α⊗α')`, with `u⊗u'` as unit when both are unital.
pub fn tensor_product(a: &HomAlgebra, b: &HomAlgebra) -> Result<HomAlgebra> {
    ensure_valid(&Structure::HomAlgebra(a.clone()))?;
    ensure_valid(&Structure::HomAlgebra(b.clone()))?;
    if a.field() != b.field() {
        return Err(ConstructionError::Mismatch("field modes differ".into()));
    }
    let field = a.field();
    let (n, m) = (a.dim(), b.dim());
    let dim = n * m;
    let mut images = Vec::with_capacity(dim);
    for i in 0..n {
        for k in 0..m {
            let mut row = Vec::with_capacity(dim);
            for j in 0..n {
                for l in 0..m {
                    row.push(tensor(&a.mu.image(i, j), &b.mu.image(k, l)));
                }
            }
            images.push(row);
        }
    }
    let mu = ProductTensor::from_images(field, &images).expect("square table");
    let alpha = a.alpha.kron(&b.alpha).expect("same field");
    let unit = match (&a.unit, &b.unit) {
        (Some(u), Some(v)) => Some(tensor(u, v)),
        _ => None,
    };
    Ok(HomAlgebra { mu, alpha, unit })
}

/// `μ^op(x, y) = μ(y, x)`.
pub fn opposite(p: &ProductTensor) -> ProductTensor {
    let n = p.dim();
    let images: Vec<Vec<Vector>> = (0..n)
        .map(|i| (0..n).map(|j| p.image(j, i)).collect())
        .collect();
    ProductTensor::from_images(p.field(), &images).expect("square table")
}

/// `Δ^cop = τ∘Δ`.
pub fn coopposite(q: &CoproductTensor) -> CoproductTensor {
    let tau = LinearMap::tensor_permutation(q.field(), q.dim(), &[1, 0]);
    CoproductTensor::from_map(tau.compose(q.as_map()).expect("n²×n map")).expect("n²×n map")
}

fn product_of(m: LinearMap) -> ProductTensor {
    ProductTensor::from_map(m).expect("n×n² map")
}

/// `x⊣y = α(x)·dα(y)` and `x⊢y = dα(x)·α(y)`.
pub fn dialgebra_from_differential(
    d: &DifferentialHomAlgebra,
    opts: &CheckOptions,
) -> Result<HomDialgebra> {
    ensure_valid(&Structure::Differential(d.clone()))?;
    require(check_differential(d, opts))?;
    let al = &d.algebra.alpha;
    let da = d.d.compose(al).expect("square");
    let m = d.algebra.mu.as_map();
    let left = m.compose(&al.kron(&da).expect("square")).expect("n×n²");
    let right = m.compose(&da.kron(al).expect("square")).expect("n×n²");
    Ok(HomDialgebra {
        left: product_of(left),
        right: product_of(right),
        alpha: al.clone(),
    })
}

/// `[x, y] = α(x)·dα(y) − dα(y)·α(x)`.
pub fn leibniz_from_differential(
    d: &DifferentialHomAlgebra,
    opts: &CheckOptions,
) -> Result<HomLeibniz> {
    ensure_valid(&Structure::Differential(d.clone()))?;
    require(check_differential(d, opts))?;
    let al = &d.algebra.alpha;
    let da = d.d.compose(al).expect("square");
    let m = d.algebra.mu.as_map();
    let tau = LinearMap::tensor_permutation(al.field(), al.rows(), &[1, 0]);
    let first = m.compose(&al.kron(&da).expect("square")).expect("n×n²");
    let second = m
        .compose(&da.kron(al).expect("square"))
        .and_then(|s| s.compose(&tau))
        .expect("n×n²");
    Ok(HomLeibniz {
        bracket: product_of(first.sub(&second).expect("same shape")),
        alpha: al.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketVariant {
    /// `[x, y] = x⊣y − x⊢y`, for hom-associative dialgebras.
    Paper,
    /// `[x, y] = x⊣y − y⊢x`, for HLSDAs.
    Loday,
}

impl BracketVariant {
    pub fn parse(s: &str) -> Option<BracketVariant> {
        match s {
            "paper" => Some(BracketVariant::Paper),
            "loday" => Some(BracketVariant::Loday),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BracketVariant::Paper => "paper",
            BracketVariant::Loday => "loday",
        }
    }
}

fn loday_bracket(left: &ProductTensor, right: &ProductTensor) -> ProductTensor {
    let tau = LinearMap::tensor_permutation(left.field(), left.dim(), &[1, 0]);
    let swapped = right.as_map().compose(&tau).expect("n×n²");
    product_of(left.as_map().sub(&swapped).expect("same shape"))
}

/// Bracket of a dialgebra. The paper variant needs a passing dialgebra
/// check, the Loday variant a passing HLSDA check.
pub fn bracket_from_dialgebra(
    d: &HomDialgebra,
    variant: BracketVariant,
    opts: &CheckOptions,
) -> Result<HomLeibniz> {
    ensure_valid(&Structure::HomDialgebra(d.clone()))?;
    let bracket = match variant {
        BracketVariant::Paper => {
            require(check_dialgebra(d, opts))?;
            product_of(d.left.as_map().sub(d.right.as_map()).expect("same shape"))
        }
        BracketVariant::Loday => {
            require(check_hlsda(&d.clone().into(), opts))?;
            loday_bracket(&d.left, &d.right)
        }
    };
    Ok(HomLeibniz {
        bracket,
        alpha: d.alpha.clone(),
    })
}

/// `x⊢y = ∇₁(x, y)`, `x⊣y = ∇₂(x, y)`.
pub fn hlsda_from_affine(a: &AffineStructure, opts: &CheckOptions) -> Result<Hlsda> {
    ensure_valid(&Structure::Affine(a.clone()))?;
    require(check_affine(a, opts))?;
    Ok(Hlsda {
        left: a.nabla2.clone(),
        right: a.nabla1.clone(),
        alpha: a.leibniz.alpha.clone(),
    })
}

/// `∇₁ = ⊢`, `∇₂ = ⊣` over the bracket `x⊣y − y⊢x`.
pub fn affine_from_hlsda(s: &Hlsda, opts: &CheckOptions) -> Result<AffineStructure> {
    ensure_valid(&Structure::Hlsda(s.clone()))?;
    require(check_hlsda(s, opts))?;
    Ok(AffineStructure {
        leibniz: HomLeibniz {
            bracket: loday_bracket(&s.left, &s.right),
            alpha: s.alpha.clone(),
        },
        nabla1: s.right.clone(),
        nabla2: s.left.clone(),
    })
}

/// `x⊣y = x⊢y = μ(x, y)`.
pub fn trivial_dialgebra(a: &HomAlgebra, opts: &CheckOptions) -> Result<HomDialgebra> {
    ensure_valid(&Structure::HomAlgebra(a.clone()))?;
    require(check_hom_algebra(a, opts))?;
    Ok(HomDialgebra {
        left: a.mu.clone(),
        right: a.mu.clone(),
        alpha: a.alpha.clone(),
    })
}
