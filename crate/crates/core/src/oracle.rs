//! Random-vector cross-check of basis verdicts.
//!
//! The checkers compare matrices; the oracle instead evaluates each identity
//! pointwise on explicit vectors, expanding tensors coordinate by coordinate
//! with [`apply_bilinear`] and [`apply_coproduct`]. It shares no law
//! construction code with [`crate::axioms`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::axioms::{leaf_axioms, CheckOptions, CounitMode, Leaf, Step, Verdict};
use crate::linalg::{apply_bilinear, apply_coproduct, LinearMap, ProductTensor, Vector};
use crate::scalar::{Field, Scalar};
use crate::structures::{Section, Structure};

pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    /// Number of `(scope, axiom)` laws cross-checked.
    pub laws: usize,
    pub samples: usize,
    pub disagreements: Vec<String>,
}

impl OracleReport {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }
}

fn random_scalar(rng: &mut ChaCha8Rng, field: Field) -> Scalar {
    const POOL: [(i64, i64); 9] = [
        (0, 1),
        (1, 1),
        (-1, 1),
        (2, 1),
        (-2, 1),
        (3, 1),
        (1, 2),
        (-1, 3),
        (5, 4),
    ];
    match field {
        Field::Rational => {
            let (a, b) = POOL[rng.gen_range(0..POOL.len())];
            Scalar::from_ratio(field, a, b).expect("nonzero denominator")
        }
        Field::Prime(p) => Scalar::from_i64(field, rng.gen_range(0..p as i64)),
    }
}

fn random_vector(rng: &mut ChaCha8Rng, field: Field, n: usize) -> Vector {
    let coords = (0..n).map(|_| random_scalar(rng, field)).collect();
    Vector::new(field, coords).expect("single field")
}

fn scalar_vec(s: Scalar) -> Vector {
    let field = s.field();
    Vector::new(field, vec![s]).expect("single field")
}

fn ap(f: &LinearMap, x: &Vector) -> Vector {
    f.apply(x).expect("validated shapes")
}

fn mul(p: &ProductTensor, x: &Vector, y: &Vector) -> Vector {
    apply_bilinear(p, x, y).expect("validated shapes")
}

fn cop(q: &crate::linalg::CoproductTensor, x: &Vector) -> Vector {
    apply_coproduct(q, x).expect("validated shapes")
}

fn plus(a: &Vector, b: &Vector) -> Vector {
    a.add(b).expect("same shape")
}

fn minus(a: &Vector, b: &Vector) -> Vector {
    a.sub(b).expect("same shape")
}

fn otimes(a: &Vector, b: &Vector) -> Vector {
    a.tensor(b).expect("single field")
}

fn basis(field: Field, n: usize, i: usize) -> Vector {
    Vector::basis(field, n, i)
}

/// `Σ_{ij} t_{ij} f(e_i) ⊗ g(e_j)` for a flat 2-tensor `t` over an
/// `n`-dimensional space.
fn map_pair(
    t: &Vector,
    n: usize,
    f: impl Fn(&Vector) -> Vector,
    g: impl Fn(&Vector) -> Vector,
) -> Vector {
    let field = t.field();
    let mut acc: Option<Vector> = None;
    for i in 0..n {
        for j in 0..n {
            let coef = t.get(i * n + j);
            if coef.is_zero() {
                continue;
            }
            let term = otimes(&f(&basis(field, n, i)), &g(&basis(field, n, j))).scale(coef);
            acc = Some(match acc {
                Some(a) => plus(&a, &term),
                None => term,
            });
        }
    }
    acc.unwrap_or_else(|| {
        let zero = Scalar::zero(field);
        otimes(&f(&basis(field, n, 0)), &g(&basis(field, n, 0))).scale(&zero)
    })
}

/// `Σ_{ij} t_{ij} h(e_i, e_j)` for a flat 2-tensor `t`.
fn contract_pair(t: &Vector, n: usize, h: impl Fn(&Vector, &Vector) -> Vector) -> Vector {
    let field = t.field();
    let mut acc: Option<Vector> = None;
    for i in 0..n {
        for j in 0..n {
            let coef = t.get(i * n + j);
            if coef.is_zero() {
                continue;
            }
            let term = h(&basis(field, n, i), &basis(field, n, j)).scale(coef);
            acc = Some(match acc {
                Some(a) => plus(&a, &term),
                None => term,
            });
        }
    }
    acc.unwrap_or_else(|| h(&basis(field, n, 0), &basis(field, n, 0)).scale(&Scalar::zero(field)))
}

/// Pointwise evaluation of one axiom on concrete arguments.
fn evaluate(leaf: &Leaf, axiom: &str, args: &[Vector], opts: &CheckOptions) -> (Vector, Vector) {
    match leaf {
        Leaf::HomAlgebra(a) => {
            let (mu, al) = (&a.mu, &a.alpha);
            match axiom {
                "multiplicativity" => (
                    ap(al, &mul(mu, &args[0], &args[1])),
                    mul(mu, &ap(al, &args[0]), &ap(al, &args[1])),
                ),
                "hom-associativity" => {
                    let (x, y, z) = (&args[0], &args[1], &args[2]);
                    (
                        mul(mu, &ap(al, x), &mul(mu, y, z)),
                        mul(mu, &mul(mu, x, y), &ap(al, z)),
                    )
                }
                "unit-left" => {
                    let u = a.unit.as_ref().expect("unit law needs a unit");
                    (mul(mu, u, &args[0]), args[0].clone())
                }
                "unit-right" => {
                    let u = a.unit.as_ref().expect("unit law needs a unit");
                    (mul(mu, &args[0], u), args[0].clone())
                }
                _ => unknown(axiom),
            }
        }
        Leaf::HomCoalgebra(co) => {
            let (d, al, n) = (&co.delta, &co.alpha, co.dim());
            let x = &args[0];
            let dx = cop(d, x);
            match axiom {
                "comultiplicativity" => (
                    map_pair(&dx, n, |v| ap(al, v), |v| ap(al, v)),
                    cop(d, &ap(al, x)),
                ),
                "hom-coassociativity" => (
                    map_pair(&dx, n, |v| ap(al, v), |v| cop(d, v)),
                    map_pair(&dx, n, |v| cop(d, v), |v| ap(al, v)),
                ),
                "counit-left" | "counit-right" => {
                    let e = co.counit.as_ref().expect("counit law needs a counit");
                    let eps = |v: &Vector| ap(e, v);
                    let (side, target): (Box<dyn Fn(&Vector) -> Vector>, Vector) = match opts
                        .counit_mode
                    {
                        CounitMode::Eq7 => (Box::new(|v: &Vector| ap(al, v)), ap(al, &ap(al, x))),
                        CounitMode::Eq8 => (Box::new(|v: &Vector| v.clone()), ap(al, x)),
                    };
                    let lhs = if axiom == "counit-left" {
                        map_pair(&dx, n, eps, side)
                    } else {
                        map_pair(&dx, n, side, eps)
                    };
                    (lhs, target)
                }
                _ => unknown(axiom),
            }
        }
        Leaf::Compat(b) => {
            let (mu, d, e, al, n) = (&b.mu, &b.delta, &b.counit, &b.alpha, b.dim());
            match axiom {
                "delta-multiplicative" => {
                    let (x, y) = (&args[0], &args[1]);
                    let (dx, dy) = (cop(d, x), cop(d, y));
                    // Σ dx_{ij} dy_{kl} μ(e_i, e_k) ⊗ μ(e_j, e_l)
                    let rhs = contract_pair(&dx, n, |ei, ej| {
                        contract_pair(&dy, n, |ek, el| otimes(&mul(mu, ei, ek), &mul(mu, ej, el)))
                    });
                    (cop(d, &mul(mu, x, y)), rhs)
                }
                "delta-alpha" => {
                    let x = &args[0];
                    (
                        cop(d, &ap(al, x)),
                        map_pair(&cop(d, x), n, |v| ap(al, v), |v| ap(al, v)),
                    )
                }
                "counit-multiplicative" => {
                    let (x, y) = (&args[0], &args[1]);
                    let ex = ap(e, x).get(0).clone();
                    let ey = ap(e, y).get(0).clone();
                    (ap(e, &mul(mu, x, y)), scalar_vec(&ex * &ey))
                }
                "counit-alpha" => (ap(e, &ap(al, &args[0])), ap(e, &args[0])),
                _ => unknown(axiom),
            }
        }
        Leaf::Infinitesimal(b) => {
            let (mu, d, al, n) = (&b.mu, &b.delta, &b.alpha, b.dim());
            match axiom {
                "infinitesimal" => {
                    let (x, y) = (&args[0], &args[1]);
                    let ax = ap(al, x);
                    let ay = ap(al, y);
                    let first = map_pair(&cop(d, y), n, |v| mul(mu, &ax, v), |v| ap(al, v));
                    let second = map_pair(&cop(d, x), n, |v| ap(al, v), |v| mul(mu, v, &ay));
                    let corr = otimes(&ap(al, &ax), &ay);
                    (cop(d, &mul(mu, x, y)), minus(&plus(&first, &second), &corr))
                }
                _ => unknown(axiom),
            }
        }
        Leaf::HomDialgebra(dg) => {
            let (l, r, al) = (&dg.left, &dg.right, &dg.alpha);
            let x = &args[0];
            match axiom {
                "left-multiplicativity" => (
                    ap(al, &mul(l, x, &args[1])),
                    mul(l, &ap(al, x), &ap(al, &args[1])),
                ),
                "right-multiplicativity" => (
                    ap(al, &mul(r, x, &args[1])),
                    mul(r, &ap(al, x), &ap(al, &args[1])),
                ),
                _ => {
                    let (y, z) = (&args[1], &args[2]);
                    let (ax, az) = (ap(al, x), ap(al, z));
                    match axiom {
                        "left-hom-associativity" => {
                            (mul(l, &ax, &mul(l, y, z)), mul(l, &mul(l, x, y), &az))
                        }
                        "right-hom-associativity" => {
                            (mul(r, &ax, &mul(r, y, z)), mul(r, &mul(r, x, y), &az))
                        }
                        "left-associativity" => {
                            (mul(l, x, &mul(l, y, z)), mul(l, &mul(l, x, y), z))
                        }
                        "right-associativity" => {
                            (mul(r, x, &mul(r, y, z)), mul(r, &mul(r, x, y), z))
                        }
                        "left-bar" => (mul(l, &ax, &mul(l, y, z)), mul(l, &ax, &mul(r, y, z))),
                        "middle" => (mul(l, &mul(r, x, y), &az), mul(r, &ax, &mul(l, y, z))),
                        "right-bar" => (mul(r, &mul(r, x, y), &az), mul(r, &mul(l, x, y), &az)),
                        _ => unknown(axiom),
                    }
                }
            }
        }
        Leaf::Differential(dg) => {
            let (mu, al, d) = (&dg.algebra.mu, &dg.algebra.alpha, &dg.d);
            let x = &args[0];
            match axiom {
                "leibniz-rule" => {
                    let y = &args[1];
                    (
                        ap(d, &mul(mu, x, y)),
                        plus(&mul(mu, &ap(d, x), y), &mul(mu, x, &ap(d, y))),
                    )
                }
                "d-squared" => (ap(d, &ap(d, x)), Vector::zero(x.field(), x.dim())),
                "d-alpha" => (ap(d, &ap(al, x)), ap(al, &ap(d, x))),
                _ => unknown(axiom),
            }
        }
        Leaf::HomLeibniz(lb) => {
            let (b, al) = (&lb.bracket, &lb.alpha);
            let (x, y) = (&args[0], &args[1]);
            match axiom {
                "leibniz-identity" => {
                    let z = &args[2];
                    let lhs = mul(b, &mul(b, x, y), &ap(al, z));
                    let rhs = plus(
                        &mul(b, &mul(b, x, z), &ap(al, y)),
                        &mul(b, &ap(al, x), &mul(b, y, z)),
                    );
                    (lhs, rhs)
                }
                "bracket-multiplicativity" => {
                    (ap(al, &mul(b, x, y)), mul(b, &ap(al, x), &ap(al, y)))
                }
                "skew-symmetry" => {
                    let yx = mul(b, y, x);
                    (
                        mul(b, x, y),
                        minus(&Vector::zero(yx.field(), yx.dim()), &yx),
                    )
                }
                _ => unknown(axiom),
            }
        }
        Leaf::HomPreLie(p) => {
            let (m, al) = (&p.product, &p.alpha);
            let (x, y, z) = (&args[0], &args[1], &args[2]);
            match axiom {
                "left-symmetry" => {
                    let az = ap(al, z);
                    let lhs = minus(
                        &mul(m, &ap(al, x), &mul(m, y, z)),
                        &mul(m, &mul(m, x, y), &az),
                    );
                    let rhs = minus(
                        &mul(m, &ap(al, y), &mul(m, x, z)),
                        &mul(m, &mul(m, y, x), &az),
                    );
                    (lhs, rhs)
                }
                _ => unknown(axiom),
            }
        }
        Leaf::Hlsda(s) => {
            let (l, r, al) = (&s.left, &s.right, &s.alpha);
            let (x, y, z) = (&args[0], &args[1], &args[2]);
            let (ax, ay, az) = (ap(al, x), ap(al, y), ap(al, z));
            match axiom {
                "left-bar" => (mul(l, &ax, &mul(l, y, z)), mul(l, &ax, &mul(r, y, z))),
                "right-bar" => (mul(r, &mul(r, x, y), &az), mul(r, &mul(l, x, y), &az)),
                "left-symmetric-mixed" => (
                    minus(&mul(l, &ax, &mul(l, y, z)), &mul(l, &mul(l, x, y), &az)),
                    minus(&mul(r, &ay, &mul(l, x, z)), &mul(l, &mul(r, y, x), &az)),
                ),
                "left-symmetric-right" => (
                    minus(&mul(r, &ax, &mul(r, y, z)), &mul(r, &mul(r, x, y), &az)),
                    minus(&mul(r, &ay, &mul(r, x, z)), &mul(r, &mul(r, y, x), &az)),
                ),
                _ => unknown(axiom),
            }
        }
        Leaf::Affine(a) => {
            let (b, al, n1, n2) = (&a.leibniz.bracket, &a.leibniz.alpha, &a.nabla1, &a.nabla2);
            let (x, y) = (&args[0], &args[1]);
            if axiom == "bracket-compatibility" {
                return (minus(&mul(n2, x, y), &mul(n1, y, x)), mul(b, x, y));
            }
            let z = &args[2];
            let (ax, ay, az) = (ap(al, x), ap(al, y), ap(al, z));
            match axiom {
                "nabla1-bar" => (mul(n1, &mul(n1, x, y), &az), mul(n1, &mul(n2, x, y), &az)),
                "nabla2-bar" => (mul(n2, &ax, &mul(n2, y, z)), mul(n2, &ax, &mul(n1, y, z))),
                "nabla2-symmetry" => (
                    minus(&mul(n2, &ax, &mul(n2, y, z)), &mul(n1, &ay, &mul(n2, x, z))),
                    mul(n2, &mul(b, x, y), &az),
                ),
                "nabla1-symmetry" => (
                    minus(&mul(n1, &ax, &mul(n1, y, z)), &mul(n1, &ay, &mul(n1, x, z))),
                    mul(n1, &mul(b, x, y), &az),
                ),
                _ => unknown(axiom),
            }
        }
        Leaf::Morphism { map, src, dst } => {
            let name = axiom.strip_prefix("preserves-").unwrap_or(axiom);
            fn find<'s>(s: &'s Structure, name: &str, axiom: &str) -> Section<'s> {
                s.sections()
                    .into_iter()
                    .find(|(n, _)| *n == name)
                    .map(|(_, sec)| sec)
                    .unwrap_or_else(|| unknown(axiom))
            }
            let f = |v: &Vector| ap(map, v);
            match (find(src, name, axiom), find(dst, name, axiom)) {
                (Section::Product(p), Section::Product(q)) => (
                    f(&mul(p, &args[0], &args[1])),
                    mul(q, &f(&args[0]), &f(&args[1])),
                ),
                (Section::Coproduct(p), Section::Coproduct(q)) => {
                    let image = cop(p, &args[0]);
                    let pushed = contract_pair(&image, src.dim(), |a, b| otimes(&f(a), &f(b)));
                    (pushed, cop(q, &f(&args[0])))
                }
                (Section::Endo(p), Section::Endo(q)) => (f(&ap(p, &args[0])), ap(q, &f(&args[0]))),
                (Section::Element(u), Section::Element(v)) => (f(u), v.clone()),
                (Section::Form(e), Section::Form(e2)) => (ap(e2, &f(&args[0])), ap(e, &args[0])),
                _ => unknown(axiom),
            }
        }
    }
}

fn unknown(axiom: &str) -> ! {
    panic!("oracle has no evaluator for axiom {axiom:?}")
}

fn leaf_field_dim(leaf: &Leaf) -> (Field, usize) {
    match leaf {
        Leaf::HomAlgebra(a) => (a.field(), a.dim()),
        Leaf::HomCoalgebra(c) => (c.field(), c.dim()),
        Leaf::Compat(b) | Leaf::Infinitesimal(b) => (b.field(), b.dim()),
        Leaf::HomDialgebra(d) => (d.field(), d.dim()),
        Leaf::Differential(d) => (d.field(), d.dim()),
        Leaf::HomLeibniz(l) => (l.field(), l.dim()),
        Leaf::HomPreLie(p) => (p.field(), p.dim()),
        Leaf::Hlsda(s) => (s.field(), s.dim()),
        Leaf::Affine(a) => (a.field(), a.dim()),
        Leaf::Morphism { src, .. } => (src.field(), src.dim()),
    }
}

/// Re-evaluates every law of `steps` that `verdict` covers.
///
/// A law the basis check passed must hold on all `samples` random argument
/// tuples; a law it failed must re-fail, with the same two sides, on each
/// reported witness tuple.
pub fn crosscheck(
    steps: &[Step],
    verdict: &Verdict,
    opts: &CheckOptions,
    samples: usize,
    seed: u64,
) -> OracleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = OracleReport {
        laws: 0,
        samples,
        disagreements: Vec::new(),
    };
    for step in steps {
        let (field, n) = leaf_field_dim(&step.leaf);
        for (axiom, arity, fatal) in leaf_axioms(&step.leaf, opts) {
            let covered = verdict
                .laws
                .iter()
                .any(|(s, a)| *s == step.scope && a == axiom);
            if !covered {
                continue;
            }
            report.laws += 1;
            let pool = if fatal {
                &verdict.witnesses
            } else {
                &verdict.advisories
            };
            let witnesses: Vec<_> = pool
                .iter()
                .filter(|w| w.scope == step.scope && w.axiom == axiom)
                .collect();
            let label = if step.scope.is_empty() {
                axiom.to_string()
            } else {
                format!("{}:{axiom}", step.scope)
            };
            if witnesses.is_empty() {
                for sample in 0..samples {
                    let args: Vec<Vector> = (0..arity)
                        .map(|_| random_vector(&mut rng, field, n))
                        .collect();
                    let (lhs, rhs) = evaluate(&step.leaf, axiom, &args, opts);
                    if lhs != rhs {
                        report.disagreements.push(format!(
                            "{label}: basis check passed but sample {sample} differs"
                        ));
                        break;
                    }
                }
            } else {
                for w in witnesses {
                    let args: Vec<Vector> = w.tuple.iter().map(|&i| basis(field, n, i)).collect();
                    let (lhs, rhs) = evaluate(&step.leaf, axiom, &args, opts);
                    if lhs == rhs {
                        report
                            .disagreements
                            .push(format!("{label}: witness {:?} does not re-fail", w.tuple));
                    } else if lhs != w.lhs || rhs != w.rhs {
                        report.disagreements.push(format!(
                            "{label}: witness {:?} re-evaluates differently",
                            w.tuple
                        ));
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::{plan, run_plan, Suite};
    use crate::linalg::CoproductTensor;
    use crate::structures::HomBialgebra;

    const Q: Field = Field::Rational;

    fn ex1() -> Structure {
        Structure::HomBialgebra(HomBialgebra {
            mu: ProductTensor::from_i64(Q, 2, &[1, 0, 0, 1, 0, 1, 0, 1]),
            unit: Vector::basis(Q, 2, 0),
            delta: CoproductTensor::from_i64(Q, 2, &[1, 0, 0, 0, 1, 0, 0, 0]),
            counit: LinearMap::from_i64(Q, 1, 2, &[1, 0]),
            alpha: LinearMap::from_i64(Q, 2, 2, &[0, 0, 1, 1]),
        })
    }

    #[test]
    fn agrees_on_failing_and_passing_laws() {
        let opts = CheckOptions::default();
        for suite in [Suite::HomBialgebra, Suite::Infinitesimal] {
            let steps = plan(suite, &ex1()).unwrap();
            let v = run_plan(suite.as_str(), &steps, &opts);
            assert!(!v.passed());
            for seed in [DEFAULT_SEED, 7] {
                let r = crosscheck(&steps, &v, &opts, DEFAULT_SAMPLES, seed);
                assert!(r.agrees(), "{:?}", r.disagreements);
                assert!(r.laws > 0);
            }
        }
    }

    #[test]
    fn detects_a_tampered_verdict() {
        let opts = CheckOptions::default();
        let steps = plan(Suite::Infinitesimal, &ex1()).unwrap();
        let mut v = run_plan("infinitesimal", &steps, &opts);
        v.witnesses.retain(|w| w.axiom != "infinitesimal");
        let r = crosscheck(&steps, &v, &opts, DEFAULT_SAMPLES, DEFAULT_SEED);
        assert!(!r.agrees());
    }
}
