//! Test-side arithmetic on plain nested vectors of `BigRational`, written
//! without the library's tensor code so it can serve as an oracle.
#![allow(dead_code)]

use homalg::axioms::Suite;
use homalg::linalg::{CoproductTensor, LinearMap, ProductTensor, Vector};
use homalg::scalar::{Field, Scalar};
use homalg::structures::{HomAlgebra, HomBialgebra, HomCoalgebra, Structure};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;
pub type V = Vec<Q>;
/// `c[i][j][k]`, or `d[k][i][j]` for coproducts.
pub type T3 = Vec<Vec<Vec<Q>>>;

pub fn q(s: &Scalar) -> Q {
    s.literal().parse().expect("scalar literal")
}

pub fn int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Equality in the structure's field. Prime-field tables hold integer
/// residues, so integer arithmetic followed by reduction is exact.
#[derive(Debug, Clone, Copy)]
pub struct Ring(pub Option<u32>);

impl Ring {
    pub fn of(f: Field) -> Ring {
        match f {
            Field::Rational => Ring(None),
            Field::Prime(p) => Ring(Some(p)),
        }
    }

    pub fn is_zero(&self, x: &Q) -> bool {
        match self.0 {
            None => x.is_zero(),
            Some(p) => {
                assert!(x.is_integer(), "prime-field arithmetic stays integral");
                (x.numer() % BigInt::from(p)).is_zero()
            }
        }
    }

    pub fn same(&self, a: &[Q], b: &[Q]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| self.is_zero(&(x - y)))
    }
}

pub fn coords(v: &Vector) -> V {
    v.coords().iter().map(q).collect()
}

pub fn table(p: &ProductTensor) -> T3 {
    let n = p.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| q(p.entry(i, j, k))).collect())
                .collect()
        })
        .collect()
}

pub fn cotable(d: &CoproductTensor) -> T3 {
    let n = d.dim();
    (0..n)
        .map(|k| {
            (0..n)
                .map(|i| (0..n).map(|j| q(d.entry(k, i, j))).collect())
                .collect()
        })
        .collect()
}

/// Matrix rows.
pub fn rows(m: &LinearMap) -> Vec<Vec<Q>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| q(m.entry(r, c))).collect())
        .collect()
}

pub fn e(n: usize, i: usize) -> V {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

pub fn add(a: &[Q], b: &[Q]) -> V {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> V {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn mul(c: &T3, x: &[Q], y: &[Q]) -> V {
    let n = c.len();
    let mut out = vec![Q::zero(); n];
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if y[j].is_zero() {
                continue;
            }
            let s = &x[i] * &y[j];
            for k in 0..n {
                out[k] += &s * &c[i][j][k];
            }
        }
    }
    out
}

pub fn apply(m: &[Vec<Q>], x: &[Q]) -> V {
    m.iter()
        .map(|row| row.iter().zip(x).fold(Q::zero(), |acc, (a, b)| acc + a * b))
        .collect()
}

/// `x⊗y`, flattened with the left factor major.
pub fn outer(x: &[Q], y: &[Q]) -> V {
    x.iter()
        .flat_map(|a| y.iter().map(move |b| a * b))
        .collect()
}

/// `Δ(x)` flattened.
pub fn comul(d: &T3, x: &[Q]) -> V {
    let n = d.len();
    let mut out = vec![Q::zero(); n * n];
    for k in 0..n {
        if x[k].is_zero() {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] += &x[k] * &d[k][i][j];
            }
        }
    }
    out
}

/// `(x⊗y)•(x'⊗y') = xx'⊗yy'` extended bilinearly.
pub fn tensor_mul(c: &T3, a: &[Q], b: &[Q]) -> V {
    let n = c.len();
    let mut out = vec![Q::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            let s = &a[i * n + j];
            if s.is_zero() {
                continue;
            }
            for k in 0..n {
                for l in 0..n {
                    let t = &b[k * n + l];
                    if t.is_zero() {
                        continue;
                    }
                    let left = mul(c, &e(n, i), &e(n, k));
                    let right = mul(c, &e(n, j), &e(n, l));
                    let w = outer(&left, &right);
                    for (o, v) in out.iter_mut().zip(w) {
                        *o += s * t * v;
                    }
                }
            }
        }
    }
    out
}

fn triples(n: usize) -> impl Iterator<Item = (V, V, V)> {
    (0..n * n * n).map(move |t| (e(n, t / (n * n)), e(n, (t / n) % n), e(n, t % n)))
}

fn pairs(n: usize) -> impl Iterator<Item = (V, V)> {
    (0..n * n).map(move |t| (e(n, t / n), e(n, t % n)))
}

pub fn associative(r: Ring, c: &T3) -> bool {
    triples(c.len())
        .all(|(x, y, z)| r.same(&mul(c, &mul(c, &x, &y), &z), &mul(c, &x, &mul(c, &y, &z))))
}

pub fn unital(r: Ring, c: &T3, u: &[Q]) -> bool {
    (0..c.len()).all(|i| {
        let x = e(c.len(), i);
        r.same(&mul(c, u, &x), &x) && r.same(&mul(c, &x, u), &x)
    })
}

/// `(x,y,z) = (y,x,z)` for the associator.
pub fn left_symmetric(r: Ring, c: &T3) -> bool {
    let assoc = |x: &V, y: &V, z: &V| sub(&mul(c, &mul(c, x, y), z), &mul(c, x, &mul(c, y, z)));
    triples(c.len()).all(|(x, y, z)| r.same(&assoc(&x, &y, &z), &assoc(&y, &x, &z)))
}

/// `[[x,y],z] = [[x,z],y] + [x,[y,z]]`.
pub fn leibniz(r: Ring, b: &T3) -> bool {
    triples(b.len()).all(|(x, y, z)| {
        let lhs = mul(b, &mul(b, &x, &y), &z);
        let rhs = add(&mul(b, &mul(b, &x, &z), &y), &mul(b, &x, &mul(b, &y, &z)));
        r.same(&lhs, &rhs)
    })
}

pub fn coassociative(r: Ring, d: &T3) -> bool {
    let n = d.len();
    (0..n).all(|k| {
        let dk = comul(d, &e(n, k));
        let mut left = vec![Q::zero(); n * n * n];
        let mut right = vec![Q::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                let s = &dk[i * n + j];
                if s.is_zero() {
                    continue;
                }
                // (Δ⊗id): Δ(e_i)⊗e_j ; (id⊗Δ): e_i⊗Δ(e_j)
                let a = outer(&comul(d, &e(n, i)), &e(n, j));
                let b = outer(&e(n, i), &comul(d, &e(n, j)));
                for t in 0..n * n * n {
                    left[t] += s * &a[t];
                    right[t] += s * &b[t];
                }
            }
        }
        r.same(&left, &right)
    })
}

pub fn counital(r: Ring, d: &T3, eps: &[Q]) -> bool {
    let n = d.len();
    (0..n).all(|k| {
        let dk = comul(d, &e(n, k));
        let mut left = vec![Q::zero(); n];
        let mut right = vec![Q::zero(); n];
        for i in 0..n {
            for j in 0..n {
                left[j] += &eps[i] * &dk[i * n + j];
                right[i] += &dk[i * n + j] * &eps[j];
            }
        }
        r.same(&left, &e(n, k)) && r.same(&right, &e(n, k))
    })
}

/// `Δ` and `ε` are multiplicative.
pub fn compatible(r: Ring, c: &T3, d: &T3, eps: &[Q]) -> bool {
    pairs(c.len()).all(|(x, y)| {
        let xy = mul(c, &x, &y);
        let dot = |v: &[Q]| v.iter().zip(eps).fold(Q::zero(), |a, (p, q)| a + p * q);
        r.same(&comul(d, &xy), &tensor_mul(c, &comul(d, &x), &comul(d, &y)))
            && r.same(&[dot(&xy)], &[dot(&x) * dot(&y)])
    })
}

/// `Δ(xy) = (μ⊗id)(x⊗Δy) + (id⊗μ)(Δx⊗y) − x⊗y`.
pub fn infinitesimal_relation(r: Ring, c: &T3, d: &T3) -> bool {
    let n = c.len();
    pairs(n).all(|(x, y)| {
        let lhs = comul(d, &mul(c, &x, &y));
        let dx = comul(d, &x);
        let dy = comul(d, &y);
        let mut rhs = vec![Q::zero(); n * n];
        for a in 0..n {
            for b in 0..n {
                let t1 = outer(&mul(c, &x, &e(n, a)), &e(n, b));
                let t2 = outer(&e(n, a), &mul(c, &e(n, b), &y));
                for t in 0..n * n {
                    rhs[t] += &dy[a * n + b] * &t1[t] + &dx[a * n + b] * &t2[t];
                }
            }
        }
        r.same(&lhs, &sub(&rhs, &outer(&x, &y)))
    })
}

/// Both products associative plus the three mixed dialgebra laws.
pub fn dialgebra(r: Ring, l: &T3, rt: &T3) -> bool {
    associative(r, l)
        && associative(r, rt)
        && triples(l.len()).all(|(x, y, z)| {
            r.same(&mul(l, &x, &mul(l, &y, &z)), &mul(l, &x, &mul(rt, &y, &z)))
                && r.same(&mul(l, &mul(rt, &x, &y), &z), &mul(rt, &x, &mul(l, &y, &z)))
                && r.same(
                    &mul(rt, &mul(rt, &x, &y), &z),
                    &mul(rt, &mul(l, &x, &y), &z),
                )
        })
}

/// The four left-symmetric dialgebra laws.
pub fn hlsda(r: Ring, l: &T3, rt: &T3) -> bool {
    triples(l.len()).all(|(x, y, z)| {
        let one = r.same(&mul(l, &x, &mul(l, &y, &z)), &mul(l, &x, &mul(rt, &y, &z)));
        let two = r.same(
            &mul(rt, &mul(rt, &x, &y), &z),
            &mul(rt, &mul(l, &x, &y), &z),
        );
        let three = r.same(
            &sub(&mul(l, &x, &mul(l, &y, &z)), &mul(l, &mul(l, &x, &y), &z)),
            &sub(&mul(rt, &y, &mul(l, &x, &z)), &mul(l, &mul(rt, &y, &x), &z)),
        );
        let four = r.same(
            &sub(
                &mul(rt, &x, &mul(rt, &y, &z)),
                &mul(rt, &mul(rt, &x, &y), &z),
            ),
            &sub(
                &mul(rt, &y, &mul(rt, &x, &z)),
                &mul(rt, &mul(rt, &y, &x), &z),
            ),
        );
        one && two && three && four
    })
}

/// `d` is a derivation with `d² = 0`.
pub fn differential(r: Ring, c: &T3, d: &[Vec<Q>]) -> bool {
    let n = c.len();
    let rule = pairs(n).all(|(x, y)| {
        let lhs = apply(d, &mul(c, &x, &y));
        let rhs = add(&mul(c, &apply(d, &x), &y), &mul(c, &x, &apply(d, &y)));
        r.same(&lhs, &rhs)
    });
    rule && (0..n).all(|i| r.same(&apply(d, &apply(d, &e(n, i))), &vec![Q::zero(); n]))
}

fn algebra_holds(r: Ring, a: &HomAlgebra) -> bool {
    let c = table(&a.mu);
    associative(r, &c) && a.unit.as_ref().is_none_or(|u| unital(r, &c, &coords(u)))
}

fn coalgebra_holds(r: Ring, co: &HomCoalgebra) -> bool {
    let d = cotable(&co.delta);
    coassociative(r, &d)
        && co
            .counit
            .as_ref()
            .is_none_or(|m| counital(r, &d, &rows(m)[0]))
}

fn compat_holds(r: Ring, b: &HomBialgebra) -> bool {
    compatible(r, &table(&b.mu), &cotable(&b.delta), &rows(&b.counit)[0])
}

/// The classical law a suite reduces to when `α = id`, or `None` when the
/// oracle has no independent formulation for that pairing.
pub fn classical(suite: Suite, s: &Structure) -> Option<bool> {
    let r = Ring::of(s.field());
    Some(match (suite, s) {
        (Suite::HomAlgebra, Structure::HomAlgebra(a)) => algebra_holds(r, a),
        (Suite::HomAlgebra, Structure::HomBialgebra(b)) => algebra_holds(r, &b.algebra()),
        (Suite::HomAlgebra, Structure::Differential(d)) => algebra_holds(r, &d.algebra),
        (Suite::HomPreLie, Structure::HomAlgebra(a)) => left_symmetric(r, &table(&a.mu)),
        (Suite::HomPreLie, Structure::HomPreLie(p)) => left_symmetric(r, &table(&p.product)),
        (Suite::HomCoalgebra, Structure::HomCoalgebra(co)) => coalgebra_holds(r, co),
        (Suite::HomCoalgebra, Structure::HomBialgebra(b)) => coalgebra_holds(r, &b.coalgebra()),
        (Suite::BialgebraCompat, Structure::HomBialgebra(b)) => compat_holds(r, b),
        (Suite::HomBialgebra, Structure::HomBialgebra(b)) => {
            algebra_holds(r, &b.algebra())
                && coalgebra_holds(r, &b.coalgebra())
                && compat_holds(r, b)
        }
        (Suite::Infinitesimal, Structure::HomBialgebra(b)) => {
            algebra_holds(r, &b.algebra())
                && coalgebra_holds(r, &b.coalgebra())
                && infinitesimal_relation(r, &table(&b.mu), &cotable(&b.delta))
        }
        (Suite::HomDialgebra, Structure::HomDialgebra(d)) => {
            dialgebra(r, &table(&d.left), &table(&d.right))
        }
        (Suite::HomDialgebra, Structure::Hlsda(h)) => {
            dialgebra(r, &table(&h.left), &table(&h.right))
        }
        (Suite::Hlsda, Structure::HomDialgebra(d)) => hlsda(r, &table(&d.left), &table(&d.right)),
        (Suite::Hlsda, Structure::Hlsda(h)) => hlsda(r, &table(&h.left), &table(&h.right)),
        (Suite::Differential, Structure::Differential(d)) => {
            algebra_holds(r, &d.algebra) && differential(r, &table(&d.algebra.mu), &rows(&d.d))
        }
        (Suite::HomLeibniz, Structure::HomLeibniz(l)) => leibniz(r, &table(&l.bracket)),
        (Suite::HomLeibniz, Structure::Affine(a)) => leibniz(r, &table(&a.leibniz.bracket)),
        _ => return None,
    })
}

/// `α∘μ` computed entrywise.
pub fn twisted_table(alpha: &LinearMap, mu: &ProductTensor) -> T3 {
    let a = rows(alpha);
    let c = table(mu);
    let n = c.len();
    (0..n)
        .map(|i| (0..n).map(|j| apply(&a, &c[i][j])).collect())
        .collect()
}
