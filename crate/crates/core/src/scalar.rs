//! Exact field elements.
//!
//! Two ground fields are supported: the rationals (arbitrary precision, kept
//! in lowest terms) and prime fields `F_p`. Equality is always exact.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid scalar literal {literal:?} for field {field}")]
    BadLiteral { literal: String, field: Field },
    #[error("invalid field descriptor {0:?}")]
    BadField(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// The ground field a scalar lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    /// Prime field `F_p`, rejecting composite moduli.
    pub fn prime(p: u32) -> Result<Field, ScalarError> {
        if is_prime(p as u64) {
            Ok(Field::Prime(p))
        } else {
            Err(ScalarError::NotPrime(p as u64))
        }
    }

    pub fn descriptor(&self) -> String {
        match self {
            Field::Rational => "rational".to_string(),
            Field::Prime(p) => format!("gf:{p}"),
        }
    }

    pub fn parse_descriptor(s: &str) -> Result<Field, ScalarError> {
        match s.trim() {
            "rational" => Ok(Field::Rational),
            other => {
                let p = other
                    .strip_prefix("gf:")
                    .and_then(|p| p.parse::<u32>().ok())
                    .ok_or_else(|| ScalarError::BadField(s.to_string()))?;
                Field::prime(p)
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.descriptor())
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Field::parse_descriptor(&s).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact element of a [`Field`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular { value: u32, modulus: u32 },
}

impl Scalar {
    pub fn zero(field: Field) -> Scalar {
        Scalar::from_i64(field, 0)
    }

    pub fn one(field: Field) -> Scalar {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: Field, v: i64) -> Scalar {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Modular {
                value: v.rem_euclid(p as i64) as u32,
                modulus: p,
            },
        }
    }

    /// `num / den`; fails when `den` vanishes in the field.
    pub fn from_ratio(field: Field, num: i64, den: i64) -> Result<Scalar, ScalarError> {
        let d = Scalar::from_i64(field, den);
        let inv = d.inv().ok_or(ScalarError::DivisionByZero)?;
        Ok(&Scalar::from_i64(field, num) * &inv)
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Modular { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Modular { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: pow_mod(*value as u64, *modulus as u64 - 2, *modulus as u64) as u32,
                modulus: *modulus,
            },
        })
    }

    /// Parses an integer or `p/q` literal into `field`.
    pub fn parse(field: Field, literal: &str) -> Result<Scalar, ScalarError> {
        let bad = || ScalarError::BadLiteral {
            literal: literal.to_string(),
            field,
        };
        let text = literal.trim();
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (text, None),
        };
        let num = BigInt::from_str(num).map_err(|_| bad())?;
        let den = match den {
            Some(d) => BigInt::from_str(d).map_err(|_| bad())?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(bad());
        }
        match field {
            Field::Rational => Ok(Scalar::Rational(BigRational::new(num, den))),
            Field::Prime(p) => {
                let reduce = |b: &BigInt| -> u32 {
                    let m = BigInt::from(p);
                    let r = ((b % &m) + &m) % &m;
                    u32::try_from(&r).expect("residue fits")
                };
                let n = Scalar::Modular {
                    value: reduce(&num),
                    modulus: p,
                };
                let d = Scalar::Modular {
                    value: reduce(&den),
                    modulus: p,
                };
                let inv = d.inv().ok_or_else(bad)?;
                Ok(&n * &inv)
            }
        }
    }

    /// Canonical literal: `n` or `n/d` in lowest terms, residues in `0..p`.
    pub fn literal(&self) -> String {
        self.to_string()
    }

    fn expect_same(&self, other: &Scalar) {
        assert_eq!(
            self.field(),
            other.field(),
            "scalar arithmetic across different fields"
        );
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(_) => write!(f, "{self}"),
            Scalar::Modular { value, modulus } => write!(f, "{value} (mod {modulus})"),
        }
    }
}

impl Scalar {
    /// True for rationals below zero; prime-field elements are never negative.
    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_negative())
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (
                Scalar::Modular { value: a, modulus },
                Scalar::Modular {
                    value: b,
                    modulus: m2,
                },
            ) if modulus == m2 => Scalar::Modular {
                value: ((*a as u64 + *b as u64) % *modulus as u64) as u32,
                modulus: *modulus,
            },
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => {
                self.expect_same(rhs);
                unreachable!()
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (
                Scalar::Modular { value: a, modulus },
                Scalar::Modular {
                    value: b,
                    modulus: m2,
                },
            ) if modulus == m2 => {
                let m = *modulus as u64;
                Scalar::Modular {
                    value: ((*a as u64 + m - *b as u64) % m) as u32,
                    modulus: *modulus,
                }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            _ => {
                self.expect_same(rhs);
                unreachable!()
            }
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (
                Scalar::Modular { value: a, modulus },
                Scalar::Modular {
                    value: b,
                    modulus: m2,
                },
            ) if modulus == m2 => Scalar::Modular {
                value: ((*a as u64 * *b as u64) % *modulus as u64) as u32,
                modulus: *modulus,
            },
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => {
                self.expect_same(rhs);
                unreachable!()
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: (*modulus - *value) % *modulus,
                modulus: *modulus,
            },
        }
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(&self)
    }
}
