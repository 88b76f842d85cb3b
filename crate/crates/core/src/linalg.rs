//! Dense exact linear algebra on tensor powers of a finite-dimensional space.
//!
//! Elements of `V^{⊗k}` are flat coordinate vectors of length `n^k` in the
//! lexicographic basis `e_{i_1}⊗…⊗e_{i_k}` (leftmost factor most
//! significant). Products `V⊗V → V` and coproducts `V → V⊗V` are stored as
//! [`LinearMap`]s in that convention so axioms become matrix identities built
//! from [`LinearMap::compose`] and [`LinearMap::kron`].

use std::fmt;

use thiserror::Error;

use crate::scalar::{Field, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("mixed field modes: {0} and {1}")]
    FieldMismatch(Field, Field),
}

fn same_field(a: Field, b: Field) -> Result<(), LinalgError> {
    if a == b {
        Ok(())
    } else {
        Err(LinalgError::FieldMismatch(a, b))
    }
}

fn check_entries(field: Field, entries: &[Scalar]) -> Result<(), LinalgError> {
    for s in entries {
        same_field(field, s.field())?;
    }
    Ok(())
}

/// A coordinate vector over a single field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vector {
    field: Field,
    coords: Vec<Scalar>,
}

impl Vector {
    pub fn new(field: Field, coords: Vec<Scalar>) -> Result<Vector, LinalgError> {
        check_entries(field, &coords)?;
        Ok(Vector { field, coords })
    }

    pub fn from_i64(field: Field, coords: &[i64]) -> Vector {
        Vector {
            field,
            coords: coords.iter().map(|&c| Scalar::from_i64(field, c)).collect(),
        }
    }

    pub fn zero(field: Field, dim: usize) -> Vector {
        Vector {
            field,
            coords: vec![Scalar::zero(field); dim],
        }
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn basis(field: Field, dim: usize, i: usize) -> Vector {
        let mut v = Vector::zero(field, dim);
        v.coords[i] = Scalar::one(field);
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> &Scalar {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    /// Index of the single unit coordinate when `self` is a basis vector.
    pub fn as_basis_index(&self) -> Option<usize> {
        let mut hit = None;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !c.is_one() || hit.is_some() {
                return None;
            }
            hit = Some(i);
        }
        hit
    }

    pub fn add(&self, other: &Vector) -> Result<Vector, LinalgError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector, LinalgError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &Scalar) -> Vector {
        Vector {
            field: self.field,
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    /// Tensor product `self ⊗ other`, flattened lexicographically.
    pub fn tensor(&self, other: &Vector) -> Result<Vector, LinalgError> {
        same_field(self.field, other.field)?;
        let mut coords = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.coords {
            for b in &other.coords {
                coords.push(a * b);
            }
        }
        Ok(Vector {
            field: self.field,
            coords,
        })
    }

    fn zip_with(
        &self,
        other: &Vector,
        f: impl Fn(&Scalar, &Scalar) -> Scalar,
    ) -> Result<Vector, LinalgError> {
        same_field(self.field, other.field)?;
        if self.dim() != other.dim() {
            return Err(LinalgError::Dimension {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Vector {
            field: self.field,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coords.iter()).finish()
    }
}

/// An `m×n` matrix; column `j` is the image of the `j`-th source basis vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearMap {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl LinearMap {
    /// Builds a map from row-major entries.
    pub fn from_rows(
        field: Field,
        rows: usize,
        cols: usize,
        data: Vec<Scalar>,
    ) -> Result<LinearMap, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{rows}×{cols} map needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        check_entries(field, &data)?;
        Ok(LinearMap {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Builds a map from the images of the source basis vectors.
    pub fn from_columns(
        field: Field,
        target_dim: usize,
        images: &[Vector],
    ) -> Result<LinearMap, LinalgError> {
        let mut m = LinearMap::zero(field, target_dim, images.len());
        for (j, img) in images.iter().enumerate() {
            same_field(field, img.field())?;
            if img.dim() != target_dim {
                return Err(LinalgError::Dimension {
                    expected: target_dim,
                    found: img.dim(),
                });
            }
            for i in 0..target_dim {
                m.data[i * m.cols + j] = img.coords[i].clone();
            }
        }
        Ok(m)
    }

    /// Row-major integer entries; convenient for tests and fixtures.
    pub fn from_i64(field: Field, rows: usize, cols: usize, data: &[i64]) -> LinearMap {
        assert_eq!(data.len(), rows * cols, "entry count");
        LinearMap {
            field,
            rows,
            cols,
            data: data.iter().map(|&v| Scalar::from_i64(field, v)).collect(),
        }
    }

    pub fn zero(field: Field, rows: usize, cols: usize) -> LinearMap {
        LinearMap {
            field,
            rows,
            cols,
            data: vec![Scalar::zero(field); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> LinearMap {
        let mut m = LinearMap::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one(field);
        }
        m
    }

    /// Linear map `K → V` sending 1 to `v`.
    pub fn from_vector(v: &Vector) -> LinearMap {
        LinearMap {
            field: v.field,
            rows: v.dim(),
            cols: 1,
            data: v.coords.clone(),
        }
    }

    /// Permutation of tensor factors on `V^{⊗k}`, `k = perm.len()`: output
    /// factor `t` is input factor `perm[t]`.
    pub fn tensor_permutation(field: Field, n: usize, perm: &[usize]) -> LinearMap {
        let k = perm.len();
        let size = n.pow(k as u32);
        let mut m = LinearMap::zero(field, size, size);
        let mut digits = vec![0usize; k];
        for col in 0..size {
            decode_into(col, n, &mut digits);
            let row = perm.iter().fold(0, |acc, &src| acc * n + digits[src]);
            m.data[row * size + col] = Scalar::one(field);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn entry(&self, row: usize, col: usize) -> &Scalar {
        &self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Scalar) {
        assert_eq!(value.field(), self.field, "entry field");
        self.data[row * self.cols + col] = value;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector {
            field: self.field,
            coords: (0..self.rows).map(|i| self.entry(i, j).clone()).collect(),
        }
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == LinearMap::identity(self.field, self.rows)
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector, LinalgError> {
        same_field(self.field, v.field)?;
        if v.dim() != self.cols {
            return Err(LinalgError::Dimension {
                expected: self.cols,
                found: v.dim(),
            });
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = Scalar::zero(self.field);
            for (j, x) in v.coords.iter().enumerate() {
                let a = self.entry(i, j);
                if !a.is_zero() && !x.is_zero() {
                    acc = &acc + &(a * x);
                }
            }
            out.push(acc);
        }
        Ok(Vector {
            field: self.field,
            coords: out,
        })
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap, LinalgError> {
        same_field(self.field, inner.field)?;
        if self.cols != inner.rows {
            return Err(LinalgError::Shape(format!(
                "cannot compose {}×{} after {}×{}",
                self.rows, self.cols, inner.rows, inner.cols
            )));
        }
        let mut out = LinearMap::zero(self.field, self.rows, inner.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..inner.cols {
                    let b = inner.entry(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ other` acting on `V⊗W` with the left
    /// factor major.
    pub fn kron(&self, other: &LinearMap) -> Result<LinearMap, LinalgError> {
        same_field(self.field, other.field)?;
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = LinearMap::zero(self.field, rows, cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.entry(i1, j1);
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        let b = other.entry(i2, j2);
                        if b.is_zero() {
                            continue;
                        }
                        let r = i1 * other.rows + i2;
                        let c = j1 * other.cols + j2;
                        out.data[r * cols + c] = a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &LinearMap) -> Result<LinearMap, LinalgError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &LinearMap) -> Result<LinearMap, LinalgError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &Scalar) -> LinearMap {
        LinearMap {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|c| c * s).collect(),
        }
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular or not square.
    pub fn inverse(&self) -> Option<LinearMap> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = LinearMap::identity(self.field, n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.entry(r, col).is_zero())?;
            for m in [&mut a, &mut inv] {
                for j in 0..n {
                    m.data.swap(col * n + j, pivot * n + j);
                }
            }
            let scale = a.entry(col, col).inv().expect("nonzero pivot");
            for m in [&mut a, &mut inv] {
                for j in 0..n {
                    m.data[col * n + j] = &m.data[col * n + j] * &scale;
                }
            }
            for r in (0..n).filter(|&r| r != col) {
                let factor = a.entry(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for m in [&mut a, &mut inv] {
                    for j in 0..n {
                        let t = &factor * &m.data[col * n + j];
                        m.data[r * n + j] = &m.data[r * n + j] - &t;
                    }
                }
            }
        }
        Some(inv)
    }

    fn zip_with(
        &self,
        other: &LinearMap,
        f: impl Fn(&Scalar, &Scalar) -> Scalar,
    ) -> Result<LinearMap, LinalgError> {
        same_field(self.field, other.field)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::Shape(format!(
                "{}×{} vs {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(LinearMap {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }
}

impl fmt::Debug for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[Scalar]> = self.data.chunks(self.cols.max(1)).collect();
        write!(f, "LinearMap{}x{}{:?}", self.rows, self.cols, rows)
    }
}

/// Writes the base-`n` digits of `index` (most significant first).
pub(crate) fn decode_into(mut index: usize, n: usize, digits: &mut [usize]) {
    for d in digits.iter_mut().rev() {
        *d = index % n;
        index /= n;
    }
}

/// Basis tuple `(i_1, …, i_k)` of a lexicographic index into `V^{⊗k}`.
pub fn decode_tuple(index: usize, n: usize, arity: usize) -> Vec<usize> {
    let mut digits = vec![0; arity];
    decode_into(index, n, &mut digits);
    digits
}

pub fn encode_tuple(tuple: &[usize], n: usize) -> usize {
    tuple.iter().fold(0, |acc, &i| acc * n + i)
}

/// Bilinear product `μ(e_i, e_j) = Σ_k c_{ij}^k e_k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProductTensor {
    dim: usize,
    map: LinearMap,
}

impl ProductTensor {
    /// From entries `c[i][j][k]` flattened in that order.
    pub fn new(field: Field, dim: usize, entries: Vec<Scalar>) -> Result<Self, LinalgError> {
        if entries.len() != dim * dim * dim {
            return Err(LinalgError::Shape(format!(
                "product on dimension {dim} needs {} constants, got {}",
                dim * dim * dim,
                entries.len()
            )));
        }
        check_entries(field, &entries)?;
        let mut map = LinearMap::zero(field, dim, dim * dim);
        for (idx, c) in entries.into_iter().enumerate() {
            let (ij, k) = (idx / dim, idx % dim);
            map.data[k * map.cols + ij] = c;
        }
        Ok(ProductTensor { dim, map })
    }

    pub fn from_i64(field: Field, dim: usize, entries: &[i64]) -> Self {
        let e = entries
            .iter()
            .map(|&v| Scalar::from_i64(field, v))
            .collect();
        ProductTensor::new(field, dim, e).expect("valid product table")
    }

    /// From the `n×n²` matrix of `μ: V⊗V → V`.
    pub fn from_map(map: LinearMap) -> Result<Self, LinalgError> {
        let dim = map.rows;
        if map.cols != dim * dim {
            return Err(LinalgError::Shape(format!(
                "product matrix must be n×n², got {}×{}",
                map.rows, map.cols
            )));
        }
        Ok(ProductTensor { dim, map })
    }

    /// From the images `μ(e_i, e_j)`, row `i`, column `j`.
    pub fn from_images(field: Field, images: &[Vec<Vector>]) -> Result<Self, LinalgError> {
        let dim = images.len();
        let mut flat = Vec::with_capacity(dim * dim);
        for row in images {
            if row.len() != dim {
                return Err(LinalgError::Dimension {
                    expected: dim,
                    found: row.len(),
                });
            }
            flat.extend(row.iter().cloned());
        }
        Ok(ProductTensor {
            dim,
            map: LinearMap::from_columns(field, dim, &flat)?,
        })
    }

    pub fn zero(field: Field, dim: usize) -> Self {
        ProductTensor {
            dim,
            map: LinearMap::zero(field, dim, dim * dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.map.field
    }

    pub fn entry(&self, i: usize, j: usize, k: usize) -> &Scalar {
        self.map.entry(k, i * self.dim + j)
    }

    /// `μ(e_i, e_j)`.
    pub fn image(&self, i: usize, j: usize) -> Vector {
        self.map.column(i * self.dim + j)
    }

    /// The `n×n²` matrix of `μ: V⊗V → V`.
    pub fn as_map(&self) -> &LinearMap {
        &self.map
    }

    /// Constants `c[i][j][k]` in storage order.
    pub fn flat_entries(&self) -> Vec<Scalar> {
        let n = self.dim;
        let mut out = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out.push(self.entry(i, j, k).clone());
                }
            }
        }
        out
    }
}

/// Comultiplication `Δ(e_k) = Σ_{i,j} d_k^{ij} e_i⊗e_j`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CoproductTensor {
    dim: usize,
    map: LinearMap,
}

impl CoproductTensor {
    /// From entries `d[k][i][j]` flattened in that order.
    pub fn new(field: Field, dim: usize, entries: Vec<Scalar>) -> Result<Self, LinalgError> {
        if entries.len() != dim * dim * dim {
            return Err(LinalgError::Shape(format!(
                "coproduct on dimension {dim} needs {} constants, got {}",
                dim * dim * dim,
                entries.len()
            )));
        }
        check_entries(field, &entries)?;
        let mut map = LinearMap::zero(field, dim * dim, dim);
        for (idx, c) in entries.into_iter().enumerate() {
            let (k, ij) = (idx / (dim * dim), idx % (dim * dim));
            map.data[ij * map.cols + k] = c;
        }
        Ok(CoproductTensor { dim, map })
    }

    pub fn from_i64(field: Field, dim: usize, entries: &[i64]) -> Self {
        let e = entries
            .iter()
            .map(|&v| Scalar::from_i64(field, v))
            .collect();
        CoproductTensor::new(field, dim, e).expect("valid coproduct table")
    }

    /// From the `n²×n` matrix of `Δ: V → V⊗V`.
    pub fn from_map(map: LinearMap) -> Result<Self, LinalgError> {
        let dim = map.cols;
        if map.rows != dim * dim {
            return Err(LinalgError::Shape(format!(
                "coproduct matrix must be n²×n, got {}×{}",
                map.rows, map.cols
            )));
        }
        Ok(CoproductTensor { dim, map })
    }

    /// From the images `Δ(e_k)` as flat `n²` vectors.
    pub fn from_images(field: Field, images: &[Vector]) -> Result<Self, LinalgError> {
        let dim = images.len();
        Ok(CoproductTensor {
            dim,
            map: LinearMap::from_columns(field, dim * dim, images)?,
        })
    }

    pub fn zero(field: Field, dim: usize) -> Self {
        CoproductTensor {
            dim,
            map: LinearMap::zero(field, dim * dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.map.field
    }

    pub fn entry(&self, k: usize, i: usize, j: usize) -> &Scalar {
        self.map.entry(i * self.dim + j, k)
    }

    /// `Δ(e_k)` as a flat element of `V⊗V`.
    pub fn image(&self, k: usize) -> Vector {
        self.map.column(k)
    }

    /// The `n²×n` matrix of `Δ: V → V⊗V`.
    pub fn as_map(&self) -> &LinearMap {
        &self.map
    }

    pub fn flat_entries(&self) -> Vec<Scalar> {
        let n = self.dim;
        let mut out = Vec::with_capacity(n * n * n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    out.push(self.entry(k, i, j).clone());
                }
            }
        }
        out
    }
}

/// Evaluates `μ(x ⊗ y) = Σ_{i,j} x_i y_j μ(e_i, e_j)` coordinate by coordinate.
pub fn apply_bilinear(p: &ProductTensor, x: &Vector, y: &Vector) -> Result<Vector, LinalgError> {
    let n = p.dim();
    for v in [x, y] {
        same_field(p.field(), v.field())?;
        if v.dim() != n {
            return Err(LinalgError::Dimension {
                expected: n,
                found: v.dim(),
            });
        }
    }
    let field = p.field();
    let mut out = vec![Scalar::zero(field); n];
    for i in 0..n {
        if x.coords[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if y.coords[j].is_zero() {
                continue;
            }
            let w = &x.coords[i] * &y.coords[j];
            for (k, o) in out.iter_mut().enumerate() {
                let c = p.entry(i, j, k);
                if !c.is_zero() {
                    *o = &*o + &(&w * c);
                }
            }
        }
    }
    Ok(Vector { field, coords: out })
}

/// Evaluates `Δ(x) = Σ_k x_k Δ(e_k)`; the result is flat with index `i·n + j`
/// holding the coefficient of `e_i⊗e_j`.
pub fn apply_coproduct(q: &CoproductTensor, x: &Vector) -> Result<Vector, LinalgError> {
    let n = q.dim();
    same_field(q.field(), x.field())?;
    if x.dim() != n {
        return Err(LinalgError::Dimension {
            expected: n,
            found: x.dim(),
        });
    }
    let field = q.field();
    let mut out = vec![Scalar::zero(field); n * n];
    for (k, xk) in x.coords.iter().enumerate() {
        if xk.is_zero() {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                let d = q.entry(k, i, j);
                if !d.is_zero() {
                    out[i * n + j] = &out[i * n + j] + &(xk * d);
                }
            }
        }
    }
    Ok(Vector { field, coords: out })
}

/// `f ∘ g`.
pub fn compose(f: &LinearMap, g: &LinearMap) -> Result<LinearMap, LinalgError> {
    f.compose(g)
}

/// `f ⊗ g`.
pub fn kron(f: &LinearMap, g: &LinearMap) -> Result<LinearMap, LinalgError> {
    f.kron(g)
}

/// Anything compared entrywise by [`tensors_equal`].
pub trait Tensor {
    fn shape(&self) -> Vec<usize>;
    fn tensor_field(&self) -> Field;
    fn flat(&self) -> Vec<Scalar>;
}

impl Tensor for Vector {
    fn shape(&self) -> Vec<usize> {
        vec![self.dim()]
    }
    fn tensor_field(&self) -> Field {
        self.field
    }
    fn flat(&self) -> Vec<Scalar> {
        self.coords.clone()
    }
}

impl Tensor for LinearMap {
    fn shape(&self) -> Vec<usize> {
        vec![self.rows, self.cols]
    }
    fn tensor_field(&self) -> Field {
        self.field
    }
    fn flat(&self) -> Vec<Scalar> {
        self.data.clone()
    }
}

impl Tensor for ProductTensor {
    fn shape(&self) -> Vec<usize> {
        vec![self.dim; 3]
    }
    fn tensor_field(&self) -> Field {
        self.field()
    }
    fn flat(&self) -> Vec<Scalar> {
        self.flat_entries()
    }
}

impl Tensor for CoproductTensor {
    fn shape(&self) -> Vec<usize> {
        vec![self.dim; 3]
    }
    fn tensor_field(&self) -> Field {
        self.field()
    }
    fn flat(&self) -> Vec<Scalar> {
        self.flat_entries()
    }
}

/// Exact entrywise equality of two tensors of the same shape and field.
pub fn tensors_equal<T: Tensor>(a: &T, b: &T) -> Result<bool, LinalgError> {
    if a.shape() != b.shape() {
        return Err(LinalgError::Shape(format!(
            "{:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    same_field(a.tensor_field(), b.tensor_field())?;
    Ok(a.flat() == b.flat())
}
