use std::fmt;

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{GaussianRational, Rational};

/// A dense matrix over ℚ(i), stored row-major.
///
/// Objects of the skeletal model are dimensions; a `rows × cols` matrix is a
/// morphism from the object `cols` to the object `rows`. The zero object is
/// dimension 0, so `0 × n` and `n × 0` matrices are the unique maps into and
/// out of it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussianRational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<GaussianRational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = GaussianRational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> GaussianRational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    /// Builds a matrix from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Real matrix from rational rows.
    pub fn real(rows: &[Vec<Rational>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().cloned().map(GaussianRational::real).collect())
                .collect(),
        )
        .expect("rows of equal length")
    }

    pub fn column(entries: Vec<GaussianRational>) -> Self {
        let n = entries.len();
        Self {
            rows: n,
            cols: 1,
            entries,
        }
    }

    pub fn row_vector(entries: Vec<GaussianRational>) -> Self {
        let n = entries.len();
        Self {
            rows: 1,
            cols: n,
            entries,
        }
    }

    pub fn scalar(a: GaussianRational) -> Self {
        Self {
            rows: 1,
            cols: 1,
            entries: vec![a],
        }
    }

    pub fn diag(values: Vec<GaussianRational>) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in values.into_iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Standard basis vector `e_i` of dimension `n`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut m = Self::zeros(n, 1);
        m[(i, 0)] = GaussianRational::one();
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[GaussianRational] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows) && self.is_square()
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(GaussianRational::is_real)
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.dagger()
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Plain transpose, without conjugation.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// `self · other` (first `other`, then `self`).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Compose a chain `ms[0] · ms[1] · … · ms[k]`.
    pub fn compose_all<'a>(ms: impl IntoIterator<Item = &'a Matrix>) -> Result<Self> {
        let mut it = ms.into_iter();
        let first = it
            .next()
            .ok_or_else(|| Error::DimensionMismatch("empty chain".into()))?;
        it.try_fold(first.clone(), |acc, m| acc.compose(m))
    }

    /// Kronecker product: the monoidal product `⊗`.
    pub fn tensor(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            &self[(i / other.rows, j / other.cols)] * &other[(i % other.rows, j % other.cols)]
        })
    }

    /// Block diagonal sum: the biproduct `⊕`.
    pub fn dsum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, other);
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    /// Scalar multiplication `a · f`; in the skeletal model the unitor is the
    /// identity, so this is entrywise scaling.
    pub fn scale(&self, a: &GaussianRational) -> Self {
        self.map(|x| x * a)
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.map(|x| x.scale(q))
    }

    pub fn map(&self, f: impl Fn(&GaussianRational) -> GaussianRational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    fn zip(&self, o: &Self, f: impl Fn(&GaussianRational, &GaussianRational) -> GaussianRational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    fn same_shape(&self, o: &Self) -> Result<()> {
        if self.shape() != o.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn col(&self, j: usize) -> Self {
        self.submatrix(0, j, self.rows, 1)
    }

    pub fn row(&self, i: usize) -> Self {
        self.submatrix(i, 0, 1, self.cols)
    }

    pub fn columns(&self) -> Vec<Self> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    /// Side-by-side concatenation; `rows` fixes the height when `blocks` is empty.
    pub fn hstack(rows: usize, blocks: &[Self]) -> Result<Self> {
        if blocks.iter().any(|b| b.rows != rows) {
            return Err(Error::DimensionMismatch("hstack height".into()));
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut c = 0;
        for b in blocks {
            out.set_block(0, c, b);
            c += b.cols;
        }
        Ok(out)
    }

    pub fn vstack(cols: usize, blocks: &[Self]) -> Result<Self> {
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(Error::DimensionMismatch("vstack width".into()));
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(rows, cols);
        let mut r = 0;
        for b in blocks {
            out.set_block(r, 0, b);
            r += b.rows;
        }
        Ok(out)
    }

    /// Inner product `x†y` of two column vectors.
    pub fn inner(x: &Self, y: &Self) -> Result<GaussianRational> {
        let s = x.dagger().compose(y)?;
        if s.shape() != (1, 1) {
            return Err(Error::DimensionMismatch("inner product of non-vectors".into()));
        }
        Ok(s.entries[0].clone())
    }

    /// `x†x` for a column vector (sum over all entries for general matrices: the Frobenius norm squared).
    pub fn norm_sq(&self) -> Rational {
        self.entries.iter().map(GaussianRational::norm_sq).sum()
    }

    /// Maximum over columns of `Σ_i (|re| + |im|)`.
    pub fn max_col_abs_sum(&self) -> Rational {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs_bound()).sum::<Rational>())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Maximum over rows of `Σ_j (|re| + |im|)`.
    pub fn max_row_abs_sum(&self) -> Rational {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].abs_bound()).sum::<Rational>())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// A rational upper bound on the operator norm: `max(‖A‖₁, ‖A‖∞) ≥ √(‖A‖₁‖A‖∞) ≥ ‖A‖₂`.
    pub fn operator_norm_bound(&self) -> Rational {
        let c = self.max_col_abs_sum();
        let r = self.max_row_abs_sum();
        if c > r {
            c
        } else {
            r
        }
    }

    pub fn to_complex64(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let g = &self[(i, j)];
                        Complex64::new(g.re.to_f64().unwrap_or(0.0), g.im.to_f64().unwrap_or(0.0))
                    })
                    .collect()
            })
            .collect()
    }

    /// Injection `X → X ⊕ Y` for `dim X = m`, `dim Y = n`.
    pub fn inj1(m: usize, n: usize) -> Self {
        Self::vstack(m, &[Self::identity(m), Self::zeros(n, m)]).expect("shapes agree")
    }

    /// Injection `Y → X ⊕ Y`.
    pub fn inj2(m: usize, n: usize) -> Self {
        Self::vstack(n, &[Self::zeros(m, n), Self::identity(n)]).expect("shapes agree")
    }

    pub fn proj1(m: usize, n: usize) -> Self {
        Self::inj1(m, n).dagger()
    }

    pub fn proj2(m: usize, n: usize) -> Self {
        Self::inj2(m, n).dagger()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = GaussianRational;
    fn index(&self, (i, j): (usize, usize)) -> &GaussianRational {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut GaussianRational {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixWire {
    #[serde(with = "crate::json::int")]
    rows: usize,
    #[serde(with = "crate::json::int")]
    cols: usize,
    entries: Vec<GaussianRational>,
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixWire {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = MatrixWire::deserialize(d)?;
        Matrix::new(w.rows, w.cols, w.entries).map_err(serde::de::Error::custom)
    }
}

/// `Matrix::real` from integer-pair literals: `rmat(&[&[(1, 2), (0, 1)]])`.
pub fn rmat(rows: &[&[(i64, i64)]]) -> Matrix {
    Matrix::real(
        &rows
            .iter()
            .map(|r| r.iter().map(|&(n, d)| crate::scalars::rational::rat(n, d)).collect())
            .collect::<Vec<_>>(),
    )
}
