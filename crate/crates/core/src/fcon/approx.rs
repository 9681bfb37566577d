use num_complex::Complex64;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::scalars::rational::pow2_neg;
use crate::scalars::{BigReal, ComplexReal, Rational};

/// Guard bits carried by approximate results beyond the requested precision.
pub const GUARD_BITS: u32 = 32;

/// Working precision used for square roots and normalisations.
pub fn working_precision(precision: u32) -> u32 {
    precision + GUARD_BITS
}

/// A matrix of complex [`BigReal`] entries produced by operations that need
/// square roots. `tolerance` is the contract: every stated postcondition holds
/// entrywise within it.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ComplexReal>,
    tolerance: BigReal,
}

impl ApproxMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<ComplexReal>, precision: u32) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
            tolerance: tolerance_for(precision),
        })
    }

    pub fn from_exact(m: &Matrix, precision: u32) -> Self {
        let wp = working_precision(precision);
        let entries = m.entries().iter().map(|g| ComplexReal::from_gaussian(g, wp)).collect();
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries,
            tolerance: tolerance_for(precision),
        }
    }

    pub fn zeros(rows: usize, cols: usize, precision: u32) -> Self {
        Self::from_exact(&Matrix::zeros(rows, cols), precision)
    }

    pub fn identity(n: usize, precision: u32) -> Self {
        Self::from_exact(&Matrix::identity(n), precision)
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

    pub fn entries(&self) -> &[ComplexReal] {
        &self.entries
    }

    pub fn tolerance(&self) -> &BigReal {
        &self.tolerance
    }

    pub fn tolerance_rational(&self) -> Rational {
        self.tolerance.to_rational()
    }

    /// The requested precision `p` with `tolerance = 2^-p`.
    pub fn precision(&self) -> u32 {
        (-self.tolerance.exponent()) as u32
    }

    fn wp(&self) -> u32 {
        working_precision(self.precision())
    }

    pub fn get(&self, i: usize, j: usize) -> &ComplexReal {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ComplexReal) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn dagger(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for i in 0..self.cols {
            for j in 0..self.rows {
                entries.push(self.get(j, i).conj());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
            tolerance: self.tolerance.clone(),
        }
    }

    pub fn compose(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let wp = self.wp().min(o.wp());
        let mut entries = Vec::with_capacity(self.rows * o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = ComplexReal::zero(wp);
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * o.get(k, j));
                }
                entries.push(acc);
            }
        }
        let tolerance = self.tolerance.clone().max(o.tolerance.clone());
        Ok(Self {
            rows: self.rows,
            cols: o.cols,
            entries,
            tolerance,
        })
    }

    pub fn compose_exact(&self, m: &Matrix) -> Result<Self> {
        self.compose(&Self::from_exact(m, self.precision()))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a - b)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a + b)
    }

    fn zip(&self, o: &Self, f: impl Fn(&ComplexReal, &ComplexReal) -> ComplexReal) -> Result<Self> {
        if self.shape() != o.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| f(a, b)).collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries,
            tolerance: self.tolerance.clone(),
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|e| -e).collect(),
            ..self.clone()
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(self.get(r0 + i, c0 + j).clone());
            }
        }
        Self {
            rows,
            cols,
            entries,
            tolerance: self.tolerance.clone(),
        }
    }

    pub fn col(&self, j: usize) -> Self {
        self.submatrix(0, j, self.rows, 1)
    }

    /// Assembles a block matrix; every block in a block row shares its height,
    /// every block in a block column shares its width.
    pub fn blocks(grid: &[Vec<Self>], precision: u32) -> Result<Self> {
        let heights: Vec<usize> = grid.iter().map(|r| r.first().map_or(0, |b| b.rows)).collect();
        let widths: Vec<usize> = grid.first().map_or(vec![], |r| r.iter().map(|b| b.cols).collect());
        let rows = heights.iter().sum();
        let cols = widths.iter().sum();
        let mut out = Self::zeros(rows, cols, precision);
        let mut r0 = 0;
        for (bi, brow) in grid.iter().enumerate() {
            let mut c0 = 0;
            if brow.len() != widths.len() {
                return Err(Error::DimensionMismatch("ragged block grid".into()));
            }
            for (bj, b) in brow.iter().enumerate() {
                if b.rows != heights[bi] || b.cols != widths[bj] {
                    return Err(Error::DimensionMismatch("block shapes disagree".into()));
                }
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        out.set(r0 + i, c0 + j, b.get(i, j).clone());
                    }
                }
                c0 += b.cols;
            }
            r0 += heights[bi];
        }
        Ok(out)
    }

    /// Block diagonal `A ⊕ B`.
    pub fn dsum(&self, o: &Self) -> Self {
        let p = self.precision().min(o.precision());
        let mut out = Self::zeros(self.rows + o.rows, self.cols + o.cols, p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                out.set(self.rows + i, self.cols + j, o.get(i, j).clone());
            }
        }
        out
    }

    /// Columns side by side; `rows` fixes the height when `cols` is empty.
    pub fn from_columns(rows: usize, cols: &[Self], precision: u32) -> Result<Self> {
        if cols.is_empty() {
            return Ok(Self::zeros(rows, 0, precision));
        }
        Self::blocks(&[cols.to_vec()], precision)
    }

    /// Largest entrywise deviation `max(|Δre|, |Δim|)`.
    pub fn max_deviation(&self, o: &Self) -> Result<Rational> {
        let d = self.sub(o)?;
        Ok(d.entries
            .iter()
            .map(ComplexReal::max_abs_component)
            .max()
            .unwrap_or_else(Rational::zero))
    }

    pub fn max_deviation_exact(&self, m: &Matrix) -> Result<Rational> {
        self.max_deviation(&Self::from_exact(m, self.precision()))
    }

    /// Entrywise agreement within this matrix's tolerance.
    pub fn approx_eq(&self, o: &Self) -> bool {
        let tol = self.tolerance_rational();
        self.max_deviation(o).is_ok_and(|d| d <= tol)
    }

    pub fn approx_eq_exact(&self, m: &Matrix) -> bool {
        self.approx_eq(&Self::from_exact(m, self.precision()))
    }

    /// `A†A ≈ I`.
    pub fn is_isometry(&self) -> bool {
        self.dagger()
            .compose(self)
            .is_ok_and(|g| g.approx_eq_exact(&Matrix::identity(self.cols)))
    }

    /// `A†A ≈ I ≈ AA†`.
    pub fn is_unitary(&self) -> bool {
        self.rows == self.cols && self.is_isometry() && self.dagger().is_isometry()
    }

    pub fn to_complex64(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let e = self.get(i, j);
                        Complex64::new(e.re.to_f64(), e.im.to_f64())
                    })
                    .collect()
            })
            .collect()
    }

    /// Entries rounded to the nearest point of the `2^-bits` grid, as exact rationals.
    pub fn to_rationals(&self) -> Vec<(Rational, Rational)> {
        self.entries
            .iter()
            .map(|e| (e.re.to_rational(), e.im.to_rational()))
            .collect()
    }
}

pub fn tolerance_for(precision: u32) -> BigReal {
    BigReal::from_rational(&pow2_neg(precision), precision)
}

impl Serialize for ApproxMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            #[serde(with = "crate::json::int")]
            rows: usize,
            #[serde(with = "crate::json::int")]
            cols: usize,
            entries: Vec<[String; 2]>,
            tolerance: String,
        }
        let digits = (self.precision() as usize * 3) / 10 + 2;
        Wire {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|e| [e.re.to_decimal(digits), e.im.to_decimal(digits)])
                .collect(),
            tolerance: format!("2^-{}", self.precision()),
        }
        .serialize(s)
    }
}

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.
/// Returns `(λ, V)` with `A ≈ V diag(λ) Vᵀ`, columns of `V` the eigenvectors.
#[allow(clippy::needless_range_loop)]
pub fn symmetric_eigen(a: &[Vec<BigReal>], precision: u32) -> (Vec<BigReal>, Vec<Vec<BigReal>>) {
    let n = a.len();
    let mut a: Vec<Vec<BigReal>> = a
        .iter()
        .map(|r| r.iter().map(|x| x.with_precision(precision)).collect())
        .collect();
    let mut v: Vec<Vec<BigReal>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigReal::from_int(i64::from(i == j), precision))
                .collect()
        })
        .collect();
    let eps = BigReal::from_rational(&pow2_neg(precision), precision);
    let one = BigReal::one(precision);
    let two = BigReal::from_int(2, precision);
    for _sweep in 0..100 {
        let mut off = BigReal::zero(precision);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off = off.max(a[i][j].abs());
                }
            }
        }
        if off <= eps {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() <= eps {
                    continue;
                }
                let tau = (&a[q][q] - &a[p][p]).div(&(&two * &a[p][q])).expect("nonzero");
                let root = (&one + &(&tau * &tau)).sqrt().expect("positive");
                let t = if tau.is_negative() {
                    -(one.div(&(&root - &tau)).expect("positive"))
                } else {
                    one.div(&(&tau + &root)).expect("positive")
                };
                let c = one
                    .div(&(&one + &(&t * &t)).sqrt().expect("positive"))
                    .expect("positive");
                let s = &t * &c;
                for k in 0..n {
                    let akp = a[k][p].clone();
                    let akq = a[k][q].clone();
                    a[k][p] = &(&c * &akp) - &(&s * &akq);
                    a[k][q] = &(&s * &akp) + &(&c * &akq);
                }
                for k in 0..n {
                    let apk = a[p][k].clone();
                    let aqk = a[q][k].clone();
                    a[p][k] = &(&c * &apk) - &(&s * &aqk);
                    a[q][k] = &(&s * &apk) + &(&c * &aqk);
                }
                for row in v.iter_mut() {
                    let vp = row[p].clone();
                    let vq = row[q].clone();
                    row[p] = &(&c * &vp) - &(&s * &vq);
                    row[q] = &(&s * &vp) + &(&c * &vq);
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i].clone()).collect(), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fcon::matrix::rmat;
    use crate::scalars::rational::rat;

    #[test]
    fn exact_roundtrip_is_within_tolerance() {
        let m = rmat(&[&[(1, 3), (2, 7)]]);
        let a = ApproxMatrix::from_exact(&m, 40);
        assert!(a.approx_eq_exact(&m));
        assert_eq!(a.precision(), 40);
        assert!(a.max_deviation_exact(&m).unwrap() <= rat(1, 1 << 40));
    }

    #[test]
    fn jacobi_diagonalises() {
        let p = 100;
        let a = vec![
            vec![BigReal::from_int(2, p), BigReal::from_int(1, p)],
            vec![BigReal::from_int(1, p), BigReal::from_int(2, p)],
        ];
        let (mut l, _) = symmetric_eigen(&a, p);
        l.sort();
        assert!(l[0].close_to(&BigReal::from_int(1, p), &rat(1, 1 << 40)));
        assert!(l[1].close_to(&BigReal::from_int(3, p), &rat(1, 1 << 40)));
    }
}
