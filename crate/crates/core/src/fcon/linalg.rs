//! Exact linear algebra over ℚ(i): elimination, rank, null spaces, inverses,
//! orthogonalisation and a pivoted Hermitian LDL factorisation.

use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::scalars::{GaussianRational, Rational};

/// Reduced row echelon form and the pivot columns.
pub fn rref(a: &Matrix) -> (Matrix, Vec<usize>) {
    let mut m = a.clone();
    let (rows, cols) = m.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let t = m[(p, j)].clone();
                m[(p, j)] = m[(r, j)].clone();
                m[(r, j)] = t;
            }
        }
        let inv = m[(r, c)].inv().expect("nonzero pivot");
        for j in c..cols {
            m[(r, j)] = &m[(r, j)] * &inv;
        }
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let factor = m[(i, c)].clone();
            for j in c..cols {
                let t = &factor * &m[(r, j)];
                m[(i, j)] = &m[(i, j)] - &t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(a: &Matrix) -> usize {
    rref(a).1.len()
}

/// A basis of `ker A` as the columns of a `cols × k` matrix (not orthogonalised).
pub fn nullspace(a: &Matrix) -> Matrix {
    let (r, pivots) = rref(a);
    let n = a.cols();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Matrix::zeros(n, free.len());
    for (k, &f) in free.iter().enumerate() {
        basis[(f, k)] = GaussianRational::one();
        for (row, &p) in pivots.iter().enumerate() {
            basis[(p, k)] = -&r[(row, f)];
        }
    }
    basis
}

/// A basis of the column space: the pivot columns of `A`.
pub fn column_space(a: &Matrix) -> Matrix {
    let (_, pivots) = rref(a);
    let cols: Vec<Matrix> = pivots.iter().map(|&j| a.col(j)).collect();
    Matrix::hstack(a.rows(), &cols).expect("same height")
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let aug = Matrix::hstack(n, &[a.clone(), Matrix::identity(n)])?;
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::NotInvertible);
    }
    Ok(r.submatrix(0, n, n, n))
}

/// Solves `A x = b` exactly, returning the particular solution with free variables set to zero.
pub fn solve(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    let aug = Matrix::hstack(a.rows(), &[a.clone(), b.clone()]).ok()?;
    let (r, pivots) = rref(&aug);
    if pivots.iter().any(|&p| p >= a.cols()) {
        return None;
    }
    let mut x = Matrix::zeros(a.cols(), b.cols());
    for (row, &p) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x[(p, j)] = r[(row, a.cols() + j)].clone();
        }
    }
    Some(x)
}

/// Moore–Penrose pseudoinverse, exact: `A⁺ = C†(CC†)⁻¹(B†B)⁻¹B†` for a full-rank factorisation `A = BC`.
pub fn pseudo_inverse(a: &Matrix) -> Matrix {
    let (r, pivots) = rref(a);
    let k = pivots.len();
    if k == 0 {
        return Matrix::zeros(a.cols(), a.rows());
    }
    let b = column_space(a);
    let c = r.submatrix(0, 0, k, a.cols());
    let cc = c.compose(&c.dagger()).expect("shapes");
    let bb = b.dagger().compose(&b).expect("shapes");
    let cci = inverse(&cc).expect("full row rank");
    let bbi = inverse(&bb).expect("full column rank");
    Matrix::compose_all([&c.dagger(), &cci, &bbi, &b.dagger()]).expect("shapes")
}

/// Gram–Schmidt without normalisation: returns mutually orthogonal nonzero
/// vectors spanning the same space as `vs`, dropping dependent ones.
pub fn orthogonalise(vs: &[Matrix]) -> Vec<Matrix> {
    let mut out: Vec<Matrix> = Vec::new();
    let mut norms: Vec<Rational> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for (u, n) in out.iter().zip(&norms) {
            let c = Matrix::inner(u, &w).expect("column vectors").scale(&n.recip());
            w = w.sub(&u.scale(&c)).expect("same shape");
        }
        if !w.is_zero() {
            norms.push(w.norm_sq());
            out.push(w);
        }
    }
    out
}

/// Result of a pivoted LDL factorisation `P M Pᵀ = L D L†`.
#[derive(Clone, Debug)]
pub struct Ldl {
    /// `perm[k]` is the original index eliminated at step `k`.
    pub perm: Vec<usize>,
    /// `n × r` unit lower-trapezoidal factor, in permuted coordinates.
    pub l: Matrix,
    /// The `r` pivots, all strictly positive.
    pub d: Vec<Rational>,
}

impl Ldl {
    pub fn rank(&self) -> usize {
        self.d.len()
    }

    /// `Pᵀ L D L† P`, which equals the factorised matrix when the factorisation was exact.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.perm.len();
        let d = Matrix::diag(self.d.iter().cloned().map(GaussianRational::real).collect());
        let pm = Matrix::compose_all([&self.l, &d, &self.l.dagger()]).expect("shapes");
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(self.perm[i], self.perm[j])] = pm[(i, j)].clone();
            }
        }
        out
    }

    /// `L` with rows returned to the original order, so `M = Lₒ D Lₒ†`.
    pub fn unpermuted_l(&self) -> Matrix {
        let mut out = Matrix::zeros(self.l.rows(), self.l.cols());
        for (i, &p) in self.perm.iter().enumerate() {
            for j in 0..self.l.cols() {
                out[(p, j)] = self.l[(i, j)].clone();
            }
        }
        out
    }
}

/// Outcome of the exact PSD test.
#[derive(Clone, Debug)]
pub enum PsdDecision {
    Psd(Ldl),
    /// Not PSD; `step` is the elimination step at which it was detected.
    NotPsd {
        step: usize,
    },
}

impl PsdDecision {
    pub fn is_psd(&self) -> bool {
        matches!(self, Self::Psd(_))
    }
}

/// Hermitian LDL with full symmetric pivoting (largest remaining diagonal
/// first). With `tol = None` this is an exact PSD decision: a negative pivot,
/// or a zero pivot whose residual row is not zero, means not PSD. With
/// `tol = Some(t)` elimination stops once every remaining diagonal entry is
/// `≤ t` and the residual is discarded.
pub fn pivoted_ldl(m: &Matrix, tol: Option<&Rational>) -> Result<PsdDecision> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let n = m.rows();
    let mut s = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut l = Matrix::zeros(n, n);
    let mut d = Vec::new();
    for k in 0..n {
        let (best, best_val) = (k..n)
            .map(|i| (i, s[(i, i)].re.clone()))
            .fold(None::<(usize, Rational)>, |acc, (i, v)| match acc {
                Some((_, ref bv)) if *bv >= v => acc,
                _ => Some((i, v)),
            })
            .expect("nonempty range");
        let threshold = tol.cloned().unwrap_or_else(Rational::zero);
        if best_val <= threshold {
            if tol.is_none() {
                let residual_zero = (k..n).all(|i| (k..n).all(|j| s[(i, j)].is_zero()));
                if !residual_zero {
                    return Ok(PsdDecision::NotPsd { step: k });
                }
            }
            break;
        }
        if tol.is_none() && (k..n).any(|i| s[(i, i)].re.is_negative()) {
            return Ok(PsdDecision::NotPsd { step: k });
        }
        swap_sym(&mut s, k, best);
        swap_rows(&mut l, k, best);
        perm.swap(k, best);
        let pivot = best_val;
        l[(k, k)] = GaussianRational::one();
        for i in k + 1..n {
            l[(i, k)] = s[(i, k)].scale(&pivot.recip());
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = (&l[(i, k)] * &s[(k, j)]).clone();
                s[(i, j)] = &s[(i, j)] - &t;
            }
        }
        for i in k..n {
            s[(i, k)] = GaussianRational::zero();
            s[(k, i)] = GaussianRational::zero();
        }
        d.push(pivot);
    }
    let r = d.len();
    Ok(PsdDecision::Psd(Ldl {
        perm,
        l: l.submatrix(0, 0, n, r),
        d,
    }))
}

fn swap_sym(m: &mut Matrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    swap_rows(m, a, b);
    for i in 0..m.rows() {
        let t = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = t;
    }
}

fn swap_rows(m: &mut Matrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let t = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = t;
    }
}

/// Exact PSD decision for a Hermitian matrix.
pub fn is_psd(m: &Matrix) -> Result<bool> {
    Ok(pivoted_ldl(m, None)?.is_psd())
}

/// `A ⪰ 0` witness for `I − A†A`.
pub fn contraction_certificate(a: &Matrix) -> Option<Ldl> {
    let gap = Matrix::identity(a.cols()).sub(&a.dagger().compose(a).ok()?).ok()?;
    match pivoted_ldl(&gap, None).ok()? {
        PsdDecision::Psd(ldl) => Some(ldl),
        PsdDecision::NotPsd { .. } => None,
    }
}
