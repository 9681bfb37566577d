use num_traits::{One, Zero};
use serde::Serialize;

use super::approx::{symmetric_eigen, working_precision, ApproxMatrix};
use super::linalg::{column_space, inverse, is_psd, nullspace, orthogonalise, rank};
use super::matrix::Matrix;
use super::ConMorphism;
use crate::error::{Error, Result};
use crate::scalars::{sqrt_pos, BigReal, ComplexReal};

pub fn is_dagger_mono(a: &Matrix) -> bool {
    a.dagger().compose(a).is_ok_and(|g| g.is_identity())
}

pub fn is_dagger_epi(a: &Matrix) -> bool {
    is_dagger_mono(&a.dagger())
}

pub fn is_epi(a: &Matrix) -> bool {
    rank(a) == a.rows()
}

pub fn is_mono(a: &Matrix) -> bool {
    rank(a) == a.cols()
}

pub fn is_unitary(a: &Matrix) -> bool {
    a.is_square() && is_dagger_mono(a) && is_dagger_epi(a)
}

pub fn is_contraction(a: &Matrix) -> bool {
    super::linalg::contraction_certificate(a).is_some()
}

/// `x (x†x)^{-1/2}` for a nonzero column vector.
pub fn normalise(x: &Matrix, precision: u32) -> Result<ApproxMatrix> {
    let n = x.norm_sq();
    if n.is_zero() {
        return Err(Error::InvalidElement("cannot normalise the zero vector".into()));
    }
    let wp = working_precision(precision);
    let s = sqrt_pos(&n, wp)?;
    let entries = x
        .entries()
        .iter()
        .map(|g| ComplexReal::from_gaussian(g, wp).div_real(&s))
        .collect::<Result<Vec<_>>>()?;
    ApproxMatrix::new(x.rows(), x.cols(), entries, precision)
}

/// Normalised columns of mutually orthogonal vectors.
pub fn normalise_columns(rows: usize, vs: &[Matrix], precision: u32) -> Result<ApproxMatrix> {
    let cols = vs.iter().map(|v| normalise(v, precision)).collect::<Result<Vec<_>>>()?;
    ApproxMatrix::from_columns(rows, &cols, precision)
}

/// Orthonormal basis of `ker A` as the columns of an isometry `K → X`.
pub fn dagger_kernel(a: &Matrix, precision: u32) -> ApproxMatrix {
    let basis = orthogonalise(&nullspace(a).columns());
    normalise_columns(a.cols(), &basis, precision).expect("orthogonalised vectors are nonzero")
}

/// The dagger equaliser of `f, g : X → Y`, i.e. the dagger kernel of `f − g`.
pub fn dagger_equaliser(f: &Matrix, g: &Matrix, precision: u32) -> Result<ApproxMatrix> {
    Ok(dagger_kernel(&f.sub(g)?, precision))
}

/// `A ≈ m·e` with `m` dagger monic onto the column space and `e = m†A` epic.
pub fn epi_dagger_mono_factorise(a: &Matrix, precision: u32) -> (ApproxMatrix, ApproxMatrix) {
    let basis = orthogonalise(&column_space(a).columns());
    let m = normalise_columns(a.rows(), &basis, precision).expect("nonzero basis");
    let e = m.dagger().compose_exact(a).expect("shapes agree");
    (m, e)
}

/// Hermitian PSD square root via Jacobi on the realification `[[A, −B], [B, A]]`.
pub fn matrix_sqrt_psd(p: &Matrix, precision: u32) -> Result<ApproxMatrix> {
    if !p.is_square() || !p.is_hermitian() || !is_psd(p)? {
        return Err(Error::NotPsd);
    }
    let n = p.rows();
    // Eigenvalue errors of size ε become √ε in the root, so work at twice the bits.
    let wp = 2 * working_precision(precision) + 16;
    let re = |i: usize, j: usize| BigReal::from_rational(&p[(i, j)].re, wp);
    let im = |i: usize, j: usize| BigReal::from_rational(&p[(i, j)].im, wp);
    let real: Vec<Vec<BigReal>> = (0..2 * n)
        .map(|i| {
            (0..2 * n)
                .map(|j| match (i < n, j < n) {
                    (true, true) => re(i, j),
                    (true, false) => -im(i, j - n),
                    (false, true) => im(i - n, j),
                    (false, false) => re(i - n, j - n),
                })
                .collect()
        })
        .collect();
    let (lambda, v) = symmetric_eigen(&real, wp);
    let roots: Vec<BigReal> = lambda
        .iter()
        .map(|l| {
            if l.is_negative() {
                BigReal::zero(wp)
            } else {
                l.sqrt().expect("non-negative")
            }
        })
        .collect();
    let out_wp = working_precision(precision);
    let entry = |i: usize, j: usize| {
        let mut acc = BigReal::zero(wp);
        for (k, r) in roots.iter().enumerate() {
            acc = &acc + &(&(&v[i][k] * r) * &v[j][k]);
        }
        acc.with_precision(out_wp)
    };
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(ComplexReal::new(entry(i, j), entry(i + n, j)));
        }
    }
    ApproxMatrix::new(n, n, entries, precision)
}

/// A unitary dilation of a contraction `f : X → Y`.
#[derive(Clone, Debug, Serialize)]
pub struct Dilation {
    /// `[[f, D_{f†}], [D_f, −f†]] : X ⊕ Y → Y ⊕ X`.
    pub u: ApproxMatrix,
    /// The injection `X → X ⊕ Y`.
    pub m: ApproxMatrix,
    /// The first block row of `u`, a co-isometry `X ⊕ Y → Y`.
    pub e: ApproxMatrix,
}

pub fn halmos_dilation(f: &ConMorphism, precision: u32) -> Result<Dilation> {
    let a = f.matrix();
    let (ny, nx) = a.shape();
    let ad = a.dagger();
    let d_f = matrix_sqrt_psd(&Matrix::identity(nx).sub(&ad.compose(a)?)?, precision)?;
    let d_fd = matrix_sqrt_psd(&Matrix::identity(ny).sub(&a.compose(&ad)?)?, precision)?;
    let fa = ApproxMatrix::from_exact(a, precision);
    let fda = ApproxMatrix::from_exact(&ad, precision).neg();
    let u = ApproxMatrix::blocks(&[vec![fa.clone(), d_fd.clone()], vec![d_f, fda]], precision)?;
    let e = ApproxMatrix::blocks(&[vec![fa, d_fd]], precision)?;
    let m = ApproxMatrix::from_exact(&Matrix::inj1(nx, ny), precision);
    Ok(Dilation { u, m, e })
}

/// `f†f = 1 ⇒ ff† = 1` for a square matrix.
pub fn dagger_finite_check(f: &Matrix) -> Result<bool> {
    if !f.is_square() {
        return Err(Error::NotSquare {
            rows: f.rows(),
            cols: f.cols(),
        });
    }
    Ok(!is_dagger_mono(f) || is_dagger_epi(f))
}

/// Completes an orthonormal system of vectors `I → X` to a unitary `X → I^⊕n`
/// whose adjoint has the given vectors as its first columns.
pub fn orthonormal_decompose(ms: &[Matrix], dim: usize, precision: u32) -> Result<ApproxMatrix> {
    for (i, m) in ms.iter().enumerate() {
        if m.shape() != (dim, 1) {
            return Err(Error::NotOrthonormalSystem(format!("vector {i} is not {dim}x1")));
        }
        for (j, n) in ms.iter().enumerate().take(i + 1) {
            let ip = Matrix::inner(n, m)?;
            let want = if i == j { One::one() } else { Zero::zero() };
            if ip != want {
                return Err(Error::NotOrthonormalSystem(format!("<m{j}, m{i}> = {ip}")));
            }
        }
    }
    let mut candidates = ms.to_vec();
    candidates.extend((0..dim).map(|i| Matrix::basis(dim, i)));
    let basis = orthogonalise(&candidates);
    debug_assert_eq!(basis.len(), dim);
    Ok(normalise_columns(dim, &basis, precision)?.dagger())
}

/// For epis `x : A → X`, `y : A → Y` with `x†x = y†y`, the isomorphism
/// `f = y x† (x x†)^{-1}` satisfying `f x = y`.
pub fn positivity_witness(x: &Matrix, y: &Matrix) -> Result<Option<Matrix>> {
    if x.cols() != y.cols() {
        return Err(Error::DimensionMismatch("x and y need a common domain".into()));
    }
    if !is_epi(x) {
        return Err(Error::NotEpi("x".into()));
    }
    if !is_epi(y) {
        return Err(Error::NotEpi("y".into()));
    }
    if x.dagger().compose(x)? != y.dagger().compose(y)? {
        return Ok(None);
    }
    let xxd = x.compose(&x.dagger())?;
    let f = Matrix::compose_all([y, &x.dagger(), &inverse(&xxd)?])?;
    debug_assert_eq!(&f.compose(x)?, y);
    Ok(Some(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fcon::matrix::rmat;
    use crate::scalars::rational::{pow2_neg, rat};
    use crate::scalars::GaussianRational;

    const P: u32 = 40;

    fn approx(m: &ApproxMatrix, exact: &[(f64, f64)]) -> bool {
        m.entries()
            .iter()
            .zip(exact)
            .all(|(e, (re, im))| (e.re.to_f64() - re).abs() < 1e-10 && (e.im.to_f64() - im).abs() < 1e-10)
    }

    fn rotation() -> Matrix {
        rmat(&[&[(3, 5), (4, 5)], &[(-4, 5), (3, 5)]])
    }

    #[test]
    fn contraction_examples() {
        assert!(is_contraction(&rotation()));
        assert!(!is_contraction(&rmat(&[&[(2, 1)]])));
        assert!(is_contraction(&rmat(&[&[(1, 2), (1, 2)], &[(1, 2), (1, 2)]])));
    }

    #[test]
    fn mono_epi_examples() {
        let col = rmat(&[&[(1, 1)], &[(0, 1)]]);
        assert!(is_dagger_mono(&col));
        let row = rmat(&[&[(1, 1), (1, 1)]]);
        assert!(is_epi(&row));
        assert!(!is_dagger_epi(&row));
        let id = Matrix::identity(3);
        assert!(is_dagger_mono(&id) && is_dagger_epi(&id) && is_epi(&id) && is_mono(&id));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(dagger_kernel(&Matrix::identity(3), P).cols(), 0);
        let k = dagger_kernel(&Matrix::zeros(1, 2), P);
        assert_eq!(k.cols(), 2);
        assert!(k.is_isometry());
        let k = dagger_kernel(&rmat(&[&[(1, 1), (-1, 1)]]), P);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(approx(&k, &[(h, 0.0), (h, 0.0)]));
        let a = rmat(&[&[(1, 1), (-1, 1)]]);
        assert!(ApproxMatrix::from_exact(&a, P)
            .compose(&k)
            .unwrap()
            .approx_eq_exact(&Matrix::zeros(1, 1)));
    }

    #[test]
    fn equaliser_examples() {
        let f = rotation();
        let e = dagger_equaliser(&f, &f, P).unwrap();
        assert!(e.approx_eq_exact(&Matrix::identity(2)));
        let g = rmat(&[&[(1, 1), (0, 1)], &[(0, 1), (-1, 1)]]);
        let e = dagger_equaliser(&Matrix::identity(2), &g, P).unwrap();
        assert!(e.approx_eq_exact(&rmat(&[&[(1, 1)], &[(0, 1)]])));
        let e = dagger_equaliser(&rmat(&[&[(1, 1)]]), &rmat(&[&[(-1, 1)]]), P).unwrap();
        assert_eq!(e.shape(), (1, 0));
        assert!(matches!(
            dagger_equaliser(&Matrix::zeros(1, 2), &Matrix::zeros(2, 1), P),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn factorisation_examples() {
        let col = rmat(&[&[(3, 5)], &[(4, 5)]]);
        let (m, e) = epi_dagger_mono_factorise(&col, P);
        assert!(m.approx_eq_exact(&col));
        assert!(e.approx_eq_exact(&Matrix::identity(1)));
        let (m, e) = epi_dagger_mono_factorise(&Matrix::zeros(2, 3), P);
        assert_eq!((m.cols(), e.rows()), (0, 0));
        let (m, e) = epi_dagger_mono_factorise(&rmat(&[&[(1, 1)], &[(1, 1)]]), P);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(approx(&m, &[(h, 0.0), (h, 0.0)]));
        assert!(approx(&e, &[(std::f64::consts::SQRT_2, 0.0)]));
    }

    #[test]
    fn sqrt_examples() {
        let r = matrix_sqrt_psd(&Matrix::identity(2), P).unwrap();
        assert!(r.approx_eq_exact(&Matrix::identity(2)));
        let r = matrix_sqrt_psd(&rmat(&[&[(4, 1), (0, 1)], &[(0, 1), (9, 1)]]), P).unwrap();
        assert!(r.approx_eq_exact(&rmat(&[&[(2, 1), (0, 1)], &[(0, 1), (3, 1)]])));
        let p = rmat(&[&[(2, 1), (1, 1)], &[(1, 1), (2, 1)]]);
        let r = matrix_sqrt_psd(&p, P).unwrap();
        assert!(r.approx_eq(&r.dagger()));
        assert!(r.compose(&r).unwrap().max_deviation_exact(&p).unwrap() <= pow2_neg(P));
        assert_eq!(matrix_sqrt_psd(&rmat(&[&[(-1, 1)]]), P), Err(Error::NotPsd));
    }

    #[test]
    fn complex_sqrt() {
        // P = [[2, i], [−i, 2]] has eigenvalues 1 and 3.
        let i = GaussianRational::i();
        let two = GaussianRational::from_i64(2);
        let p = Matrix::from_rows(vec![vec![two.clone(), i.clone()], vec![-i, two]]).unwrap();
        let r = matrix_sqrt_psd(&p, P).unwrap();
        assert!(r.compose(&r).unwrap().approx_eq_exact(&p));
        assert!(r.approx_eq(&r.dagger()));
    }

    #[test]
    fn dilation_examples() {
        let f = ConMorphism::new(rmat(&[&[(1, 2)]])).unwrap();
        let d = halmos_dilation(&f, P).unwrap();
        let s = 3f64.sqrt() / 2.0;
        assert!(approx(&d.u, &[(0.5, 0.0), (s, 0.0), (s, 0.0), (-0.5, 0.0)]));
        assert!(d.u.is_unitary());
        assert!(d.e.compose(&d.m).unwrap().approx_eq_exact(f.matrix()));

        let d = halmos_dilation(&ConMorphism::new(rotation()).unwrap(), P).unwrap();
        assert!(d.u.submatrix(0, 2, 2, 2).approx_eq_exact(&Matrix::zeros(2, 2)));
        assert!(d.u.submatrix(2, 0, 2, 2).approx_eq_exact(&Matrix::zeros(2, 2)));

        let d = halmos_dilation(&ConMorphism::new(Matrix::zeros(1, 1)).unwrap(), P).unwrap();
        assert!(d.u.approx_eq_exact(&rmat(&[&[(0, 1), (1, 1)], &[(1, 1), (0, 1)]])));
    }

    #[test]
    fn dagger_finite_examples() {
        assert!(dagger_finite_check(&rotation()).unwrap());
        assert!(dagger_finite_check(&rmat(&[&[(0, 1), (0, 1)], &[(1, 1), (0, 1)]])).unwrap());
        assert!(matches!(
            dagger_finite_check(&Matrix::zeros(2, 1)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn orthonormal_decompose_examples() {
        let u = orthonormal_decompose(&[], 2, P).unwrap();
        assert!(u.is_unitary());
        let basis: Vec<Matrix> = (0..3).map(|i| Matrix::basis(3, i)).collect();
        assert!(orthonormal_decompose(&basis, 3, P)
            .unwrap()
            .approx_eq_exact(&Matrix::identity(3)));
        let v = rmat(&[&[(3, 5)], &[(4, 5)]]);
        let u = orthonormal_decompose(std::slice::from_ref(&v), 2, P).unwrap();
        let w = u.dagger();
        assert!(w.col(0).approx_eq_exact(&v));
        let c = w.col(1);
        let comp = rmat(&[&[(-4, 5)], &[(3, 5)]]);
        assert!(c.approx_eq_exact(&comp) || c.neg().approx_eq_exact(&comp));
        let bad = rmat(&[&[(1, 1)], &[(1, 1)]]);
        assert!(matches!(
            orthonormal_decompose(&[bad], 2, P),
            Err(Error::NotOrthonormalSystem(_))
        ));
    }

    #[test]
    fn positivity_witness_examples() {
        let x = rmat(&[&[(1, 1), (0, 1)]]);
        assert_eq!(positivity_witness(&x, &x).unwrap(), Some(Matrix::identity(1)));
        let u = Matrix::scalar(GaussianRational::new(rat(3, 5), rat(4, 5)));
        let y = u.compose(&x).unwrap();
        assert_eq!(positivity_witness(&x, &y).unwrap(), Some(u));
        let z = rmat(&[&[(1, 2), (0, 1)]]);
        assert_eq!(positivity_witness(&x, &z).unwrap(), None);
        assert!(matches!(
            positivity_witness(&Matrix::zeros(1, 2), &x),
            Err(Error::NotEpi(_))
        ));
    }
}
