//! Seeded generators of matrices with exact structure: contractions, monos,
//! epis, and unitaries built from Pythagorean rotations.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::linalg::rank;
use super::matrix::Matrix;
use crate::scalars::rational::rat;
use crate::scalars::GaussianRational;

/// `(a, b, c)` with `a² + b² = c²`.
pub const PYTHAGOREAN: [(i64, i64, i64); 5] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25), (20, 21, 29)];

fn gaussian(rng: &mut ChaCha8Rng, range: i64, complex: bool) -> GaussianRational {
    let re = rat(rng.gen_range(-range..=range), rng.gen_range(1..=4));
    let im = if complex {
        rat(rng.gen_range(-range..=range), rng.gen_range(1..=4))
    } else {
        rat(0, 1)
    };
    GaussianRational::new(re, im)
}

/// Entries `p/q + (r/s)i` with small numerators; about a third of matrices are real.
pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let complex = rng.gen_ratio(2, 3);
    let entries = (0..rows * cols).map(|_| gaussian(rng, 5, complex)).collect();
    Matrix::new(rows, cols, entries).expect("sized")
}

/// `A / B` for the operator-norm bound `B`, so the result is a certified contraction.
pub fn normalise_to_contraction(a: &Matrix) -> Matrix {
    let b = a.operator_norm_bound();
    if b <= rat(1, 1) {
        return a.clone();
    }
    a.scale_rational(&(rat(1, 1) / b))
}

pub fn random_contraction(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let a = random_matrix(rng, rows, cols);
    let (n, d) = [(1, 1), (1, 1), (1, 2), (9, 10)][rng.gen_range(0..4)];
    let scale = rat(n, d);
    normalise_to_contraction(&a).scale_rational(&scale)
}

/// A contraction of rank `min(rows, cols)`.
pub fn random_full_rank_contraction(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    loop {
        let a = random_contraction(rng, rows, cols);
        if rank(&a) == rows.min(cols) {
            return a;
        }
    }
}

/// The rotation by a Pythagorean angle in the `(i, j)` plane.
pub fn givens(n: usize, i: usize, j: usize, (a, b, c): (i64, i64, i64)) -> Matrix {
    let mut m = Matrix::identity(n);
    let (cs, sn) = (GaussianRational::real(rat(a, c)), GaussianRational::real(rat(b, c)));
    m[(i, i)] = cs.clone();
    m[(j, j)] = cs;
    m[(i, j)] = -&sn;
    m[(j, i)] = sn;
    m
}

pub fn permutation(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    let mut m = Matrix::zeros(n, n);
    for (i, &j) in p.iter().enumerate() {
        m[(i, j)] = GaussianRational::from_i64(1);
    }
    m
}

/// A unit-modulus Gaussian rational: `±1`, `±i` or `(a ± bi)/c` for a triple.
pub fn unit_phase(rng: &mut ChaCha8Rng) -> GaussianRational {
    let (a, b, c) = PYTHAGOREAN[rng.gen_range(0..PYTHAGOREAN.len())];
    let choices = [
        GaussianRational::from_i64(1),
        GaussianRational::from_i64(-1),
        GaussianRational::i(),
        GaussianRational::new(rat(a, c), rat(b, c)),
        GaussianRational::new(rat(b, c), rat(-a, c)),
    ];
    choices[rng.gen_range(0..choices.len())].clone()
}

/// An exact unitary: a permutation, a few Pythagorean rotations and a diagonal of phases.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut u = permutation(rng, n);
    if n >= 2 {
        for _ in 0..rng.gen_range(0..=2) {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            let t = PYTHAGOREAN[rng.gen_range(0..PYTHAGOREAN.len())];
            u = givens(n, i, j, t).compose(&u).expect("square");
        }
    }
    let phases = Matrix::diag((0..n).map(|_| unit_phase(rng)).collect());
    phases.compose(&u).expect("square")
}

/// An exact isometry `ℂ^cols → ℂ^rows` (`rows ≥ cols`): leading columns of a unitary.
pub fn random_isometry(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    assert!(rows >= cols, "an isometry cannot lower dimension");
    random_unitary(rng, rows).submatrix(0, 0, rows, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fcon::{is_contraction, is_dagger_mono, is_unitary};
    use rand::SeedableRng;

    #[test]
    fn generators_have_their_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..50 {
            let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            assert!(is_contraction(&random_contraction(&mut rng, r, c)));
            let f = random_full_rank_contraction(&mut rng, r, c);
            assert!(is_contraction(&f) && rank(&f) == r.min(c));
            assert!(is_unitary(&random_unitary(&mut rng, r)));
            let (hi, lo) = (r.max(c), r.min(c));
            assert!(is_dagger_mono(&random_isometry(&mut rng, hi, lo)));
        }
    }
}
