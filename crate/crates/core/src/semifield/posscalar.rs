//! Positive scalars `x†x` for vectors `x : I → X`, represented by a witness
//! vector together with the exact value.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Roots;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Direction, Semifield};
use crate::error::{Error, Result};
use crate::fcon::{ConMorphism, Matrix};
use crate::scalars::rational::rat;
use crate::scalars::{GaussianRational, Rational};

/// Witnesses longer than this are re-expressed by an equivalent four-squares witness.
const MAX_WITNESS_DIM: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PosScalar {
    witness: Matrix,
    #[serde(with = "crate::scalars::rational::as_string")]
    value: Rational,
}

impl PosScalar {
    /// The positive scalar `x†x` of a column vector.
    pub fn from_vector(x: Matrix) -> Result<Self> {
        if x.cols() != 1 {
            return Err(Error::DimensionMismatch(format!(
                "witness must be a column, got {}x{}",
                x.rows(),
                x.cols()
            )));
        }
        let value = x.norm_sq();
        Ok(Self { witness: x, value })
    }

    /// A witness of the given value: `r = p/q` is written as `pq/q²` and `pq`
    /// as a sum of four squares `|a + bi|² + |c + di|²`.
    pub fn from_value(r: &Rational) -> Result<Self> {
        if *r < Rational::zero() {
            return Err(Error::NegativeInput);
        }
        if r.is_zero() {
            return Ok(Self {
                witness: Matrix::zeros(0, 1),
                value: Rational::zero(),
            });
        }
        let n = (r.numer() * r.denom()).to_biguint().expect("positive");
        let [a, b, c, d] = four_squares(&n);
        let q = Rational::from_integer(r.denom().clone());
        let g = |re: BigUint, im: BigUint| {
            GaussianRational::new(
                Rational::from_integer(BigInt::from(re)) / &q,
                Rational::from_integer(BigInt::from(im)) / &q,
            )
        };
        let witness = Matrix::column(vec![g(a, b), g(c, d)]);
        debug_assert_eq!(&witness.norm_sq(), r);
        Ok(Self {
            witness,
            value: r.clone(),
        })
    }

    pub fn witness(&self) -> &Matrix {
        &self.witness
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    fn compressed(self) -> Self {
        if self.witness.rows() > MAX_WITNESS_DIM {
            Self::from_value(&self.value).expect("values are non-negative")
        } else {
            self
        }
    }
}

impl std::fmt::Display for PosScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (witness dim {})", self.value, self.witness.rows())
    }
}

/// The semifield of positive scalars, ordered by `q ≤ p` iff some
/// contraction maps the witness of `p` to the witness of `q`.
#[derive(Clone, Copy, Debug, Default)]
pub struct PosScalars;

impl Semifield for PosScalars {
    type Elem = PosScalar;

    fn name(&self) -> String {
        "posscalars".into()
    }
    fn zero(&self) -> PosScalar {
        PosScalar::from_value(&Rational::zero()).expect("zero")
    }
    fn one(&self) -> PosScalar {
        PosScalar::from_vector(Matrix::identity(1)).expect("column")
    }
    /// `x†x + y†y = Δ†(x ⊕ y)†(x ⊕ y)Δ`: the witness is `x` stacked on `y`.
    fn add(&self, a: &PosScalar, b: &PosScalar) -> PosScalar {
        let w = Matrix::vstack(1, &[a.witness.clone(), b.witness.clone()]).expect("columns");
        PosScalar {
            witness: w,
            value: &a.value + &b.value,
        }
        .compressed()
    }
    /// `x†x · y†y = (x ⊗ y)†(x ⊗ y)`.
    fn mul(&self, a: &PosScalar, b: &PosScalar) -> PosScalar {
        PosScalar {
            witness: a.witness.tensor(&b.witness),
            value: &a.value * &b.value,
        }
        .compressed()
    }
    fn inv(&self, a: &PosScalar) -> Result<PosScalar> {
        if a.value.is_zero() {
            return Err(Error::NotInvertible);
        }
        PosScalar::from_value(&a.value.recip())
    }
    fn compare(&self, a: &PosScalar, b: &PosScalar) -> Option<Ordering> {
        Some(a.value.cmp(&b.value))
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> PosScalar {
        if rng.gen_ratio(1, 10) {
            return self.zero();
        }
        let dim = rng.gen_range(1..=3);
        let mut entry = || {
            GaussianRational::new(
                rat(rng.gen_range(-3..=3), rng.gen_range(1..=4)),
                rat(rng.gen_range(-3..=3), rng.gen_range(1..=4)),
            )
        };
        let mut v: Vec<GaussianRational> = (0..dim).map(|_| entry()).collect();
        if v.iter().all(Zero::is_zero) {
            v[0] = GaussianRational::one();
        }
        PosScalar::from_vector(Matrix::column(v)).expect("column")
    }
    fn embed_rational(&self, q: &Rational) -> PosScalar {
        PosScalar::from_value(q).expect("non-negative")
    }
    fn geometric_limit(&self, u: &PosScalar) -> Option<PosScalar> {
        match u.value.cmp(&Rational::one()) {
            Ordering::Less => Some(self.zero()),
            Ordering::Equal => Some(self.one()),
            Ordering::Greater => None,
        }
    }
    fn project_limit(&self, l: PosScalar, _direction: Direction) -> PosScalar {
        l.compressed()
    }
}

/// Outcome of the witness-based order test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Dominance {
    pub holds: bool,
    /// A contraction `f` with `f·x = y`, when `holds`.
    pub witness: Option<Matrix>,
}

/// Decides `q ≤ p` from witnesses `x` of `p` and `y` of `q`: it holds iff
/// `x = 0 ⇒ y = 0` and `y†y ≤ x†x`. The witness `f = y x† (x†x)⁻¹` is checked
/// to be an exact contraction with `f x = y`.
pub fn dominates(p: &PosScalar, q: &PosScalar) -> Dominance {
    let (x, y) = (&p.witness, &q.witness);
    if p.value.is_zero() {
        let holds = q.value.is_zero();
        let witness = holds.then(|| Matrix::zeros(y.rows(), x.rows()));
        return Dominance { holds, witness };
    }
    if q.value > p.value {
        return Dominance {
            holds: false,
            witness: None,
        };
    }
    let f = y
        .compose(&x.dagger())
        .expect("columns")
        .scale_rational(&p.value.recip());
    assert_eq!(&f.compose(x).expect("shapes"), y, "rank-one witness maps x to y");
    let f = ConMorphism::new(f).expect("‖f‖ = ‖y‖/‖x‖ ≤ 1").into_matrix();
    Dominance {
        holds: true,
        witness: Some(f),
    }
}

/// `n = a² + b² + c² + d²`.
pub fn four_squares(n: &BigUint) -> [BigUint; 4] {
    if n.is_zero() {
        return [BigUint::zero(), BigUint::zero(), BigUint::zero(), BigUint::zero()];
    }
    let four = BigUint::from(4u32);
    let mut m = n.clone();
    let mut shift = 0;
    while (&m % &four).is_zero() {
        m /= &four;
        shift += 1;
    }
    let r = if m < BigUint::from(2000u32) {
        small_four_squares(&m)
    } else {
        random_four_squares(&m)
    };
    debug_assert_eq!(r.iter().map(|x| x * x).sum::<BigUint>(), m);
    r.map(|x| x << shift)
}

fn small_four_squares(n: &BigUint) -> [BigUint; 4] {
    let n: u64 = n.try_into().expect("small");
    for a in 0..=n.sqrt() {
        for b in 0..=a {
            let rest = n - a * a;
            if b * b > rest {
                break;
            }
            let rest = rest - b * b;
            for c in 0..=b {
                if c * c > rest {
                    break;
                }
                let d2 = rest - c * c;
                let d = d2.sqrt();
                if d * d == d2 && d <= c {
                    return [a, b, c, d].map(BigUint::from);
                }
            }
        }
    }
    unreachable!("Lagrange: every natural is a sum of four squares")
}

/// Random `a, b` until `n − a² − b²` is a sum of two squares we can find.
fn random_four_squares(n: &BigUint) -> [BigUint; 4] {
    let seed: u64 = (n % BigUint::from(u64::MAX)).try_into().expect("fits");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let a = rng.gen_biguint_below(&(n.sqrt() + 1u32));
        let rest = n - &a * &a;
        let b = rng.gen_biguint_below(&(rest.sqrt() + 1u32));
        let m = &rest - &b * &b;
        if let Some((c, d)) = two_squares(&m, &mut rng) {
            return [a, b, c, d];
        }
    }
}

fn two_squares(m: &BigUint, rng: &mut ChaCha8Rng) -> Option<(BigUint, BigUint)> {
    if m.is_zero() {
        return Some((BigUint::zero(), BigUint::zero()));
    }
    let s = m.sqrt();
    if &(&s * &s) == m {
        return Some((s, BigUint::zero()));
    }
    if *m == BigUint::from(2u32) {
        return Some((BigUint::one(), BigUint::one()));
    }
    if (m % 4u32) != BigUint::one() || !is_probable_prime(m, rng) {
        return None;
    }
    // t² ≡ −1 (mod m), then Euclid on (m, t) down to √m (Hermite–Serret).
    let e = (m - 1u32) / 4u32;
    let minus_one = m - 1u32;
    let t = (2u32..).map(BigUint::from).take(200).find_map(|c| {
        let t = c.modpow(&e, m);
        ((&t * &t) % m == minus_one).then_some(t)
    })?;
    let (mut a, mut b) = (m.clone(), t);
    while &b * &b > *m {
        let r = &a % &b;
        a = b;
        b = r;
    }
    let rest = m - &b * &b;
    let d = rest.sqrt();
    (&d * &d == rest).then_some((b, d))
}

/// Miller–Rabin with the first twelve prime bases plus eight random ones.
pub fn is_probable_prime(n: &BigUint, rng: &mut ChaCha8Rng) -> bool {
    let small = [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in small {
        if *n == BigUint::from(p) {
            return true;
        }
        if (n % p).is_zero() {
            return false;
        }
    }
    if *n < BigUint::from(2u32) {
        return false;
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().expect("n > 1");
    let d = &n1 >> s;
    let witness = |a: &BigUint| {
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n1 {
            return true;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                return true;
            }
        }
        false
    };
    let randoms: Vec<BigUint> = (0..8)
        .map(|_| rng.gen_biguint_range(&BigUint::from(2u32), &n1))
        .collect();
    small
        .iter()
        .map(|&p| BigUint::from(p))
        .chain(randoms)
        .all(|a| witness(&a))
}
