//! Localisation at the nonzero disk scalars: morphisms are fractions `f / a`
//! of a contraction `f` by a nonzero scalar `a` with `|a| ≤ 1`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fcon::sample::{random_contraction, unit_phase};
use crate::fcon::{ConMorphism, Matrix};
use crate::report::Report;
use crate::scalars::rational::rat;
use crate::scalars::{DiskScalar, GaussianRational, Rational};

/// A fraction `numerator / denominator`. Equality of the represented
/// morphism is [`Fraction::equiv`], never structural equality.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Fraction {
    numerator: ConMorphism,
    #[serde(deserialize_with = "nonzero_disk")]
    denominator: DiskScalar,
}

fn nonzero_disk<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<DiskScalar, D::Error> {
    let s = DiskScalar::deserialize(d)?;
    if s.is_zero() {
        return Err(serde::de::Error::custom(Error::ZeroDenominator));
    }
    Ok(s)
}

/// A morphism of the localised category in resolved form: any matrix over ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldMorphism {
    pub matrix: Matrix,
}

impl FieldMorphism {
    pub fn new(matrix: Matrix) -> Self {
        Self { matrix }
    }
}

impl Fraction {
    pub fn new(numerator: ConMorphism, denominator: DiskScalar) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self { numerator, denominator })
    }

    /// Convenience constructor checking both the contraction and the disk condition.
    pub fn from_parts(numerator: Matrix, denominator: GaussianRational) -> Result<Self> {
        Self::new(ConMorphism::new(numerator)?, DiskScalar::nonzero(denominator)?)
    }

    pub fn numerator(&self) -> &ConMorphism {
        &self.numerator
    }

    pub fn denominator(&self) -> &DiskScalar {
        &self.denominator
    }

    pub fn shape(&self) -> (usize, usize) {
        self.numerator.shape()
    }

    /// `f/a ≡ g/b` iff `b·f = a·g`.
    pub fn equiv(&self, o: &Self) -> Result<bool> {
        if self.shape() != o.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{:?} vs {:?}",
                self.shape(),
                o.shape()
            )));
        }
        let lhs = self.numerator.matrix().scale(o.denominator.value());
        let rhs = o.numerator.matrix().scale(self.denominator.value());
        Ok(lhs == rhs)
    }

    /// `(f/a)† = f†/a†`.
    pub fn dagger(&self) -> Self {
        Self {
            numerator: self.numerator.dagger(),
            denominator: self.denominator.conj(),
        }
    }

    /// `(f/a)(g/b) = (fg)/(ab)`.
    pub fn compose(&self, o: &Self) -> Result<Self> {
        Ok(Self {
            numerator: self.numerator.compose(&o.numerator)?,
            denominator: self.denominator.mul(&o.denominator),
        })
    }

    /// `(f/a) ⊗ (g/b) = (f⊗g)/(ab)`.
    pub fn tensor(&self, o: &Self) -> Self {
        Self {
            numerator: self.numerator.tensor(&o.numerator),
            denominator: self.denominator.mul(&o.denominator),
        }
    }

    /// `(f/a) ⊕ (g/b) = (b·f ⊕ a·g)/(ab)`.
    pub fn dsum(&self, o: &Self) -> Self {
        let bf = self.numerator.scale(&o.denominator);
        let ag = o.numerator.scale(&self.denominator);
        Self {
            numerator: bf.dsum(&ag),
            denominator: self.denominator.mul(&o.denominator),
        }
    }

    /// `f · a⁻¹` in the field model.
    pub fn resolve(&self) -> FieldMorphism {
        let inv = self.denominator.value().inv().expect("nonzero denominator");
        FieldMorphism::new(self.numerator.matrix().scale(&inv))
    }
}

/// `f ↦ f/1`.
pub fn embed(f: ConMorphism) -> Fraction {
    Fraction {
        numerator: f,
        denominator: DiskScalar::one(),
    }
}

/// `(c·M, c)` with `c = 1 / max(1, B)` for the rational norm bound
/// `B = max(‖M‖₁, ‖M‖∞) ≥ ‖M‖₂`.
pub fn to_fraction(m: &FieldMorphism) -> Fraction {
    let b = m.matrix.operator_norm_bound();
    let c = if b > Rational::one() {
        b.recip()
    } else {
        Rational::one()
    };
    let numerator = ConMorphism::new(m.matrix.scale_rational(&c)).expect("scaled below the norm bound");
    let denominator = DiskScalar::nonzero(GaussianRational::real(c)).expect("0 < c ≤ 1");
    Fraction { numerator, denominator }
}

/// Whether a field morphism is already a contraction.
pub fn comes_from_d(m: &FieldMorphism) -> bool {
    crate::fcon::is_contraction(&m.matrix)
}

/// The unique morphism between any object and the zero object, as a fraction.
pub fn zero_map(rows: usize, cols: usize) -> Fraction {
    embed(ConMorphism::zero(rows, cols))
}

impl FieldMorphism {
    pub fn is_zero(&self) -> bool {
        self.matrix.entries().iter().all(Zero::is_zero)
    }
}

/// `(c·f)/(c·a)`, equivalent to `f/a` for any nonzero disk scalar `c`.
pub fn rescale(p: &Fraction, c: &DiskScalar) -> Result<Fraction> {
    if c.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Fraction::new(p.numerator.scale(c), p.denominator.mul(c))
}

/// A nonzero disk scalar `(k/4)·phase` with `k ∈ 1..=4`.
pub fn random_disk_scalar(rng: &mut ChaCha8Rng) -> DiskScalar {
    let k = rat(rng.gen_range(1..=4), 4);
    let phase = unit_phase(rng);
    DiskScalar::nonzero(GaussianRational::new(&phase.re * &k, &phase.im * &k)).expect("modulus k/4")
}

pub fn random_fraction(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Fraction {
    let f = ConMorphism::new(random_contraction(rng, rows, cols)).expect("sampled contraction");
    Fraction::new(f, random_disk_scalar(rng)).expect("nonzero")
}

/// Samples `samples` instances of each operation on random equivalent
/// representatives (dimensions at most 4) and checks that the results stay
/// equivalent and agree with the field model after resolving.
pub fn congruence_check(samples: usize, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new("fraction equivalence is a congruence");
    let mut fails = [0usize; 5];
    let mut first: [Option<String>; 5] = Default::default();
    for k in 0..samples {
        let dim = |rng: &mut ChaCha8Rng| rng.gen_range(1..=4);
        let (a, b, c) = (dim(&mut rng), dim(&mut rng), dim(&mut rng));
        let (d1, d2) = (
            if k % 4 == 0 { 1 } else { dim(&mut rng) },
            if k % 4 == 0 { 1 } else { dim(&mut rng) },
        );
        let p = random_fraction(&mut rng, b, a);
        let q = random_fraction(&mut rng, c, b);
        let r = random_fraction(&mut rng, d1, d2);
        let p2 = rescale(&p, &random_disk_scalar(&mut rng)).expect("nonzero");
        let q2 = rescale(&q, &random_disk_scalar(&mut rng)).expect("nonzero");
        let r2 = rescale(&r, &random_disk_scalar(&mut rng)).expect("nonzero");
        let outcomes = [
            p.equiv(&p2).unwrap_or(false),
            p.dagger().equiv(&p2.dagger()).unwrap_or(false)
                && p.dagger().resolve().matrix == p.resolve().matrix.dagger(),
            q.compose(&p).and_then(|x| x.equiv(&q2.compose(&p2)?)).unwrap_or(false)
                && q.compose(&p)
                    .is_ok_and(|x| Ok(x.resolve().matrix) == q.resolve().matrix.compose(&p.resolve().matrix)),
            p.tensor(&r).equiv(&p2.tensor(&r2)).unwrap_or(false)
                && p.tensor(&r).resolve().matrix == p.resolve().matrix.tensor(&r.resolve().matrix),
            p.dsum(&r).equiv(&p2.dsum(&r2)).unwrap_or(false)
                && p.dsum(&r).resolve().matrix == p.resolve().matrix.dsum(&r.resolve().matrix),
        ];
        for (i, ok) in outcomes.iter().enumerate() {
            if !ok {
                fails[i] += 1;
                first[i].get_or_insert_with(|| format!("sample {k}: p = {p:?}"));
            }
        }
    }
    for (i, name) in ["rescale", "dagger", "compose", "tensor", "dsum"].iter().enumerate() {
        let detail = match &first[i] {
            None => format!("{samples} samples"),
            Some(w) => format!("{} failures; {w}", fails[i]),
        };
        report.record(*name, fails[i] == 0, detail);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fcon::matrix::rmat;
    use crate::scalars::rational::rat;

    fn frac(m: Matrix, d: Rational) -> Fraction {
        Fraction::from_parts(m, GaussianRational::real(d)).unwrap()
    }

    #[test]
    fn equivalence_examples() {
        let p = frac(rmat(&[&[(1, 2)]]), rat(1, 2));
        let q = frac(rmat(&[&[(1, 1)]]), rat(1, 1));
        assert!(p.equiv(&q).unwrap());
        let z1 = frac(Matrix::zeros(1, 1), rat(1, 3));
        let z2 = Fraction::from_parts(Matrix::zeros(1, 1), GaussianRational::i()).unwrap();
        assert!(z1.equiv(&z2).unwrap());
        let a = frac(rmat(&[&[(1, 2)]]), rat(1, 1));
        let b = frac(rmat(&[&[(1, 3)]]), rat(1, 1));
        assert!(!a.equiv(&b).unwrap());
        assert!(matches!(a.equiv(&zero_map(2, 1)), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            Fraction::from_parts(Matrix::identity(1), GaussianRational::zero()).unwrap_err(),
            Error::ZeroDenominator
        );
        let s = r#"{"numerator":{"rows":1,"cols":1,"entries":[["1","1","0","1"]]},"denominator":["0","1","0","1"]}"#;
        assert!(serde_json::from_str::<Fraction>(s).is_err());
    }

    #[test]
    fn dsum_example() {
        let p = frac(rmat(&[&[(1, 2)]]), rat(1, 2));
        let q = frac(rmat(&[&[(1, 3)]]), rat(1, 3));
        let s = p.dsum(&q);
        let expected = frac(rmat(&[&[(1, 6), (0, 1)], &[(0, 1), (1, 6)]]), rat(1, 6));
        assert!(s.equiv(&expected).unwrap());
        assert!(s.equiv(&embed(ConMorphism::identity(2))).unwrap());
    }

    #[test]
    fn dagger_and_tensor() {
        let p = Fraction::from_parts(rmat(&[&[(1, 2), (1, 3)]]), GaussianRational::new(rat(1, 2), rat(1, 2))).unwrap();
        assert!(p.dagger().dagger().equiv(&p).unwrap());
        let f = ConMorphism::new(rmat(&[&[(1, 2)], &[(1, 2)]])).unwrap();
        let g = ConMorphism::new(rmat(&[&[(1, 3), (2, 3)]])).unwrap();
        let lhs = embed(f.clone()).tensor(&embed(g.clone()));
        assert!(lhs.equiv(&embed(f.tensor(&g))).unwrap());
        assert!(embed(f.clone()).dagger().equiv(&embed(f.dagger())).unwrap());
    }

    #[test]
    fn embed_examples() {
        assert!(zero_map(2, 2).equiv(&frac(Matrix::zeros(2, 2), rat(1, 1))).unwrap());
        let p = frac(rmat(&[&[(1, 4), (1, 4)]]), rat(1, 2));
        let id = embed(ConMorphism::identity(1));
        assert!(id.compose(&p).unwrap().equiv(&p).unwrap());
    }

    #[test]
    fn to_fraction_examples() {
        let m = FieldMorphism::new(rmat(&[&[(3, 1)]]));
        let f = to_fraction(&m);
        assert!(f.equiv(&frac(rmat(&[&[(1, 1)]]), rat(1, 3))).unwrap());
        assert_eq!(f.resolve(), m);
        let c = FieldMorphism::new(rmat(&[&[(1, 2), (1, 2)], &[(1, 2), (1, 2)]]));
        let fc = to_fraction(&c);
        assert_eq!(fc.denominator().value(), &GaussianRational::one());
        // (1, 1) has column sums 1 but norm √2.
        let row = FieldMorphism::new(rmat(&[&[(1, 1), (1, 1)]]));
        assert_eq!(to_fraction(&row).resolve(), row);
    }

    #[test]
    fn comes_from_d_examples() {
        assert!(comes_from_d(&FieldMorphism::new(rmat(&[&[(1, 2)]]))));
        assert!(!comes_from_d(&FieldMorphism::new(rmat(&[&[(2, 1)]]))));
        assert!(comes_from_d(&FieldMorphism::new(rmat(&[
            &[(1, 2), (1, 2)],
            &[(1, 2), (1, 2)]
        ]))));
    }

    #[test]
    fn scalars_are_inverted() {
        let a = GaussianRational::new(rat(1, 3), rat(-1, 2));
        let ea = embed(ConMorphism::new(Matrix::scalar(a.clone())).unwrap());
        let inv = Fraction::from_parts(Matrix::identity(1), a).unwrap();
        assert!(ea
            .compose(&inv)
            .unwrap()
            .equiv(&embed(ConMorphism::identity(1)))
            .unwrap());
    }

    #[test]
    fn congruence_on_samples() {
        let r = congruence_check(200, 3);
        assert!(r.passed(), "{r}");
    }
}
