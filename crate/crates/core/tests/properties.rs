use fcon::fcon::{is_contraction, is_dagger_mono, ConMorphism, Matrix};
use fcon::localisation::{comes_from_d, embed, to_fraction, FieldMorphism};
use fcon::scalars::rational::{pow2_neg, rat};
use fcon::scalars::{BigReal, GaussianRational, Rational};
use fcon::semifield::{evaluate_to_real, four_squares, PosScalar, QPlus, Semifield};
use num_bigint::BigUint;
use num_traits::Signed;
use proptest::prelude::*;

fn ratio() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn positive() -> impl Strategy<Value = Rational> {
    (1i64..=60, 1i64..=12).prop_map(|(n, d)| rat(n, d))
}

fn gaussian() -> impl Strategy<Value = GaussianRational> {
    (ratio(), ratio()).prop_map(|(re, im)| GaussianRational::new(re, im))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(gaussian(), rows * cols).prop_map(move |e| Matrix::new(rows, cols, e).unwrap())
}

fn any_matrix() -> impl Strategy<Value = Matrix> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(r, c)| matrix(r, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dagger_reverses_composition((a, b) in (1usize..=3, 1usize..=3, 1usize..=3)
        .prop_flat_map(|(r, k, c)| (matrix(r, k), matrix(k, c))))
    {
        prop_assert_eq!(a.dagger().dagger(), a.clone());
        prop_assert_eq!(a.compose(&b).unwrap().dagger(), b.dagger().compose(&a.dagger()).unwrap());
    }

    #[test]
    fn tensor_and_sum_interchange(a in any_matrix(), b in any_matrix(), c in any_matrix()) {
        prop_assert_eq!(a.tensor(&b).dagger(), a.dagger().tensor(&b.dagger()));
        prop_assert_eq!(a.dsum(&b).dsum(&c), a.dsum(&b.dsum(&c)));
        prop_assert_eq!(a.tensor(&b.dsum(&c)).shape(), a.tensor(&b).dsum(&a.tensor(&c)).shape());
    }

    #[test]
    fn normalised_matrices_are_contractions(a in any_matrix(), b in any_matrix()) {
        let (f, g) = (to_fraction(&FieldMorphism::new(a.clone())), to_fraction(&FieldMorphism::new(b)));
        prop_assert!(is_contraction(f.numerator().matrix()));
        prop_assert!(is_contraction(&f.numerator().tensor(g.numerator()).into_matrix()));
        prop_assert!(is_contraction(&f.numerator().dsum(g.numerator()).into_matrix()));
        prop_assert_eq!(f.resolve(), FieldMorphism::new(a.clone()));
        prop_assert_eq!(comes_from_d(&FieldMorphism::new(a.clone())), is_contraction(&a));
    }

    #[test]
    fn embedded_contractions_resolve_to_themselves(a in any_matrix()) {
        let f = to_fraction(&FieldMorphism::new(a)).numerator().clone();
        let e = embed(f.clone());
        prop_assert_eq!(e.resolve(), FieldMorphism::new(f.matrix().clone()));
        prop_assert!(e.equiv(&to_fraction(&FieldMorphism::new(f.into_matrix()))).unwrap());
    }

    #[test]
    fn contractions_are_closed_under_composition((a, b) in (1usize..=3, 1usize..=3, 1usize..=3)
        .prop_flat_map(|(r, k, c)| (matrix(r, k), matrix(k, c))))
    {
        let f = to_fraction(&FieldMorphism::new(a)).numerator().clone();
        let g = to_fraction(&FieldMorphism::new(b)).numerator().clone();
        let h: ConMorphism = f.compose(&g).unwrap();
        prop_assert!(is_contraction(h.matrix()));
        prop_assert!(is_contraction(h.dagger().matrix()));
    }

    #[test]
    fn injections_are_isometries(m in 0usize..4, n in 0usize..4) {
        prop_assert!(is_dagger_mono(&Matrix::inj1(m, n)) && is_dagger_mono(&Matrix::inj2(m, n)));
    }

    #[test]
    fn bigreal_rounding_is_within_an_ulp(q in ratio(), p in 8u32..80) {
        let r = BigReal::from_rational(&q, p);
        prop_assert!((r.to_rational() - &q).abs() <= pow2_neg(p));
    }

    #[test]
    fn bigreal_sqrt_squares_back(q in positive(), p in 20u32..80) {
        let s = BigReal::from_rational(&q, p + 8).sqrt().unwrap();
        let back = &s * &s;
        prop_assert!((back.to_rational() - &q).abs() <= pow2_neg(p) * rat(64, 1));
    }

    #[test]
    fn real_evaluation_of_positive_rationals(q in positive(), p in 8u32..48) {
        let r = evaluate_to_real(&QPlus, &q, p).unwrap();
        prop_assert!((r.to_rational() - &q).abs() <= pow2_neg(p));
    }

    #[test]
    fn qplus_laws(a in positive(), b in positive(), c in positive()) {
        let s = QPlus;
        prop_assert_eq!(s.add(&a, &b), s.add(&b, &a));
        prop_assert_eq!(s.mul(&a, &s.add(&b, &c)), s.add(&s.mul(&a, &b), &s.mul(&a, &c)));
        prop_assert_eq!(s.mul(&a, &s.inv(&a).unwrap()), s.one());
        prop_assert!(s.leq(&a, &s.add(&a, &b)));
    }

    #[test]
    fn four_squares_sum(n in 0u64..10_000_000_000) {
        let r = four_squares(&BigUint::from(n));
        prop_assert_eq!(r.iter().map(|x| x * x).sum::<BigUint>(), BigUint::from(n));
    }

    #[test]
    fn positive_scalar_witness_has_its_value(q in positive()) {
        let p = PosScalar::from_value(&q).unwrap();
        prop_assert_eq!(p.witness().norm_sq(), q.clone());
        prop_assert!(p.witness().rows() <= 4);
    }

    #[test]
    fn matrix_json_round_trip(a in any_matrix()) {
        let s = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Matrix>(&s).unwrap(), a);
    }
}
