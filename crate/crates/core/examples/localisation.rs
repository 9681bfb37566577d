//! Fractions f/a of contractions by nonzero disk scalars, and their resolution
//! to arbitrary linear maps.

use fcon::fcon::matrix::rmat;
use fcon::localisation::{comes_from_d, congruence_check, to_fraction, FieldMorphism};

fn main() -> fcon::Result<()> {
    let a = FieldMorphism::new(rmat(&[&[(2, 1), (1, 1)], &[(0, 1), (3, 1)]]));
    let p = to_fraction(&a);
    println!("numerator {:?}", p.numerator().matrix());
    println!("denominator {:?}", p.denominator());
    println!("resolves back: {}", p.resolve() == a);
    println!("comes from a contraction: {}", comes_from_d(&a));

    let b = FieldMorphism::new(rmat(&[&[(1, 2)], &[(1, 3)]]));
    let q = to_fraction(&b);
    let composite = p.compose(&q)?;
    println!("(p ∘ q) resolves to {:?}", composite.resolve());
    println!("p ⊗ q is {:?}, p ⊕ q is {:?}", p.tensor(&q).shape(), p.dsum(&q).shape());

    let report = congruence_check(100, 1);
    println!("{report}");
    Ok(())
}
