//! Exact contractions: certification, the monoidal structure, and factorisation.

use fcon::fcon::matrix::rmat;
use fcon::fcon::{epi_dagger_mono_factorise, is_dagger_mono, positivity_witness, ConMorphism, Matrix};
use fcon::scalars::rational::rat;
use fcon::scalars::GaussianRational;

fn main() -> fcon::Result<()> {
    let rot = rmat(&[&[(3, 5), (-4, 5)], &[(4, 5), (3, 5)]]);
    let half = Matrix::scalar(GaussianRational::new(rat(1, 2), rat(1, 2)));
    let f = ConMorphism::new(rot.clone())?;
    let g = ConMorphism::new(half)?;
    let shrink = ConMorphism::new(rmat(&[&[(1, 2), (1, 2)], &[(0, 1), (1, 3)]]))?;
    println!("certificate of 1 - A†A: {:?}", shrink.certificate());

    let t = f.tensor(&g);
    let s = f.dsum(&g);
    println!("f ⊗ g is {:?}, f ⊕ g is {:?}", t.shape(), s.shape());
    println!("f ⊗ g certified: {}", ConMorphism::new(t.matrix().clone()).is_ok());

    let too_big = rmat(&[&[(1, 1), (1, 1)]]);
    println!("[1 1] rejected: {:?}", ConMorphism::new(too_big.clone()).err());

    let (m, e) = epi_dagger_mono_factorise(&too_big, 40);
    println!("[1 1] = m e with m {:?} and e {:?}", m.shape(), e.shape());

    // x†x = y†y, so some unitary w has w x = y
    let y = Matrix::diag(vec![GaussianRational::from_i64(1), GaussianRational::i()]);
    if let Some(w) = positivity_witness(&rot, &y)? {
        println!(
            "w x = y with w = {w:?}, unitary: {}",
            is_dagger_mono(&w) && is_dagger_mono(&w.dagger())
        );
    }
    Ok(())
}
