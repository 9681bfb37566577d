//! Unitary dilation of a contraction and the factorisation f = e m it gives.

use fcon::fcon::matrix::rmat;
use fcon::fcon::{halmos_dilation, ConMorphism};

fn main() -> fcon::Result<()> {
    let f = ConMorphism::new(rmat(&[&[(1, 2), (1, 3)], &[(0, 1), (1, 4)]]))?;
    let d = halmos_dilation(&f, 40)?;
    println!("U is {:?}, unitary within 2^-40: {}", d.u.shape(), d.u.is_unitary());
    println!("m is an isometry: {}", d.m.is_isometry());
    println!("e is a co-isometry: {}", d.e.dagger().is_isometry());
    let em = d.e.compose(&d.m)?;
    println!("e m = f within {}", em.max_deviation_exact(f.matrix())?);
    for row in em.to_complex64() {
        println!("  {row:?}");
    }
    Ok(())
}
