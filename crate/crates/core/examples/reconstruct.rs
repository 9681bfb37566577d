//! Recovering the reals from a positive cone: ψ, its inverse, the field order
//! and the complexification.

use fcon::reconstruct::{
    complexify, field_order_check, poly_identity_check, psi_report, sample_pairs, GaussianField, InvolutiveField, Psi,
    RealApprox, StandardCone,
};
use fcon::scalars::rational::rat;
use fcon::scalars::GaussianRational;

fn main() -> fcon::Result<()> {
    let cone = StandardCone::new(64);
    let psi = Psi::new(&GaussianField, &cone);
    for a in [rat(-3, 2), rat(0, 1), rat(7, 1)] {
        let v = psi.psi(&GaussianRational::real(a.clone()))?;
        println!("psi({a}) = {}", v.to_decimal(10));
    }
    println!("{}", psi_report(&GaussianField, &cone, 100, 1));
    println!("{}", poly_identity_check(&sample_pairs(100, 50, 2)));
    println!("{}", field_order_check(&GaussianField, &cone, 100, 3));

    let i = GaussianField.from_rational(&rat(0, 1));
    let u = GaussianField.add(&i, &GaussianRational::i());
    let c = complexify(&GaussianField, &cone, &u)?;
    let (re, im) = c.decompose(&GaussianRational::new(rat(2, 1), rat(-5, 1)))?;
    println!("2 - 5i splits as {re} and {im}");

    let reals = RealApprox::new(64);
    println!("{}", psi_report(&reals, &StandardCone::new(64), 50, 4));
    Ok(())
}
