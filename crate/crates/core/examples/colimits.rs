//! Sequential colimits: a diagram of epis with its limit inner product, and a
//! bounded diagram of monos with its universal property.

use fcon::colimits::{
    biproduct_preservation_check, bounded_seq_colimit, epi_seq_colimit, induced_morphism, random_bounded_diagram,
    test_cocones_from_bound, universal_property_check, DiagramKind, LimitMethod, SequentialDiagram,
};
use fcon::fcon::matrix::rmat;
use fcon::fcon::Matrix;
use fcon::scalars::rational::rat;
use fcon::scalars::GaussianRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fcon::Result<()> {
    let f = rmat(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 2)]]);
    let d = SequentialDiagram::constant(DiagramKind::Epis, f)?;
    let c = epi_seq_colimit(&d, 40, LimitMethod::Exact)?;
    println!(
        "colim of diag(1, 1/2): dimension {}, limit Gram {:?}",
        c.apex_dim, c.gram_limit
    );

    let h = SequentialDiagram::constant(DiagramKind::Epis, rmat(&[&[(1, 2)]]))?;
    println!(
        "colim of [1/2]: dimension {}",
        epi_seq_colimit(&h, 40, LimitMethod::Exact)?.apex_dim
    );

    let phases = Matrix::diag(vec![GaussianRational::new(rat(3, 5), rat(4, 5)), GaussianRational::i()]);
    let ind = induced_morphism(&d, &c, &d, &c, &[phases], 40)?;
    println!("a diagonal unitary induces an isometry: {}", ind.isometry.holds);

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (m, bound) = random_bounded_diagram(&mut rng, 4, 3);
    let colim = bounded_seq_colimit(&m, &bound, 40)?;
    println!(
        "bounded diagram with objects {:?}: apex dimension {}",
        (1..=4).map(|n| m.object(n)).collect::<Vec<_>>(),
        colim.apex_dim
    );
    let cocones = test_cocones_from_bound(&m, &bound, 5, &mut rng)?;
    println!("{}", universal_property_check(&colim, &m, &cocones));
    println!("{}", biproduct_preservation_check(2, &m, &bound, 40)?);
    Ok(())
}
