//! Semifield instances, the pair counterexample, and order decisions from
//! geometric series.

use fcon::scalars::rational::rat;
use fcon::semifield::{
    check_semifield_axioms, evaluate_to_real, geometric_order_decide, inf_decreasing, pair_counterexample_suite,
    Direction, Pair, Pairs, QPlus, Sequence, Tropical,
};

fn main() -> fcon::Result<()> {
    println!("{}", check_semifield_axioms(&QPlus, 200, 1));
    println!("{}", check_semifield_axioms(&Tropical, 200, 1));

    let b = Sequence::new(Direction::Decreasing, |n| Pair::ambient(rat(1, 1), rat(1, n as i64)))
        .with_limit(Pair::ints(1, 0));
    println!(
        "inf (1, 1/n) in the pair semifield = {}",
        inf_decreasing(&Pairs, &b, 64)?
    );
    println!("{}", pair_counterexample_suite(1));

    for u in [rat(1, 3), rat(1, 1), rat(5, 2)] {
        let d = geometric_order_decide(&QPlus, &u, 64)?;
        println!("u = {u}: {:?}", d.decision);
    }
    let r = evaluate_to_real(&QPlus, &rat(22, 7), 60)?;
    println!("22/7 ≈ {}", r.to_decimal(15));
    Ok(())
}
