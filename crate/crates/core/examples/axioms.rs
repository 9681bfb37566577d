//! The axiom verifier on the matrix model, then on each deliberately broken
//! variant.

use fcon::axioms::{run_all, AxiomStatus, Fragment, Model, Mutation};

fn main() {
    let frag = Fragment::default_with_seed(1);
    let report = run_all(&Model::default(), &frag, 40);
    for r in &report.results {
        println!("axiom {:>11} {:<30} {:?}", r.axiom, r.name, r.status);
    }

    for m in Mutation::ALL {
        let r = run_all(&Model::mutated(m), &frag, 40);
        let caught: Vec<&str> = r
            .results
            .iter()
            .filter(|x| x.status == AxiomStatus::Fail)
            .map(|x| x.name.as_str())
            .collect();
        println!("{m:?}: caught by {caught:?}");
    }

    let target = Mutation::LossyTensor.target();
    let r = run_all(&Model::mutated(Mutation::LossyTensor), &frag, 40);
    if let Some(w) = r.get(target).and_then(|x| x.witness.as_ref()) {
        println!("{target} witness: {w}");
    }
}
