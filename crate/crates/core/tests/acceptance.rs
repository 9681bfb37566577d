//! One line per acceptance criterion. Runs without the libtest harness so the
//! lines are printed by a plain `cargo test`.

use std::process::ExitCode;
use std::time::Instant;

use fcon::axioms::{run_all, AxiomStatus, Fragment, Model, Mutation};
use fcon::colimits::{
    biproduct_preservation_check, bounded_seq_colimit, epi_seq_colimit, induced_morphism, random_bounded_diagram,
    test_cocones_from_bound, universal_property_check, DiagramKind, LimitMethod, SequentialDiagram,
};
use fcon::fcon::approx::ApproxMatrix;
use fcon::fcon::sample::{random_contraction, random_matrix, random_unitary, unit_phase};
use fcon::fcon::{dagger_finite_check, halmos_dilation, is_dagger_mono, ConMorphism, Matrix};
use fcon::localisation::congruence_check;
use fcon::reconstruct::{poly_identity_check, sample_pairs, GaussianField, Psi, StandardCone};
use fcon::scalars::rational::{pow2_neg, rat};
use fcon::scalars::{GaussianRational, Rational};
use fcon::semifield::{
    dominates, geometric_order_decide, pair_counterexample_suite, sup_add_preservation, sup_increasing, Direction,
    OrderDecision, Pair, Pairs, PosScalar, PosScalars, QPlus, Semifield, Sequence,
};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(n: i64, d: i64) -> GaussianRational {
    GaussianRational::real(rat(n, d))
}

fn fraction_calculus() -> Outcome {
    let r = congruence_check(1000, 2024);
    ensure(r.passed(), || format!("{r}"))?;
    Ok(format!("{} congruence checks over 1000 instances", r.checks.len()))
}

fn pair_counterexample() -> Outcome {
    let r = pair_counterexample_suite(7);
    ensure(r.passed(), || format!("{r}"))?;
    // inf(1 + (1, 1/n)) is (2, 1) while 1 + inf(1, 1/n) is (1, 1)
    let s = Pairs;
    let b = Sequence::new(Direction::Decreasing, |n| Pair::ambient(rat(1, 1), rat(1, n as i64)))
        .with_limit(Pair::ints(1, 0));
    let inf_b = fcon::semifield::inf_decreasing(&s, &b, 64).map_err(|e| e.to_string())?;
    let lhs = s.add(&s.one(), &inf_b);
    let one = s.one();
    let shifted = b.map(Direction::Decreasing, move |p| Some(Pairs.add(&one, p)));
    let rhs = fcon::semifield::inf_decreasing(&s, &shifted, 64).map_err(|e| e.to_string())?;
    ensure(lhs == Pair::ints(1, 1) && rhs == Pair::ints(2, 1), || {
        format!("1 + inf = {lhs}, inf(1 + .) = {rhs}")
    })?;
    // ((2,1) - (1,1)) ((2,1) - (2,2)) computed coordinatewise in the ambient plane
    let (a, u, v) = ((rat(2, 1), rat(1, 1)), (rat(1, 1), rat(1, 1)), (rat(2, 1), rat(2, 1)));
    let prod = ((&a.0 - &u.0) * (&a.0 - &v.0), (&a.1 - &u.1) * (&a.1 - &v.1));
    ensure(prod.0.is_zero() && prod.1.is_zero(), || {
        format!("product expansion ({}, {})", prod.0, prod.1)
    })?;
    Ok("inf(1 + (1,1/n)) = (2,1), 1 + inf = (1,1), product = (0,0)".into())
}

fn psi_homomorphism() -> Outcome {
    let cone = StandardCone::new(64);
    let psi = Psi::new(&GaussianField, &cone);
    let tol = pow2_neg(30);
    let mut worst = Rational::zero();
    for (a, b) in sample_pairs(10_000, 1000, 31) {
        let (ga, gb) = (GaussianRational::real(a.clone()), GaussianRational::real(b.clone()));
        let v = |x: GaussianRational| psi.psi(&x).map(|r| r.to_rational()).map_err(|e| e.to_string());
        let (pa, pb) = (v(ga)?, v(gb)?);
        let sum = v(GaussianRational::real(&a + &b))?;
        let prod = v(GaussianRational::real(&a * &b))?;
        let add_err = (&sum - &pa - &pb).abs();
        let mul_err = (&prod - &pa * &pb).abs();
        worst = worst.max(add_err.clone()).max(mul_err.clone());
        ensure(add_err <= tol && mul_err <= tol, || {
            format!("a = {a}, b = {b}: errors {add_err}, {mul_err}")
        })?;
    }
    let poly = poly_identity_check(&sample_pairs(1000, 1000, 32));
    ensure(poly.passed(), || format!("{poly}"))?;
    Ok(format!(
        "10000 pairs, worst error {:.3e}; 1000 exact identity pairs",
        to_f64(&worst)
    ))
}

fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn geometric_order() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let mut counts = [0usize; 3];
    for i in 0..500 {
        // a few exact 1s, the rest spread over (0, 4)
        let u = if i % 50 == 0 {
            rat(1, 1)
        } else {
            let d = rng.gen_range(1..=64);
            rat(rng.gen_range(1..4 * d), d)
        };
        let dec = geometric_order_decide(&QPlus, &u, 64).map_err(|e| e.to_string())?;
        ensure(dec.identity_violation.is_none(), || {
            format!("u = {u}: step identity failed")
        })?;
        let (mut s, mut p) = (Rational::one(), u.clone());
        for n in 1..=64u32 {
            s = &s * &u + Rational::one();
            p = &p * &u;
            ensure(&u + s.recip() == &p / &s + Rational::one(), || {
                format!("u = {u}, n = {n}")
            })?;
        }
        let want = match u.cmp(&Rational::one()) {
            std::cmp::Ordering::Less => OrderDecision::LeqOne,
            std::cmp::Ordering::Equal => OrderDecision::EqualOne,
            std::cmp::Ordering::Greater => OrderDecision::GeqOne,
        };
        ensure(dec.decision == want, || format!("u = {u}: decided {:?}", dec.decision))?;
        counts[match want {
            OrderDecision::LeqOne => 0,
            OrderDecision::EqualOne => 1,
            _ => 2,
        }] += 1;
    }
    Ok(format!(
        "{} below 1, {} equal, {} above; identity exact to n = 64",
        counts[0], counts[1], counts[2]
    ))
}

fn epi_colimit() -> Outcome {
    let p = 35;
    let e = |x: &dyn std::fmt::Display| x.to_string();
    let dh = Matrix::diag(vec![q(1, 1), q(1, 2)]);
    let d = SequentialDiagram::constant(DiagramKind::Epis, dh.clone()).map_err(|x| e(&x))?;
    let c = epi_seq_colimit(&d, p, LimitMethod::Exact).map_err(|x| e(&x))?;
    ensure(c.apex_dim == 1 && c.apex_gram == Matrix::identity(1), || {
        format!("apex {} gram {:?}", c.apex_dim, c.apex_gram)
    })?;
    let e1 = c.quotient_map.compose(&Matrix::basis(2, 0)).map_err(|x| e(&x))?;
    let norm = Matrix::compose_all([&e1.dagger(), &c.apex_gram, &e1]).map_err(|x| e(&x))?;
    ensure(norm == Matrix::identity(1), || format!("<e1 + N, e1 + N> = {norm:?}"))?;

    let half = SequentialDiagram::constant(DiagramKind::Epis, Matrix::scalar(q(1, 2))).map_err(|x| e(&x))?;
    let ch = epi_seq_colimit(&half, p, LimitMethod::Exact).map_err(|x| e(&x))?;
    ensure(ch.apex_dim == 0, || {
        format!("all-1/2 apex has dimension {}", ch.apex_dim)
    })?;

    // dagger-monic natural transformations: diagonal phases, and an embedding
    // into the diagram diag(1, 1/2, 1/2)
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let tol = pow2_neg(p);
    let mut cases = 0;
    for _ in 0..20 {
        let u = Matrix::diag(vec![unit_phase(&mut rng), unit_phase(&mut rng)]);
        let ind = induced_morphism(&d, &c, &d, &c, &[u], p).map_err(|x| e(&x))?;
        ensure(ind.isometry.premise && ind.isometry.holds, || {
            format!("{:?}", ind.isometry)
        })?;
        let dev = ind
            .matrix
            .dagger()
            .compose(&ind.matrix)
            .and_then(|g| g.max_deviation(&ApproxMatrix::identity(1, p)));
        ensure(dev.map(|x| x <= tol).unwrap_or(false), || "isometry deviation".into())?;
        cases += 1;
    }
    let big = Matrix::diag(vec![q(1, 1), q(1, 2), q(1, 2)]);
    let dy = SequentialDiagram::constant(DiagramKind::Epis, big).map_err(|x| e(&x))?;
    let cy = epi_seq_colimit(&dy, p, LimitMethod::Exact).map_err(|x| e(&x))?;
    let ind = induced_morphism(&d, &c, &dy, &cy, &[Matrix::inj1(2, 1)], p).map_err(|x| e(&x))?;
    ensure(ind.isometry.premise && ind.isometry.holds && ind.commutes, || {
        format!("{:?}", ind.isometry)
    })?;
    cases += 1;
    Ok(format!(
        "apex 1 with unit norm, all-1/2 apex O, {cases} induced isometries within 2^-{p}"
    ))
}

fn bounded_colimits() -> Outcome {
    let p = 35;
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    for i in 0..100 {
        let (d, b) = random_bounded_diagram(&mut rng, 5, 4);
        let c = bounded_seq_colimit(&d, &b, p).map_err(|e| format!("diagram {i}: {e}"))?;
        let cocones = test_cocones_from_bound(&d, &b, 10, &mut rng).map_err(|e| e.to_string())?;
        ensure(cocones.len() == 10, || {
            format!("diagram {i}: {} cocones", cocones.len())
        })?;
        let u = universal_property_check(&c, &d, &cocones);
        ensure(u.passed(), || format!("diagram {i}: {u}"))?;
        let x = rng.gen_range(0..=3);
        let bp = biproduct_preservation_check(x, &d, &b, p).map_err(|e| e.to_string())?;
        ensure(bp.passed(), || format!("diagram {i}: {bp}"))?;
    }
    Ok(format!(
        "100 diagrams x 10 cocones; biproduct comparison unitary within 2^-{p}"
    ))
}

fn axiom_suite() -> Outcome {
    let p = 40;
    for seed in 0..10 {
        let r = run_all(&Model::default(), &Fragment::default_with_seed(seed), p);
        ensure(r.passed(), || format!("seed {seed}: {:?}", r.counts))?;
    }
    let frag = Fragment::default_with_seed(3);
    for m in Mutation::ALL {
        let r = run_all(&Model::mutated(m), &frag, p);
        let hit = r
            .results
            .iter()
            .find(|x| x.name == m.target())
            .ok_or_else(|| format!("no check {}", m.target()))?;
        ensure(hit.status == AxiomStatus::Fail, || {
            format!("{m:?} not caught by {}", m.target())
        })?;
        let w = hit.witness.as_ref().ok_or_else(|| format!("{m:?}: no witness"))?;
        let text = serde_json::to_string(w).map_err(|e| e.to_string())?;
        let back: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        ensure(&back == w, || format!("{m:?}: witness does not round-trip"))?;
    }
    Ok(format!(
        "10 seeds pass; {} mutations caught with witnesses",
        Mutation::ALL.len()
    ))
}

fn dagger_finiteness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for i in 0..1000 {
        let n = rng.gen_range(1..=5);
        let f = random_unitary(&mut rng, n);
        ensure(f.dagger().compose(&f).map(|g| g.is_identity()).unwrap_or(false), || {
            format!("sample {i} not isometric")
        })?;
        ensure(f.compose(&f.dagger()).map(|g| g.is_identity()).unwrap_or(false), || {
            format!("sample {i}: ff† ≠ 1")
        })?;
        ensure(dagger_finite_check(&f) == Ok(true), || {
            format!("sample {i}: check disagrees")
        })?;
    }
    Ok("1000 square isometries, ff† = 1 exactly".into())
}

fn contraction_characterisation() -> Outcome {
    let p = 30;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut disagreements = Vec::new();
    for i in 0..200 {
        let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let (f, expect) = if i % 2 == 0 {
            (random_contraction(&mut rng, r, c), true)
        } else {
            // some entry component becomes 11/10, so the norm exceeds 1
            let a = random_matrix(&mut rng, r, c);
            let top = a
                .entries()
                .iter()
                .map(|z| z.re.abs().max(z.im.abs()))
                .max()
                .unwrap_or_default();
            if top.is_zero() {
                (Matrix::scalar(q(2, 1)), false)
            } else {
                (a.scale_rational(&(rat(11, 10) / top)), false)
            }
        };
        let ch = fcon::axioms::contraction_characterisation_check(&f, 64, p, &mut rng);
        if ch.certified != expect || !ch.agrees {
            disagreements.push(i);
        }
    }
    ensure(disagreements.is_empty(), || {
        format!("disagreements at {disagreements:?}")
    })?;
    Ok(format!("200 matrices, 0 disagreements at 2^-{}", p - 5))
}

fn dilation() -> Outcome {
    let p = 35;
    let tol = pow2_neg(p);
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut worst = Rational::zero();
    for i in 0..200 {
        let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let f = ConMorphism::new(random_contraction(&mut rng, r, c)).map_err(|e| e.to_string())?;
        let d = halmos_dilation(&f, p).map_err(|e| e.to_string())?;
        let n = r + c;
        let id = ApproxMatrix::identity(n, p);
        let err = |x: fcon::Result<Rational>| x.map_err(|e| e.to_string());
        let a = err(d.u.dagger().compose(&d.u).and_then(|g| g.max_deviation(&id)))?;
        let b = err(d.u.compose(&d.u.dagger()).and_then(|g| g.max_deviation(&id)))?;
        let em = err(d.e.compose(&d.m).and_then(|g| g.max_deviation_exact(f.matrix())))?;
        let m = d.m.to_rationals();
        ensure(m.iter().all(|(_, im)| im.is_zero()), || "m is not real".into())?;
        let mono = is_dagger_mono(&Matrix::inj1(c, r));
        let ee = err(d
            .e
            .compose(&d.e.dagger())
            .and_then(|g| g.max_deviation(&ApproxMatrix::identity(r, p))))?;
        worst = worst.max(a.clone()).max(b.clone()).max(em.clone()).max(ee.clone());
        ensure(mono && a <= tol && b <= tol && em <= tol && ee <= tol, || {
            format!("sample {i}: {a} {b} {em} {ee}")
        })?;
    }
    Ok(format!(
        "200 dilations, worst deviation {:.3e} ≤ 2^-{p}",
        to_f64(&worst)
    ))
}

fn positive_scalars() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    let vector = |rng: &mut ChaCha8Rng| {
        let n = rng.gen_range(1..=3);
        if rng.gen_ratio(1, 20) {
            Matrix::zeros(n, 1)
        } else {
            random_matrix(rng, n, 1)
        }
    };
    let mut holds = 0;
    for i in 0..1000 {
        let x = vector(&mut rng);
        let y = if rng.gen_ratio(1, 10) {
            x.clone()
        } else {
            vector(&mut rng)
        };
        let (nx, ny) = (x.norm_sq(), y.norm_sq());
        let p = PosScalar::from_vector(x.clone()).map_err(|e| e.to_string())?;
        let qv = PosScalar::from_vector(y.clone()).map_err(|e| e.to_string())?;
        let d = dominates(&p, &qv);
        ensure(d.holds == (ny <= nx), || {
            format!("pair {i}: dominance {} for |y|² = {ny}, |x|² = {nx}", d.holds)
        })?;
        if let Some(f) = &d.witness {
            let ok = fcon::fcon::is_contraction(f) && f.compose(&x).map(|fx| fx == y).unwrap_or(false);
            ensure(ok, || format!("pair {i}: witness is not a contraction sending x to y"))?;
            holds += 1;
        }
    }

    let s = PosScalars;
    for i in 0..100 {
        let a = PosScalar::from_value(&rat(rng.gen_range(0..20), rng.gen_range(1..8))).map_err(|e| e.to_string())?;
        let lim = rat(rng.gen_range(1..20), rng.gen_range(1..8));
        let gap = rat(rng.gen_range(1..5), rng.gen_range(1..5)).min(lim.clone());
        let (l, g) = (lim.clone(), gap.clone());
        let seq = if i % 2 == 0 {
            Sequence::new(Direction::Increasing, move |n| {
                PosScalar::from_value(&(&l - &g / rat(n as i64, 1))).expect("non-negative")
            })
            .with_limit(PosScalar::from_value(&lim).map_err(|e| e.to_string())?)
        } else {
            let k = rng.gen_range(1..10);
            Sequence::new(Direction::Increasing, move |n| {
                PosScalar::from_value(&(&l - &g * rat(k - (n as i64).min(k), k))).expect("non-negative")
            })
            .with_stabilisation(k as u64)
        };
        let bound = PosScalar::from_value(&(&lim + rat(1, 1))).map_err(|e| e.to_string())?;
        let r = sup_add_preservation(&s, &a, &seq, &bound, 32).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("sequence {i}: {r}"))?;
        let sup = sup_increasing(&s, &seq, Some(&bound), 32).map_err(|e| e.to_string())?;
        ensure(sup.value() == &lim, || {
            format!("sequence {i}: sup {} expected {lim}", sup.value())
        })?;
    }
    Ok(format!(
        "1000 pairs ({holds} dominated, witnesses verified); 100 suprema"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 11] = [
        ("fraction calculus congruence", fraction_calculus),
        ("pair semifield counterexample", pair_counterexample),
        ("psi homomorphism", psi_homomorphism),
        ("geometric order decision", geometric_order),
        ("epi sequential colimit", epi_colimit),
        ("bounded colimit and biproducts", bounded_colimits),
        ("axiom suite", axiom_suite),
        ("dagger finiteness", dagger_finiteness),
        ("contraction characterisation", contraction_characterisation),
        ("dilation and factorisation", dilation),
        ("positive scalars", positive_scalars),
    ];
    let results: Vec<(Outcome, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(_, f)| {
                s.spawn(move || {
                    let t = Instant::now();
                    (f(), t.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| (Err("panicked".into()), 0.0)))
            .collect()
    });
    let mut failed = 0;
    for (i, ((name, _), (outcome, secs))) in criteria.iter().zip(&results).enumerate() {
        let (tag, msg) = match outcome {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!("criterion {:>2} {tag} {name} ({secs:.1}s): {msg}", i + 1);
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
