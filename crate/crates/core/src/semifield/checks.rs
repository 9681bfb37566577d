use std::cmp::Ordering;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::instances::{Pair, Pairs};
use super::{inf_decreasing, limit_of, sup_increasing, Direction, Semifield, Sequence};
use crate::error::{Error, Result};
use crate::report::{Check, Report, Status};
use crate::scalars::rational::rat;
use crate::scalars::{BigReal, Rational};

type Law<S> = fn(&S, &<S as Semifield>::Elem, &<S as Semifield>::Elem, &<S as Semifield>::Elem) -> bool;

fn laws<S: Semifield>() -> Vec<(&'static str, Law<S>)> {
    vec![
        ("add_commutative", |s, a, b, _| s.equal(&s.add(a, b), &s.add(b, a))),
        ("add_associative", |s, a, b, c| {
            s.equal(&s.add(&s.add(a, b), c), &s.add(a, &s.add(b, c)))
        }),
        ("add_identity", |s, a, _, _| {
            s.equal(&s.add(a, &s.zero()), a) && s.equal(&s.add(&s.zero(), a), a)
        }),
        ("mul_commutative", |s, a, b, _| s.equal(&s.mul(a, b), &s.mul(b, a))),
        ("mul_associative", |s, a, b, c| {
            s.equal(&s.mul(&s.mul(a, b), c), &s.mul(a, &s.mul(b, c)))
        }),
        ("mul_identity", |s, a, _, _| {
            s.equal(&s.mul(a, &s.one()), a) && s.equal(&s.mul(&s.one(), a), a)
        }),
        ("distributive", |s, a, b, c| {
            s.equal(&s.mul(a, &s.add(b, c)), &s.add(&s.mul(a, b), &s.mul(a, c)))
        }),
        ("zero_absorbing", |s, a, _, _| {
            s.is_zero(&s.mul(&s.zero(), a)) && s.is_zero(&s.mul(a, &s.zero()))
        }),
        ("mul_inverse", |s, a, _, _| {
            s.is_zero(a) || s.inv(a).is_ok_and(|i| s.equal(&s.mul(a, &i), &s.one()))
        }),
        ("strict", |s, a, _, _| !s.is_zero(&s.add(&s.one(), a))),
        ("order_reflexive", |s, a, _, _| s.leq(a, a)),
        ("order_antisymmetric", |s, a, b, _| {
            !(s.leq(a, b) && s.leq(b, a)) || s.equal(a, b)
        }),
        ("order_transitive", |s, a, b, c| {
            !(s.leq(a, b) && s.leq(b, c)) || s.leq(a, c)
        }),
        ("add_monotone", |s, a, b, c| {
            !s.leq(a, b) || s.leq(&s.add(a, c), &s.add(b, c))
        }),
        ("mul_monotone", |s, a, b, c| {
            !s.leq(a, b) || s.leq(&s.mul(a, c), &s.mul(b, c))
        }),
        ("one_geq_zero", |s, _, _, _| s.leq(&s.zero(), &s.one())),
    ]
}

/// Tests every semifield and order axiom on all triples of the instance's
/// special elements, `samples` random triples, and `samples` chains
/// `a ≤ a + x ≤ a + x + y`. Each failing law reports its first counterexample.
pub fn check_semifield_axioms<S: Semifield>(s: &S, samples: usize, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let special = s.special_elements();
    let mut triples = Vec::new();
    for a in &special {
        for b in &special {
            for c in &special {
                triples.push((a.clone(), b.clone(), c.clone()));
            }
        }
    }
    for _ in 0..samples {
        triples.push((s.sample(&mut rng), s.sample(&mut rng), s.sample(&mut rng)));
        let a = s.sample(&mut rng);
        let b = s.add(&a, &s.sample(&mut rng));
        let c = s.add(&b, &s.sample(&mut rng));
        triples.push((a, b, c));
    }
    let mut report = Report::new(format!("semifield axioms: {}", s.name()));
    for (name, law) in laws::<S>() {
        let violation = triples.iter().find(|(a, b, c)| !law(s, a, b, c));
        match violation {
            None => report.record(name, true, format!("{} triples", triples.len())),
            Some((a, b, c)) => report.record(name, false, format!("a = {a:?}, b = {b:?}, c = {c:?}")),
        }
    }
    report
}

/// `Ok(None)` when no limit is found within the budget.
fn try_limit<S: Semifield>(s: &S, seq: &Sequence<S::Elem>, budget: u64) -> Result<Option<S::Elem>> {
    match limit_of(s, seq, budget) {
        Ok(v) => Ok(Some(v)),
        Err(Error::NoLimitWithinBudget { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn compare_check<S: Semifield>(s: &S, name: &str, lhs: Option<S::Elem>, rhs: Option<S::Elem>) -> Check {
    match (lhs, rhs) {
        (Some(l), Some(r)) => Check::from_bool(name, s.equal(&l, &r), format!("{l:?} vs {r:?}")),
        _ => Check::new(name, Status::Inconclusive, "limit not found within budget"),
    }
}

fn not_applicable(name: &str, why: &str) -> Check {
    Check::new(name, Status::NotApplicable, why)
}

fn seq_mul<S: Semifield>(s: &S, a: &Sequence<S::Elem>, b: &Sequence<S::Elem>) -> Sequence<S::Elem> {
    let t = s.clone();
    a.zip_with(b, a.direction, move |x, y| t.mul(x, y))
}

fn seq_add<S: Semifield>(s: &S, a: &Sequence<S::Elem>, b: &Sequence<S::Elem>) -> Sequence<S::Elem> {
    let t = s.clone();
    a.zip_with(b, a.direction, move |x, y| t.add(x, y))
}

fn seq_inv<S: Semifield>(s: &S, b: &Sequence<S::Elem>) -> Sequence<S::Elem> {
    let t = s.clone();
    b.map(b.direction.flip(), move |x| t.inv(x).ok())
}

fn seq_one_plus<S: Semifield>(s: &S, b: &Sequence<S::Elem>) -> Sequence<S::Elem> {
    let t = s.clone();
    b.map(b.direction, move |x| Some(t.add(&t.one(), x)))
}

/// Compatibility of extrema with multiplication, items (1)–(3) for decreasing
/// and (4)–(6) for increasing sequences.
pub fn check_mult_compatibility<S: Semifield>(
    s: &S,
    a: &Sequence<S::Elem>,
    b: &Sequence<S::Elem>,
    budget: u64,
) -> Result<Report> {
    if a.direction != b.direction {
        return Err(Error::NotMonotone { index: 0 });
    }
    let mut report = Report::new(format!("multiplicative compatibility: {}", s.name()));
    let la = try_limit(s, a, budget)?;
    let lb = try_limit(s, b, budget)?;
    let ab = seq_mul(s, a, b);
    let lab = try_limit(s, &ab, budget)?;
    let (tag, ext) = match a.direction {
        Direction::Decreasing => ("inf", "infimum"),
        Direction::Increasing => ("sup", "supremum"),
    };
    let first = if a.direction == Direction::Decreasing { 1 } else { 4 };

    let product = la.as_ref().zip(lb.as_ref()).map(|(x, y)| s.mul(x, y));
    report.push(compare_check(
        s,
        &format!("item{first}_{tag}_of_product"),
        lab.clone(),
        product,
    ));

    // Side condition for quotients: inf b ≠ 0, resp. b₁ ≠ 0.
    let side = match a.direction {
        Direction::Decreasing => lb.as_ref().map(|l| !s.is_zero(l)),
        Direction::Increasing => Some(!s.is_zero(&b.term(1))),
    };
    let quot_name = format!("item{}_{tag}_quotient", first + 1);
    let inv_name = format!("item{}_inverse_{ext}", first + 2);
    match side {
        Some(true) => {
            let lbv = lb.clone().expect("side condition implies existence");
            let q = lab.map(|x| s.mul(&x, &s.inv(&lbv).expect("nonzero")));
            report.push(compare_check(s, &quot_name, la.clone(), q));
            let inv_b = seq_inv(s, b);
            let lhs = try_limit(s, &inv_b, budget)?;
            report.push(compare_check(s, &inv_name, lhs, s.inv(&lbv).ok()));
        }
        Some(false) => {
            report.push(not_applicable(&quot_name, "side condition fails"));
            report.push(not_applicable(&inv_name, "side condition fails"));
        }
        None => {
            report.push(Check::new(&quot_name, Status::Inconclusive, "limit of b not found"));
            report.push(Check::new(&inv_name, Status::Inconclusive, "limit of b not found"));
        }
    }
    Ok(report)
}

fn aggregate(name: &str, results: Vec<Check>) -> Check {
    if results.is_empty() {
        return not_applicable(name, "no sequence meets the side conditions");
    }
    if let Some(f) = results.iter().find(|c| c.status == Status::Fail) {
        return Check::new(name, Status::Fail, f.detail.clone());
    }
    if results.iter().any(|c| c.status == Status::Inconclusive) {
        return Check::new(name, Status::Inconclusive, "some limits not found within budget");
    }
    Check::new(name, Status::Pass, format!("{} cases", results.len()))
}

/// Compatibility of extrema with addition: the four equivalent conditions,
/// their strengthened infimum forms allowing zero infima, and whether the
/// decided conditions agree.
pub fn check_add_compatibility<S: Semifield>(
    s: &S,
    increasing: &[Sequence<S::Elem>],
    decreasing: &[Sequence<S::Elem>],
    budget: u64,
) -> Result<Report> {
    if increasing.iter().any(|q| q.direction != Direction::Increasing)
        || decreasing.iter().any(|q| q.direction != Direction::Decreasing)
    {
        return Err(Error::NotMonotone { index: 0 });
    }
    let lim = |q: &Sequence<S::Elem>| try_limit(s, q, budget);
    let inc_l = increasing.iter().map(lim).collect::<Result<Vec<_>>>()?;
    let dec_l = decreasing.iter().map(lim).collect::<Result<Vec<_>>>()?;
    let plus_one = |l: &Option<S::Elem>| l.as_ref().map(|x| s.add(&s.one(), x));
    let nonzero = |l: &Option<S::Elem>| l.as_ref().is_some_and(|x| !s.is_zero(x));

    let mut c1 = Vec::new();
    for (q, l) in increasing.iter().zip(&inc_l) {
        c1.push(compare_check(s, "", lim(&seq_one_plus(s, q))?, plus_one(l)));
    }
    let mut c2 = Vec::new();
    for (i, (p, lp)) in increasing.iter().zip(&inc_l).enumerate() {
        for (q, lq) in increasing.iter().zip(&inc_l).skip(i) {
            let sum = lp.as_ref().zip(lq.as_ref()).map(|(x, y)| s.add(x, y));
            c2.push(compare_check(s, "", lim(&seq_add(s, p, q))?, sum));
        }
    }
    let (mut c3, mut c3s) = (Vec::new(), Vec::new());
    for (q, l) in decreasing.iter().zip(&dec_l) {
        let c = compare_check(s, "", lim(&seq_one_plus(s, q))?, plus_one(l));
        if nonzero(l) {
            c3.push(c.clone());
        }
        c3s.push(c);
    }
    let (mut c4, mut c4s) = (Vec::new(), Vec::new());
    for (i, (p, lp)) in decreasing.iter().zip(&dec_l).enumerate() {
        for (q, lq) in decreasing.iter().zip(&dec_l).skip(i) {
            let sum = lp.as_ref().zip(lq.as_ref()).map(|(x, y)| s.add(x, y));
            let c = compare_check(s, "", lim(&seq_add(s, p, q))?, sum);
            if nonzero(lp) && nonzero(lq) {
                c4.push(c.clone());
            }
            c4s.push(c);
        }
    }
    let mut report = Report::new(format!("additive compatibility: {}", s.name()));
    let checks = [
        aggregate("sup_one_plus", c1),
        aggregate("sup_of_sum", c2),
        aggregate("inf_one_plus", c3),
        aggregate("inf_of_sum", c4),
    ];
    let decided: Vec<Status> = checks
        .iter()
        .map(|c| c.status)
        .filter(|st| matches!(st, Status::Pass | Status::Fail))
        .collect();
    let agree = decided.windows(2).all(|w| w[0] == w[1]);
    for c in checks {
        report.push(c);
    }
    report.push(aggregate("inf_one_plus_strengthened", c3s));
    report.push(aggregate("inf_of_sum_strengthened", c4s));
    report.record("conditions_agree", agree, format!("decided statuses {decided:?}"));
    Ok(report)
}

/// `a + sup bₙ = sup(a + bₙ)` for a bounded increasing sequence.
pub fn sup_add_preservation<S: Semifield>(
    s: &S,
    a: &S::Elem,
    seq: &Sequence<S::Elem>,
    bound: &S::Elem,
    budget: u64,
) -> Result<Report> {
    let sup = sup_increasing(s, seq, Some(bound), budget)?;
    let t = s.clone();
    let av = a.clone();
    let shifted = seq.map(Direction::Increasing, move |x| Some(t.add(&av, x)));
    let sup_shifted = sup_increasing(s, &shifted, Some(&s.add(a, bound)), budget)?;
    let mut report = Report::new(format!("supremum preservation: {}", s.name()));
    let lhs = s.add(a, &sup);
    report.record(
        "a_plus_sup",
        s.equal(&lhs, &sup_shifted),
        format!("{lhs:?} vs {sup_shifted:?}"),
    );
    Ok(report)
}

/// For each `a ≤ b` with `a ≠ 0`: `b ≠ 0` and `1/b ≤ 1/a`.
pub fn inversion_antimonotone_check<S: Semifield>(s: &S, pairs: &[(S::Elem, S::Elem)]) -> Report {
    let mut report = Report::new(format!("inversion anti-monotone: {}", s.name()));
    let mut applicable = 0;
    for (a, b) in pairs {
        if !s.leq(a, b) || s.is_zero(a) {
            continue;
        }
        applicable += 1;
        let ok = !s.is_zero(b)
            && match (s.inv(a), s.inv(b)) {
                (Ok(ia), Ok(ib)) => s.leq(&ib, &ia),
                _ => false,
            };
        if !ok {
            report.record("inverse_reverses_order", false, format!("a = {a:?}, b = {b:?}"));
            return report;
        }
    }
    if applicable == 0 {
        report.push(not_applicable("inverse_reverses_order", "no pair with a ≤ b and a ≠ 0"));
    } else {
        report.record("inverse_reverses_order", true, format!("{applicable} pairs"));
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderDecision {
    LeqOne,
    GeqOne,
    EqualOne,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeometricDecision<E> {
    pub decision: OrderDecision,
    /// `1/s_N` at the budget.
    pub reciprocal: E,
    /// `u^(N+1)/s_N` at the budget.
    pub tail: E,
    /// First index at which `u + 1/sₙ = u^(n+1)/sₙ + 1` failed, if any.
    #[serde(with = "crate::json::opt_int")]
    pub identity_violation: Option<u64>,
}

/// Decides `u ≤ 1` or `u ≥ 1` from `sₙ = uⁿ + ⋯ + u + 1` and the identity
/// `u + 1/sₙ = u^(n+1)/sₙ + 1`: if `1/sₙ` stays above `u^(n+1)/sₙ` then
/// `u + inf 1/sₙ = 1` forces `u ≤ 1`; if it falls below, `inf 1/sₙ = 0`
/// forces `u ≥ 1`.
pub fn geometric_order_decide<S: Semifield>(s: &S, u: &S::Elem, budget: u64) -> Result<GeometricDecision<S::Elem>> {
    if s.is_zero(u) {
        return Err(Error::InvalidElement("u must be nonzero".into()));
    }
    let one = s.one();
    let mut sn = one.clone();
    let mut upow = u.clone();
    let mut all_equal = true;
    let mut violation = None;
    let mut last = None;
    for n in 1..=budget.max(1) {
        sn = s.add(&s.mul(&sn, u), &one);
        upow = s.mul(&upow, u);
        let q = s.inv(&sn)?;
        let d = s.mul(&upow, &q);
        if violation.is_none() && !s.equal(&s.add(u, &q), &s.add(&d, &one)) {
            violation = Some(n);
        }
        all_equal &= s.equal(&q, &d);
        last = Some((q, d));
    }
    let (q, d) = last.expect("at least one step");
    let decision = if violation.is_some() {
        OrderDecision::Inconclusive
    } else {
        match s.compare(&q, &d) {
            Some(Ordering::Greater) => OrderDecision::LeqOne,
            Some(Ordering::Less) => OrderDecision::GeqOne,
            Some(Ordering::Equal) if all_equal && s.is_exact() => OrderDecision::EqualOne,
            _ => OrderDecision::Inconclusive,
        }
    };
    Ok(GeometricDecision {
        decision,
        reciprocal: q,
        tail: d,
        identity_violation: violation,
    })
}

/// Least `n ≤ budget` with `aⁿ > b`, for `a > 1`.
pub fn archimedean_witness<S: Semifield>(s: &S, a: &S::Elem, b: &S::Elem, budget: u64) -> Result<u64> {
    if !s.lt(&s.one(), a) {
        return Err(Error::InvalidElement(format!("{a:?} is not > 1")));
    }
    let mut p = s.one();
    for n in 1..=budget {
        p = s.mul(&p, a);
        if s.lt(b, &p) {
            return Ok(n);
        }
    }
    Err(Error::NoWitnessWithinBudget { budget })
}

/// `inf(a + uⁿ) = a` for `a ≠ 0` and `u < 1`.
pub fn inf_sum_geom_check<S: Semifield>(s: &S, a: &S::Elem, u: &S::Elem, budget: u64) -> Result<Report> {
    if s.is_zero(a) {
        return Err(Error::InvalidElement("a must be nonzero".into()));
    }
    if !s.lt(u, &s.one()) {
        return Err(Error::InvalidElement(format!("{u:?} is not < 1")));
    }
    let (t, av, uv) = (s.clone(), a.clone(), u.clone());
    let mut seq = Sequence::new(Direction::Decreasing, move |n| t.add(&av, &t.pow(&uv, n)));
    if s.is_zero(u) {
        seq = seq.with_stabilisation(1);
    }
    if let Some(l) = s.geometric_limit(u) {
        seq = seq.with_limit(s.add(a, &l));
    }
    let mut report = Report::new(format!("inf(a + u^n) = a: {}", s.name()));
    let bounded = (1..=budget).all(|n| s.leq(a, &seq.term(n)));
    report.record("a_is_lower_bound", bounded, format!("checked n ≤ {budget}"));
    match inf_decreasing(s, &seq, budget) {
        Ok(inf) => report.record("infimum_is_a", s.equal(&inf, a), format!("inf = {inf:?}")),
        Err(Error::NoLimitWithinBudget { budget }) => report.push(Check::new(
            "infimum_is_a",
            Status::Inconclusive,
            format!("no limit within {budget} terms"),
        )),
        Err(e) => return Err(e),
    }
    Ok(report)
}

/// The pair semifield as a counterexample: infima do not commute with
/// adding 1, and it admits no field embedding.
pub fn pair_counterexample_suite(seed: u64) -> Report {
    let s = Pairs;
    let mut report = Report::new("pair semifield counterexamples");
    let b = Sequence::new(Direction::Decreasing, |n| Pair::ambient(rat(1, 1), rat(1, n as i64)))
        .with_limit(Pair::ints(1, 0));
    let inf_b = inf_decreasing(&s, &b, 64).expect("closed-form limit");
    let one_plus_inf = s.add(&s.one(), &inf_b);
    let inf_one_plus = inf_decreasing(&s, &seq_one_plus(&s, &b), 64).expect("closed-form limit");
    report.record(
        "infima_not_compatible",
        one_plus_inf == Pair::ints(1, 1) && inf_one_plus == Pair::ints(2, 1),
        format!("1 + inf b = {one_plus_inf}, inf(1 + b) = {inf_one_plus}"),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut complete = true;
    let mut detail = String::from("100 sequences");
    for _ in 0..100 {
        let x0 = if rng.gen_ratio(1, 3) {
            Rational::zero()
        } else {
            rat(rng.gen_range(1..10), rng.gen_range(1..5))
        };
        let y0 = if rng.gen_ratio(1, 3) {
            Rational::zero()
        } else {
            rat(rng.gen_range(1..10), rng.gen_range(1..5))
        };
        let (cx, cy) = (rat(rng.gen_range(1..5), 1), rat(rng.gen_range(1..5), 1));
        let (gx, gy) = (x0.clone(), y0.clone());
        let seq = Sequence::new(Direction::Decreasing, move |n| {
            let k = rat(1, n as i64);
            Pair::ambient(&gx + &cx * &k, &gy + &cy * &k)
        })
        .with_limit(Pair::ambient(x0.clone(), y0.clone()));
        let inf = match inf_decreasing(&s, &seq, 32) {
            Ok(v) => v,
            Err(e) => {
                complete = false;
                detail = format!("error {e}");
                break;
            }
        };
        let expected = if x0.is_zero() || y0.is_zero() {
            s.zero()
        } else {
            Pair::ambient(x0, y0)
        };
        if !inf.is_valid() || inf != expected {
            complete = false;
            detail = format!("inf {inf} expected {expected}");
            break;
        }
    }
    report.record("monotone_sequentially_complete", complete, detail);

    // (2,1)(2,1) + (1,1)(2,2) = (6,3) = (2,1)(2,2) + (1,1)(2,1), so in any
    // field containing the semifield ((2,1) − (1,1))((2,1) − (2,2)) = 0.
    let (a, one, two) = (Pair::ints(2, 1), Pair::ints(1, 1), Pair::ints(2, 2));
    let positive = s.add(&s.mul(&a, &a), &s.mul(&one, &two));
    let negative = s.add(&s.mul(&a, &two), &s.mul(&one, &a));
    report.record(
        "no_field_embedding",
        positive == negative && positive == Pair::ints(6, 3) && a != one && a != two,
        format!("(4,1) + (2,2) = {positive}, (4,2) + (2,1) = {negative}; the factors are nonzero zero divisors"),
    );
    report
}

/// The image of `x` under the order embedding into the reals, by bisection
/// against rational multiples of 1. Error at most `2^-precision` (plus the
/// instance's own tolerance for approximate instances).
pub fn evaluate_to_real<S: Semifield>(s: &S, x: &S::Elem, precision: u32) -> Result<BigReal> {
    let one = s.one();
    if s.equal(&s.add(&one, &one), &one) {
        return Err(Error::DegenerateEmbedding);
    }
    let cmp = |q: &Rational| s.compare(x, &s.embed_rational(q)).ok_or(Error::IncomparableEncountered);
    let out = |q: &Rational| BigReal::from_rational(q, precision + 2);
    let mut lo = Rational::zero();
    let mut hi = Rational::one();
    let mut doublings = 0;
    loop {
        match cmp(&hi)? {
            Ordering::Equal => return Ok(out(&hi)),
            Ordering::Less => break,
            Ordering::Greater => {
                lo = hi.clone();
                hi = &hi * rat(2, 1);
                doublings += 1;
                if doublings > 4096 {
                    return Err(Error::NoLimitWithinBudget { budget: 4096 });
                }
            }
        }
    }
    if cmp(&lo)? == Ordering::Equal {
        return Ok(out(&lo));
    }
    let steps = precision + doublings + 1;
    let two = rat(2, 1);
    for _ in 0..steps {
        let mid = (&lo + &hi) / &two;
        match cmp(&mid)? {
            Ordering::Equal => return Ok(out(&mid)),
            Ordering::Greater => lo = mid,
            Ordering::Less => hi = mid,
        }
    }
    Ok(out(&((&lo + &hi) / &two)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fcon::matrix::rmat;
    use crate::semifield::{Mutated, PosScalar, PosScalars, QPlus, RPlusApprox, SemifieldMutation, Tropical};

    const BUDGET: u64 = 64;

    #[test]
    fn axioms_pass_for_all_instances() {
        assert!(check_semifield_axioms(&QPlus, 200, 1).passed());
        assert!(check_semifield_axioms(&Pairs, 200, 1).passed());
        assert!(check_semifield_axioms(&Tropical, 200, 1).passed());
        assert!(check_semifield_axioms(&RPlusApprox::default(), 200, 1).passed());
        assert!(check_semifield_axioms(&PosScalars, 100, 1).passed());
    }

    #[test]
    fn every_mutation_is_detected() {
        for m in SemifieldMutation::ALL {
            let r = check_semifield_axioms(&Mutated::new(QPlus, m), 200, 2);
            assert_eq!(r.status(m.target()), Some(Status::Fail), "{m:?} undetected:\n{r}");
        }
    }

    #[test]
    fn infima_examples() {
        let q = Sequence::new(Direction::Decreasing, |n| crate::scalars::rational::pow2_neg(n as u32))
            .with_limit(Rational::zero());
        assert_eq!(inf_decreasing(&QPlus, &q, BUDGET).unwrap(), Rational::zero());
        let p = Sequence::new(Direction::Decreasing, |n| Pair::ambient(rat(1, 1), rat(1, n as i64)))
            .with_limit(Pair::ints(1, 0));
        assert_eq!(inf_decreasing(&Pairs, &p, BUDGET).unwrap(), Pair::ints(0, 0));
        let c = Sequence::constant(rat(5, 7));
        assert_eq!(inf_decreasing(&QPlus, &c, BUDGET).unwrap(), rat(5, 7));
    }

    #[test]
    fn limit_failures() {
        let q = Sequence::new(Direction::Decreasing, |n| rat(1, n as i64));
        assert_eq!(
            inf_decreasing(&QPlus, &q, BUDGET),
            Err(Error::NoLimitWithinBudget { budget: BUDGET })
        );
        let bad = Sequence::new(Direction::Decreasing, |n| rat(n as i64, 1));
        assert_eq!(
            inf_decreasing(&QPlus, &bad, BUDGET),
            Err(Error::NotMonotone { index: 1 })
        );
        let inc = Sequence::new(Direction::Increasing, |n| rat(n as i64, 1)).with_limit(rat(100, 1));
        assert_eq!(
            sup_increasing(&QPlus, &inc, Some(&rat(10, 1)), BUDGET),
            Err(Error::NotBounded { index: 11 })
        );
    }

    fn rseq(r: RPlusApprox, dir: Direction, f: fn(u64) -> Rational, limit: Rational) -> Sequence<BigReal> {
        Sequence::new(dir, move |n| r.real(&f(n))).with_limit(r.real(&limit))
    }

    #[test]
    fn mult_compatibility_examples() {
        let r = RPlusApprox::default();
        let a = rseq(r, Direction::Decreasing, |n| rat(1, 1) + rat(1, n as i64), rat(1, 1));
        let b = rseq(r, Direction::Decreasing, |n| rat(2, 1) + rat(1, n as i64), rat(2, 1));
        let rep = check_mult_compatibility(&r, &a, &b, BUDGET).unwrap();
        assert!(rep.checks.iter().all(|c| c.status == Status::Pass), "{rep}");

        let ones = Sequence::constant(Rational::one());
        let rep = check_mult_compatibility(&QPlus, &ones, &ones, BUDGET).unwrap();
        assert!(rep.checks.iter().all(|c| c.status == Status::Pass), "{rep}");

        let b = rseq(r, Direction::Increasing, |n| rat(3, 1) - rat(1, n as i64), rat(3, 1));
        let rep = check_mult_compatibility(&r, &b, &b, BUDGET).unwrap();
        assert_eq!(rep.status("item6_inverse_supremum"), Some(Status::Pass), "{rep}");
        let inv = seq_inv(&r, &b);
        let inf = inf_decreasing(&r, &inv, BUDGET).unwrap();
        assert!(r.equal(&inf, &r.real(&rat(1, 3))));
    }

    #[test]
    fn add_compatibility_examples() {
        let r = RPlusApprox::default();
        let inc = vec![
            rseq(
                r,
                Direction::Increasing,
                |n| rat(1, 1) - rat(1, n as i64 + 1),
                rat(1, 1),
            ),
            rseq(r, Direction::Increasing, |n| rat(3, 1) - rat(1, n as i64), rat(3, 1)),
        ];
        let dec = vec![
            rseq(r, Direction::Decreasing, |n| rat(1, n as i64), Rational::zero()),
            rseq(r, Direction::Decreasing, |n| rat(2, 1) + rat(1, n as i64), rat(2, 1)),
        ];
        let rep = check_add_compatibility(&r, &inc, &dec, BUDGET).unwrap();
        assert!(rep.checks.iter().all(|c| c.status == Status::Pass), "{rep}");

        let b = Sequence::new(Direction::Decreasing, |n| Pair::ambient(rat(1, 1), rat(1, n as i64)))
            .with_limit(Pair::ints(1, 0));
        let rep = check_add_compatibility(&Pairs, &[], &[b], BUDGET).unwrap();
        assert_eq!(rep.status("inf_one_plus_strengthened"), Some(Status::Fail), "{rep}");
        assert_eq!(rep.status("inf_one_plus"), Some(Status::NotApplicable));

        let t_inc = vec![
            Sequence::new(Direction::Increasing, |n| rat(2, 1) - rat(1, n as i64)).with_limit(rat(2, 1)),
            Sequence::new(Direction::Increasing, |n| rat(1, 2) - rat(1, 2 * n as i64 + 2)).with_limit(rat(1, 2)),
        ];
        let rep = check_add_compatibility(&Tropical, &t_inc, &[], BUDGET).unwrap();
        assert_eq!(rep.status("sup_one_plus"), Some(Status::Pass), "{rep}");
        assert_eq!(rep.status("sup_of_sum"), Some(Status::Pass), "{rep}");
    }

    #[test]
    fn inversion_examples() {
        let r = inversion_antimonotone_check(&QPlus, &[(rat(1, 2), rat(2, 1)), (rat(3, 1), rat(3, 1))]);
        assert!(r.passed());
        let r = inversion_antimonotone_check(&Pairs, &[(Pair::ints(1, 1), Pair::ints(2, 2))]);
        assert_eq!(r.status("inverse_reverses_order"), Some(Status::Pass));
    }

    #[test]
    fn geometric_decisions() {
        let d = geometric_order_decide(&QPlus, &rat(1, 2), BUDGET).unwrap();
        assert_eq!(d.decision, OrderDecision::LeqOne);
        assert_eq!(
            geometric_order_decide(&QPlus, &rat(1, 1), BUDGET).unwrap().decision,
            OrderDecision::EqualOne
        );
        assert_eq!(
            geometric_order_decide(&QPlus, &rat(2, 1), BUDGET).unwrap().decision,
            OrderDecision::GeqOne
        );
    }

    #[test]
    fn archimedean_examples() {
        assert_eq!(archimedean_witness(&QPlus, &rat(2, 1), &rat(1000, 1), BUDGET), Ok(10));
        assert_eq!(archimedean_witness(&QPlus, &rat(2, 1), &rat(1, 1), BUDGET), Ok(1));
        assert_eq!(archimedean_witness(&Tropical, &rat(2, 1), &rat(8, 1), BUDGET), Ok(4));
        assert_eq!(
            archimedean_witness(&QPlus, &rat(2, 1), &rat(1 << 40, 1), 10),
            Err(Error::NoWitnessWithinBudget { budget: 10 })
        );
    }

    #[test]
    fn inf_sum_geom_examples() {
        let r = RPlusApprox::default();
        let rep = inf_sum_geom_check(&r, &r.real(&rat(3, 1)), &r.real(&rat(1, 2)), BUDGET).unwrap();
        assert!(
            rep.passed() && rep.status("infimum_is_a") == Some(Status::Pass),
            "{rep}"
        );
        let rep = inf_sum_geom_check(&QPlus, &rat(1, 1), &rat(2, 3), BUDGET).unwrap();
        assert_eq!(rep.status("infimum_is_a"), Some(Status::Pass));
        let rep = inf_sum_geom_check(&QPlus, &rat(1, 1), &rat(0, 1), BUDGET).unwrap();
        assert_eq!(rep.status("infimum_is_a"), Some(Status::Pass));
    }

    #[test]
    fn pair_suite_reproduces_counterexamples() {
        let r = pair_counterexample_suite(0);
        assert!(r.passed(), "{r}");
        assert_eq!(r.checks.len(), 3);
    }

    #[test]
    fn evaluate_examples() {
        let v = evaluate_to_real(&QPlus, &rat(3, 2), 40).unwrap();
        assert_eq!(v.to_rational(), rat(3, 2));
        let p = PosScalar::from_vector(rmat(&[&[(3, 5)], &[(4, 5)]])).unwrap();
        assert_eq!(evaluate_to_real(&PosScalars, &p, 40).unwrap().to_rational(), rat(1, 1));
        let r = RPlusApprox::default();
        let root2 = crate::scalars::sqrt_pos(&rat(2, 1), 96).unwrap();
        let v = evaluate_to_real(&r, &root2, 40).unwrap();
        assert!(v.close_to(&root2, &rat(1, 1 << 40)));
        assert_eq!(
            evaluate_to_real(&Tropical, &rat(2, 1), 40),
            Err(Error::DegenerateEmbedding)
        );
        assert_eq!(
            evaluate_to_real(&Pairs, &Pair::ints(2, 1), 40),
            Err(Error::IncomparableEncountered)
        );
    }
}
