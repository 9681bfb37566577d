//! Partially ordered strict semifields, their instances, and the
//! order-theoretic checks on suprema and infima of monotone sequences.

pub mod checks;
pub mod instances;
pub mod posscalar;

use std::cmp::Ordering;
use std::fmt::Debug;
use std::sync::Arc;

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalars::Rational;

pub use checks::*;
pub use instances::{Mutated, Pair, Pairs, QPlus, RPlusApprox, SemifieldMutation, Tropical};
pub use posscalar::{dominates, four_squares, Dominance, PosScalar, PosScalars};

/// A partially ordered strict semifield.
pub trait Semifield: Clone + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Send + Sync + 'static;

    fn name(&self) -> String;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `NotInvertible` for zero.
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    /// `None` means incomparable.
    fn compare(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Ordering>;
    /// Whether the arithmetic is exact; approximate instances compare within a tolerance.
    fn is_exact(&self) -> bool;
    fn sample(&self, rng: &mut ChaCha8Rng) -> Self::Elem;

    /// Element equality; defaults to the order's notion of equal.
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.compare(a, b) == Some(Ordering::Equal)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.equal(a, &self.zero())
    }

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        matches!(self.compare(a, b), Some(Ordering::Less | Ordering::Equal))
    }

    fn lt(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.compare(a, b) == Some(Ordering::Less)
    }

    /// `(p/q)·1` for a non-negative rational, built from `1` by double-and-add and one inversion.
    fn embed_rational(&self, q: &Rational) -> Self::Elem {
        let num = self.nat(q.numer().magnitude());
        let den = self.nat(q.denom().magnitude());
        self.mul(&num, &self.inv(&den).expect("denominators are nonzero"))
    }

    /// `n·1` by double-and-add.
    fn nat(&self, n: &num_bigint::BigUint) -> Self::Elem {
        let mut acc = self.zero();
        for i in (0..n.bits()).rev() {
            acc = self.add(&acc, &acc);
            if n.bit(i) {
                acc = self.add(&acc, &self.one());
            }
        }
        acc
    }

    fn pow(&self, a: &Self::Elem, n: u64) -> Self::Elem {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Limit of `uⁿ` in the ambient structure the instance lives in, when known.
    fn geometric_limit(&self, _u: &Self::Elem) -> Option<Self::Elem> {
        None
    }

    /// Maps a limit computed in the ambient structure (e.g. ℝ² for the pair
    /// semifield) to the extremum inside the semifield.
    fn project_limit(&self, limit: Self::Elem, _direction: Direction) -> Self::Elem {
        limit
    }

    /// Limit detection from computed terms, for approximate instances.
    fn cauchy_limit(&self, _terms: &[Self::Elem]) -> Option<Self::Elem> {
        None
    }

    /// A few fixed elements always included in sampled checks.
    fn special_elements(&self) -> Vec<Self::Elem> {
        [(0, 1), (1, 1), (1, 2), (2, 1), (3, 1), (7, 1)]
            .iter()
            .map(|&(n, d)| self.embed_rational(&crate::scalars::rational::rat(n, d)))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Self::Increasing => Self::Decreasing,
            Self::Decreasing => Self::Increasing,
        }
    }
}

type Generator<E> = Arc<dyn Fn(u64) -> E + Send + Sync>;

/// A sequence `s₁, s₂, …` given by a pure generator, with an optional index
/// from which it is constant and an optional closed-form limit.
#[derive(Clone)]
pub struct Sequence<E> {
    generator: Generator<E>,
    pub direction: Direction,
    pub stabilisation: Option<u64>,
    pub limit: Option<E>,
}

impl<E: Clone + Send + Sync + 'static> Sequence<E> {
    pub fn new(direction: Direction, f: impl Fn(u64) -> E + Send + Sync + 'static) -> Self {
        Self {
            generator: Arc::new(f),
            direction,
            stabilisation: None,
            limit: None,
        }
    }

    pub fn constant(value: E) -> Self {
        let v = value.clone();
        Self {
            generator: Arc::new(move |_| v.clone()),
            direction: Direction::Decreasing,
            stabilisation: Some(1),
            limit: Some(value),
        }
    }

    /// Explicit terms; the sequence is constant after the last one.
    pub fn from_terms(direction: Direction, terms: Vec<E>) -> Self {
        assert!(!terms.is_empty(), "at least one term");
        let n = terms.len() as u64;
        let last = terms[terms.len() - 1].clone();
        let terms = Arc::new(terms);
        Self {
            generator: Arc::new(move |i| terms[(i.clamp(1, n) - 1) as usize].clone()),
            direction,
            stabilisation: Some(n),
            limit: Some(last),
        }
    }

    pub fn with_limit(mut self, limit: E) -> Self {
        self.limit = Some(limit);
        self
    }

    pub fn with_stabilisation(mut self, index: u64) -> Self {
        self.stabilisation = Some(index);
        self
    }

    /// The term `sₙ`, indexed from 1.
    pub fn term(&self, n: u64) -> E {
        (self.generator)(n)
    }

    /// Applies `f` termwise and to the limit.
    pub fn map(&self, direction: Direction, f: impl Fn(&E) -> Option<E> + Send + Sync + 'static) -> Self {
        let g = self.generator.clone();
        let f = Arc::new(f);
        let limit = self.limit.as_ref().and_then(|l| f(l));
        let ff = f.clone();
        Self {
            generator: Arc::new(move |n| ff(&g(n)).expect("termwise map is total on terms")),
            direction,
            stabilisation: self.stabilisation,
            limit,
        }
    }

    /// Combines two sequences termwise; the limit is `f` of the limits.
    pub fn zip_with(
        &self,
        other: &Self,
        direction: Direction,
        f: impl Fn(&E, &E) -> E + Send + Sync + 'static,
    ) -> Self {
        let (g, h) = (self.generator.clone(), other.generator.clone());
        let f = Arc::new(f);
        let limit = match (&self.limit, &other.limit) {
            (Some(a), Some(b)) => Some(f(a, b)),
            _ => None,
        };
        let ff = f.clone();
        Self {
            generator: Arc::new(move |n| ff(&g(n), &h(n))),
            direction,
            stabilisation: self.stabilisation.zip(other.stabilisation).map(|(a, b)| a.max(b)),
            limit,
        }
    }
}

impl<E: Debug> Debug for Sequence<E> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Sequence")
            .field("direction", &self.direction)
            .field("stabilisation", &self.stabilisation)
            .field("limit", &self.limit)
            .finish_non_exhaustive()
    }
}

/// Checks monotonicity of `s₁ … s_budget` in the stated direction.
pub fn check_monotone<S: Semifield>(s: &S, seq: &Sequence<S::Elem>, budget: u64) -> Result<Vec<S::Elem>> {
    let terms: Vec<S::Elem> = (1..=budget.max(1)).map(|n| seq.term(n)).collect();
    for (i, w) in terms.windows(2).enumerate() {
        let ok = match seq.direction {
            Direction::Increasing => s.leq(&w[0], &w[1]),
            Direction::Decreasing => s.leq(&w[1], &w[0]),
        };
        if !ok {
            return Err(Error::NotMonotone { index: i as u64 + 1 });
        }
    }
    Ok(terms)
}

fn extremum<S: Semifield>(s: &S, seq: &Sequence<S::Elem>, budget: u64) -> Result<S::Elem> {
    let terms = check_monotone(s, seq, budget)?;
    if let Some(k) = seq.stabilisation.filter(|&k| k <= budget) {
        return Ok(terms[(k.max(1) - 1) as usize].clone());
    }
    if let Some(l) = &seq.limit {
        for (i, t) in terms.iter().enumerate() {
            let bounds = match seq.direction {
                Direction::Increasing => s.leq(t, l),
                Direction::Decreasing => s.leq(l, t),
            };
            if !bounds {
                return Err(Error::InvalidElement(format!(
                    "closed-form limit {l:?} does not bound term {}",
                    i + 1
                )));
            }
        }
        return Ok(s.project_limit(l.clone(), seq.direction));
    }
    s.cauchy_limit(&terms).ok_or(Error::NoLimitWithinBudget { budget })
}

/// Infimum of a decreasing sequence.
pub fn inf_decreasing<S: Semifield>(s: &S, seq: &Sequence<S::Elem>, budget: u64) -> Result<S::Elem> {
    if seq.direction != Direction::Decreasing {
        return Err(Error::NotMonotone { index: 0 });
    }
    extremum(s, seq, budget)
}

/// Supremum of an increasing sequence, checked against `bound` when given.
pub fn sup_increasing<S: Semifield>(
    s: &S,
    seq: &Sequence<S::Elem>,
    bound: Option<&S::Elem>,
    budget: u64,
) -> Result<S::Elem> {
    if seq.direction != Direction::Increasing {
        return Err(Error::NotMonotone { index: 0 });
    }
    if let Some(b) = bound {
        for n in 1..=budget.max(1) {
            if !s.leq(&seq.term(n), b) {
                return Err(Error::NotBounded { index: n });
            }
        }
    }
    extremum(s, seq, budget)
}

/// Infimum or supremum according to the sequence's direction.
pub fn limit_of<S: Semifield>(s: &S, seq: &Sequence<S::Elem>, budget: u64) -> Result<S::Elem> {
    match seq.direction {
        Direction::Decreasing => inf_decreasing(s, seq, budget),
        Direction::Increasing => sup_increasing(s, seq, None, budget),
    }
}
