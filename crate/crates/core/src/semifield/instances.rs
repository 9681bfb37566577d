use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Direction, Semifield};
use crate::error::{Error, Result};
use crate::scalars::rational::{pow2_neg, rat};
use crate::scalars::{BigReal, Rational};

fn sample_rational(rng: &mut ChaCha8Rng) -> Rational {
    if rng.gen_ratio(1, 10) {
        return Rational::zero();
    }
    let scale: i64 = [1, 1, 1, 16, 256][rng.gen_range(0..5)];
    rat(rng.gen_range(1..=40), rng.gen_range(1..=12) * scale)
}

fn power_limit(q: &Rational) -> Option<Rational> {
    match q.cmp(&Rational::one()) {
        Ordering::Less => Some(Rational::zero()),
        Ordering::Equal => Some(Rational::one()),
        Ordering::Greater => None,
    }
}

/// The non-negative rationals with the usual operations.
#[derive(Clone, Copy, Debug, Default)]
pub struct QPlus;

impl Semifield for QPlus {
    type Elem = Rational;

    fn name(&self) -> String {
        "qplus".into()
    }
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn inv(&self, a: &Rational) -> Result<Rational> {
        if a.is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(a.recip())
    }
    fn compare(&self, a: &Rational, b: &Rational) -> Option<Ordering> {
        Some(a.cmp(b))
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> Rational {
        sample_rational(rng)
    }
    fn embed_rational(&self, q: &Rational) -> Rational {
        q.clone()
    }
    fn geometric_limit(&self, u: &Rational) -> Option<Rational> {
        power_limit(u)
    }
}

/// The max-times semifield on non-negative rationals: `a + b = max(a, b)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Tropical;

impl Semifield for Tropical {
    type Elem = Rational;

    fn name(&self) -> String {
        "tropical".into()
    }
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a.max(b).clone()
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn inv(&self, a: &Rational) -> Result<Rational> {
        QPlus.inv(a)
    }
    fn compare(&self, a: &Rational, b: &Rational) -> Option<Ordering> {
        Some(a.cmp(b))
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> Rational {
        sample_rational(rng)
    }
    fn geometric_limit(&self, u: &Rational) -> Option<Rational> {
        power_limit(u)
    }
    fn special_elements(&self) -> Vec<Rational> {
        [(0, 1), (1, 1), (1, 2), (2, 1), (3, 1), (7, 1)]
            .iter()
            .map(|&(n, d)| rat(n, d))
            .collect()
    }
}

/// Non-negative reals as [`BigReal`]s at a fixed precision. Equality and
/// order are taken up to a relative tolerance of `2^-(precision - 20)`.
#[derive(Clone, Copy, Debug)]
pub struct RPlusApprox {
    pub precision: u32,
}

impl Default for RPlusApprox {
    fn default() -> Self {
        Self { precision: 96 }
    }
}

impl RPlusApprox {
    pub fn new(precision: u32) -> Self {
        Self {
            precision: precision.max(24),
        }
    }

    pub fn tolerance(&self) -> Rational {
        pow2_neg(self.precision - 20)
    }

    pub fn real(&self, q: &Rational) -> BigReal {
        BigReal::from_rational(q, self.precision)
    }
}

impl Semifield for RPlusApprox {
    type Elem = BigReal;

    fn name(&self) -> String {
        "rplus".into()
    }
    fn zero(&self) -> BigReal {
        BigReal::zero(self.precision)
    }
    fn one(&self) -> BigReal {
        BigReal::one(self.precision)
    }
    fn add(&self, a: &BigReal, b: &BigReal) -> BigReal {
        a + b
    }
    fn mul(&self, a: &BigReal, b: &BigReal) -> BigReal {
        a * b
    }
    fn inv(&self, a: &BigReal) -> Result<BigReal> {
        if a.is_zero() {
            return Err(Error::NotInvertible);
        }
        a.recip()
    }
    fn compare(&self, a: &BigReal, b: &BigReal) -> Option<Ordering> {
        let (qa, qb) = (a.to_rational(), b.to_rational());
        let scale = qa.abs().max(qb.abs()).max(Rational::one());
        if (&qa - &qb).abs() <= self.tolerance() * scale {
            Some(Ordering::Equal)
        } else {
            Some(qa.cmp(&qb))
        }
    }
    fn is_exact(&self) -> bool {
        false
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> BigReal {
        self.real(&sample_rational(rng))
    }
    fn embed_rational(&self, q: &Rational) -> BigReal {
        self.real(q)
    }
    fn geometric_limit(&self, u: &BigReal) -> Option<BigReal> {
        match self.compare(u, &self.one())? {
            Ordering::Less => Some(self.zero()),
            Ordering::Equal => Some(self.one()),
            Ordering::Greater => None,
        }
    }
    fn cauchy_limit(&self, terms: &[BigReal]) -> Option<BigReal> {
        match terms {
            [.., a, b] if self.equal(a, b) => Some(b.clone()),
            [only] => Some(only.clone()),
            _ => None,
        }
    }
}

/// An element of the pair semifield: both coordinates positive, or both zero.
/// Elements built by [`Pair::ambient`] may leave the semifield; they are used
/// only as closed-form limits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pair {
    #[serde(with = "crate::scalars::rational::as_string")]
    pub x: Rational,
    #[serde(with = "crate::scalars::rational::as_string")]
    pub y: Rational,
}

impl Pair {
    pub fn new(x: Rational, y: Rational) -> Result<Self> {
        let p = Self { x, y };
        if !p.is_valid() {
            return Err(Error::InvalidElement(format!(
                "({}, {}) is not in the pair semifield",
                p.x, p.y
            )));
        }
        Ok(p)
    }

    /// Any point of the closed quadrant, e.g. a coordinatewise limit.
    pub fn ambient(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Self::ambient(rat(x, 1), rat(y, 1))
    }

    pub fn is_valid(&self) -> bool {
        (self.x.is_positive() && self.y.is_positive()) || (self.x.is_zero() && self.y.is_zero())
    }
}

impl std::fmt::Display for Pair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Pairs with coordinatewise operations and the product order.
#[derive(Clone, Copy, Debug, Default)]
pub struct Pairs;

impl Semifield for Pairs {
    type Elem = Pair;

    fn name(&self) -> String {
        "pairs".into()
    }
    fn zero(&self) -> Pair {
        Pair::ints(0, 0)
    }
    fn one(&self) -> Pair {
        Pair::ints(1, 1)
    }
    fn add(&self, a: &Pair, b: &Pair) -> Pair {
        Pair::ambient(&a.x + &b.x, &a.y + &b.y)
    }
    fn mul(&self, a: &Pair, b: &Pair) -> Pair {
        Pair::ambient(&a.x * &b.x, &a.y * &b.y)
    }
    fn inv(&self, a: &Pair) -> Result<Pair> {
        if a.x.is_zero() || a.y.is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(Pair::ambient(a.x.recip(), a.y.recip()))
    }
    fn compare(&self, a: &Pair, b: &Pair) -> Option<Ordering> {
        match (a.x.cmp(&b.x), a.y.cmp(&b.y)) {
            (p, q) if p == q => Some(p),
            (Ordering::Equal, q) => Some(q),
            (p, Ordering::Equal) => Some(p),
            _ => None,
        }
    }
    fn equal(&self, a: &Pair, b: &Pair) -> bool {
        a == b
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> Pair {
        let x = sample_rational(rng);
        if x.is_zero() {
            return self.zero();
        }
        let mut y = sample_rational(rng);
        while y.is_zero() {
            y = sample_rational(rng);
        }
        Pair::ambient(x, y)
    }
    fn embed_rational(&self, q: &Rational) -> Pair {
        Pair::ambient(q.clone(), q.clone())
    }
    fn geometric_limit(&self, u: &Pair) -> Option<Pair> {
        Some(Pair::ambient(power_limit(&u.x)?, power_limit(&u.y)?))
    }
    /// An infimum with a zero coordinate collapses to `(0, 0)`: the only lower
    /// bound of `(x, 0)` inside the semifield is zero.
    fn project_limit(&self, l: Pair, direction: Direction) -> Pair {
        if direction == Direction::Decreasing && (l.x.is_zero() || l.y.is_zero()) {
            self.zero()
        } else {
            l
        }
    }
    fn special_elements(&self) -> Vec<Pair> {
        let mut v: Vec<Pair> = [(0, 1), (1, 1), (1, 2), (2, 1), (3, 1), (7, 1)]
            .iter()
            .map(|&(n, d)| self.embed_rational(&rat(n, d)))
            .collect();
        v.extend([Pair::ints(2, 1), Pair::ints(1, 2), Pair::ints(1, 3)]);
        v
    }
}

/// A deliberately broken law, for negative controls of the axiom checker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SemifieldMutation {
    AddNotCommutative,
    AddNotAssociative,
    AddIdentity,
    MulNotCommutative,
    MulNotAssociative,
    MulIdentity,
    NotDistributive,
    ZeroNotAbsorbing,
    BadInverse,
    NotStrict,
    NotReflexive,
    NotAntisymmetric,
    NotTransitive,
    AddNotMonotone,
    MulNotMonotone,
    OneBelowZero,
}

impl SemifieldMutation {
    pub const ALL: [Self; 16] = [
        Self::AddNotCommutative,
        Self::AddNotAssociative,
        Self::AddIdentity,
        Self::MulNotCommutative,
        Self::MulNotAssociative,
        Self::MulIdentity,
        Self::NotDistributive,
        Self::ZeroNotAbsorbing,
        Self::BadInverse,
        Self::NotStrict,
        Self::NotReflexive,
        Self::NotAntisymmetric,
        Self::NotTransitive,
        Self::AddNotMonotone,
        Self::MulNotMonotone,
        Self::OneBelowZero,
    ];

    /// The axiom this mutation is designed to break.
    pub fn target(self) -> &'static str {
        match self {
            Self::AddNotCommutative => "add_commutative",
            Self::AddNotAssociative => "add_associative",
            Self::AddIdentity => "add_identity",
            Self::MulNotCommutative => "mul_commutative",
            Self::MulNotAssociative => "mul_associative",
            Self::MulIdentity => "mul_identity",
            Self::NotDistributive => "distributive",
            Self::ZeroNotAbsorbing => "zero_absorbing",
            Self::BadInverse => "mul_inverse",
            Self::NotStrict => "strict",
            Self::NotReflexive => "order_reflexive",
            Self::NotAntisymmetric => "order_antisymmetric",
            Self::NotTransitive => "order_transitive",
            Self::AddNotMonotone => "add_monotone",
            Self::MulNotMonotone => "mul_monotone",
            Self::OneBelowZero => "one_geq_zero",
        }
    }
}

/// An instance with one law broken on purpose.
#[derive(Clone, Debug)]
pub struct Mutated<S> {
    pub inner: S,
    pub mutation: SemifieldMutation,
}

impl<S: Semifield> Mutated<S> {
    pub fn new(inner: S, mutation: SemifieldMutation) -> Self {
        Self { inner, mutation }
    }

    fn inv_or_zero(&self, a: &S::Elem) -> S::Elem {
        self.inner.inv(a).unwrap_or_else(|_| self.inner.zero())
    }

    fn base_leq(&self, a: &S::Elem, b: &S::Elem) -> bool {
        self.inner.leq(a, b)
    }

    fn mutated_leq(&self, a: &S::Elem, b: &S::Elem) -> bool {
        let s = &self.inner;
        let two_a_plus_one = s.add(&s.add(a, a), &s.one());
        self.base_leq(a, b) && self.base_leq(b, &two_a_plus_one)
    }
}

impl<S: Semifield> Semifield for Mutated<S> {
    type Elem = S::Elem;

    fn name(&self) -> String {
        format!("{}[{:?}]", self.inner.name(), self.mutation)
    }
    fn zero(&self) -> S::Elem {
        self.inner.zero()
    }
    fn one(&self) -> S::Elem {
        self.inner.one()
    }
    fn add(&self, a: &S::Elem, b: &S::Elem) -> S::Elem {
        use SemifieldMutation::*;
        let s = &self.inner;
        match self.mutation {
            AddNotCommutative => s.add(&s.add(a, b), b),
            AddNotAssociative => {
                let t = s.add(a, b);
                s.mul(&t, &t)
            }
            AddIdentity => s.add(&s.add(a, b), &s.one()),
            NotDistributive => s.add(&s.add(a, b), &s.mul(a, b)),
            NotStrict if s.equal(a, &s.one()) && s.equal(b, &s.one()) => s.zero(),
            AddNotMonotone => s.add(&self.inv_or_zero(a), &self.inv_or_zero(b)),
            _ => s.add(a, b),
        }
    }
    fn mul(&self, a: &S::Elem, b: &S::Elem) -> S::Elem {
        use SemifieldMutation::*;
        let s = &self.inner;
        match self.mutation {
            MulNotCommutative => s.mul(&s.mul(a, b), b),
            MulNotAssociative => {
                let t = s.mul(a, b);
                s.mul(&t, &t)
            }
            MulIdentity => s.mul(&s.mul(a, b), &s.mul(b, a)),
            ZeroNotAbsorbing if s.is_zero(a) || s.is_zero(b) => s.add(a, b),
            MulNotMonotone => self.inv_or_zero(&s.mul(a, b)),
            _ => s.mul(a, b),
        }
    }
    fn inv(&self, a: &S::Elem) -> Result<S::Elem> {
        match self.mutation {
            SemifieldMutation::BadInverse => Ok(a.clone()),
            _ => self.inner.inv(a),
        }
    }
    fn compare(&self, a: &S::Elem, b: &S::Elem) -> Option<Ordering> {
        use SemifieldMutation::*;
        match self.mutation {
            NotReflexive => match self.inner.compare(a, b) {
                Some(Ordering::Equal) => None,
                o => o,
            },
            NotAntisymmetric => Some(Ordering::Equal),
            NotTransitive => match (self.mutated_leq(a, b), self.mutated_leq(b, a)) {
                (true, true) => Some(Ordering::Equal),
                (true, false) => Some(Ordering::Less),
                (false, true) => Some(Ordering::Greater),
                (false, false) => None,
            },
            OneBelowZero => self.inner.compare(a, b).map(Ordering::reverse),
            _ => self.inner.compare(a, b),
        }
    }
    fn equal(&self, a: &S::Elem, b: &S::Elem) -> bool {
        self.inner.equal(a, b)
    }
    fn is_exact(&self) -> bool {
        self.inner.is_exact()
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> S::Elem {
        self.inner.sample(rng)
    }
    fn special_elements(&self) -> Vec<S::Elem> {
        self.inner.special_elements()
    }
}
