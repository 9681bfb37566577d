//! Recovering an ordered field from a positive cone.
//!
//! Given an involutive field and a cone `P` of self-adjoint elements with an
//! isomorphism `φ: P → ℝ₊`, [`Psi`] extends `φ` to all self-adjoint elements
//! by `4ψ(a) = φ((a + 2)²) − φ(a² + 4)`. The identities behind additivity and
//! multiplicativity are checked exactly by [`poly_identity_check`].

use std::fmt::Debug;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::{Check, Report, Status};
use crate::scalars::rational::{pow2_neg, rat, sqrt_exact};
use crate::scalars::{BigReal, ComplexReal, GaussianRational, Rational};
use crate::semifield::{evaluate_to_real, QPlus};

/// A field with an involution `a ↦ a†` that is a ring automorphism of order ≤ 2.
pub trait InvolutiveField: Clone + Send + Sync {
    type Elem: Clone + Debug + Send + Sync;

    fn name(&self) -> String;
    #[allow(clippy::wrong_self_convention)]
    fn from_rational(&self, q: &Rational) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn star(&self, a: &Self::Elem) -> Self::Elem;
    /// `|a − b| ≤ tol · max(1, |a|, |b|)` in the field's natural size.
    fn close(&self, a: &Self::Elem, b: &Self::Elem, tol: &Rational) -> bool;
    fn is_exact(&self) -> bool;
    /// Tolerance used by [`InvolutiveField::equal`]; zero for exact models.
    fn tolerance(&self) -> Rational;
    fn sample(&self, rng: &mut ChaCha8Rng) -> Self::Elem;

    /// Exact square root of a positive element, when the model can represent it.
    fn sqrt_exact(&self, _a: &Self::Elem) -> Option<Self::Elem> {
        None
    }

    fn zero(&self) -> Self::Elem {
        self.from_rational(&Rational::zero())
    }

    fn one(&self) -> Self::Elem {
        self.from_rational(&Rational::one())
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), a)
    }

    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.close(a, b, &self.tolerance())
    }

    fn is_self_adjoint(&self, a: &Self::Elem) -> bool {
        self.equal(a, &self.star(a))
    }

    fn sample_self_adjoint(&self, rng: &mut ChaCha8Rng) -> Self::Elem {
        let a = self.sample(rng);
        let s = self.add(&a, &self.star(&a));
        self.mul(&s, &self.from_rational(&rat(1, 2)))
    }
}

fn sample_rational(rng: &mut ChaCha8Rng, range: i64) -> Rational {
    let d = rng.gen_range(1..=16);
    rat(rng.gen_range(-range * d..=range * d), d)
}

/// ℚ(i) with complex conjugation; exact.
#[derive(Clone, Copy, Debug, Default)]
pub struct GaussianField;

impl InvolutiveField for GaussianField {
    type Elem = GaussianRational;

    fn name(&self) -> String {
        "Q(i)".into()
    }
    fn from_rational(&self, q: &Rational) -> GaussianRational {
        GaussianRational::real(q.clone())
    }
    fn add(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        a + b
    }
    fn sub(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        a - b
    }
    fn mul(&self, a: &GaussianRational, b: &GaussianRational) -> GaussianRational {
        a * b
    }
    fn inv(&self, a: &GaussianRational) -> Result<GaussianRational> {
        a.inv().map_err(|_| Error::NotInvertible)
    }
    fn star(&self, a: &GaussianRational) -> GaussianRational {
        a.conj()
    }
    fn close(&self, a: &GaussianRational, b: &GaussianRational, tol: &Rational) -> bool {
        let scale = a.abs_bound().max(b.abs_bound()).max(Rational::one());
        (a - b).abs_bound() <= tol * scale
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn tolerance(&self) -> Rational {
        Rational::zero()
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> GaussianRational {
        GaussianRational::new(sample_rational(rng, 20), sample_rational(rng, 20))
    }
    fn sqrt_exact(&self, a: &GaussianRational) -> Option<GaussianRational> {
        if !a.is_real() {
            return None;
        }
        sqrt_exact(&a.re).map(GaussianRational::real)
    }
}

/// ℂ with [`BigReal`] parts at a fixed precision; equality within `2^-(p−16)`, relative.
#[derive(Clone, Copy, Debug)]
pub struct ComplexApprox {
    pub precision: u32,
}

impl ComplexApprox {
    pub fn new(precision: u32) -> Self {
        Self {
            precision: precision.max(24),
        }
    }

    pub fn from_gaussian(&self, g: &GaussianRational) -> ComplexReal {
        ComplexReal::from_gaussian(g, self.precision)
    }
}

impl InvolutiveField for ComplexApprox {
    type Elem = ComplexReal;

    fn name(&self) -> String {
        format!("C~{}", self.precision)
    }
    fn from_rational(&self, q: &Rational) -> ComplexReal {
        ComplexReal::from_real(BigReal::from_rational(q, self.precision))
    }
    fn add(&self, a: &ComplexReal, b: &ComplexReal) -> ComplexReal {
        a + b
    }
    fn sub(&self, a: &ComplexReal, b: &ComplexReal) -> ComplexReal {
        a - b
    }
    fn mul(&self, a: &ComplexReal, b: &ComplexReal) -> ComplexReal {
        a * b
    }
    fn inv(&self, a: &ComplexReal) -> Result<ComplexReal> {
        if self.equal(a, &self.zero()) {
            return Err(Error::NotInvertible);
        }
        a.inv()
    }
    fn star(&self, a: &ComplexReal) -> ComplexReal {
        a.conj()
    }
    fn close(&self, a: &ComplexReal, b: &ComplexReal, tol: &Rational) -> bool {
        let scale = a.max_abs_component().max(b.max_abs_component()).max(Rational::one());
        (a - b).max_abs_component() <= tol * scale
    }
    fn is_exact(&self) -> bool {
        false
    }
    fn tolerance(&self) -> Rational {
        pow2_neg(self.precision - 16)
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> ComplexReal {
        self.from_gaussian(&GaussianField.sample(rng))
    }
}

/// ℝ with the identity involution; every element is self-adjoint.
#[derive(Clone, Copy, Debug)]
pub struct RealApprox {
    pub precision: u32,
}

impl RealApprox {
    pub fn new(precision: u32) -> Self {
        Self {
            precision: precision.max(24),
        }
    }
}

impl InvolutiveField for RealApprox {
    type Elem = BigReal;

    fn name(&self) -> String {
        format!("R~{}", self.precision)
    }
    fn from_rational(&self, q: &Rational) -> BigReal {
        BigReal::from_rational(q, self.precision)
    }
    fn add(&self, a: &BigReal, b: &BigReal) -> BigReal {
        a + b
    }
    fn sub(&self, a: &BigReal, b: &BigReal) -> BigReal {
        a - b
    }
    fn mul(&self, a: &BigReal, b: &BigReal) -> BigReal {
        a * b
    }
    fn inv(&self, a: &BigReal) -> Result<BigReal> {
        if self.equal(a, &self.zero()) {
            return Err(Error::NotInvertible);
        }
        a.recip()
    }
    fn star(&self, a: &BigReal) -> BigReal {
        a.clone()
    }
    fn close(&self, a: &BigReal, b: &BigReal, tol: &Rational) -> bool {
        let scale = a.abs().to_rational().max(b.abs().to_rational()).max(Rational::one());
        (a - b).abs().to_rational() <= tol * scale
    }
    fn is_exact(&self) -> bool {
        false
    }
    fn tolerance(&self) -> Rational {
        pow2_neg(self.precision - 16)
    }
    fn sample(&self, rng: &mut ChaCha8Rng) -> BigReal {
        self.from_rational(&sample_rational(rng, 20))
    }
}

/// Membership in a positive cone together with the order isomorphism `φ: P → ℝ₊`.
pub trait PositiveCone<F: InvolutiveField> {
    fn contains(&self, field: &F, a: &F::Elem) -> bool;
    /// `φ(a)` for `a ∈ P`; `ConeViolation` otherwise.
    fn phi(&self, field: &F, a: &F::Elem) -> Result<BigReal>;
    /// `φ⁻¹(r)` for `r ≥ 0`, when the oracle provides it.
    fn phi_inv(&self, _field: &F, _r: &BigReal) -> Option<F::Elem> {
        None
    }
    fn precision(&self) -> u32;
}

fn violation<E: Debug>(a: &E) -> Error {
    Error::ConeViolation(format!("{a:?}"))
}

/// The non-negative reals inside each model, with `φ` the real part.
#[derive(Clone, Copy, Debug)]
pub struct StandardCone {
    pub precision: u32,
}

impl StandardCone {
    pub fn new(precision: u32) -> Self {
        Self { precision }
    }
}

impl PositiveCone<GaussianField> for StandardCone {
    fn contains(&self, _: &GaussianField, a: &GaussianRational) -> bool {
        a.is_real() && !a.re.is_negative()
    }
    fn phi(&self, f: &GaussianField, a: &GaussianRational) -> Result<BigReal> {
        if !self.contains(f, a) {
            return Err(violation(a));
        }
        Ok(BigReal::from_rational(&a.re, self.precision))
    }
    fn phi_inv(&self, _: &GaussianField, r: &BigReal) -> Option<GaussianRational> {
        (!r.is_negative()).then(|| GaussianRational::real(r.to_rational()))
    }
    fn precision(&self) -> u32 {
        self.precision
    }
}

impl PositiveCone<ComplexApprox> for StandardCone {
    fn contains(&self, f: &ComplexApprox, a: &ComplexReal) -> bool {
        let tol = f.tolerance();
        a.im.abs().to_rational() <= tol && a.re.to_rational() >= -tol
    }
    fn phi(&self, f: &ComplexApprox, a: &ComplexReal) -> Result<BigReal> {
        if !self.contains(f, a) {
            return Err(violation(a));
        }
        Ok(a.re.with_precision(self.precision))
    }
    fn phi_inv(&self, f: &ComplexApprox, r: &BigReal) -> Option<ComplexReal> {
        (!r.is_negative()).then(|| ComplexReal::from_real(r.with_precision(f.precision)))
    }
    fn precision(&self) -> u32 {
        self.precision
    }
}

impl PositiveCone<RealApprox> for StandardCone {
    fn contains(&self, f: &RealApprox, a: &BigReal) -> bool {
        a.to_rational() >= -f.tolerance()
    }
    fn phi(&self, f: &RealApprox, a: &BigReal) -> Result<BigReal> {
        if !self.contains(f, a) {
            return Err(violation(a));
        }
        Ok(a.with_precision(self.precision))
    }
    fn phi_inv(&self, f: &RealApprox, r: &BigReal) -> Option<BigReal> {
        (!r.is_negative()).then(|| r.with_precision(f.precision))
    }
    fn precision(&self) -> u32 {
        self.precision
    }
}

/// The cone of ℚ(i) read through the semifield ℚ₊: `φ` is the bisection
/// embedding of a positive rational into the reals.
#[derive(Clone, Copy, Debug)]
pub struct SemifieldCone {
    pub precision: u32,
}

impl PositiveCone<GaussianField> for SemifieldCone {
    fn contains(&self, f: &GaussianField, a: &GaussianRational) -> bool {
        StandardCone::new(self.precision).contains(f, a)
    }
    fn phi(&self, f: &GaussianField, a: &GaussianRational) -> Result<BigReal> {
        if !self.contains(f, a) {
            return Err(violation(a));
        }
        evaluate_to_real(&QPlus, &a.re, self.precision)
    }
    fn phi_inv(&self, f: &GaussianField, r: &BigReal) -> Option<GaussianRational> {
        StandardCone::new(self.precision).phi_inv(f, r)
    }
    fn precision(&self) -> u32 {
        self.precision
    }
}

/// The extension `ψ` of `φ` to self-adjoint elements, and its inverse `υ`.
pub struct Psi<'a, F: InvolutiveField, C: PositiveCone<F>> {
    pub field: &'a F,
    pub cone: &'a C,
}

impl<'a, F: InvolutiveField, C: PositiveCone<F>> Psi<'a, F, C> {
    pub fn new(field: &'a F, cone: &'a C) -> Self {
        Self { field, cone }
    }

    /// `ψ(a) = (φ((a + 2)²) − φ(a² + 4)) / 4`.
    pub fn psi(&self, a: &F::Elem) -> Result<BigReal> {
        let f = self.field;
        if !f.is_self_adjoint(a) {
            return Err(Error::InvalidElement(format!("{a:?} is not self-adjoint")));
        }
        let two = f.from_rational(&rat(2, 1));
        let four = f.from_rational(&rat(4, 1));
        let s = f.add(a, &two);
        let plus = self.cone.phi(f, &f.mul(&s, &s))?;
        let rest = self.cone.phi(f, &f.add(&f.mul(a, a), &four))?;
        Ok((&plus - &rest).mul_rational(&rat(1, 4)))
    }

    /// `υ(r) = (φ⁻¹((r + 2)²) − φ⁻¹(r² + 4)) / 4`; needs `φ⁻¹`.
    pub fn upsilon(&self, r: &BigReal) -> Result<F::Elem> {
        let f = self.field;
        let p = self.cone.precision().max(r.precision());
        let two = BigReal::from_int(2, p);
        let four = BigReal::from_int(4, p);
        let s = r + &two;
        let inv = |x: &BigReal| {
            self.cone
                .phi_inv(f, x)
                .ok_or_else(|| Error::InvalidElement("cone oracle has no inverse".into()))
        };
        let plus = inv(&(&s * &s))?;
        let rest = inv(&(&(r * r) + &four))?;
        Ok(f.mul(&f.sub(&plus, &rest), &f.from_rational(&rat(1, 4))))
    }

    /// Error allowance for one `ψ` value: two oracle roundings plus the field's own tolerance.
    pub fn tolerance(&self, scale: &Rational) -> Rational {
        let base = pow2_neg(self.cone.precision()) * rat(4, 1);
        let field = self.field.tolerance() * rat(64, 1);
        (base + field) * scale.clone().max(Rational::one())
    }
}

fn real_abs(r: &BigReal) -> Rational {
    r.abs().to_rational()
}

/// Checks that `ψ` extends `φ`, fixes 0 and 1, is additive and multiplicative
/// on sampled self-adjoint pairs and, with `φ⁻¹`, inverts `υ`.
pub fn psi_report<F: InvolutiveField, C: PositiveCone<F>>(field: &F, cone: &C, samples: usize, seed: u64) -> Report {
    let psi = Psi::new(field, cone);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new(format!("psi on {}", field.name()));
    let value = |a: &F::Elem| psi.psi(a);
    let within = |x: &BigReal, y: &BigReal, scale: &Rational| (x - y).abs().to_rational() <= psi.tolerance(scale);

    let fixed = |a: &F::Elem, want: i64| value(a).map(|v| v.to_rational() == rat(want, 1)).unwrap_or(false);
    report.record("psi_zero", fixed(&field.zero(), 0), "psi(0) = 0");
    report.record("psi_one", fixed(&field.one(), 1), "psi(1) = 1");

    let mut extends = 0;
    let mut additive = 0;
    let mut multiplicative = 0;
    let mut errors = Vec::new();
    for _ in 0..samples {
        let v = field.sample(&mut rng);
        let cone_elem = field.mul(&field.star(&v), &v);
        match (value(&cone_elem), cone.phi(field, &cone_elem)) {
            (Ok(x), Ok(y)) if within(&x, &y, &y.abs().to_rational()) => {}
            (Ok(_), Ok(_)) => extends += 1,
            (Err(e), _) | (_, Err(e)) => errors.push(e.to_string()),
        }
        let a = field.sample_self_adjoint(&mut rng);
        let b = field.sample_self_adjoint(&mut rng);
        let parts = (|| {
            Ok::<_, Error>((
                value(&a)?,
                value(&b)?,
                value(&field.add(&a, &b))?,
                value(&field.mul(&a, &b))?,
            ))
        })();
        match parts {
            Ok((pa, pb, ps, pm)) => {
                let scale = real_abs(&pa) + real_abs(&pb) + Rational::one();
                if !within(&ps, &(&pa + &pb), &scale) {
                    additive += 1;
                }
                if !within(&pm, &(&pa * &pb), &(&scale * &scale)) {
                    multiplicative += 1;
                }
            }
            Err(e) => errors.push(e.to_string()),
        }
    }
    let summary = |n: usize| format!("{n} of {samples} samples outside tolerance");
    report.record("extends_phi", extends == 0, summary(extends));
    report.record("additive", additive == 0, summary(additive));
    report.record("multiplicative", multiplicative == 0, summary(multiplicative));
    report.record(
        "cone_membership",
        errors.is_empty(),
        errors.first().cloned().unwrap_or_default(),
    );

    let roundtrip = (|| {
        let mut bad = 0;
        for _ in 0..samples {
            let a = field.sample_self_adjoint(&mut rng);
            let back = psi.upsilon(&psi.psi(&a)?)?;
            let r = BigReal::from_rational(&sample_rational(&mut rng, 50), cone.precision());
            let forth = psi.psi(&psi.upsilon(&r)?)?;
            let tol = psi.tolerance(&Rational::one()) * rat(64, 1);
            if !field.close(&back, &a, &tol) || !within(&forth, &r, &(real_abs(&r) * rat(64, 1))) {
                bad += 1;
            }
        }
        Ok::<_, Error>(bad)
    })();
    report.push(match roundtrip {
        Ok(0) => Check::new(
            "upsilon_inverse",
            Status::Pass,
            "psi and upsilon are mutually inverse on samples",
        ),
        Ok(n) => Check::new("upsilon_inverse", Status::Fail, format!("{n} round trips off")),
        Err(e) => Check::new("upsilon_inverse", Status::NotApplicable, e.to_string()),
    });
    report
}

/// `(a+b+2)² + (a²+4) + (b²+4)` and `(a+2)² + (b+2)² + (a+b)² + 4`.
pub fn additive_identity(a: &Rational, b: &Rational) -> (Rational, Rational) {
    let two = rat(2, 1);
    let four = rat(4, 1);
    let sq = |x: Rational| &x * &x;
    let s = a + b;
    let lhs = sq(&s + &two) + (sq(a.clone()) + &four) + (sq(b.clone()) + &four);
    let rhs = sq(a + &two) + sq(b + &two) + sq(s) + &four;
    (lhs, rhs)
}

/// `4(ab+2)² + (a+2)²(b²+4) + (a²+4)(b+2)²` and
/// `(a+2)²(b+2)² + (a²+4)(b²+4) + 4(a²b²+4)`.
pub fn multiplicative_identity(a: &Rational, b: &Rational) -> (Rational, Rational) {
    let two = rat(2, 1);
    let four = rat(4, 1);
    let sq = |x: &Rational| x * x;
    let (a2, b2) = (sq(&(a + &two)), sq(&(b + &two)));
    let (a4, b4) = (sq(a) + &four, sq(b) + &four);
    let ab = a * b;
    let lhs = &four * sq(&(&ab + &two)) + &a2 * &b4 + &a4 * &b2;
    let rhs = &a2 * &b2 + &a4 * &b4 + &four * (sq(&ab) + &four);
    (lhs, rhs)
}

/// Evaluates both polynomial identities exactly on each pair.
pub fn poly_identity_check(pairs: &[(Rational, Rational)]) -> Report {
    let mut report = Report::new("polynomial identities");
    let fails = |f: fn(&Rational, &Rational) -> (Rational, Rational)| {
        pairs.iter().filter(move |(a, b)| {
            let (l, r) = f(a, b);
            l != r
        })
    };
    let add: Vec<_> = fails(additive_identity).collect();
    let mul: Vec<_> = fails(multiplicative_identity).collect();
    let detail = |v: &Vec<&(Rational, Rational)>| match v.first() {
        None => format!("exact on {} pairs", pairs.len()),
        Some((a, b)) => format!("{} failures, first at a = {a}, b = {b}", v.len()),
    };
    report.record("additive_identity", add.is_empty(), detail(&add));
    report.record("multiplicative_identity", mul.is_empty(), detail(&mul));
    report
}

/// Seeded rational pairs with numerators in `[-range·d, range·d]`.
pub fn sample_pairs(n: usize, range: i64, seed: u64) -> Vec<(Rational, Rational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (sample_rational(&mut rng, range), sample_rational(&mut rng, range)))
        .collect()
}

/// `a ≼ b` iff `b − a ∈ P`.
pub fn cone_leq<F: InvolutiveField, C: PositiveCone<F>>(field: &F, cone: &C, a: &F::Elem, b: &F::Elem) -> bool {
    cone.contains(field, &field.sub(b, a))
}

/// `a = (a + 1/2)² − (a² + 1/4)` with both terms in the cone for self-adjoint `a`.
pub fn order_decomposition<F: InvolutiveField>(field: &F, a: &F::Elem) -> (F::Elem, F::Elem) {
    let half = field.from_rational(&rat(1, 2));
    let quarter = field.from_rational(&rat(1, 4));
    let s = field.add(a, &half);
    (field.mul(&s, &s), field.add(&field.mul(a, a), &quarter))
}

/// Samples the partially-ordered-field axioms for the order induced by a cone.
pub fn field_order_check<F: InvolutiveField, C: PositiveCone<F>>(
    field: &F,
    cone: &C,
    samples: usize,
    seed: u64,
) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let leq = |a: &F::Elem, b: &F::Elem| cone_leq(field, cone, a, b);
    let mut report = Report::new(format!("order from cone on {}", field.name()));
    let mut fails = [0usize; 7];
    for _ in 0..samples {
        let a = field.sample_self_adjoint(&mut rng);
        let v = field.sample(&mut rng);
        let p = field.mul(&field.star(&v), &v);
        let w = field.sample(&mut rng);
        let q = field.mul(&field.star(&w), &w);
        let b = field.add(&a, &p);
        let c = field.add(&b, &q);
        let d = field.sample(&mut rng);

        fails[0] += usize::from(!leq(&a, &a));
        // antisymmetry: a ≼ b ≼ a forces a = b
        fails[1] += usize::from(leq(&a, &b) && leq(&b, &a) && !field.equal(&a, &b));
        let x = field.sample_self_adjoint(&mut rng);
        fails[1] += usize::from(leq(&a, &x) && leq(&x, &a) && !field.equal(&a, &x));
        fails[2] += usize::from(!(leq(&a, &b) && leq(&b, &c) && leq(&a, &c)));
        fails[3] += usize::from(!leq(&field.add(&a, &d), &field.add(&b, &d)));
        fails[4] += usize::from(!leq(&field.zero(), &field.mul(&p, &q)));
        fails[5] += usize::from(!leq(&field.zero(), &p));
        let (u, t) = order_decomposition(field, &a);
        let ok = cone.contains(field, &u) && cone.contains(field, &t) && field.equal(&field.sub(&u, &t), &a);
        fails[6] += usize::from(!ok);
    }
    let names = [
        "reflexive",
        "antisymmetric",
        "transitive",
        "translation_invariant",
        "products_positive",
        "squares_positive",
        "decomposition",
    ];
    for (name, n) in names.iter().zip(fails) {
        report.record(*name, n == 0, format!("{n} of {samples} samples fail"));
    }
    report
}

/// Membership of `a` and of every `a + 2^-k`, `k ≤ budget`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpsilonClosure {
    pub in_cone: bool,
    pub shifts_in_cone: bool,
    /// Smallest `k` with `a + 2^-k ∉ P`.
    #[serde(with = "crate::json::opt_int")]
    pub first_exit: Option<u64>,
}

impl EpsilonClosure {
    pub fn agrees(&self) -> bool {
        self.in_cone == self.shifts_in_cone
    }
}

pub fn epsilon_closure<F: InvolutiveField, C: PositiveCone<F>>(
    field: &F,
    cone: &C,
    a: &F::Elem,
    budget: u64,
) -> EpsilonClosure {
    let first_exit =
        (1..=budget).find(|&k| !cone.contains(field, &field.add(a, &field.from_rational(&pow2_neg(k as u32)))));
    EpsilonClosure {
        in_cone: cone.contains(field, a),
        shifts_in_cone: first_exit.is_none(),
        first_exit,
    }
}

/// `a ∈ P` iff `a + 2^-k ∈ P` for all `k ≤ budget`, on each sample.
pub fn epsilon_closure_check<F: InvolutiveField, C: PositiveCone<F>>(
    field: &F,
    cone: &C,
    samples: &[F::Elem],
    budget: u64,
) -> Report {
    let mut report = Report::new(format!("epsilon closure on {}", field.name()));
    let bad: Vec<_> = samples
        .iter()
        .filter(|a| !epsilon_closure(field, cone, a, budget).agrees())
        .collect();
    let detail = match bad.first() {
        None => format!("{} samples, budget {budget}", samples.len()),
        Some(a) => format!("{} disagreements, first at {a:?}", bad.len()),
    };
    report.record("epsilon_closure", bad.is_empty(), detail);
    report
}

/// Signed self-adjoint probes around zero, for [`epsilon_closure_check`].
pub fn epsilon_probes<F: InvolutiveField>(field: &F, budget: u64) -> Vec<F::Elem> {
    let mut out = vec![field.zero(), field.one(), field.from_rational(&rat(10, 1))];
    let mut k = 1;
    while k < budget {
        let e = pow2_neg(k as u32);
        out.push(field.from_rational(&e));
        out.push(field.from_rational(&-e));
        k += 3;
    }
    out
}

/// A square root `i` of −1 built from a non-self-adjoint `u`, with the
/// decomposition of every element as `p + q·i` over self-adjoints.
#[derive(Clone, Debug)]
pub struct Complexification<F: InvolutiveField> {
    pub field: F,
    /// `r = φ⁻¹ √φ((u − u†)†(u − u†))`.
    pub r: F::Elem,
    /// `i = (u − u†) / r`.
    pub i: F::Elem,
    /// Whether `r` was found exactly rather than through `φ`.
    pub exact: bool,
}

pub fn complexify<F: InvolutiveField, C: PositiveCone<F>>(
    field: &F,
    cone: &C,
    u: &F::Elem,
) -> Result<Complexification<F>> {
    let d = field.sub(u, &field.star(u));
    if field.equal(&d, &field.zero()) {
        return Err(Error::SelfAdjointInput);
    }
    let r2 = field.mul(&field.star(&d), &d);
    let (r, exact) = match field.sqrt_exact(&r2) {
        Some(r) => (r, true),
        None => {
            let root = cone.phi(field, &r2)?.sqrt()?;
            let r = cone
                .phi_inv(field, &root)
                .ok_or_else(|| Error::InvalidElement("cone oracle has no inverse".into()))?;
            (r, false)
        }
    };
    let i = field.mul(&d, &field.inv(&r)?);
    Ok(Complexification {
        field: field.clone(),
        r,
        i,
        exact,
    })
}

impl<F: InvolutiveField> Complexification<F> {
    /// `a = p + q·i` with `p = (a + a†)/2`, `q = (a − a†)/(2i)`.
    pub fn decompose(&self, a: &F::Elem) -> Result<(F::Elem, F::Elem)> {
        let f = &self.field;
        let half = f.from_rational(&rat(1, 2));
        let p = f.mul(&f.add(a, &f.star(a)), &half);
        let q = f.mul(&f.mul(&f.sub(a, &f.star(a)), &half), &f.inv(&self.i)?);
        Ok((p, q))
    }

    pub fn compose(&self, p: &F::Elem, q: &F::Elem) -> F::Elem {
        self.field.add(p, &self.field.mul(q, &self.i))
    }

    /// `ψ_ℂ(p + q·i) = ψ(p) + ψ(q)·i`.
    pub fn psi_c<C: PositiveCone<F>>(&self, cone: &C, a: &F::Elem) -> Result<ComplexReal> {
        let (p, q) = self.decompose(a)?;
        let psi = Psi::new(&self.field, cone);
        Ok(ComplexReal::new(psi.psi(&p)?, psi.psi(&q)?))
    }

    /// Checks `i† = −i`, `i² = −1`, the decomposition, and that `ψ_ℂ` is a ring map.
    pub fn report<C: PositiveCone<F>>(&self, cone: &C, samples: usize, seed: u64) -> Report {
        let f = &self.field;
        let mut report = Report::new(format!("complexification of {}", f.name()));
        let minus_one = f.neg(&f.one());
        report.record(
            "i_skew",
            f.equal(&f.star(&self.i), &f.neg(&self.i)),
            format!("i = {:?}", self.i),
        );
        report.record("i_squared", f.equal(&f.mul(&self.i, &self.i), &minus_one), "i^2 = -1");
        report.record(
            "independent",
            !f.is_self_adjoint(&self.i),
            "i is not self-adjoint, so p + q i = 0 forces q = 0 and then p = 0",
        );

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = Psi::new(f, cone);
        let mut fails = [0usize; 4];
        let mut errors = Vec::new();
        for _ in 0..samples {
            let a = f.sample(&mut rng);
            let b = f.sample(&mut rng);
            let step = || -> Result<[bool; 4]> {
                let (p, q) = self.decompose(&a)?;
                let parts_ok = f.is_self_adjoint(&p) && f.is_self_adjoint(&q) && f.equal(&self.compose(&p, &q), &a);
                let (p2, q2) = self.decompose(&self.compose(&p, &q))?;
                let unique = f.equal(&p2, &p) && f.equal(&q2, &q);
                let (ca, cb) = (self.psi_c(cone, &a)?, self.psi_c(cone, &b)?);
                let sum = self.psi_c(cone, &f.add(&a, &b))?;
                let prod = self.psi_c(cone, &f.mul(&a, &b))?;
                let scale = ca.max_abs_component() + cb.max_abs_component() + Rational::one();
                let tol = psi.tolerance(&(&scale * &scale)) * rat(4, 1);
                let near = |x: &ComplexReal, y: &ComplexReal| (x - y).max_abs_component() <= tol;
                let hom = near(&sum, &(&ca + &cb)) && near(&prod, &(&ca * &cb));
                let restricts = near(&self.psi_c(cone, &p)?, &ComplexReal::from_real(psi.psi(&p)?));
                Ok([parts_ok, unique, hom, restricts])
            };
            match step() {
                Ok(oks) => oks
                    .iter()
                    .zip(fails.iter_mut())
                    .for_each(|(ok, n)| *n += usize::from(!ok)),
                Err(e) => errors.push(e.to_string()),
            }
        }
        let names = [
            "decompose",
            "basis_independence",
            "psi_c_homomorphism",
            "psi_c_restricts",
        ];
        for (name, n) in names.iter().zip(fails) {
            report.record(
                *name,
                n == 0 && errors.is_empty(),
                format!("{n} of {samples} samples fail"),
            );
        }
        if let Some(e) = errors.first() {
            report.record("evaluation", false, e.clone());
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational::int;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::new(int(re), int(im))
    }

    #[test]
    fn psi_examples() {
        let cone = StandardCone::new(64);
        let psi = Psi::new(&GaussianField, &cone);
        assert_eq!(psi.psi(&g(-3, 0)).unwrap().to_rational(), int(-3));
        assert_eq!(psi.psi(&g(0, 0)).unwrap().to_rational(), int(0));
        assert_eq!(psi.psi(&g(2, 0)).unwrap().to_rational(), int(2));
        assert!(matches!(psi.psi(&g(1, 1)), Err(Error::InvalidElement(_))));
        let r = BigReal::from_rational(&rat(-7, 2), 64);
        assert_eq!(psi.upsilon(&r).unwrap(), GaussianRational::real(rat(-7, 2)));
    }

    struct Shifted;
    impl PositiveCone<GaussianField> for Shifted {
        fn contains(&self, _: &GaussianField, a: &GaussianRational) -> bool {
            a.is_real() && a.re >= int(5)
        }
        fn phi(&self, f: &GaussianField, a: &GaussianRational) -> Result<BigReal> {
            if !self.contains(f, a) {
                return Err(violation(a));
            }
            Ok(BigReal::from_rational(&a.re, 40))
        }
        fn precision(&self) -> u32 {
            40
        }
    }

    #[test]
    fn cone_violation() {
        let psi = Psi::new(&GaussianField, &Shifted);
        assert!(matches!(psi.psi(&g(-2, 0)), Err(Error::ConeViolation(_))));
        assert!(psi.upsilon(&BigReal::one(40)).is_err());
    }

    #[test]
    fn psi_reports_pass() {
        let r = psi_report(&GaussianField, &StandardCone::new(64), 200, 3);
        assert!(r.passed(), "{r}");
        assert_eq!(r.status("upsilon_inverse"), Some(Status::Pass));
        let r = psi_report(&GaussianField, &SemifieldCone { precision: 40 }, 40, 4);
        assert!(r.passed(), "{r}");
        let r = psi_report(&ComplexApprox::new(80), &StandardCone::new(80), 100, 5);
        assert!(r.passed(), "{r}");
        let r = psi_report(&RealApprox::new(80), &StandardCone::new(80), 100, 6);
        assert!(r.passed(), "{r}");
        let r = psi_report(&GaussianField, &Shifted, 10, 7);
        assert!(!r.passed());
    }

    #[test]
    fn poly_identities() {
        assert!(poly_identity_check(&[(int(0), int(0)), (int(1), int(2))]).passed());
        let (l, r) = additive_identity(&int(0), &int(0));
        assert_eq!((l.clone(), r), (int(12), int(12)));
        assert!(poly_identity_check(&sample_pairs(1000, 1000, 9)).passed());
    }

    #[test]
    fn order_examples() {
        let f = RealApprox::new(60);
        let cone = StandardCone::new(60);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let (a, b) = (f.sample(&mut rng), f.sample(&mut rng));
            assert_eq!(cone_leq(&f, &cone, &a, &b), a <= b);
        }
        let (b, c) = order_decomposition(&GaussianField, &g(-5, 0));
        assert_eq!(
            (b, c),
            (GaussianRational::real(rat(81, 4)), GaussianRational::real(rat(101, 4)))
        );
        for seed in 0..3 {
            assert!(field_order_check(&GaussianField, &StandardCone::new(40), 300, seed).passed());
            assert!(field_order_check(&ComplexApprox::new(60), &StandardCone::new(60), 100, seed).passed());
        }
    }

    #[test]
    fn epsilon_examples() {
        let cone = StandardCone::new(40);
        let zero = epsilon_closure(&GaussianField, &cone, &g(0, 0), 20);
        assert!(zero.in_cone && zero.agrees());
        let neg = GaussianRational::real(-pow2_neg(10));
        let e = epsilon_closure(&GaussianField, &cone, &neg, 20);
        assert_eq!(
            e,
            EpsilonClosure {
                in_cone: false,
                shifts_in_cone: false,
                first_exit: Some(11)
            }
        );
        assert!(epsilon_closure(&GaussianField, &cone, &g(10, 0), 20).in_cone);
        let probes = epsilon_probes(&GaussianField, 20);
        assert!(epsilon_closure_check(&GaussianField, &cone, &probes, 20).passed());
        let c = ComplexApprox::new(60);
        assert!(epsilon_closure_check(&c, &StandardCone::new(60), &epsilon_probes(&c, 20), 20).passed());
        // a budget that stops short of the gap misses it
        assert!(!epsilon_closure_check(&GaussianField, &cone, &[neg], 5).passed());
    }

    #[test]
    fn complexify_examples() {
        let cone = StandardCone::new(64);
        let cx = complexify(&GaussianField, &cone, &g(0, 1)).unwrap();
        assert_eq!((cx.r.clone(), cx.i.clone()), (g(2, 0), g(0, 1)));
        assert!(cx.exact);
        assert_eq!(cx.decompose(&g(3, 4)).unwrap(), (g(3, 0), g(4, 0)));
        assert!(cx.report(&cone, 100, 1).passed());

        let flipped = complexify(&GaussianField, &cone, &g(0, -1)).unwrap();
        assert_eq!(flipped.i, g(0, -1));
        assert_eq!(flipped.decompose(&g(3, 4)).unwrap(), (g(3, 0), g(-4, 0)));
        assert!(flipped.report(&cone, 50, 2).passed());

        let skewed = complexify(&GaussianField, &cone, &GaussianRational::new(rat(1, 3), rat(2, 7))).unwrap();
        assert_eq!(skewed.i, g(0, 1));

        assert_eq!(
            complexify(&GaussianField, &cone, &g(5, 0)).unwrap_err(),
            Error::SelfAdjointInput
        );
        assert_eq!(
            complexify(&RealApprox::new(40), &cone, &BigReal::one(40)).unwrap_err(),
            Error::SelfAdjointInput
        );

        let c = ComplexApprox::new(80);
        let u = c.from_gaussian(&GaussianRational::new(rat(1, 3), rat(1, 3)));
        let cx = complexify(&c, &StandardCone::new(80), &u).unwrap();
        assert!(!cx.exact);
        assert!(cx.report(&StandardCone::new(80), 50, 3).passed());
    }
}
