//! Colimits of sequential diagrams `X₁ → X₂ → ⋯` of contractions.
//!
//! A diagram is given by finitely many morphisms `f₁ … f_k`; the last one is
//! square and repeats forever. Its object `X_T` (`T = max(k, 1)`) is the tail
//! object.
//!
//! * Diagrams of epis: the apex is `X₁/N` with the limit inner product
//!   `⟨x, x′⟩ = lim ⟨Aₙx, Aₙx′⟩`, `Aₙ = fₙ₋₁⋯f₁`, and `N` the kernel of the
//!   limit Gram matrix `G∞`. For a repeated tail `f`, `lim (fʲ)†fʲ` is the
//!   orthogonal projection onto the unitary part of `f`, so `G∞` is exact.
//! * Bounded diagrams of monos: the bound forces the tail to be unitary and
//!   the apex is the tail object itself.
//!
//! Apex coordinates are `ℂʳ` with the exact Gram matrix [`ColimitResult::apex_gram`];
//! the approximate legs are expressed in an orthonormal frame for it.

use num_traits::One;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fcon::approx::working_precision;
use crate::fcon::linalg::{column_space, inverse, is_psd, nullspace, pivoted_ldl, pseudo_inverse, rank, PsdDecision};
use crate::fcon::sample::{random_contraction, random_full_rank_contraction, random_unitary};
use crate::fcon::{is_contraction, is_dagger_mono, is_epi, is_mono, is_unitary, ApproxMatrix, Matrix};
use crate::report::Report;
use crate::scalars::rational::pow2_neg;
use crate::scalars::{sqrt_pos, ComplexReal, Rational};

pub const DEFAULT_BUDGET: u64 = 64;

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagramKind {
    Monos,
    Epis,
}

#[derive(Deserialize)]
struct RawDiagram {
    kind: DiagramKind,
    #[serde(with = "crate::json::int_vec")]
    objects: Vec<usize>,
    morphisms: Vec<Matrix>,
    #[serde(with = "crate::json::opt_int", default)]
    stabilisation: Option<u64>,
    #[serde(with = "crate::json::int", default = "default_budget")]
    budget: u64,
}

impl TryFrom<RawDiagram> for SequentialDiagram {
    type Error = Error;

    fn try_from(r: RawDiagram) -> Result<Self> {
        let mut d = Self::new(r.kind, r.objects, r.morphisms)?;
        d.stabilisation = r.stabilisation;
        d.budget = r.budget;
        Ok(d)
    }
}

/// `X₁ → X₂ → ⋯`; after the listed morphisms the last one repeats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDiagram")]
pub struct SequentialDiagram {
    pub kind: DiagramKind,
    #[serde(with = "crate::json::int_vec")]
    pub objects: Vec<usize>,
    pub morphisms: Vec<Matrix>,
    /// An index from which the Gram sequence is claimed constant; verified, never trusted.
    #[serde(with = "crate::json::opt_int", skip_serializing_if = "Option::is_none")]
    pub stabilisation: Option<u64>,
    #[serde(with = "crate::json::int")]
    pub budget: u64,
}

impl SequentialDiagram {
    pub fn new(kind: DiagramKind, objects: Vec<usize>, morphisms: Vec<Matrix>) -> Result<Self> {
        if objects.len() != morphisms.len() + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} objects for {} morphisms",
                objects.len(),
                morphisms.len()
            )));
        }
        for (i, f) in morphisms.iter().enumerate() {
            let n = i + 1;
            if f.shape() != (objects[i + 1], objects[i]) {
                return Err(Error::DimensionMismatch(format!(
                    "f{n} is {}x{}, expected {}x{}",
                    f.rows(),
                    f.cols(),
                    objects[i + 1],
                    objects[i]
                )));
            }
            if !is_contraction(f) {
                return Err(Error::NotContraction);
            }
            match kind {
                DiagramKind::Monos if !is_mono(f) => return Err(Error::NotMono(format!("f{n}"))),
                DiagramKind::Epis if !is_epi(f) => return Err(Error::NotEpi(format!("f{n}"))),
                _ => {}
            }
        }
        if let Some(last) = morphisms.last() {
            if !last.is_square() {
                return Err(Error::DimensionMismatch(
                    "the last morphism repeats, so it must be square".into(),
                ));
            }
        }
        Ok(Self {
            kind,
            objects,
            morphisms,
            stabilisation: None,
            budget: DEFAULT_BUDGET,
        })
    }

    /// Objects inferred from the shapes.
    pub fn from_morphisms(kind: DiagramKind, morphisms: Vec<Matrix>) -> Result<Self> {
        let first = morphisms
            .first()
            .ok_or_else(|| Error::DimensionMismatch("no morphisms".into()))?;
        let mut objects = vec![first.cols()];
        objects.extend(morphisms.iter().map(Matrix::rows));
        Self::new(kind, objects, morphisms)
    }

    /// The constant diagram on `f`.
    pub fn constant(kind: DiagramKind, f: Matrix) -> Result<Self> {
        Self::from_morphisms(kind, vec![f])
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_stabilisation(mut self, index: u64) -> Self {
        self.stabilisation = Some(index);
        self
    }

    pub fn tail_index(&self) -> u64 {
        self.morphisms.len().max(1) as u64
    }

    pub fn object(&self, n: u64) -> usize {
        let last = self.objects.len() as u64;
        self.objects[(n.clamp(1, last) - 1) as usize]
    }

    pub fn tail(&self) -> Matrix {
        match self.morphisms.last() {
            Some(f) => f.clone(),
            None => Matrix::identity(self.objects[0]),
        }
    }

    /// `fₙ`, indexed from 1.
    pub fn morphism(&self, n: u64) -> Matrix {
        if n >= 1 && n <= self.morphisms.len() as u64 {
            self.morphisms[(n - 1) as usize].clone()
        } else {
            self.tail()
        }
    }

    /// `f_{to−1} ⋯ f_from : X_from → X_to`.
    pub fn composite(&self, from: u64, to: u64) -> Matrix {
        let mut acc = Matrix::identity(self.object(from));
        for n in from..to {
            acc = self.morphism(n).compose(&acc).expect("diagram shapes compose");
        }
        acc
    }

    /// `X ⊕ –` applied to the diagram.
    pub fn dsum_left(&self, x: usize) -> Result<Self> {
        let morphisms = self.morphisms.iter().map(|f| Matrix::identity(x).dsum(f)).collect();
        let objects = self.objects.iter().map(|d| x + d).collect();
        let mut d = Self::new(self.kind, objects, morphisms)?;
        d.budget = self.budget;
        Ok(d)
    }
}

/// Legs `cₙ: Xₙ → apex` with `cₙ₊₁fₙ = cₙ`. Legs past the list follow from
/// the invertible tail: `cₙ₊₁ = cₙ f⁻¹`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cocone {
    #[serde(with = "crate::json::int")]
    pub apex: usize,
    pub legs: Vec<Matrix>,
}

impl Cocone {
    pub fn new(apex: usize, legs: Vec<Matrix>) -> Result<Self> {
        if legs.is_empty() {
            return Err(Error::DimensionMismatch("a cocone needs at least one leg".into()));
        }
        if let Some(l) = legs.iter().find(|l| l.rows() != apex) {
            return Err(Error::DimensionMismatch(format!(
                "leg with {} rows into apex {apex}",
                l.rows()
            )));
        }
        Ok(Self { apex, legs })
    }

    pub fn leg(&self, diag: &SequentialDiagram, n: u64) -> Result<Matrix> {
        let len = self.legs.len() as u64;
        if n <= len {
            return Ok(self.legs[(n.max(1) - 1) as usize].clone());
        }
        if len < diag.tail_index() {
            return Err(Error::DimensionMismatch(format!(
                "cocone lists {len} legs but the tail starts at {}",
                diag.tail_index()
            )));
        }
        let inv = inverse(&diag.tail())?;
        let mut leg = self.legs[(len - 1) as usize].clone();
        for _ in len..n {
            leg = leg.compose(&inv)?;
        }
        Ok(leg)
    }

    /// Checks shapes and `cₙ₊₁fₙ = cₙ` through one step past the tail.
    pub fn check(&self, diag: &SequentialDiagram) -> Result<()> {
        let upto = (self.legs.len() as u64).max(diag.tail_index() + 1);
        for n in 1..=upto {
            let leg = self.leg(diag, n)?;
            if leg.cols() != diag.object(n) {
                return Err(Error::DimensionMismatch(format!("leg {n} has {} columns", leg.cols())));
            }
            if n < upto && self.leg(diag, n + 1)?.compose(&diag.morphism(n))? != leg {
                return Err(Error::NotCocone { index: n });
            }
        }
        Ok(())
    }

    /// `t ∘ cₙ` for each listed leg.
    pub fn post_compose(&self, t: &Matrix) -> Result<Self> {
        let legs = self.legs.iter().map(|l| t.compose(l)).collect::<Result<_>>()?;
        Self::new(t.rows(), legs)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitMethod {
    /// Closed-form limit of the repeated tail.
    #[default]
    Exact,
    /// Entrywise Cauchy test on `Gₙ` at tolerance `2^-precision`, within the budget.
    Cauchy,
}

/// A basis of the unitary part of a square contraction: vectors with
/// `‖fʲx‖ = ‖x‖` for all `j`. The chain of these subspaces settles by `j = dim`.
pub fn unitary_part(f: &Matrix) -> Matrix {
    let n = f.rows();
    let mut power = Matrix::identity(n);
    let mut blocks = Vec::new();
    for _ in 0..n.max(1) {
        power = f.compose(&power).expect("square");
        let defect = Matrix::identity(n)
            .sub(&power.dagger().compose(&power).expect("square"))
            .expect("square");
        blocks.push(defect);
    }
    nullspace(&Matrix::vstack(n, &blocks).expect("same width"))
}

/// Orthogonal projection onto the column space of `b`.
pub fn projector(b: &Matrix) -> Matrix {
    if b.cols() == 0 {
        return Matrix::zeros(b.rows(), b.rows());
    }
    let gram_inv = inverse(&b.dagger().compose(b).expect("shapes")).expect("independent columns");
    Matrix::compose_all([b, &gram_inv, &b.dagger()]).expect("shapes")
}

/// `lim (fʲ)†fʲ` for a square contraction `f`, exactly.
pub fn tail_gram_limit(f: &Matrix) -> Matrix {
    projector(&unitary_part(f))
}

/// A right inverse `e†(ee†)⁻¹` of a surjective `e`.
fn right_inverse(e: &Matrix) -> Result<Matrix> {
    if e.rows() == 0 {
        return Ok(Matrix::zeros(e.cols(), 0));
    }
    let ee = inverse(&e.compose(&e.dagger())?)?;
    e.dagger().compose(&ee)
}

/// `R` with `R†R = gram` and its inverse, from an exact LDL of a positive definite `gram`.
#[derive(Clone, Debug)]
struct Frame {
    forward: ApproxMatrix,
    inverse: ApproxMatrix,
}

fn frame(gram: &Matrix, precision: u32) -> Result<Frame> {
    let r = gram.rows();
    let wp = working_precision(precision);
    let ldl = match pivoted_ldl(gram, None)? {
        PsdDecision::Psd(l) if l.rank() == r => l,
        _ => return Err(Error::NotPsd),
    };
    let u = ldl.unpermuted_l();
    let w = if r == 0 {
        Matrix::zeros(0, 0)
    } else {
        inverse(&u.dagger())?
    };
    let mut roots = Vec::with_capacity(r);
    for d in &ldl.d {
        roots.push((sqrt_pos(d, wp)?, sqrt_pos(&(Rational::one() / d), wp)?));
    }
    let mut fwd = Vec::with_capacity(r * r);
    let mut inv = Vec::with_capacity(r * r);
    for i in 0..r {
        for j in 0..r {
            fwd.push(ComplexReal::from_gaussian(&u[(j, i)].conj(), wp).scale(&roots[i].0));
            inv.push(ComplexReal::from_gaussian(&w[(i, j)], wp).scale(&roots[j].1));
        }
    }
    Ok(Frame {
        forward: ApproxMatrix::new(r, r, fwd, precision)?,
        inverse: ApproxMatrix::new(r, r, inv, precision)?,
    })
}

/// The apex of a sequential colimit and its legs.
#[derive(Clone, Debug, Serialize)]
pub struct ColimitResult {
    pub kind: DiagramKind,
    #[serde(with = "crate::json::int")]
    pub apex_dim: usize,
    #[serde(with = "crate::json::int")]
    pub tail_index: u64,
    pub method: LimitMethod,
    /// `gram_limit` is the exact limit rather than a Cauchy approximation.
    pub exact: bool,
    /// First `n` with `Gₙ = G∞`.
    #[serde(with = "crate::json::opt_int")]
    pub stabilised_at: Option<u64>,
    /// `G∞` on `X₁` (epis) or on the tail object (monos).
    pub gram_limit: Matrix,
    /// Columns spanning the complement of `N` (the row space of `G∞`).
    pub quotient_basis: Matrix,
    /// Coordinates along `quotient_basis`, vanishing on `N`.
    pub quotient_map: Matrix,
    /// The apex inner product in those coordinates.
    pub apex_gram: Matrix,
    /// `cₙ` in quotient coordinates, for `n = 1 … T + 1`.
    pub legs_exact: Vec<Matrix>,
    /// `cₙ` in an orthonormal frame of the apex.
    pub legs: Vec<ApproxMatrix>,
    #[serde(skip)]
    frame: Frame,
    #[serde(skip)]
    pub precision: u32,
}

impl ColimitResult {
    fn assemble(
        kind: DiagramKind,
        diag: &SequentialDiagram,
        gram_limit: Matrix,
        quotient_basis: Matrix,
        legs_exact: Vec<Matrix>,
        (method, exact, stabilised_at): (LimitMethod, bool, Option<u64>),
        precision: u32,
    ) -> Result<Self> {
        let r = quotient_basis.cols();
        let quotient_map = if r == 0 {
            Matrix::zeros(0, quotient_basis.rows())
        } else {
            inverse(&quotient_basis.dagger().compose(&quotient_basis)?)?.compose(&quotient_basis.dagger())?
        };
        let apex_gram = Matrix::compose_all([&quotient_basis.dagger(), &gram_limit, &quotient_basis])?;
        let frame = frame(&apex_gram, precision)?;
        let legs = legs_exact
            .iter()
            .map(|l| frame.forward.compose_exact(l))
            .collect::<Result<_>>()?;
        Ok(Self {
            kind,
            apex_dim: r,
            tail_index: diag.tail_index(),
            method,
            exact,
            stabilised_at,
            gram_limit,
            quotient_basis,
            quotient_map,
            apex_gram,
            legs_exact,
            legs,
            frame,
            precision,
        })
    }

    /// `cₙ` in quotient coordinates for any `n`.
    pub fn leg_exact(&self, diag: &SequentialDiagram, n: u64) -> Result<Matrix> {
        let listed = self.legs_exact.len() as u64;
        if n >= 1 && n <= listed {
            return Ok(self.legs_exact[(n - 1) as usize].clone());
        }
        let inv = inverse(&diag.tail())?;
        let mut leg = self.legs_exact[(listed - 1) as usize].clone();
        for _ in listed..n {
            leg = leg.compose(&inv)?;
        }
        Ok(leg)
    }

    /// `cₙ` in the orthonormal frame.
    pub fn leg(&self, diag: &SequentialDiagram, n: u64) -> Result<ApproxMatrix> {
        self.frame.forward.compose_exact(&self.leg_exact(diag, n)?)
    }

    /// Quotient coordinates to the orthonormal frame.
    pub fn to_frame(&self) -> &ApproxMatrix {
        &self.frame.forward
    }

    /// The orthonormal frame to quotient coordinates.
    pub fn from_frame(&self) -> &ApproxMatrix {
        &self.frame.inverse
    }
}

/// `G₁ … G_upto` with `Gₙ = Aₙ†Aₙ`.
pub fn gram_sequence(diag: &SequentialDiagram, upto: u64) -> Vec<Matrix> {
    let mut a = Matrix::identity(diag.object(1));
    let mut out = Vec::new();
    for n in 1..=upto {
        out.push(a.dagger().compose(&a).expect("shapes"));
        a = diag.morphism(n).compose(&a).expect("shapes");
    }
    out
}

/// `Gₙ − Gₙ₊₁ ⪰ 0` exactly for `n < upto`.
pub fn gram_monotonicity_check(diag: &SequentialDiagram, upto: u64) -> Report {
    let grams = gram_sequence(diag, upto.max(2));
    let bad = grams
        .windows(2)
        .position(|w| !is_psd(&w[0].sub(&w[1]).expect("same shape")).unwrap_or(false));
    let mut r = Report::new("gram monotonicity");
    r.record(
        "gram_decreasing",
        bad.is_none(),
        match bad {
            None => format!("G_n - G_(n+1) is PSD for n < {}", grams.len()),
            Some(i) => format!("fails at n = {}", i + 1),
        },
    );
    r
}

/// The colimit of a diagram of epis.
pub fn epi_seq_colimit(diag: &SequentialDiagram, precision: u32, method: LimitMethod) -> Result<ColimitResult> {
    if diag.kind != DiagramKind::Epis {
        return Err(Error::NotEpi("diagram of monos".into()));
    }
    let t = diag.tail_index();
    let grams = gram_sequence(diag, t + 1);
    let verified_hint = match diag.stabilisation {
        None => None,
        Some(s) => {
            let gs = gram_sequence(diag, s.max(t) + 1);
            if s == 0 || gs[(s - 1) as usize] != gs[gs.len() - 1] {
                return Err(Error::InvalidElement(format!(
                    "the Gram sequence is not constant from index {s}"
                )));
            }
            Some(gs[(s - 1) as usize].clone())
        }
    };
    let (g, method, exact) = match (verified_hint, method) {
        (Some(g), m) => (g, m, true),
        (None, LimitMethod::Exact) => {
            let a = diag.composite(1, t);
            (
                Matrix::compose_all([&a.dagger(), &tail_gram_limit(&diag.tail()), &a])?,
                LimitMethod::Exact,
                true,
            )
        }
        (None, LimitMethod::Cauchy) => (cauchy_limit(diag, precision)?, LimitMethod::Cauchy, false),
    };
    let stabilised_at = grams.iter().position(|gn| *gn == g).map(|i| i as u64 + 1);
    let q = if exact {
        column_space(&g)
    } else {
        let tol = pow2_neg(precision);
        let l = match pivoted_ldl(&g, Some(&tol))? {
            PsdDecision::Psd(l) => l.unpermuted_l(),
            PsdDecision::NotPsd { .. } => return Err(Error::NotPsd),
        };
        let n = nullspace(&l.dagger());
        nullspace(&n.dagger())
    };
    let r = q.cols();
    let quotient = if r == 0 {
        Matrix::zeros(0, q.rows())
    } else {
        inverse(&q.dagger().compose(&q)?)?.compose(&q.dagger())?
    };
    let mut legs = Vec::new();
    for n in 1..=t + 1 {
        legs.push(quotient.compose(&pseudo_inverse(&diag.composite(1, n)))?);
    }
    ColimitResult::assemble(
        DiagramKind::Epis,
        diag,
        g,
        q,
        legs,
        (method, exact, stabilised_at),
        precision,
    )
}

fn cauchy_limit(diag: &SequentialDiagram, precision: u32) -> Result<Matrix> {
    let tol = pow2_neg(precision);
    let mut a = Matrix::identity(diag.object(1));
    let mut prev = a.dagger().compose(&a)?;
    for n in 1..=diag.budget {
        a = diag.morphism(n).compose(&a)?;
        let g = a.dagger().compose(&a)?;
        let step = prev.sub(&g)?;
        if step.entries().iter().all(|e| e.abs_bound() <= tol) {
            return Ok(g);
        }
        prev = g;
    }
    Err(Error::NoLimitWithinBudget { budget: diag.budget })
}

/// The colimit of a diagram of monos with a cocone of monos bounding it.
pub fn bounded_seq_colimit(diag: &SequentialDiagram, bound: &Cocone, precision: u32) -> Result<ColimitResult> {
    if diag.kind != DiagramKind::Monos {
        return Err(Error::NotMono("diagram of epis".into()));
    }
    let t = diag.tail_index();
    bound.check(diag)?;
    for n in 1..=(bound.legs.len() as u64).max(t + 1) {
        let leg = bound.leg(diag, n)?;
        if !is_mono(&leg) {
            return Err(Error::NotMono(format!("bound leg {n}")));
        }
        if !is_contraction(&leg) {
            return Err(Error::NotCocone { index: n });
        }
    }
    let tail = diag.tail();
    if !is_unitary(&tail) {
        // a bounded tail must be unitary; find the first leg that stops being a contraction
        let inv = inverse(&tail)?;
        let mut leg = bound.leg(diag, t + 1)?;
        for n in t + 2..=t + 1 + diag.budget {
            leg = leg.compose(&inv)?;
            if !is_contraction(&leg) {
                return Err(Error::NotCocone { index: n });
            }
        }
        return Err(Error::NoWitnessWithinBudget { budget: diag.budget });
    }
    let d = diag.object(t);
    let mut legs: Vec<Matrix> = (1..=t).map(|n| diag.composite(n, t)).collect();
    legs.push(tail.dagger());
    let basis = Matrix::identity(d);
    ColimitResult::assemble(
        DiagramKind::Monos,
        diag,
        Matrix::identity(d),
        basis,
        legs,
        (LimitMethod::Exact, true, Some(t)),
        precision,
    )
}

/// Dispatches on the diagram kind; mono diagrams need `bound`.
pub fn seq_colimit(
    diag: &SequentialDiagram,
    bound: Option<&Cocone>,
    precision: u32,
    method: LimitMethod,
) -> Result<ColimitResult> {
    match (diag.kind, bound) {
        (DiagramKind::Epis, _) => epi_seq_colimit(diag, precision, method),
        (DiagramKind::Monos, Some(b)) => bounded_seq_colimit(diag, b, precision),
        (DiagramKind::Monos, None) => Err(Error::InvalidElement(
            "a diagram of monos needs a bounding cocone".into(),
        )),
    }
}

/// The morphism out of the apex induced by a cocone, in quotient coordinates.
#[derive(Clone, Debug, Serialize)]
pub struct Mediating {
    pub matrix: Matrix,
    /// `m cₙ = bₙ` through one step past the tail.
    pub commutes: bool,
    /// A contraction for the apex inner product.
    pub contraction: bool,
    /// The tail leg is surjective, so no other morphism commutes.
    pub unique: bool,
}

pub fn mediating_morphism(colim: &ColimitResult, diag: &SequentialDiagram, cocone: &Cocone) -> Result<Mediating> {
    let t = diag.tail_index();
    let e = colim.leg_exact(diag, t)?;
    let m = cocone.leg(diag, t)?.compose(&right_inverse(&e)?)?;
    let mut commutes = true;
    for n in 1..=t + 1 {
        commutes &= m.compose(&colim.leg_exact(diag, n)?)? == cocone.leg(diag, n)?;
    }
    let contraction = is_psd(&colim.apex_gram.sub(&m.dagger().compose(&m)?)?)?;
    let unique = rank(&e) == colim.apex_dim;
    Ok(Mediating {
        matrix: m,
        commutes,
        contraction,
        unique,
    })
}

/// Legs form a cocone and every test cocone factors uniquely through a contraction.
pub fn universal_property_check(colim: &ColimitResult, diag: &SequentialDiagram, cocones: &[Cocone]) -> Report {
    let mut r = Report::new("universal property");
    let t = diag.tail_index();
    let cocone_ok = (1..=t).all(|n| {
        let step = colim.leg_exact(diag, n + 1).and_then(|l| l.compose(&diag.morphism(n)));
        matches!((step, colim.leg_exact(diag, n)), (Ok(a), Ok(b)) if a == b)
    });
    r.record("legs_form_cocone", cocone_ok, format!("c_(n+1) f_n = c_n for n <= {t}"));
    let mut counts = [0usize; 3];
    let mut errors = Vec::new();
    for c in cocones {
        match mediating_morphism(colim, diag, c) {
            Ok(m) => {
                counts[0] += usize::from(!m.commutes);
                counts[1] += usize::from(!m.contraction);
                counts[2] += usize::from(!m.unique);
            }
            Err(e) => errors.push(e.to_string()),
        }
    }
    let n = cocones.len();
    for (name, k) in ["mediating_exists", "mediating_contraction", "mediating_unique"]
        .iter()
        .zip(counts)
    {
        r.record(
            *name,
            k == 0 && errors.is_empty(),
            format!("{k} of {n} test cocones fail"),
        );
    }
    if let Some(e) = errors.first() {
        r.record("mediating_computed", false, e.clone());
    }
    r
}

/// Test cocones on a bounded diagram: the bound, zero, and `t ∘ aₙ` for random contractions `t`.
pub fn test_cocones_from_bound(
    diag: &SequentialDiagram,
    bound: &Cocone,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Cocone>> {
    let t = diag.tail_index();
    let legs = (1..=t + 1).map(|n| bound.leg(diag, n)).collect::<Result<Vec<_>>>()?;
    let full = Cocone::new(bound.apex, legs)?;
    let mut out = vec![full.clone()];
    out.push(full.post_compose(&Matrix::zeros(1, bound.apex))?);
    while out.len() < count {
        let z = rng.gen_range(1..=4);
        let s = if rng.gen_ratio(1, 3) && z == bound.apex {
            random_unitary(rng, z)
        } else {
            random_contraction(rng, z, bound.apex)
        };
        out.push(full.post_compose(&s)?);
    }
    out.truncate(count.max(2));
    Ok(out)
}

/// Test cocones `s ∘ cₙ` through the colimit, with `s` halved until it is a
/// contraction for the apex inner product.
pub fn test_cocones_from_colimit(
    colim: &ColimitResult,
    diag: &SequentialDiagram,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Cocone>> {
    let t = diag.tail_index();
    let legs = (1..=t + 1)
        .map(|n| colim.leg_exact(diag, n))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for _ in 0..count {
        let z = rng.gen_range(1..=4);
        let mut s = random_contraction(rng, z, colim.apex_dim);
        while !is_psd(&colim.apex_gram.sub(&s.dagger().compose(&s)?)?)? {
            s = s.scale_rational(&pow2_neg(1));
        }
        let b: Vec<Matrix> = legs.iter().map(|l| s.compose(l)).collect::<Result<_>>()?;
        out.push(Cocone::new(z, b)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct IsometryReport {
    /// Every `mₙ` is exactly dagger monic.
    pub premise: bool,
    /// `m∞` preserves the apex inner products exactly.
    pub exact: bool,
    /// `m∞†m∞ ≈ 1` in orthonormal frames.
    pub holds: bool,
    /// A source basis vector whose norm is not preserved.
    #[serde(with = "crate::json::opt_int")]
    pub witness: Option<usize>,
    pub max_deviation: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Induced {
    /// `m∞` in quotient coordinates.
    pub exact: Matrix,
    /// `m∞` between orthonormal frames.
    pub matrix: ApproxMatrix,
    /// `m∞ cₙ = dₙ mₙ` exactly.
    pub commutes: bool,
    /// Largest entry of `m∞ cₙ − dₙ mₙ` in orthonormal frames.
    pub max_deviation: String,
    pub isometry: IsometryReport,
}

/// The morphism `colim X → colim Y` induced by `mₙ: Xₙ → Yₙ` with
/// `mₙ₊₁fₙ = gₙmₙ`; the last listed `mₙ` repeats.
pub fn induced_morphism(
    dx: &SequentialDiagram,
    cx: &ColimitResult,
    dy: &SequentialDiagram,
    cy: &ColimitResult,
    nat: &[Matrix],
    precision: u32,
) -> Result<Induced> {
    if nat.is_empty() {
        return Err(Error::DimensionMismatch("no components".into()));
    }
    let m = |n: u64| nat[(n.clamp(1, nat.len() as u64) - 1) as usize].clone();
    let t = dx.tail_index().max(dy.tail_index());
    let upto = (t + 1).max(nat.len() as u64);
    for n in 1..=upto {
        let mn = m(n);
        if mn.shape() != (dy.object(n), dx.object(n)) {
            return Err(Error::DimensionMismatch(format!("m{n} is {}x{}", mn.rows(), mn.cols())));
        }
        if m(n + 1).compose(&dx.morphism(n))? != dy.morphism(n).compose(&mn)? {
            return Err(Error::NotNatural { index: n });
        }
    }
    let ex = cx.leg_exact(dx, t)?;
    let exact = Matrix::compose_all([&cy.leg_exact(dy, t)?, &m(t), &right_inverse(&ex)?])?;
    let mut commutes = true;
    let mut deviation = Rational::default();
    let matrix = cy.to_frame().compose_exact(&exact)?.compose(cx.from_frame())?;
    for n in 1..=upto {
        commutes &= exact.compose(&cx.leg_exact(dx, n)?)? == cy.leg_exact(dy, n)?.compose(&m(n))?;
        let lhs = matrix.compose(&cx.leg(dx, n)?)?;
        let rhs = cy.leg(dy, n)?.compose_exact(&m(n))?;
        deviation = deviation.max(lhs.max_deviation(&rhs)?);
    }
    let premise = (1..=upto).all(|n| is_dagger_mono(&m(n)));
    let preserves = Matrix::compose_all([&exact.dagger(), &cy.apex_gram, &exact])? == cx.apex_gram;
    let gram = matrix.dagger().compose(&matrix)?;
    let id = ApproxMatrix::identity(matrix.cols(), precision);
    let tol = pow2_neg(precision);
    let witness = (0..matrix.cols()).find(|&j| gram.col(j).max_deviation(&id.col(j)).map(|d| d > tol).unwrap_or(true));
    let iso_dev = gram.max_deviation(&id)?;
    Ok(Induced {
        exact,
        matrix,
        commutes,
        max_deviation: deviation.to_string(),
        isometry: IsometryReport {
            premise,
            exact: preserves,
            holds: witness.is_none(),
            witness,
            max_deviation: iso_dev.to_string(),
        },
    })
}

/// Compares `colim(X ⊕ Yₙ)` with `X ⊕ colim Yₙ` for a bounded diagram of monos.
pub fn biproduct_preservation_check(
    x: usize,
    diag: &SequentialDiagram,
    bound: &Cocone,
    precision: u32,
) -> Result<Report> {
    let sum = diag.dsum_left(x)?;
    let sum_legs = bound.legs.iter().map(|a| Matrix::identity(x).dsum(a)).collect();
    let sum_bound = Cocone::new(x + bound.apex, sum_legs)?;
    let l = bounded_seq_colimit(&sum, &sum_bound, precision)?;
    let c = bounded_seq_colimit(diag, bound, precision)?;
    let t = diag.tail_index();
    let tol = pow2_neg(precision);
    let mut r = Report::new(format!("biproduct preservation, X of dimension {x}"));
    r.record(
        "dimensions",
        l.apex_dim == x + c.apex_dim,
        format!(
            "colim(X + Y) has dimension {}, X + colim Y has {}",
            l.apex_dim,
            x + c.apex_dim
        ),
    );

    let idx = Matrix::identity(x);
    let phi = l
        .leg_exact(&sum, t)?
        .compose(&right_inverse(&idx.dsum(&c.leg_exact(diag, t)?))?)?;
    let mut commutes = true;
    for n in 1..=t + 1 {
        commutes &= phi.compose(&idx.dsum(&c.leg_exact(diag, n)?))? == l.leg_exact(&sum, n)?;
    }
    r.record("comparison_commutes", commutes, "phi (1 + c_n) = l_n");
    let source_gram = idx.dsum(&c.apex_gram);
    let exact_iso = phi.is_square() && Matrix::compose_all([&phi.dagger(), &l.apex_gram, &phi])? == source_gram;
    r.record(
        "comparison_unitary_exact",
        exact_iso,
        "phi preserves the apex inner products",
    );
    let source_frame = ApproxMatrix::identity(x, precision).dsum(c.from_frame());
    let phi_o = l.to_frame().compose_exact(&phi)?.compose(&source_frame)?;
    let dev = phi_o
        .dagger()
        .compose(&phi_o)?
        .max_deviation(&ApproxMatrix::identity(phi_o.cols(), precision))?;
    let dev2 = phi_o
        .compose(&phi_o.dagger())?
        .max_deviation(&ApproxMatrix::identity(phi_o.rows(), precision))?;
    r.record(
        "comparison_unitary",
        phi_o.rows() == phi_o.cols() && dev <= tol && dev2 <= tol,
        format!("max deviation {}", dev.max(dev2)),
    );

    let s1 = l
        .to_frame()
        .compose_exact(&l.leg_exact(&sum, t)?.compose(&Matrix::inj1(x, diag.object(t)))?)?;
    let s2_exact = Matrix::compose_all([
        &l.leg_exact(&sum, t)?,
        &Matrix::inj2(x, diag.object(t)),
        &right_inverse(&c.leg_exact(diag, t)?)?,
    ])?;
    let s2 = l.to_frame().compose_exact(&s2_exact)?.compose(c.from_frame())?;
    let (r1, r2) = (s1.dagger(), s2.dagger());
    let near = |a: &ApproxMatrix, b: &ApproxMatrix| a.max_deviation(b).map(|d| d <= tol).unwrap_or(false);
    r.record(
        "r1_s1",
        near(&r1.compose(&s1)?, &ApproxMatrix::identity(x, precision)),
        "r1 s1 = 1",
    );
    r.record(
        "r2_s2",
        near(&r2.compose(&s2)?, &ApproxMatrix::identity(c.apex_dim, precision)),
        "r2 s2 = 1",
    );
    r.record(
        "r1_s2",
        near(&r1.compose(&s2)?, &ApproxMatrix::zeros(x, c.apex_dim, precision)),
        "r1 s2 = 0",
    );
    let mut legs_ok = true;
    for n in 1..=t + 1 {
        let lhs = r2.compose(&l.leg(&sum, n)?)?;
        let rhs = c.leg(diag, n)?.compose_exact(&Matrix::proj2(x, diag.object(n)))?;
        legs_ok &= near(&lhs, &rhs);
    }
    r.record("r2_legs", legs_ok, "r2 d_n = c_n p2");
    Ok(r)
}

/// A bounded diagram of monos with at most `max_len` objects of dimension at
/// most `max_dim`, its tail unitary, and the bounding cocone.
pub fn random_bounded_diagram(rng: &mut ChaCha8Rng, max_len: usize, max_dim: usize) -> (SequentialDiagram, Cocone) {
    let len = rng.gen_range(1..=max_len.max(1));
    let apex = rng.gen_range(1..=max_dim.max(1));
    let mut dims = vec![rng.gen_range(1..=apex)];
    for _ in 1..len {
        let top = dims[0];
        dims.insert(0, rng.gen_range(1..=top));
    }
    let mut legs = vec![random_full_rank_contraction(rng, apex, dims[len - 1])];
    let mut morphisms = Vec::new();
    for n in (0..len - 1).rev() {
        let f = random_full_rank_contraction(rng, dims[n + 1], dims[n]);
        legs.insert(0, legs[0].compose(&f).expect("shapes"));
        morphisms.insert(0, f);
    }
    let d = dims[len - 1];
    let tail = if rng.gen_bool(0.5) {
        Matrix::identity(d)
    } else {
        random_unitary(rng, d)
    };
    legs.push(legs[len - 1].compose(&tail.dagger()).expect("shapes"));
    morphisms.push(tail);
    dims.push(d);
    let diag = SequentialDiagram::new(DiagramKind::Monos, dims, morphisms).expect("generated diagram is valid");
    (diag, Cocone::new(apex, legs).expect("generated cocone is valid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fcon::matrix::rmat;
    use crate::scalars::rational::rat;
    use crate::scalars::GaussianRational;
    use rand::SeedableRng;

    const P: u32 = 40;

    fn half() -> Matrix {
        rmat(&[&[(1, 2)]])
    }

    fn diag_half() -> Matrix {
        rmat(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 2)]])
    }

    #[test]
    fn epi_examples() {
        let d = SequentialDiagram::constant(DiagramKind::Epis, half()).unwrap();
        let c = epi_seq_colimit(&d, P, LimitMethod::Exact).unwrap();
        assert_eq!(c.apex_dim, 0);
        assert!(c.exact && c.stabilised_at.is_none());

        let d = SequentialDiagram::constant(DiagramKind::Epis, diag_half()).unwrap();
        let c = epi_seq_colimit(&d, P, LimitMethod::Exact).unwrap();
        assert_eq!(c.apex_dim, 1);
        assert_eq!(c.gram_limit, rmat(&[&[(1, 1), (0, 1)], &[(0, 1), (0, 1)]]));
        assert_eq!(c.apex_gram, Matrix::identity(1));
        assert_eq!(
            c.quotient_map.compose(&Matrix::basis(2, 1)).unwrap(),
            Matrix::zeros(1, 1)
        );
        let r = universal_property_check(
            &c,
            &d,
            &test_cocones_from_colimit(&c, &d, 5, &mut ChaCha8Rng::seed_from_u64(1)).unwrap(),
        );
        assert!(r.passed(), "{r}");

        let d = SequentialDiagram::new(DiagramKind::Epis, vec![3], vec![]).unwrap();
        let c = epi_seq_colimit(&d, P, LimitMethod::Exact).unwrap();
        assert_eq!(
            (c.apex_dim, c.apex_gram.clone(), c.stabilised_at),
            (3, Matrix::identity(3), Some(1))
        );
    }

    #[test]
    fn cauchy_agrees_with_closed_form() {
        for f in [half(), diag_half()] {
            let d = SequentialDiagram::constant(DiagramKind::Epis, f).unwrap();
            let a = epi_seq_colimit(&d, P, LimitMethod::Exact).unwrap();
            let b = epi_seq_colimit(&d, P, LimitMethod::Cauchy).unwrap();
            assert_eq!(a.apex_dim, b.apex_dim);
            assert!(!b.exact);
        }
        let d = SequentialDiagram::constant(DiagramKind::Epis, diag_half())
            .unwrap()
            .with_budget(5);
        assert_eq!(
            epi_seq_colimit(&d, P, LimitMethod::Cauchy).unwrap_err(),
            Error::NoLimitWithinBudget { budget: 5 }
        );
    }

    #[test]
    fn epi_prefix_then_tail() {
        // a projection onto the first coordinate, then a rotation-and-shrink tail
        let p = rmat(&[&[(1, 1), (0, 1), (0, 1)], &[(0, 1), (1, 1), (0, 1)]]);
        let tail = rmat(&[&[(3, 5), (-4, 5)], &[(4, 5), (3, 5)]]).dsum(&Matrix::identity(0));
        let d = SequentialDiagram::from_morphisms(DiagramKind::Epis, vec![p.clone(), tail]).unwrap();
        let c = epi_seq_colimit(&d, P, LimitMethod::Exact).unwrap();
        assert_eq!(c.apex_dim, 2);
        assert_eq!(c.stabilised_at, Some(2));
        assert!(gram_monotonicity_check(&d, 6).passed());
        let hinted = d.clone().with_stabilisation(2);
        assert_eq!(
            epi_seq_colimit(&hinted, P, LimitMethod::Cauchy).unwrap().gram_limit,
            c.gram_limit
        );
        let wrong = d.with_stabilisation(1);
        assert!(matches!(
            epi_seq_colimit(&wrong, P, LimitMethod::Exact),
            Err(Error::InvalidElement(_))
        ));
    }

    #[test]
    fn mono_examples() {
        let d = SequentialDiagram::constant(DiagramKind::Monos, Matrix::identity(2)).unwrap();
        let b = Cocone::new(2, vec![Matrix::identity(2)]).unwrap();
        let c = bounded_seq_colimit(&d, &b, P).unwrap();
        assert_eq!(c.apex_dim, 2);
        assert!(c.legs[0].approx_eq_exact(&Matrix::identity(2)));

        // dim 1 into dim 2, stabilising, bounded in dim 3
        let inc = rmat(&[&[(1, 1)], &[(0, 1)]]);
        let d = SequentialDiagram::from_morphisms(DiagramKind::Monos, vec![inc.clone(), Matrix::identity(2)]).unwrap();
        let a2 = rmat(&[&[(1, 1), (0, 1)], &[(0, 1), (1, 1)], &[(0, 1), (0, 1)]]);
        let b = Cocone::new(3, vec![a2.compose(&inc).unwrap(), a2.clone()]).unwrap();
        let c = bounded_seq_colimit(&d, &b, P).unwrap();
        assert_eq!(c.apex_dim, 2);
        let cocones = test_cocones_from_bound(&d, &b, 10, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert!(universal_property_check(&c, &d, &cocones).passed());

        // scaling the bound down does not shrink the apex
        let small = Cocone::new(1, vec![half()]).unwrap();
        let id1 = SequentialDiagram::constant(DiagramKind::Monos, Matrix::identity(1)).unwrap();
        let c = bounded_seq_colimit(&id1, &small, P).unwrap();
        let m = mediating_morphism(&c, &id1, &Cocone::new(1, vec![Matrix::identity(1)]).unwrap()).unwrap();
        assert!(m.commutes && m.contraction && m.unique);

        let bad = Cocone::new(3, vec![a2.compose(&inc).unwrap().scale_rational(&rat(1, 2)), a2]).unwrap();
        assert_eq!(
            bounded_seq_colimit(&d, &bad, P).unwrap_err(),
            Error::NotCocone { index: 1 }
        );
    }

    #[test]
    fn non_unitary_tail_is_unbounded() {
        let d = SequentialDiagram::constant(DiagramKind::Monos, rmat(&[&[(9, 10)]])).unwrap();
        let b = Cocone::new(1, vec![half()]).unwrap();
        // legs (1/2)(10/9)^(n-1) first exceed 1 at n = 8
        assert_eq!(
            bounded_seq_colimit(&d, &b, P).unwrap_err(),
            Error::NotCocone { index: 8 }
        );
    }

    #[test]
    fn kinds_are_validated() {
        assert_eq!(
            SequentialDiagram::constant(DiagramKind::Epis, rmat(&[&[(1, 2), (1, 2)]])).unwrap_err(),
            Error::DimensionMismatch("the last morphism repeats, so it must be square".into())
        );
        let proj = rmat(&[&[(1, 1), (0, 1)]]);
        assert_eq!(
            SequentialDiagram::from_morphisms(DiagramKind::Monos, vec![proj, Matrix::identity(1)]).unwrap_err(),
            Error::NotMono("f1".into())
        );
        assert_eq!(
            SequentialDiagram::constant(DiagramKind::Epis, rmat(&[&[(2, 1)]])).unwrap_err(),
            Error::NotContraction
        );
    }

    #[test]
    fn induced_examples() {
        let d = SequentialDiagram::constant(DiagramKind::Epis, diag_half()).unwrap();
        let c = epi_seq_colimit(&d, P, LimitMethod::Exact).unwrap();
        let id = induced_morphism(&d, &c, &d, &c, &[Matrix::identity(2)], P).unwrap();
        assert!(id.matrix.approx_eq_exact(&Matrix::identity(1)) && id.commutes);

        let u = Matrix::diag(vec![GaussianRational::new(rat(3, 5), rat(4, 5)), GaussianRational::i()]);
        let ind = induced_morphism(&d, &c, &d, &c, &[u], P).unwrap();
        assert!(ind.isometry.premise && ind.isometry.exact && ind.isometry.holds);
        assert!(ind.matrix.is_unitary());

        let shrink = Matrix::diag(vec![GaussianRational::real(rat(1, 2)), GaussianRational::from_i64(1)]);
        let ind = induced_morphism(&d, &c, &d, &c, &[shrink], P).unwrap();
        assert!(!ind.isometry.premise && !ind.isometry.holds);
        assert_eq!(ind.isometry.witness, Some(0));

        let swap = rmat(&[&[(0, 1), (1, 1)], &[(1, 1), (0, 1)]]);
        assert_eq!(
            induced_morphism(&d, &c, &d, &c, &[swap], P).unwrap_err(),
            Error::NotNatural { index: 1 }
        );
    }

    #[test]
    fn biproducts() {
        let inc = rmat(&[&[(1, 1)], &[(0, 1)]]);
        let d = SequentialDiagram::from_morphisms(DiagramKind::Monos, vec![inc.clone(), Matrix::identity(2)]).unwrap();
        let b = Cocone::new(2, vec![inc, Matrix::identity(2)]).unwrap();
        for x in [0, 1] {
            let r = biproduct_preservation_check(x, &d, &b, P).unwrap();
            assert!(r.passed(), "{r}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let (d, b) = random_bounded_diagram(&mut rng, 5, 4);
            let c = bounded_seq_colimit(&d, &b, P).unwrap();
            assert!(c.apex_dim <= b.apex);
            let cocones = test_cocones_from_bound(&d, &b, 10, &mut rng).unwrap();
            assert!(universal_property_check(&c, &d, &cocones).passed());
            let r = biproduct_preservation_check(rng.gen_range(0..3), &d, &b, P).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn diagrams_round_trip_through_json() {
        let d = SequentialDiagram::constant(DiagramKind::Epis, diag_half())
            .unwrap()
            .with_budget(12);
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(serde_json::from_str::<SequentialDiagram>(&s).unwrap(), d);
        let bad = s.replace("\"2\",\"2\"", "\"2\",\"3\"");
        assert!(serde_json::from_str::<SequentialDiagram>(&bad).is_err());
    }
}
