//! Checks of the ten axioms on finite fragments of the matrix model, the
//! contraction characterisation, and the hom-functor check.
//!
//! Every universally quantified statement is tested on seeded samples plus a
//! fixed list of corner cases: zero maps, identities, permutations,
//! Pythagorean unitaries and contractions of norm exactly 1. A [`Model`]
//! routes the primitive operations the checks use, so each axiom has a
//! [`Mutation`] that breaks it and must be caught.

use std::time::Instant;

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::colimits::{
    bounded_seq_colimit, random_bounded_diagram, test_cocones_from_bound, universal_property_check, Cocone,
    ColimitResult, DiagramKind, SequentialDiagram,
};
use crate::error::{Error, Result};
use crate::fcon::linalg::{is_psd, nullspace, rank};
use crate::fcon::sample::{
    givens, permutation, random_contraction, random_full_rank_contraction, random_isometry, random_matrix,
    random_unitary, PYTHAGOREAN,
};
use crate::fcon::{dagger_kernel, is_contraction, is_dagger_epi, is_unitary, ApproxMatrix, ConMorphism, Matrix};
use crate::scalars::rational::{pow2_neg, rat};
use crate::scalars::GaussianRational;

pub const DEFAULT_SAMPLE_BUDGET: usize = 12;

/// A finite test universe: object dimensions and named generators.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawFragment")]
pub struct Fragment {
    #[serde(with = "crate::json::int_vec")]
    pub objects: Vec<usize>,
    pub generators: Vec<ConMorphism>,
    #[serde(with = "crate::json::int")]
    pub sample_budget: usize,
    #[serde(with = "crate::json::int")]
    pub seed: u64,
}

#[derive(Deserialize)]
struct RawFragment {
    #[serde(with = "crate::json::int_vec")]
    objects: Vec<usize>,
    #[serde(default)]
    generators: Vec<ConMorphism>,
    #[serde(with = "crate::json::int", default = "default_budget")]
    sample_budget: usize,
    #[serde(with = "crate::json::int", default)]
    seed: u64,
}

fn default_budget() -> usize {
    DEFAULT_SAMPLE_BUDGET
}

impl TryFrom<RawFragment> for Fragment {
    type Error = Error;

    fn try_from(r: RawFragment) -> Result<Self> {
        Fragment::new(r.objects, r.generators, r.sample_budget, r.seed)
    }
}

impl Fragment {
    pub fn new(objects: Vec<usize>, generators: Vec<ConMorphism>, sample_budget: usize, seed: u64) -> Result<Self> {
        for (k, g) in generators.iter().enumerate() {
            let (r, c) = g.shape();
            if !objects.contains(&r) || !objects.contains(&c) {
                return Err(Error::DimensionMismatch(format!(
                    "generator {k} is {r}x{c}, not between listed objects"
                )));
            }
        }
        Ok(Self {
            objects,
            generators,
            sample_budget,
            seed,
        })
    }

    /// Objects `0 … 3` with a handful of boundary generators.
    pub fn default_with_seed(seed: u64) -> Self {
        let q = |n, d| GaussianRational::real(rat(n, d));
        let gens = vec![
            Matrix::identity(2),
            Matrix::zeros(2, 3),
            givens(2, 0, 1, (3, 4, 5)),
            Matrix::real(&[vec![rat(1, 2), rat(1, 2)], vec![rat(1, 2), rat(1, 2)]]),
            Matrix::column(vec![q(1, 2), q(1, 2)]),
            Matrix::column(vec![q(3, 5), GaussianRational::new(rat(0, 1), rat(4, 5))]),
            Matrix::row_vector(vec![q(3, 5), q(4, 5)]),
            permutation(&mut ChaCha8Rng::seed_from_u64(seed), 3),
        ];
        let gens = gens
            .into_iter()
            .map(|m| ConMorphism::new(m).expect("corner generators are contractions"))
            .collect();
        Self::new(vec![0, 1, 2, 3], gens, DEFAULT_SAMPLE_BUDGET, seed).expect("shapes match")
    }

    fn dims(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.objects.iter().copied().filter(|&n| n > 0).collect();
        d.sort_unstable();
        d.dedup();
        d
    }
}

impl Default for Fragment {
    fn default() -> Self {
        Self::default_with_seed(0)
    }
}

/// One deliberate defect per axiom, plus one for the disk order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// The unit `I` stands in for the zero object.
    ZeroIsUnit,
    /// `i₂` is the zero map.
    CollapsedInjection,
    /// The diagonal witness is `(1/2, 0)ᵀ`.
    DegenerateDiagonal,
    /// Dagger monos are tested as `AA† = 1`.
    CoisometricSubobjects,
    /// `⊗` loses the last coordinate.
    LossyTensor,
    /// The equaliser of `f, g` is the kernel of `f`.
    KernelOfFirst,
    /// The dagger is the transpose without conjugation.
    TransposeDagger,
    /// The positivity witness skips the Gram comparison.
    UncheckedPositivity,
    /// Colimit legs are halved.
    ScaledColimitLegs,
    /// `Xⁿ` and `Xⁿ⁺¹` are identified, so the shift is an endomorphism.
    ShiftEndomorphism,
    /// Contractions are certified by `A†A ⪯ 2`.
    LooseDisk,
}

impl Mutation {
    pub const ALL: [Mutation; 11] = [
        Mutation::ZeroIsUnit,
        Mutation::CollapsedInjection,
        Mutation::DegenerateDiagonal,
        Mutation::CoisometricSubobjects,
        Mutation::LossyTensor,
        Mutation::KernelOfFirst,
        Mutation::TransposeDagger,
        Mutation::UncheckedPositivity,
        Mutation::ScaledColimitLegs,
        Mutation::ShiftEndomorphism,
        Mutation::LooseDisk,
    ];

    /// The check that must catch this mutation.
    pub fn target(self) -> &'static str {
        match self {
            Mutation::ZeroIsUnit => "zero_object",
            Mutation::CollapsedInjection => "jointly_epic",
            Mutation::DegenerateDiagonal => "nondegenerate",
            Mutation::CoisometricSubobjects => "dagger_simple",
            Mutation::LossyTensor => "separator",
            Mutation::KernelOfFirst | Mutation::TransposeDagger => "equalisers_and_kernels",
            Mutation::UncheckedPositivity => "positivity",
            Mutation::ScaledColimitLegs => "colimits",
            Mutation::ShiftEndomorphism => "dagger_finite",
            Mutation::LooseDisk => "contraction_characterisation",
        }
    }
}

/// The matrix model, optionally with one defect.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Model {
    pub mutation: Option<Mutation>,
}

impl Model {
    pub fn mutated(m: Mutation) -> Self {
        Self { mutation: Some(m) }
    }

    fn has(&self, m: Mutation) -> bool {
        self.mutation == Some(m)
    }

    pub fn zero_dim(&self) -> usize {
        usize::from(self.has(Mutation::ZeroIsUnit))
    }

    pub fn dagger(&self, a: &Matrix) -> Matrix {
        if self.has(Mutation::TransposeDagger) {
            a.transpose()
        } else {
            a.dagger()
        }
    }

    pub fn inj1(&self, m: usize, n: usize) -> Matrix {
        Matrix::inj1(m, n)
    }

    pub fn inj2(&self, m: usize, n: usize) -> Matrix {
        if self.has(Mutation::CollapsedInjection) {
            Matrix::zeros(m + n, n)
        } else {
            Matrix::inj2(m, n)
        }
    }

    pub fn tensor(&self, a: &Matrix, b: &Matrix) -> Matrix {
        let mut t = a.tensor(b);
        if self.has(Mutation::LossyTensor) && t.rows() > 0 {
            let last = t.rows() - 1;
            for j in 0..t.cols() {
                t[(last, j)] = GaussianRational::zero();
            }
        }
        t
    }

    pub fn is_dagger_mono(&self, a: &Matrix) -> bool {
        let (p, n) = if self.has(Mutation::CoisometricSubobjects) {
            (a.compose(&self.dagger(a)), a.rows())
        } else {
            (self.dagger(a).compose(a), a.cols())
        };
        p.is_ok_and(|p| p == Matrix::identity(n))
    }

    pub fn is_contraction(&self, a: &Matrix) -> bool {
        if !self.has(Mutation::LooseDisk) {
            return is_contraction(a);
        }
        let gap = Matrix::identity(a.cols())
            .scale_rational(&rat(2, 1))
            .sub(&a.dagger().compose(a).expect("square"));
        gap.and_then(|g| is_psd(&g)).unwrap_or(false)
    }

    pub fn diagonal(&self) -> Matrix {
        let h = GaussianRational::real(rat(1, 2));
        let second = if self.has(Mutation::DegenerateDiagonal) {
            GaussianRational::zero()
        } else {
            h.clone()
        };
        Matrix::column(vec![h, second])
    }

    pub fn equaliser(&self, f: &Matrix, g: &Matrix, precision: u32) -> Result<ApproxMatrix> {
        if self.has(Mutation::KernelOfFirst) {
            return Ok(dagger_kernel(f, precision));
        }
        crate::fcon::dagger_equaliser(f, g, precision)
    }

    pub fn positivity_witness(&self, x: &Matrix, y: &Matrix) -> Result<Option<Matrix>> {
        if self.has(Mutation::UncheckedPositivity) {
            let xxd = x.compose(&x.dagger())?;
            let inv = crate::fcon::linalg::inverse(&xxd)?;
            return Ok(Some(Matrix::compose_all([y, &x.dagger(), &inv])?));
        }
        crate::fcon::positivity_witness(x, y)
    }

    pub fn colimit(&self, diag: &SequentialDiagram, bound: &Cocone, precision: u32) -> Result<ColimitResult> {
        let mut c = bounded_seq_colimit(diag, bound, precision)?;
        if self.has(Mutation::ScaledColimitLegs) {
            c.legs_exact = c.legs_exact.iter().map(|l| l.scale_rational(&rat(1, 2))).collect();
        }
        Ok(c)
    }

    /// Maps the model treats as endomorphisms of `ℂⁿ` with `f†f = 1`.
    pub fn isometric_endomorphisms(&self, n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Matrix> {
        let mut out = vec![Matrix::identity(n), permutation(rng, n)];
        if n >= 2 {
            out.extend(PYTHAGOREAN.iter().map(|&t| givens(n, 0, n - 1, t)));
        }
        out.extend((0..count).map(|_| random_unitary(rng, n)));
        if self.has(Mutation::ShiftEndomorphism) {
            out.push(Matrix::inj1(n, 1));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomResult {
    #[serde(with = "crate::json::int")]
    pub index: usize,
    pub name: String,
    /// Which axiom numbers the check covers.
    pub axiom: String,
    pub status: AxiomStatus,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(with = "crate::json::int")]
    pub samples: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    #[serde(with = "crate::json::int")]
    pub pass: usize,
    #[serde(with = "crate::json::int")]
    pub fail: usize,
    #[serde(with = "crate::json::int")]
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub name: String,
    #[serde(with = "crate::json::int")]
    pub micros: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    #[serde(with = "crate::json::int")]
    pub seed: u64,
    #[serde(with = "crate::json::int")]
    pub precision: u32,
    #[serde(default)]
    pub mutation: Option<Mutation>,
    pub results: Vec<AxiomResult>,
    pub counts: Counts,
    /// Wall-clock per check; not part of the determinism contract.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub timings: Vec<Timing>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.counts.fail == 0
    }

    pub fn get(&self, name: &str) -> Option<&AxiomResult> {
        self.results.iter().find(|r| r.name == name)
    }

    pub fn without_timings(&self) -> Self {
        Self {
            timings: Vec::new(),
            ..self.clone()
        }
    }
}

/// The result of one check before it is placed in the report.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: AxiomStatus,
    pub detail: String,
    pub witness: Option<Value>,
    pub samples: usize,
}

impl Outcome {
    fn pass(samples: usize, detail: impl Into<String>) -> Self {
        Self {
            status: AxiomStatus::Pass,
            detail: detail.into(),
            witness: None,
            samples,
        }
    }

    fn fail(samples: usize, detail: impl Into<String>, witness: Value) -> Self {
        Self {
            status: AxiomStatus::Fail,
            detail: detail.into(),
            witness: Some(witness),
            samples,
        }
    }

    fn skipped(reason: impl Into<String>) -> Self {
        Self {
            status: AxiomStatus::Skipped,
            detail: reason.into(),
            witness: None,
            samples: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == AxiomStatus::Pass
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialise")
}

fn ctx(model: &Model, frag: &Fragment, index: usize) -> (Model, Fragment, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(frag.seed);
    rng.set_stream(index as u64);
    (*model, frag.clone(), rng)
}

type CheckFn = fn(&Model, &Fragment, &mut ChaCha8Rng, u32) -> Outcome;

const CHECKS: [(&str, &str, CheckFn); 11] = [
    ("zero_object", "1", zero_object),
    ("jointly_epic", "2", jointly_epic),
    ("nondegenerate", "3", nondegenerate),
    ("dagger_simple", "4", dagger_simple),
    ("separator", "5", separator),
    ("equalisers_and_kernels", "6,7", equalisers_and_kernels),
    ("positivity", "8", positivity),
    ("colimits", "9", colimits),
    ("dagger_finite", "10", dagger_finite),
    (
        "contraction_characterisation",
        "contraction",
        contraction_characterisation,
    ),
    ("hom_functor", "hom", hom_functor),
];

pub fn check_names() -> impl Iterator<Item = &'static str> {
    CHECKS.iter().map(|c| c.0)
}

/// Runs one check by name with the same seeding as [`run_all`].
pub fn run_check(name: &str, model: &Model, frag: &Fragment, precision: u32) -> Option<Outcome> {
    let index = CHECKS.iter().position(|c| c.0 == name)?;
    let (m, f, mut rng) = ctx(model, frag, index);
    Some((CHECKS[index].2)(&m, &f, &mut rng, precision))
}

/// All checks, concurrently, merged in index order.
pub fn run_all(model: &Model, frag: &Fragment, precision: u32) -> AxiomReport {
    let runs: Vec<(Outcome, u64)> = std::thread::scope(|s| {
        let handles: Vec<_> = CHECKS
            .iter()
            .enumerate()
            .map(|(i, &(_, _, check))| {
                let (m, f, mut rng) = ctx(model, frag, i);
                s.spawn(move || {
                    let t = Instant::now();
                    let o = check(&m, &f, &mut rng, precision);
                    (o, t.elapsed().as_micros() as u64)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("checks do not panic"))
            .collect()
    });
    let mut counts = Counts::default();
    let mut results = Vec::new();
    let mut timings = Vec::new();
    for (i, ((name, axiom, _), (o, micros))) in CHECKS.iter().zip(runs).enumerate() {
        match o.status {
            AxiomStatus::Pass => counts.pass += 1,
            AxiomStatus::Fail => counts.fail += 1,
            AxiomStatus::Skipped => counts.skipped += 1,
        }
        results.push(AxiomResult {
            index: i + 1,
            name: name.to_string(),
            axiom: axiom.to_string(),
            status: o.status,
            detail: o.detail,
            witness: o.witness,
            samples: o.samples,
        });
        timings.push(Timing {
            name: name.to_string(),
            micros,
        });
    }
    AxiomReport {
        seed: frag.seed,
        precision,
        mutation: model.mutation,
        results,
        counts,
        timings,
    }
}

fn zero_object(model: &Model, frag: &Fragment, rng: &mut ChaCha8Rng, _p: u32) -> Outcome {
    let z = model.zero_dim();
    let mut samples = 0;
    for &x in &frag.objects {
        for (rows, cols) in [(z, x), (x, z)] {
            let mut hom = vec![Matrix::zeros(rows, cols)];
            hom.extend((0..3).map(|_| random_contraction(rng, rows, cols)));
            samples += hom.len();
            if let Some(other) = hom.iter().find(|h| **h != hom[0]) {
                return Outcome::fail(
                    samples,
                    format!("two distinct maps {cols} -> {rows} through the zero object"),
                    json!({ "object": x.to_string(), "zero_dim": z.to_string(), "maps": [to_json(&hom[0]), to_json(other)] }),
                );
            }
        }
    }
    for &m in &frag.objects {
        for &n in &frag.objects {
            samples += 1;
            let i1 = model.inj1(m, n);
            let block = Matrix::identity(m).dsum(&Matrix::zeros(n, z));
            if i1 != block || model.dagger(&i1) != Matrix::proj1(m, n) {
                return Outcome::fail(
                    samples,
                    "i1 is not (I; 0) with adjoint p1",
                    json!({ "m": m.to_string(), "n": n.to_string(), "i1": to_json(&i1) }),
                );
            }
        }
    }
    Outcome::pass(
        samples,
        "hom-sets into and out of the zero object are singletons; i1 = (I; 0), p1 = i1†",
    )
}

fn jointly_epic(model: &Model, frag: &Fragment, rng: &mut ChaCha8Rng, _p: u32) -> Outcome {
    let dims = frag.dims();
    if dims.is_empty() {
        return Outcome::skipped("no nonzero objects");
    }
    let mut samples = 0;
    for &m in &dims {
        for &n in &dims {
            samples += 1;
            let s = Matrix::hstack(m + n, &[model.inj1(m, n), model.inj2(m, n)]).expect("shapes");
            if rank(&s) != m + n {
                return Outcome::fail(
                    samples,
                    format!("[i1 | i2] has rank {} < {}", rank(&s), m + n),
                    json!({ "m": m.to_string(), "n": n.to_string(), "stacked": to_json(&s) }),
                );
            }
            let z = dims[rng.gen_range(0..dims.len())];
            let f = random_contraction(rng, z, m + n);
            let mut g = f.clone();
            let (r, c) = (rng.gen_range(0..z), rng.gen_range(0..m + n));
            g[(r, c)] = &g[(r, c)] + &GaussianRational::real(rat(1, 8));
            let agree = |i: &Matrix| f.compose(i).ok() == g.compose(i).ok();
            if agree(&model.inj1(m, n)) && agree(&model.inj2(m, n)) {
                return Outcome::fail(
                    samples,
                    "f != g agree on both injections",
                    json!({ "f": to_json(&f), "g": to_json(&g) }),
                );
            }
        }
    }
    Outcome::pass(samples, "[i1 | i2] has full rank for every pair of objects")
}

fn nondegenerate(model: &Model, _frag: &Fragment, _rng: &mut ChaCha8Rng, _p: u32) -> Outcome {
    let q = |n, d| GaussianRational::real(rat(n, d));
    let candidates = [model.diagonal(), Matrix::column(vec![q(3, 5), q(4, 5)])];
    for (k, d) in candidates.iter().enumerate() {
        let p1 = model.dagger(&model.inj1(1, 1)).compose(d).expect("shapes");
        let p2 = model.dagger(&model.inj2(1, 1)).compose(d).expect("shapes");
        if !model.is_contraction(d) || p1.is_zero() || p2.is_zero() {
            return Outcome::fail(
                k + 1,
                "diagonal witness is degenerate or not a contraction",
                json!({ "d": to_json(d) }),
            );
        }
    }
    Outcome::pass(
        candidates.len(),
        "d = (1/2, 1/2)ᵀ and (3/5, 4/5)ᵀ are contractions with both components nonzero",
    )
}

fn dagger_simple(model: &Model, _frag: &Fragment, rng: &mut ChaCha8Rng, _p: u32) -> Outcome {
    let mut candidates: Vec<Matrix> = vec![
        Matrix::zeros(1, 0),
        Matrix::identity(1),
        Matrix::scalar(GaussianRational::i()),
    ];
    candidates.push(Matrix::scalar(crate::fcon::sample::unit_phase(rng)));
    candidates.push(Matrix::scalar(GaussianRational::real(rat(1, 2))));
    for k in 2..=3 {
        candidates.extend((0..k).map(|i| Matrix::basis(k, i).dagger()));
        for &(a, b, c) in &PYTHAGOREAN {
            let mut row = vec![GaussianRational::zero(); k];
            row[0] = GaussianRational::real(rat(a, c));
            row[k - 1] = GaussianRational::real(rat(b, c));
            candidates.push(Matrix::row_vector(row));
        }
        candidates.push(random_contraction(rng, 1, k));
    }
    let mut found = std::collections::BTreeSet::new();
    for a in &candidates {
        let k = a.cols();
        if k >= 2 && rank(&model.dagger(a).compose(a).expect("shapes")) > 1 {
            return Outcome::fail(
                candidates.len(),
                "A†A has rank above 1 for a row A",
                json!({ "a": to_json(a) }),
            );
        }
        if model.is_dagger_mono(a) {
            found.insert(k);
            if k >= 2 {
                return Outcome::fail(
                    candidates.len(),
                    format!("dagger monic {k} -> 1 found"),
                    json!({ "k": k.to_string(), "a": to_json(a) }),
                );
            }
        }
    }
    if found != [0, 1].into_iter().collect() {
        return Outcome::fail(
            candidates.len(),
            format!("dagger subobjects of I found for k in {found:?}"),
            json!({ "found": found.iter().map(ToString::to_string).collect::<Vec<_>>() }),
        );
    }
    Outcome::pass(
        candidates.len(),
        "isometries k -> 1 exist only for k in {0, 1}: for k >= 2, rank(A†A) <= 1 < k",
    )
}

fn separator(model: &Model, frag: &Fragment, rng: &mut ChaCha8Rng, _p: u32) -> Outcome {
    let dims: Vec<usize> = frag.dims().into_iter().filter(|&d| d <= 3).collect();
    if dims.is_empty() {
        return Outcome::skipped("no nonzero objects of dimension at most 3");
    }
    let mut samples = 0;
    let pick = |rng: &mut ChaCha8Rng| dims[rng.gen_range(0..dims.len())];
    let triples: Vec<(usize, usize, usize)> = (0..frag.sample_budget.max(1))
        .map(|_| (pick(rng), pick(rng), pick(rng)))
        .collect();
    for (t, &(x, y, z)) in triples.iter().enumerate() {
        let f = random_contraction(rng, z, x * y);
        let mut pairs = vec![(f.clone(), f.clone()), (f.clone(), random_contraction(rng, z, x * y))];
        if t == 0 {
            for r in 0..z {
                for c in 0..x * y {
                    let mut g = f.clone();
                    g[(r, c)] = &g[(r, c)] + &GaussianRational::real(rat(1, 4));
                    pairs.push((f.clone(), g));
                }
            }
        }
        for (f, g) in pairs {
            samples += 1;
            if f == g {
                continue;
            }
            let separated = (0..x).any(|i| {
                (0..y).any(|j| {
                    let v = model.tensor(&Matrix::basis(x, i), &Matrix::basis(y, j));
                    f.compose(&v).ok() != g.compose(&v).ok()
                })
            });
            if !separated {
                return Outcome::fail(
                    samples,
                    format!("f != g : {x}⊗{y} -> {z} agree on every e_i ⊗ e_j"),
                    json!({ "f": to_json(&f), "g": to_json(&g) }),
                );
            }
        }
    }
    Outcome::pass(
        samples,
        "sampled universal: every sampled f != g is separated by some e_i ⊗ e_j",
    )
}

fn equalisers_and_kernels(model: &Model, frag: &Fragment, rng: &mut ChaCha8Rng, precision: u32) -> Outcome {
    let dims = frag.dims();
    if dims.is_empty() {
        return Outcome::skipped("no nonzero objects");
    }
    let mut samples = 0;
    let mut pairs: Vec<(Matrix, Matrix)> = Vec::new();
    for _ in 0..frag.sample_budget.max(1) {
        let (x, y) = (dims[rng.gen_range(0..dims.len())], dims[rng.gen_range(0..dims.len())]);
        let f = random_contraction(rng, y, x);
        let mut keep = Matrix::identity(x);
        keep[(x - 1, x - 1)] = GaussianRational::zero();
        pairs.push((f.clone(), f.compose(&keep).expect("square")));
        pairs.push((f.clone(), f.clone()));
        pairs.push((f, random_contraction(rng, y, x)));
    }
    for g in &frag.generators {
        pairs.push((g.matrix().clone(), Matrix::zeros(g.shape().0, g.shape().1)));
    }
    for (f, g) in &pairs {
        samples += 1;
        let e = match model.equaliser(f, g, precision) {
            Ok(e) => e,
            Err(err) => return Outcome::fail(samples, err.to_string(), json!({ "f": to_json(f), "g": to_json(g) })),
        };
        let fe = ApproxMatrix::from_exact(f, precision).compose(&e).expect("shapes");
        let ge = ApproxMatrix::from_exact(g, precision).compose(&e).expect("shapes");
        let k = nullspace(&f.sub(g).expect("shapes"));
        let ee = e.compose(&e.dagger()).expect("shapes");
        let factors = k
            .columns()
            .iter()
            .all(|v| ee.compose_exact(v).is_ok_and(|w| w.approx_eq_exact(v)));
        if !e.is_isometry() || !fe.approx_eq(&ge) || e.cols() != k.cols() || !factors {
            return Outcome::fail(
                samples,
                "dagger equaliser fails its universal property",
                json!({ "f": to_json(f), "g": to_json(g), "equaliser_dim": e.cols().to_string(), "kernel_dim": k.cols().to_string() }),
            );
        }
    }
    let q = |n, d| GaussianRational::real(rat(n, d));
    let mut monos = vec![
        Matrix::column(vec![q(1, 1), q(0, 1)]),
        Matrix::identity(2),
        Matrix::column(vec![q(3, 5), q(4, 5)]),
        Matrix::column(vec![q(3, 5), GaussianRational::new(rat(0, 1), rat(4, 5))]),
    ];
    for _ in 0..frag.sample_budget.max(1) {
        let y = dims[rng.gen_range(0..dims.len())];
        let x = rng.gen_range(1..=y);
        monos.push(random_isometry(rng, y, x));
    }
    for m in &monos {
        samples += 1;
        let fail = |why: &str| Outcome::fail(samples, why.to_string(), json!({ "m": to_json(m) }));
        if !model.is_dagger_mono(m) {
            return fail("generated isometry is not dagger monic in the model");
        }
        let coker = Matrix::identity(m.rows())
            .sub(&m.compose(&model.dagger(m)).expect("shapes"))
            .expect("shapes");
        let k = nullspace(&coker);
        let joint = Matrix::hstack(m.rows(), &[k.clone(), m.clone()]).expect("shapes");
        if rank(&k) != m.cols() || rank(&joint) != m.cols() {
            return fail("m is not the kernel of its cokernel");
        }
        let kk = dagger_kernel(&coker, precision);
        let proj = kk.compose(&kk.dagger()).expect("shapes");
        if !proj.approx_eq_exact(&m.compose(&m.dagger()).expect("shapes")) {
            return fail("ker(coker m) has a different range from m");
        }
    }
    Outcome::pass(
        samples,
        "equalisers are universal; every sampled dagger mono is ker(coker m)",
    )
}

fn positivity(model: &Model, frag: &Fragment, rng: &mut ChaCha8Rng, _p: u32) -> Outcome {
    let dims = frag.dims();
    if dims.is_empty() {
        return Outcome::skipped("no nonzero objects");
    }
    let mut samples = 0;
    for t in 0..frag.sample_budget.max(1) {
        let xd = dims[rng.gen_range(0..dims.len())];
        let ad = xd + rng.gen_range(0..=1);
        let x = random_full_rank_contraction(rng, xd, ad);
        let u = match t {
            0 => Matrix::identity(xd),
            1 if xd >= 2 => givens(xd, 0, 1, (3, 4, 5)),
            _ => random_unitary(rng, xd),
        };
        let y = u.compose(&x).expect("shapes");
        samples += 1;
        match model.positivity_witness(&x, &y) {
            Ok(Some(f)) if is_unitary(&f) && f.compose(&x).ok().as_ref() == Some(&y) => {}
            other => {
                return Outcome::fail(
                    samples,
                    "no unitary witness for y = u x",
                    json!({ "x": to_json(&x), "y": to_json(&y), "found": to_json(&other.ok().flatten()) }),
                )
            }
        }
        for s in [rat(2, 1), rat(1, 2)] {
            samples += 1;
            let y = x.scale_rational(&s);
            if let Ok(Some(f)) = model.positivity_witness(&x, &y) {
                return Outcome::fail(
                    samples,
                    "witness returned although y†y != x†x",
                    json!({ "x": to_json(&x), "y": to_json(&y), "witness": to_json(&f) }),
                );
            }
        }
    }
    Outcome::pass(samples, "x†x = y†y exactly when a unitary carries x to y")
}

fn colimits(model: &Model, frag: &Fragment, rng: &mut ChaCha8Rng, precision: u32) -> Outcome {
    let mut cases: Vec<(SequentialDiagram, Cocone)> = Vec::new();
    let id = SequentialDiagram::constant(DiagramKind::Monos, Matrix::identity(2)).expect("valid");
    cases.push((id, Cocone::new(2, vec![Matrix::identity(2); 2]).expect("valid")));
    let chain = SequentialDiagram::new(
        DiagramKind::Monos,
        vec![1, 2, 2],
        vec![Matrix::inj1(1, 1), Matrix::identity(2)],
    )
    .expect("valid");
    let l2 = Matrix::inj1(2, 1);
    let l1 = l2.compose(&Matrix::inj1(1, 1)).expect("shapes");
    cases.push((chain, Cocone::new(3, vec![l1, l2.clone(), l2]).expect("valid")));
    let half = GaussianRational::real(rat(1, 2));
    let squash = Matrix::row_vector(vec![half.clone(), half]);
    let rejected = SequentialDiagram::new(DiagramKind::Monos, vec![2, 1, 1], vec![squash, Matrix::identity(1)]);
    if !matches!(rejected, Err(Error::NotMono(_))) {
        return Outcome::fail(
            1,
            "a non-mono chain was accepted",
            json!({ "result": format!("{rejected:?}") }),
        );
    }
    let max_dim = frag.dims().last().copied().unwrap_or(1).clamp(1, 3);
    cases.extend((0..frag.sample_budget.div_ceil(2).max(1)).map(|_| random_bounded_diagram(rng, 4, max_dim)));
    for (k, (diag, bound)) in cases.iter().enumerate() {
        let witness = || json!({ "diagram": to_json(diag), "bound": to_json(bound) });
        let colim = match model.colimit(diag, bound, precision) {
            Ok(c) => c,
            Err(e) => return Outcome::fail(k + 2, e.to_string(), witness()),
        };
        if colim.apex_dim != diag.object(diag.tail_index()) {
            return Outcome::fail(k + 2, format!("apex dimension {}", colim.apex_dim), witness());
        }
        let cocones = match test_cocones_from_bound(diag, bound, 3, rng) {
            Ok(c) => c,
            Err(e) => return Outcome::fail(k + 2, e.to_string(), witness()),
        };
        let r = universal_property_check(&colim, diag, &cocones);
        if !r.passed() {
            let failed: Vec<&str> = r.failures().map(|c| c.name.as_str()).collect();
            return Outcome::fail(
                k + 2,
                format!("universal property fails: {}", failed.join(", ")),
                witness(),
            );
        }
    }
    Outcome::pass(
        cases.len() + 1,
        "every generated bounded diagram has a colimit with the universal property",
    )
}

fn dagger_finite(model: &Model, frag: &Fragment, rng: &mut ChaCha8Rng, _p: u32) -> Outcome {
    let dims = frag.dims();
    if dims.is_empty() {
        return Outcome::skipped("no nonzero objects");
    }
    let mut samples = 0;
    for &n in &dims {
        for f in model.isometric_endomorphisms(n, frag.sample_budget, rng) {
            samples += 1;
            if model.is_dagger_mono(&f) && !is_dagger_epi(&f) {
                return Outcome::fail(
                    samples,
                    format!("f†f = 1 but ff† != 1 on dimension {n}"),
                    json!({ "f": to_json(&f) }),
                );
            }
        }
    }
    Outcome::pass(
        samples,
        "f†f = 1 forces rank f = dim X, so f is invertible with inverse f† and ff† = 1",
    )
}

/// A unit vector as `[re, im]` pairs.
pub type UnitVector = Vec<[f64; 2]>;

/// Outcome of comparing the exact contraction test with `|⟨fx, y⟩|` on unit vectors.
#[derive(Clone, Debug, Serialize)]
pub struct Characterisation {
    pub certified: bool,
    /// Largest `|⟨fx, y⟩|` over random unit vectors.
    pub sampled_max: f64,
    /// `‖f‖` from power iteration on `f†f`.
    pub power_max: f64,
    pub agrees: bool,
    /// Unit `x, y` with `|⟨fx, y⟩| > 1` as `[re, im]` pairs, when `f` is not certified.
    pub witness: Option<(UnitVector, UnitVector)>,
}

fn unit(v: &[Complex64]) -> Vec<Complex64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n == 0.0 {
        return v.to_vec();
    }
    v.iter().map(|z| z / n).collect()
}

fn apply(a: &[Vec<Complex64>], x: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}

fn apply_adjoint(a: &[Vec<Complex64>], y: &[Complex64], cols: usize) -> Vec<Complex64> {
    (0..cols)
        .map(|j| a.iter().zip(y).map(|(row, q)| row[j].conj() * q).sum())
        .collect()
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    unit(
        &(0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect::<Vec<_>>(),
    )
}

fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(p, q)| p.conj() * q).sum()
}

/// Compares `certified` with the unit-vector characterisation of contractions
/// at tolerance `2^(5 − precision)`.
pub fn characterise(
    f: &Matrix,
    certified: bool,
    samples: usize,
    precision: u32,
    rng: &mut ChaCha8Rng,
) -> Characterisation {
    let a = f.to_complex64();
    let (rows, cols) = f.shape();
    let tol = 2f64.powi(5 - precision as i32);
    let mut sampled_max = 0f64;
    for _ in 0..samples {
        let (x, y) = (random_unit(rng, cols), random_unit(rng, rows));
        sampled_max = sampled_max.max(inner(&y, &apply(&a, &x)).norm());
    }
    let mut x = random_unit(rng, cols);
    for _ in 0..200 {
        let next = unit(&apply_adjoint(&a, &apply(&a, &x), cols));
        if next.iter().all(|z| *z == Complex64::zero()) {
            break;
        }
        x = next;
    }
    let fx = apply(&a, &x);
    let y = unit(&fx);
    let power_max = if cols == 0 || rows == 0 {
        0.0
    } else {
        inner(&y, &fx).norm()
    };
    let best = sampled_max.max(power_max);
    let (agrees, witness) = if certified {
        (best <= 1.0 + tol, None)
    } else {
        let pairs = |v: &[Complex64]| v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>();
        (power_max > 1.0, (power_max > 1.0).then(|| (pairs(&x), pairs(&y))))
    };
    Characterisation {
        certified,
        sampled_max,
        power_max,
        agrees,
        witness,
    }
}

/// [`characterise`] against the exact certificate of `I − f†f ⪰ 0`.
pub fn contraction_characterisation_check(
    f: &Matrix,
    samples: usize,
    precision: u32,
    rng: &mut ChaCha8Rng,
) -> Characterisation {
    characterise(f, is_contraction(f), samples, precision, rng)
}

fn contraction_characterisation(model: &Model, frag: &Fragment, rng: &mut ChaCha8Rng, precision: u32) -> Outcome {
    let q = |n, d| GaussianRational::real(rat(n, d));
    let mut fs = vec![
        Matrix::identity(1),
        Matrix::identity(2),
        Matrix::scalar(q(2, 1)),
        Matrix::scalar(q(5, 4)),
        Matrix::real(&[vec![rat(1, 2), rat(1, 2)], vec![rat(1, 2), rat(1, 2)]]),
        Matrix::row_vector(vec![q(3, 5), q(4, 5)]),
    ];
    fs.extend(frag.generators.iter().map(|g| g.matrix().clone()));
    let dims = frag.dims();
    for _ in 0..frag.sample_budget {
        let (r, c) = if dims.is_empty() {
            (1, 1)
        } else {
            (dims[rng.gen_range(0..dims.len())], dims[rng.gen_range(0..dims.len())])
        };
        let f = random_contraction(rng, r, c);
        fs.push(f.scale_rational(&(rat(1, 1) + pow2_neg(rng.gen_range(0..4)))));
        fs.push(f);
    }
    for (k, f) in fs.iter().enumerate() {
        let c = characterise(f, model.is_contraction(f), 16, precision, rng);
        if !c.agrees {
            return Outcome::fail(
                k + 1,
                format!(
                    "certified = {} but max |<fx, y>| = {:.6}",
                    c.certified,
                    c.power_max.max(c.sampled_max)
                ),
                json!({ "f": to_json(f), "characterisation": to_json(&c) }),
            );
        }
    }
    Outcome::pass(
        fs.len(),
        "the exact certificate agrees with |<fx, y>| <= 1 on unit vectors",
    )
}

fn hom_functor(model: &Model, frag: &Fragment, rng: &mut ChaCha8Rng, _p: u32) -> Outcome {
    let dims = frag.dims();
    if dims.is_empty() {
        return Outcome::skipped("no nonzero objects");
    }
    let ip = |a: &Matrix, b: &Matrix| model.dagger(a).compose(b).map(|m| m[(0, 0)].clone()).expect("vectors");
    let mut samples = 0;
    let corner = Matrix::column(vec![GaussianRational::from_i64(1), GaussianRational::i()]);
    for t in 0..frag.sample_budget.max(1) {
        let (x, y) = (dims[rng.gen_range(0..dims.len())], dims[rng.gen_range(0..dims.len())]);
        samples += 1;
        let basis: Vec<Matrix> = (0..x).map(|i| Matrix::basis(x, i)).collect();
        if rank(&Matrix::hstack(x, &basis).expect("shapes")) != x {
            return Outcome::fail(samples, "C(I, X) is not dim X", json!({ "x": x.to_string() }));
        }
        let f = random_contraction(rng, y, x);
        let v = if t == 0 && x == 2 {
            corner.clone()
        } else {
            random_matrix(rng, x, 1)
        };
        let w = random_matrix(rng, y, 1);
        let fv = f.compose(&v).expect("shapes");
        let by_hand = Matrix::column(
            (0..y)
                .map(|i| (0..x).fold(GaussianRational::zero(), |s, k| &s + &(&f[(i, k)] * &v[(k, 0)])))
                .collect(),
        );
        if fv != by_hand {
            return Outcome::fail(
                samples,
                "composition is not application",
                json!({ "f": to_json(&f), "x": to_json(&v) }),
            );
        }
        if ip(&w, &fv) != ip(&model.dagger(&f).compose(&w).expect("shapes"), &v) {
            return Outcome::fail(
                samples,
                "<y, fx> != <f†y, x>",
                json!({ "f": to_json(&f), "x": to_json(&v), "y": to_json(&w) }),
            );
        }
        let kron = Matrix::column((0..x * y).map(|i| &v[(i / y, 0)] * &w[(i % y, 0)]).collect());
        if model.tensor(&v, &w) != kron {
            return Outcome::fail(
                samples,
                "x ⊗ y is not the Kronecker product",
                json!({ "x": to_json(&v), "y": to_json(&w) }),
            );
        }
        let s = Matrix::hstack(x + y, &[model.inj1(x, y), model.inj2(x, y)]).expect("shapes");
        if rank(&s) != x + y {
            return Outcome::fail(
                samples,
                "dim C(I, X ⊕ Y) != dim X + dim Y",
                json!({ "x": x.to_string(), "y": y.to_string() }),
            );
        }
        for u in basis.iter().chain([&v]) {
            let n = ip(u, u);
            let positive = n.im.is_zero() && n.re > rat(0, 1);
            if !u.is_zero() && !positive {
                return Outcome::fail(
                    samples,
                    format!("<x, x> = {n} is not positive"),
                    json!({ "x": to_json(u), "inner": to_json(&n) }),
                );
            }
        }
    }
    Outcome::pass(
        samples,
        "hom-vectors form dim-X spaces with an exact adjoint-compatible positive inner product",
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 40;

    #[test]
    fn default_fragment_passes() {
        for seed in 0..3 {
            let r = run_all(&Model::default(), &Fragment::default_with_seed(seed), P);
            assert!(
                r.passed(),
                "{:#?}",
                r.results
                    .iter()
                    .filter(|x| x.status != AxiomStatus::Pass)
                    .collect::<Vec<_>>()
            );
            assert_eq!(r.counts.pass, 11);
        }
    }

    #[test]
    fn every_mutation_is_caught() {
        let frag = Fragment::default();
        for m in Mutation::ALL {
            let o = run_check(m.target(), &Model::mutated(m), &frag, P).unwrap();
            assert_eq!(o.status, AxiomStatus::Fail, "{m:?} not caught: {}", o.detail);
            assert!(o.witness.is_some());
        }
    }

    #[test]
    fn transpose_dagger_is_seen_by_the_hom_check_too() {
        let o = run_check(
            "hom_functor",
            &Model::mutated(Mutation::TransposeDagger),
            &Fragment::default(),
            P,
        )
        .unwrap();
        assert_eq!(o.status, AxiomStatus::Fail);
    }

    #[test]
    fn reports_are_deterministic_and_round_trip() {
        let frag = Fragment::default_with_seed(5);
        let a = run_all(&Model::default(), &frag, P).without_timings();
        let b = run_all(&Model::default(), &frag, P).without_timings();
        let (sa, sb) = (serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(sa, sb);
        assert_eq!(serde_json::from_str::<AxiomReport>(&sa).unwrap(), a);
    }

    #[test]
    fn characterisation_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = contraction_characterisation_check(&Matrix::identity(2), 50, P, &mut rng);
        assert!(c.certified && c.agrees && c.sampled_max <= 1.0 + 1e-9);
        let c = contraction_characterisation_check(&Matrix::scalar(GaussianRational::from_i64(2)), 10, P, &mut rng);
        assert!(!c.certified && c.agrees && (c.power_max - 2.0).abs() < 1e-12);
        let half = Matrix::real(&[vec![rat(1, 2), rat(1, 2)], vec![rat(1, 2), rat(1, 2)]]);
        let c = contraction_characterisation_check(&half, 50, P, &mut rng);
        assert!(c.certified && c.agrees && (c.power_max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fragment_json() {
        let f = Fragment::default();
        let s = serde_json::to_string(&f).unwrap();
        let back: Fragment = serde_json::from_str(&s).unwrap();
        assert_eq!(back.generators, f.generators);
        let bad = format!(
            r#"{{"objects": [1], "generators": [{}]}}"#,
            serde_json::to_string(&Matrix::identity(2)).unwrap()
        );
        assert!(serde_json::from_str::<Fragment>(&bad).is_err());
        let loose: Fragment = serde_json::from_str(r#"{"objects": [0, 2]}"#).unwrap();
        assert_eq!(loose.sample_budget, DEFAULT_SAMPLE_BUDGET);
    }
}
