//! The `fcon` command line: JSON in, JSON reports out.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails or a budget
//! runs out (the report is still written), 2 for unreadable or invalid input.

use std::ffi::OsString;
use std::fmt::Display;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::axioms::{run_all, Fragment, Model, Mutation};
use crate::colimits::{
    gram_monotonicity_check, seq_colimit, test_cocones_from_bound, universal_property_check, Cocone, DiagramKind,
    LimitMethod, SequentialDiagram,
};
use crate::error::Error;
use crate::fcon::linalg::rank;
use crate::fcon::{epi_dagger_mono_factorise, halmos_dilation, ConMorphism, Matrix};
use crate::json::SCHEMA_VERSION;
use crate::localisation::{comes_from_d, congruence_check, to_fraction, FieldMorphism, Fraction};
use crate::reconstruct::{
    complexify, epsilon_closure_check, epsilon_probes, field_order_check, poly_identity_check, psi_report,
    sample_pairs, ComplexApprox, GaussianField, InvolutiveField, PositiveCone, RealApprox, SemifieldCone, StandardCone,
};
use crate::report::{Check, Report, Status};
use crate::scalars::rational::{parse_rational, rat};
use crate::scalars::{GaussianRational, Rational};
use crate::semifield::{
    check_monotone, check_semifield_axioms, geometric_order_decide, limit_of, pair_counterexample_suite, Direction,
    OrderDecision, Pair, Pairs, PosScalars, QPlus, RPlusApprox, Semifield, Sequence, Tropical,
};

#[derive(Parser, Debug)]
#[command(
    name = "fcon",
    version,
    about = "Checks for the category of finite-dimensional Hilbert spaces and contractions"
)]
pub struct Cli {
    /// Bits of precision for approximate results.
    #[arg(long, global = true, default_value_t = 40)]
    pub precision: u32,
    /// Iteration budget for limits and searches.
    #[arg(long, global = true, default_value_t = 64)]
    pub budget: u64,
    /// Seed for all sampling (check-axioms falls back to the fragment's seed).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the axiom suite on a fragment of the matrix model.
    CheckAxioms {
        #[arg(long)]
        fragment: Option<PathBuf>,
        /// Run against a deliberately broken model.
        #[arg(long, value_parser = parse_mutation)]
        mutation: Option<Mutation>,
    },
    /// Translate matrices to fractions, or check the fraction calculus.
    Localise {
        /// `{"matrices": [...], "fractions": [...]}`; without it the congruence sweep runs.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Sequential colimit of a diagram file.
    Colimit {
        #[arg(long)]
        input: PathBuf,
        /// Required when the file has no `kind`; must agree with it otherwise.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
        method: MethodArg,
    },
    /// Semifield suites.
    Semifield {
        #[arg(long, value_enum)]
        instance: Option<Instance>,
        #[arg(long, value_enum, default_value_t = Suite::Axioms)]
        suite: Suite,
        /// `{"instance": ..., "sequence": {...}, "budget": n}` for the limit suite.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Reconstruct ψ, the order and the complexification for a field model.
    Reconstruct {
        #[arg(long, value_enum, default_value_t = FieldArg::Gaussian)]
        field: FieldArg,
        #[arg(long, value_enum, default_value_t = ConeArg::Standard)]
        cone: ConeArg,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Unitary dilation of a contraction.
    Dilate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Epi / dagger-mono factorisation of a matrix.
    Factor {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Monos,
    Epis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    Cauchy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Instance {
    Qplus,
    Rplus,
    Tropical,
    Pairs,
    Posscalars,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Axioms,
    Counterexample,
    Order,
    Limit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Gaussian,
    Complex,
    Real,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConeArg {
    Standard,
    Semifield,
}

fn parse_mutation(s: &str) -> std::result::Result<Mutation, String> {
    serde_json::from_value(Value::String(s.into())).map_err(|_| {
        let names: Vec<String> = Mutation::ALL
            .iter()
            .map(|m| to_value(m).as_str().unwrap_or_default().to_owned())
            .collect();
        format!("unknown mutation; expected one of {}", names.join(", "))
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
    #[serde(with = "crate::json::opt_int", default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(with = "crate::json::opt_int", default, skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

/// Every report is wrapped with the tool version and run parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub tool: String,
    pub version: String,
    pub schema: String,
    pub command: String,
    #[serde(with = "crate::json::int")]
    pub seed: u64,
    #[serde(with = "crate::json::int")]
    pub precision: u32,
    #[serde(with = "crate::json::int")]
    pub budget: u64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    /// Wall-clock data, outside the determinism contract.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Value>,
}

impl Envelope {
    pub fn exit_code(&self) -> i32 {
        match &self.error {
            Some(e) if e.kind != "budget" => 2,
            _ if self.passed => 0,
            _ => 1,
        }
    }
}

#[derive(Debug)]
struct Failure(ErrorInfo);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::NoLimitWithinBudget { .. } | Error::NoWitnessWithinBudget { .. } => "budget",
            Error::Parse { .. } => "parse",
            _ => "input",
        };
        let (line, column) = match &e {
            Error::Parse { line, column, .. } => (Some(*line), Some(*column)),
            _ => (None, None),
        };
        let message = match e {
            Error::Parse { message, .. } => message,
            e => e.to_string(),
        };
        Failure(ErrorInfo {
            kind: kind.into(),
            message,
            line,
            column,
        })
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure(ErrorInfo {
        kind: "input".into(),
        message: message.into(),
        line: None,
        column: None,
    })
}

type Outcome = std::result::Result<(bool, Value, Option<Value>), Failure>;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialise")
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> std::result::Result<T, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        column: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    parse_json(&text)
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> std::result::Result<T, Error> {
    serde_json::from_str(text).map_err(|e| {
        let full = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        let message = full.strip_suffix(&suffix).unwrap_or(&full).to_string();
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message,
        }
    })
}

fn verb(c: &Command) -> &'static str {
    match c {
        Command::CheckAxioms { .. } => "check-axioms",
        Command::Localise { .. } => "localise",
        Command::Colimit { .. } => "colimit",
        Command::Semifield { .. } => "semifield",
        Command::Reconstruct { .. } => "reconstruct",
        Command::Dilate { .. } => "dilate",
        Command::Factor { .. } => "factor",
    }
}

/// Runs a parsed command and returns the report envelope.
pub fn execute(cli: &Cli) -> Envelope {
    let mut seed = cli.seed.unwrap_or(0);
    let outcome = match &cli.command {
        Command::CheckAxioms { fragment, mutation } => check_axioms(cli, fragment.as_deref(), *mutation, &mut seed),
        Command::Localise { input, samples } => localise(input.as_deref(), *samples, seed),
        Command::Colimit { input, kind, method } => colimit(cli, input, *kind, *method, seed),
        Command::Semifield { instance, suite, input } => semifield(cli, *instance, *suite, input.as_deref(), seed),
        Command::Reconstruct { field, cone, samples } => reconstruct(cli, *field, *cone, *samples, seed),
        Command::Dilate { input } => dilate(cli, input),
        Command::Factor { input } => factor(cli, input),
    };
    let mut env = Envelope {
        tool: "fcon".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        schema: SCHEMA_VERSION.into(),
        command: verb(&cli.command).into(),
        seed,
        precision: cli.precision,
        budget: cli.budget,
        passed: false,
        report: None,
        error: None,
        timings: None,
    };
    match outcome {
        Ok((passed, report, timings)) => {
            env.passed = passed;
            env.report = Some(report);
            env.timings = timings;
        }
        Err(Failure(e)) => env.error = Some(e),
    }
    env
}

/// Parses arguments, runs, writes the envelope and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let env = execute(&cli);
    if let Some(e) = &env.error {
        match (e.line, e.column) {
            (Some(l), Some(c)) if l > 0 => eprintln!("fcon: {} error at line {l}, column {c}: {}", e.kind, e.message),
            _ => eprintln!("fcon: {} error: {}", e.kind, e.message),
        }
    }
    let text = serde_json::to_string_pretty(&env).expect("envelopes serialise") + "\n";
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("fcon: cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => print!("{text}"),
    }
    env.exit_code()
}

fn check_axioms(cli: &Cli, path: Option<&Path>, mutation: Option<Mutation>, seed: &mut u64) -> Outcome {
    let mut frag = match path {
        Some(p) => read_json::<Fragment>(p)?,
        None => Fragment::default_with_seed(cli.seed.unwrap_or(0)),
    };
    if let Some(s) = cli.seed {
        frag.seed = s;
    }
    *seed = frag.seed;
    let model = Model { mutation };
    let report = run_all(&model, &frag, cli.precision);
    let timings = to_value(&report.timings);
    Ok((report.passed(), to_value(&report.without_timings()), Some(timings)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LocaliseInput {
    #[serde(default)]
    matrices: Vec<Matrix>,
    #[serde(default)]
    fractions: Vec<Fraction>,
}

fn localise(path: Option<&Path>, samples: usize, seed: u64) -> Outcome {
    let Some(path) = path else {
        let r = congruence_check(samples, seed);
        return Ok((r.passed(), to_value(&r), None));
    };
    let input: LocaliseInput = read_json(path)?;
    let mut report = Report::new("localisation");
    let mut matrices = Vec::new();
    for (k, m) in input.matrices.iter().enumerate() {
        let fm = FieldMorphism::new(m.clone());
        let frac = to_fraction(&fm);
        report.record(
            format!("matrix_{k}_round_trip"),
            frac.resolve() == fm,
            "to_fraction then resolve",
        );
        matrices.push(json!({ "fraction": to_value(&frac), "comes_from_d": comes_from_d(&fm) }));
    }
    let mut fractions = Vec::new();
    for (k, p) in input.fractions.iter().enumerate() {
        let mut entry = json!({ "resolved": to_value(&p.resolve()), "dagger": to_value(&p.dagger().resolve()) });
        if let Some(q) = input.fractions.get(k + 1) {
            entry["equiv_next"] = match p.equiv(q) {
                Ok(b) => json!(b),
                Err(_) => Value::Null,
            };
            if let Ok(c) = q.compose(p) {
                let field = q.resolve().matrix.compose(&p.resolve().matrix).map_err(Failure::from)?;
                report.record(
                    format!("compose_{k}"),
                    c.resolve().matrix == field,
                    "resolve(q ∘ p) = resolve(q) resolve(p)",
                );
                entry["compose_next"] = to_value(&c.resolve());
            }
            let t = p.tensor(q);
            report.record(
                format!("tensor_{k}"),
                t.resolve().matrix == p.resolve().matrix.tensor(&q.resolve().matrix),
                "resolve commutes with ⊗",
            );
            let d = p.dsum(q);
            report.record(
                format!("dsum_{k}"),
                d.resolve().matrix == p.resolve().matrix.dsum(&q.resolve().matrix),
                "resolve commutes with ⊕",
            );
        }
        fractions.push(entry);
    }
    let passed = report.passed();
    Ok((
        passed,
        json!({ "matrices": matrices, "fractions": fractions, "checks": to_value(&report) }),
        None,
    ))
}

#[derive(Deserialize)]
struct ColimitFile {
    kind: Option<DiagramKind>,
    #[serde(with = "crate::json::int_vec")]
    objects: Vec<usize>,
    morphisms: Vec<Matrix>,
    #[serde(with = "crate::json::opt_int", default)]
    stabilisation: Option<u64>,
    #[serde(with = "crate::json::opt_int", default)]
    budget: Option<u64>,
    bound: Option<Cocone>,
}

fn colimit(cli: &Cli, path: &Path, kind: Option<KindArg>, method: MethodArg, seed: u64) -> Outcome {
    let file: ColimitFile = read_json(path)?;
    let flag = kind.map(|k| match k {
        KindArg::Monos => DiagramKind::Monos,
        KindArg::Epis => DiagramKind::Epis,
    });
    let kind = match (file.kind, flag) {
        (Some(a), Some(b)) if a != b => {
            return Err(input_error(format!("--kind {b:?} disagrees with the file's {a:?}")))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(input_error("diagram kind missing: add \"kind\" or pass --kind")),
    };
    let mut diag =
        SequentialDiagram::new(kind, file.objects, file.morphisms)?.with_budget(file.budget.unwrap_or(cli.budget));
    if let Some(s) = file.stabilisation {
        diag = diag.with_stabilisation(s);
    }
    let method = match method {
        MethodArg::Exact => LimitMethod::Exact,
        MethodArg::Cauchy => LimitMethod::Cauchy,
    };
    let colim = seq_colimit(&diag, file.bound.as_ref(), cli.precision, method)?;
    let checks = match (&file.bound, kind) {
        (Some(bound), DiagramKind::Monos) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cocones = test_cocones_from_bound(&diag, bound, 5, &mut rng)?;
            universal_property_check(&colim, &diag, &cocones)
        }
        _ => gram_monotonicity_check(&diag, diag.tail_index() + 2),
    };
    Ok((
        checks.passed(),
        json!({ "colimit": to_value(&colim), "checks": to_value(&checks) }),
        None,
    ))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Term {
    Scalar(String),
    Pair([String; 2]),
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum SequenceSpec {
    ClosedForm { id: String },
    Explicit { direction: Direction, terms: Vec<Term> },
}

#[derive(Deserialize)]
struct SemifieldInput {
    instance: Instance,
    sequence: SequenceSpec,
    #[serde(with = "crate::json::opt_int", default)]
    budget: Option<u64>,
}

fn nonneg(s: &str) -> std::result::Result<Rational, Failure> {
    match parse_rational(s) {
        Some(q) if q >= rat(0, 1) => Ok(q),
        _ => Err(input_error(format!("{s:?} is not a non-negative rational"))),
    }
}

/// Closed-form sequences, described by their terms over ℚ₊ and their limit.
pub const CLOSED_FORMS: [&str; 5] = [
    "inverse-n",
    "one-plus-inverse-n",
    "one-minus-inverse-n",
    "half-power",
    "pair-one-inverse-n",
];

fn semifield(cli: &Cli, instance: Option<Instance>, suite: Suite, path: Option<&Path>, seed: u64) -> Outcome {
    let input = path.map(read_json::<SemifieldInput>).transpose()?;
    let instance = match (instance, &input) {
        (Some(a), Some(i)) if a != i.instance => return Err(input_error("--instance disagrees with the input file")),
        (Some(a), _) => a,
        (None, Some(i)) => i.instance,
        (None, None) => return Err(input_error("--instance is required without an input file")),
    };
    let budget = input.as_ref().and_then(|i| i.budget).unwrap_or(cli.budget);
    let spec = input.map(|i| i.sequence);
    if suite == Suite::Counterexample {
        if instance != Instance::Pairs {
            return Err(input_error("the counterexample suite is defined for --instance pairs"));
        }
        let r = pair_counterexample_suite(seed);
        return Ok((r.passed(), to_value(&r), None));
    }
    match instance {
        Instance::Qplus => semifield_suite(&QPlus, suite, spec, budget, seed, scalar_term(QPlus)),
        Instance::Rplus => {
            let s = RPlusApprox::new(cli.precision);
            semifield_suite(&s, suite, spec, budget, seed, scalar_term(s))
        }
        Instance::Tropical => semifield_suite(&Tropical, suite, spec, budget, seed, scalar_term(Tropical)),
        Instance::Posscalars => semifield_suite(&PosScalars, suite, spec, budget, seed, scalar_term(PosScalars)),
        Instance::Pairs => semifield_suite(&Pairs, suite, spec, budget, seed, |t: &Term| match t {
            Term::Scalar(s) => Ok(Pairs.embed_rational(&nonneg(s)?)),
            Term::Pair([x, y]) => Pair::new(nonneg(x)?, nonneg(y)?).map_err(Failure::from),
        }),
    }
}

fn scalar_term<S: Semifield>(s: S) -> impl Fn(&Term) -> std::result::Result<S::Elem, Failure> {
    move |t| match t {
        Term::Scalar(x) => Ok(s.embed_rational(&nonneg(x)?)),
        Term::Pair(_) => Err(input_error(format!(
            "pair terms need --instance pairs, not {}",
            s.name()
        ))),
    }
}

fn closed_form<S: Semifield>(s: &S, id: &str) -> std::result::Result<Sequence<S::Elem>, Failure> {
    let e = {
        let s = s.clone();
        move |q: Rational| s.embed_rational(&q)
    };
    let seq = match id {
        "inverse-n" => Sequence::new(Direction::Decreasing, move |n| e(rat(1, n as i64))).with_limit(s.zero()),
        "one-plus-inverse-n" => {
            Sequence::new(Direction::Decreasing, move |n| e(rat(1, 1) + rat(1, n as i64))).with_limit(s.one())
        }
        "one-minus-inverse-n" => {
            Sequence::new(Direction::Increasing, move |n| e(rat(1, 1) - rat(1, n as i64))).with_limit(s.one())
        }
        "half-power" => Sequence::new(Direction::Decreasing, move |n| {
            e(crate::scalars::rational::pow2_neg(n as u32))
        })
        .with_limit(s.zero()),
        _ => {
            return Err(input_error(format!(
                "unknown closed form {id:?}; expected one of {}",
                CLOSED_FORMS.join(", ")
            )))
        }
    };
    Ok(seq)
}

fn semifield_suite<S: Semifield>(
    s: &S,
    suite: Suite,
    spec: Option<SequenceSpec>,
    budget: u64,
    seed: u64,
    term: impl Fn(&Term) -> std::result::Result<S::Elem, Failure>,
) -> Outcome
where
    S::Elem: Display,
{
    match suite {
        Suite::Axioms => {
            let r = check_semifield_axioms(s, 50, seed);
            Ok((r.passed(), to_value(&r), None))
        }
        Suite::Order => {
            let mut r = Report::new(format!("geometric order decisions on {}", s.name()));
            let mut rows = Vec::new();
            for u in s.special_elements().iter().filter(|u| !s.is_zero(u)) {
                let d = geometric_order_decide(s, u, budget.min(64))?;
                let agrees = match (&d.decision, s.compare(u, &s.one())) {
                    (OrderDecision::EqualOne, Some(std::cmp::Ordering::Equal)) => true,
                    (OrderDecision::LeqOne, Some(o)) => o.is_le(),
                    (OrderDecision::GeqOne, Some(o)) => o.is_ge(),
                    _ => false,
                };
                if d.decision == OrderDecision::Inconclusive {
                    let why = match d.identity_violation {
                        Some(n) => {
                            format!("step identity not confirmed at n = {n} at this precision")
                        }
                        None => {
                            format!("1/s_n and u^(n+1)/s_n not separated within {budget} steps")
                        }
                    };
                    r.push(Check::new(format!("u = {u}"), Status::Inconclusive, why));
                } else {
                    r.record(format!("u = {u}"), agrees, format!("{:?}", d.decision));
                }
                rows.push(json!({ "u": u.to_string(), "decision": to_value(&d.decision) }));
            }
            Ok((r.passed(), json!({ "decisions": rows, "checks": to_value(&r) }), None))
        }
        Suite::Limit => {
            let seq = match spec {
                None => closed_form(s, "one-plus-inverse-n")?,
                Some(SequenceSpec::ClosedForm { id }) if id == "pair-one-inverse-n" => {
                    let mk = |n: u64| term(&Term::Pair(["1".into(), format!("1/{n}")]));
                    let terms = (1..=budget.max(1))
                        .map(mk)
                        .collect::<std::result::Result<Vec<_>, _>>()?;
                    let limit = term(&Term::Pair(["1".into(), "0".into()]));
                    let mut seq = Sequence::new(Direction::Decreasing, move |n| {
                        terms[(n.clamp(1, terms.len() as u64) - 1) as usize].clone()
                    });
                    if let Ok(l) = limit {
                        seq = seq.with_limit(l);
                    }
                    seq
                }
                Some(SequenceSpec::ClosedForm { id }) => closed_form(s, &id)?,
                Some(SequenceSpec::Explicit { direction, terms }) => {
                    if terms.is_empty() {
                        return Err(input_error("an explicit sequence needs at least one term"));
                    }
                    let terms = terms.iter().map(&term).collect::<std::result::Result<Vec<_>, _>>()?;
                    Sequence::from_terms(direction, terms)
                }
            };
            let shown: Vec<String> = check_monotone(s, &seq, budget.min(8))?
                .iter()
                .map(ToString::to_string)
                .collect();
            let limit = limit_of(s, &seq, budget)?;
            let mut r = Report::new(format!("limit on {}", s.name()));
            r.record("monotone", true, format!("first {} terms", shown.len()));
            r.record("limit_found", true, limit.to_string());
            Ok((
                true,
                json!({ "instance": s.name(), "terms": shown, "limit": limit.to_string(), "checks": to_value(&r) }),
                None,
            ))
        }
        Suite::Counterexample => unreachable!("handled before dispatch"),
    }
}

fn field_reports<F: InvolutiveField, C: PositiveCone<F>>(
    field: &F,
    cone: &C,
    u: Option<F::Elem>,
    samples: usize,
    budget: u64,
    seed: u64,
) -> Vec<Report> {
    let mut out = vec![
        psi_report(field, cone, samples, seed),
        field_order_check(field, cone, samples, seed),
        epsilon_closure_check(field, cone, &epsilon_probes(field, budget.min(64)), budget.min(64)),
    ];
    let mut c = Report::new(format!("complexification of {}", field.name()));
    match u.map(|u| complexify(field, cone, &u)) {
        None => c.push(Check::new(
            "complexify",
            Status::NotApplicable,
            "the involution is trivial",
        )),
        Some(Err(e)) => c.record("complexify", false, e.to_string()),
        Some(Ok(cx)) => c = cx.report(cone, samples.min(50), seed),
    }
    out.push(c);
    out
}

fn reconstruct(cli: &Cli, field: FieldArg, cone: ConeArg, samples: usize, seed: u64) -> Outcome {
    let p = cli.precision;
    let mut reports = vec![poly_identity_check(&sample_pairs(samples, 1000, seed))];
    reports.extend(match (field, cone) {
        (FieldArg::Gaussian, ConeArg::Standard) => field_reports(
            &GaussianField,
            &StandardCone::new(p),
            Some(GaussianRational::i()),
            samples,
            cli.budget,
            seed,
        ),
        (FieldArg::Gaussian, ConeArg::Semifield) => field_reports(
            &GaussianField,
            &SemifieldCone { precision: p },
            Some(GaussianRational::i()),
            samples,
            cli.budget,
            seed,
        ),
        (FieldArg::Complex, ConeArg::Standard) => {
            let f = ComplexApprox::new(p);
            let u = f.from_gaussian(&GaussianRational::i());
            field_reports(&f, &StandardCone::new(p), Some(u), samples, cli.budget, seed)
        }
        (FieldArg::Real, ConeArg::Standard) => field_reports(
            &RealApprox::new(p),
            &StandardCone::new(p),
            None,
            samples,
            cli.budget,
            seed,
        ),
        (_, ConeArg::Semifield) => return Err(input_error("the semifield cone is defined on the gaussian field")),
    });
    let passed = reports.iter().all(Report::passed);
    Ok((
        passed,
        json!({ "field": format!("{field:?}").to_lowercase(), "reports": to_value(&reports) }),
        None,
    ))
}

fn dilate(cli: &Cli, path: &Path) -> Outcome {
    let f: ConMorphism = read_json(path)?;
    let d = halmos_dilation(&f, cli.precision)?;
    let mut r = Report::new("unitary dilation");
    let em = d.e.compose(&d.m)?;
    let udu = d.u.dagger().compose(&d.u)?;
    let uud = d.u.compose(&d.u.dagger())?;
    let n = d.u.rows();
    let dev = |x: &crate::fcon::ApproxMatrix, m: &Matrix| x.max_deviation_exact(m).map(|q| q.to_string());
    r.record(
        "u_unitary",
        d.u.is_unitary(),
        format!("max |U†U − I| = {}", dev(&udu, &Matrix::identity(n))?),
    );
    r.record(
        "uu_dagger",
        uud.approx_eq_exact(&Matrix::identity(n)),
        format!("max |UU† − I| = {}", dev(&uud, &Matrix::identity(n))?),
    );
    r.record(
        "em_is_f",
        em.approx_eq_exact(f.matrix()),
        format!("max |em − f| = {}", dev(&em, f.matrix())?),
    );
    r.record("m_dagger_mono", d.m.is_isometry(), "m†m = I");
    r.record("e_dagger_epi", d.e.dagger().is_isometry(), "ee† = I");
    Ok((
        r.passed(),
        json!({ "dilation": to_value(&d), "checks": to_value(&r) }),
        None,
    ))
}

fn factor(cli: &Cli, path: &Path) -> Outcome {
    let a: Matrix = read_json(path)?;
    let (m, e) = epi_dagger_mono_factorise(&a, cli.precision);
    let mut r = Report::new("epi / dagger-mono factorisation");
    r.record("m_dagger_mono", m.is_isometry(), "m†m = I");
    let me = m.compose(&e)?;
    r.record(
        "me_is_a",
        me.approx_eq_exact(&a),
        format!("max |me − A| = {}", me.max_deviation_exact(&a)?),
    );
    r.record(
        "e_epi",
        e.rows() == rank(&a),
        format!("e has {} rows, rank A = {}", e.rows(), rank(&a)),
    );
    Ok((
        r.passed(),
        json!({ "m": to_value(&m), "e": to_value(&e), "checks": to_value(&r) }),
        None,
    ))
}
