//! One function per verb. Each returns a verdict and a result payload, or a
//! failure that becomes the report's `error` block.

use std::path::Path;

use qframe_classifier::corpus::{bit, three};
use qframe_classifier::{
    check_commutes, cocones_into, colimit, cones_from, limit, merge_cores, validate_infomorphism, verify_cccd,
    CccdCandidate, Classification, ClassifierDiagram, ClassifierError, Infomorphism, MergeError,
};
use qframe_contextuality::{
    analyze, chsh_value, contextual_fraction, correlator, empirical_model_from_qrfs, ContextualityError, EmpiricalModel,
    SolveOptions,
};
use qframe_experiments::{
    communication_error_rate, construct_adversarial_pair, naive_stat_diff, run_bell, run_qfp_trial, thermo_context_demo,
    BellSetup, CatalogKey, ExperimentError, QfpInstance,
};
use qframe_quantum::linalg::eigenvalues_hermitian;
use qframe_quantum::{
    build_interaction_hamiltonian, codeployable, commutator_norm, entanglement_entropy, is_separable_pure, partial_trace,
    von_neumann_entropy, DensityMatrix, MeasureMode, PureState, Qrf, QuantumError, StateRef,
};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::input::{check_schema, load, read_json, typed};
use crate::report::{ErrorKind, Failure, InputDigest};
use crate::Options;

/// Default commutation tolerance for `commutator`.
pub const COMMUTATOR_TOL: f64 = 1e-10;
/// Largest number of (co)cones per test object in the universal-property battery.
pub const BATTERY_PER_OBJECT: usize = 32;

pub struct Outcome {
    pub affirmative: bool,
    pub verdict: String,
    pub result: Value,
}

impl Outcome {
    fn new(affirmative: bool, verdict: &str, result: Value) -> Self {
        Outcome { affirmative, verdict: verdict.into(), result }
    }
}

pub type VerbResult = Result<Outcome, Failure>;

/// Per-invocation state: options and the digests of files read so far.
pub struct Ctx<'a> {
    pub opts: &'a Options,
    pub digests: Vec<InputDigest>,
    pub seed: Option<u64>,
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

fn from_classifier(e: ClassifierError) -> Failure {
    match e {
        ClassifierError::TooLarge { .. } => Failure::new(ErrorKind::Cap, e.to_string()),
        e => Failure::domain(e),
    }
}

fn from_contextuality(e: ContextualityError) -> Failure {
    match e {
        ContextualityError::TooLarge { .. } => Failure::new(ErrorKind::Cap, e.to_string()),
        e => Failure::domain(e),
    }
}

fn from_quantum(e: QuantumError) -> Failure {
    Failure::domain(e)
}

fn from_experiment(e: ExperimentError) -> Failure {
    match e {
        ExperimentError::Contextuality(c) => from_contextuality(c),
        e => Failure::domain(e),
    }
}

impl Ctx<'_> {
    fn solve_options(&self) -> SolveOptions {
        let mut o = SolveOptions::default();
        o.arithmetic = self.opts.arithmetic;
        if let Some(t) = self.opts.tol {
            o.tolerance = t;
        }
        o
    }

    fn load<T: for<'de> Deserialize<'de>>(&mut self, path: &Path, schema: &str) -> Result<T, Failure> {
        load(path, schema, &mut self.digests).map(|(v, _)| v)
    }
}

#[derive(Debug, Clone)]
pub enum AnyState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl AnyState {
    fn as_ref(&self) -> StateRef<'_> {
        match self {
            AnyState::Pure(s) => StateRef::Pure(s),
            AnyState::Mixed(r) => StateRef::Mixed(r),
        }
    }

    fn labels(&self) -> &[String] {
        match self {
            AnyState::Pure(s) => s.layout().labels(),
            AnyState::Mixed(r) => r.layout().labels(),
        }
    }
}

pub fn load_state(ctx: &mut Ctx, path: &Path) -> Result<AnyState, Failure> {
    let l = read_json(path)?;
    ctx.digests.push(l.digest);
    let shown = path.display().to_string();
    check_schema(&l.json, "state.schema.json", &shown)?;
    if l.json.get("amplitudes").is_some() {
        typed(&l.json, &shown).map(AnyState::Pure)
    } else {
        typed(&l.json, &shown).map(AnyState::Mixed)
    }
}

fn load_pure(ctx: &mut Ctx, path: &Path) -> Result<PureState, Failure> {
    match load_state(ctx, path)? {
        AnyState::Pure(s) => Ok(s),
        AnyState::Mixed(_) => Err(Failure::domain(format!("{}: a pure state is required", path.display()))),
    }
}

/// The three objects of an infomorphism check file.
#[derive(Debug, Clone, PartialEq, Deserialize, serde::Serialize)]
pub struct InfomorphismCheck {
    pub source: Classification,
    pub target: Classification,
    pub infomorphism: Infomorphism,
}

#[derive(Debug, Clone, PartialEq, Deserialize, serde::Serialize)]
pub struct AgentFile {
    pub agent: Vec<Qrf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key: Option<CatalogKey>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, serde::Serialize)]
pub struct ThermoFile {
    pub base: PureState,
    pub agent: Vec<Qrf>,
    pub epsilon: f64,
    pub trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub fn validate_infomorphism_verb(ctx: &mut Ctx, file: &Path) -> VerbResult {
    let c: InfomorphismCheck = ctx.load(file, "infomorphism-check.schema.json")?;
    let r = validate_infomorphism(&c.infomorphism, &c.source, &c.target).map_err(from_classifier)?;
    let ok = r.is_ok();
    Ok(Outcome::new(ok, if ok { "valid" } else { "invalid" }, json!({ "valid": ok, "violations": r.violations })))
}

pub fn check_diagram(ctx: &mut Ctx, file: &Path) -> VerbResult {
    let d: ClassifierDiagram = ctx.load(file, "diagram.schema.json")?;
    let invalid: Vec<Value> = d
        .validate_edges()
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.is_ok())
        .map(|(e, r)| json!({ "edge": d.edges()[e].label(), "violations": r.violations }))
        .collect();
    let v = check_commutes(&d);
    let verdict = if !invalid.is_empty() {
        "invalid-arrow"
    } else if v.commutes {
        "commutes"
    } else {
        "does-not-commute"
    };
    Ok(Outcome::new(
        invalid.is_empty() && v.commutes,
        verdict,
        json!({ "commutes": v.commutes, "counterexample": v.counterexample, "invalid_edges": invalid }),
    ))
}

/// Test objects for the universal property: every node plus two small
/// classifications from the corpus.
fn test_objects(d: &ClassifierDiagram) -> Vec<Classification> {
    let mut xs: Vec<Classification> = d.nodes().to_vec();
    for x in [bit("X:bit"), three("X:three")] {
        if d.node(x.id()).is_none() {
            xs.push(x);
        }
    }
    xs
}

pub fn colimit_verb(ctx: &mut Ctx, file: &Path) -> VerbResult {
    let d: ClassifierDiagram = ctx.load(file, "diagram.schema.json")?;
    let c = colimit(&d).map_err(from_classifier)?;
    let mut battery = Vec::new();
    for x in test_objects(&d) {
        for legs in cocones_into(&d, &x, BATTERY_PER_OBJECT).map_err(from_classifier)? {
            battery.push((x.clone(), legs));
        }
    }
    let u = c.verify_universal(&d, &battery).map_err(from_classifier)?;
    let ok = u.holds();
    Ok(Outcome::new(
        ok,
        if ok { "universal" } else { "not-universal" },
        json!({ "apex": c.apex, "legs": c.legs, "universal": u }),
    ))
}

pub fn limit_verb(ctx: &mut Ctx, file: &Path) -> VerbResult {
    let d: ClassifierDiagram = ctx.load(file, "diagram.schema.json")?;
    let l = limit(&d).map_err(from_classifier)?;
    let mut battery = Vec::new();
    for x in test_objects(&d) {
        for legs in cones_from(&d, &x, BATTERY_PER_OBJECT).map_err(from_classifier)? {
            battery.push((x.clone(), legs));
        }
    }
    let u = l.verify_universal(&d, &battery).map_err(from_classifier)?;
    let ok = u.holds();
    Ok(Outcome::new(
        ok,
        if ok { "universal" } else { "not-universal" },
        json!({ "apex": l.apex, "legs": l.legs, "universal": u }),
    ))
}

pub fn verify_cccd_verb(ctx: &mut Ctx, file: &Path) -> VerbResult {
    let c: CccdCandidate = ctx.load(file, "cccd.schema.json")?;
    let r = verify_cccd(&c);
    Ok(Outcome::new(r.verdict, if r.verdict { "verified" } else { "rejected" }, to_value(&r)))
}

pub fn merge_cores_verb(ctx: &mut Ctx, a: &Path, b: &Path) -> VerbResult {
    let c1: CccdCandidate = ctx.load(a, "cccd.schema.json")?;
    let c2: CccdCandidate = ctx.load(b, "cccd.schema.json")?;
    match merge_cores(&c1, &c2) {
        Ok(m) => {
            let r = verify_cccd(&m);
            Ok(Outcome::new(r.verdict, "merged", json!({ "merged": m, "report": r })))
        }
        Err(MergeError::Structural(e)) => Err(from_classifier(e)),
        Err(MergeError::InputNotVerified { which, report }) => {
            Ok(Outcome::new(false, "input-not-verified", json!({ "which": which, "report": report })))
        }
        Err(MergeError::NonCodeployable(n)) => Ok(Outcome::new(false, "non-codeployable", json!({ "reason": n }))),
    }
}

pub fn hamiltonian_verb(ctx: &mut Ctx, file: &Path) -> VerbResult {
    let q: Qrf = ctx.load(file, "qrf.schema.json")?;
    let h = build_interaction_hamiltonian(&q).map_err(from_quantum)?;
    let mut spectrum = eigenvalues_hermitian(h.matrix());
    spectrum.sort_by(f64::total_cmp);
    Ok(Outcome::new(
        true,
        "computed",
        json!({ "id": q.id(), "energy_scale": q.energy_scale(), "hamiltonian": h, "spectrum": spectrum }),
    ))
}

pub fn commutator_verb(ctx: &mut Ctx, a: &Path, b: &Path) -> VerbResult {
    let q1: Qrf = ctx.load(a, "qrf.schema.json")?;
    let q2: Qrf = ctx.load(b, "qrf.schema.json")?;
    let tol = ctx.opts.tol.unwrap_or(COMMUTATOR_TOL);
    let norm = commutator_norm(&q1, &q2).map_err(from_quantum)?;
    let c = codeployable(&q1, &q2, tol).map_err(from_quantum)?;
    Ok(Outcome::new(
        c.codeployable,
        if c.codeployable { "codeployable" } else { "non-codeployable" },
        json!({ "norm": norm, "codeployability": c }),
    ))
}

pub fn entropy_verb(ctx: &mut Ctx, file: &Path, keep: Option<&[String]>) -> VerbResult {
    let s = load_state(ctx, file)?;
    let keep: Vec<String> = keep.map_or_else(|| s.labels().to_vec(), <[String]>::to_vec);
    let rho = partial_trace(s.as_ref(), &keep).map_err(from_quantum)?;
    let bits = von_neumann_entropy(&rho);
    Ok(Outcome::new(true, "computed", json!({ "kept": keep, "entropy_bits": bits })))
}

pub fn entanglement_verb(ctx: &mut Ctx, file: &Path) -> VerbResult {
    let s = load_pure(ctx, file)?;
    let e = entanglement_entropy(&s).map_err(from_quantum)?;
    let separable = is_separable_pure(&s, &e.b1, &e.b2).map_err(from_quantum)?;
    let entangled = e.bits > 1e-9;
    Ok(Outcome::new(
        true,
        if entangled { "entangled" } else { "product" },
        json!({ "entropy_bits": e.bits, "argmax": { "b1": e.b1, "b2": e.b2 }, "separable_at_argmax": separable }),
    ))
}

fn model_verdict(report: &qframe_contextuality::ContextualityReport) -> (bool, &'static str) {
    if !report.no_disturbance.passes {
        (false, "disturbing")
    } else if report.noncontextual {
        (true, "noncontextual")
    } else {
        (false, "contextual")
    }
}

pub fn check_model(ctx: &mut Ctx, file: &Path, fraction: bool) -> VerbResult {
    let m: EmpiricalModel = ctx.load(file, "model.schema.json")?;
    let r = analyze(&m, &ctx.solve_options(), fraction).map_err(from_contextuality)?;
    let (ok, verdict) = model_verdict(&r);
    Ok(Outcome::new(ok, verdict, to_value(&r)))
}

pub fn contextual_fraction_verb(ctx: &mut Ctx, file: &Path) -> VerbResult {
    let m: EmpiricalModel = ctx.load(file, "model.schema.json")?;
    let cf = contextual_fraction(&m, &ctx.solve_options()).map_err(from_contextuality)?;
    let zero = cf.value.is_zero() || cf.value.to_f64() <= ctx.solve_options().tolerance;
    Ok(Outcome::new(
        zero,
        if zero { "noncontextual" } else { "contextual" },
        json!({ "contextual_fraction": cf.value.to_f64(), "detail": cf }),
    ))
}

fn chsh_block(m: &EmpiricalModel) -> Result<Value, ContextualityError> {
    let value = chsh_value(m)?;
    let correlators = (0..4).map(|c| correlator(m, c).map(|e| to_value(&e))).collect::<Result<Vec<_>, _>>()?;
    Ok(json!({
        "chsh": value.to_f64(),
        "chsh_exact": value,
        "correlators": correlators,
        "local_bound": 2,
        "exceeds_local_bound": value.to_f64() > 2. + 1e-12,
    }))
}

pub fn chsh_verb(ctx: &mut Ctx, file: &Path) -> VerbResult {
    let m: EmpiricalModel = ctx.load(file, "model.schema.json")?;
    let mut out = chsh_block(&m).map_err(from_contextuality)?;
    let r = analyze(&m, &ctx.solve_options(), false).map_err(from_contextuality)?;
    let (ok, verdict) = model_verdict(&r);
    out["noncontextual"] = json!(r.noncontextual);
    out["no_disturbance"] = to_value(&r.no_disturbance);
    out["section"] = to_value(&r.section);
    Ok(Outcome::new(ok, verdict, out))
}

pub fn model_from_qrfs_verb(ctx: &mut Ctx, state: &Path, a: &Path, b: &Path, mode: MeasureMode) -> VerbResult {
    let s = load_pure(ctx, state)?;
    let q1: Qrf = ctx.load(a, "qrf.schema.json")?;
    let q2: Qrf = ctx.load(b, "qrf.schema.json")?;
    let (m, note) = match empirical_model_from_qrfs(&s, &q1, &q2, mode) {
        Ok(x) => x,
        Err(ContextualityError::NonCodeployable { first, second, norm }) => {
            return Ok(Outcome::new(
                false,
                "non-codeployable",
                json!({ "mode": mode, "first": first, "second": second, "norm": norm }),
            ));
        }
        Err(e) => return Err(from_contextuality(e)),
    };
    let r = analyze(&m, &ctx.solve_options(), true).map_err(from_contextuality)?;
    let (ok, verdict) = model_verdict(&r);
    Ok(Outcome::new(
        ok,
        verdict,
        json!({
            "note": note,
            "model": m,
            "chsh": chsh_block(&m).ok(),
            "contextuality": r,
        }),
    ))
}

pub fn bell_verb(ctx: &mut Ctx, setup: Option<&Path>, theta: Option<f64>) -> VerbResult {
    let mut s = match setup {
        Some(p) => ctx.load(p, "bell-setup.schema.json")?,
        None => BellSetup::tsirelson(0.),
    };
    if let Some(t) = theta {
        s.theta = t;
    }
    if let Some(n) = ctx.opts.shots {
        s.shots = Some(n);
    }
    if let Some(seed) = ctx.opts.seed {
        s.seed = seed;
    }
    if s.shots.is_some() {
        ctx.seed = Some(s.seed);
    }
    let r = run_bell(&s).map_err(from_experiment)?;
    // sampled marginals never agree exactly across contexts, so shot data is
    // judged by the CHSH bound alone
    let (ok, verdict) = match s.shots {
        None => model_verdict(&r.contextuality),
        Some(_) if r.chsh > 2. => (false, "violates-local-bound"),
        Some(_) => (true, "within-local-bound"),
    };
    let mut out = to_value(&r);
    out["communication_error_rate"] = json!(communication_error_rate(s.theta).map_err(from_experiment)?);
    Ok(Outcome::new(ok, verdict, out))
}

pub fn qfp_pair_verb(ctx: &mut Ctx, file: &Path, key: Option<CatalogKey>) -> VerbResult {
    let a: AgentFile = ctx.load(file, "agent.schema.json")?;
    let key = key.or(a.key).unwrap_or(CatalogKey::Auto);
    match construct_adversarial_pair(&a.agent, key) {
        Ok(p) => Ok(Outcome::new(true, "adversarial-pair", to_value(&p))),
        Err(ExperimentError::NoFamily { tried }) => {
            let tried: Vec<Value> = tried.iter().map(|(k, r)| json!({ "key": k, "reason": r })).collect();
            Ok(Outcome::new(false, "no-family", json!({ "requested": key, "tried": tried })))
        }
        Err(ExperimentError::Rejected { key: k, reason }) => {
            Ok(Outcome::new(false, "rejected", json!({ "requested": key, "tried": [{ "key": k, "reason": reason }] })))
        }
        Err(e) => Err(from_experiment(e)),
    }
}

pub fn qfp_trial_verb(ctx: &mut Ctx, file: &Path) -> VerbResult {
    let inst: QfpInstance = ctx.load(file, "qfp-instance.schema.json")?;
    let t = run_qfp_trial(&inst, &naive_stat_diff).map_err(from_experiment)?;
    let verdict = to_value(&t.classification);
    let ok = t.classification == qframe_experiments::Classification::Correct;
    Ok(Outcome::new(ok, verdict.as_str().expect("kebab-case name"), to_value(&t)))
}

pub fn thermo_verb(ctx: &mut Ctx, file: &Path) -> VerbResult {
    let t: ThermoFile = ctx.load(file, "thermo.schema.json")?;
    let seed = ctx.opts.seed.or(t.seed).unwrap_or(0);
    ctx.seed = Some(seed);
    let r = thermo_context_demo(&t.base, &t.agent, t.epsilon, seed, t.trials).map_err(from_experiment)?;
    let ok = r.drift <= r.bound + 1e-12;
    Ok(Outcome::new(ok, if ok { "within-bound" } else { "exceeds-bound" }, to_value(&r)))
}
