//! The `qframe` command-line tool: argument parsing, dispatch to the library
//! crates, and report emission.

pub mod input;
pub mod report;
pub mod schema;
pub mod verbs;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qframe_contextuality::Arithmetic;
use qframe_experiments::CatalogKey;
use qframe_quantum::MeasureMode;
use serde::Serialize;
use serde_json::{Map, Value};

use report::{round_floats, ErrorKind, Failure, Provenance, Report, REPORT_SCHEMA};
use verbs::Ctx;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithmeticArg {
    Auto,
    Exact,
    Float,
}

impl From<ArithmeticArg> for Arithmetic {
    fn from(a: ArithmeticArg) -> Self {
        match a {
            ArithmeticArg::Auto => Arithmetic::Auto,
            ArithmeticArg::Exact => Arithmetic::Exact,
            ArithmeticArg::Float => Arithmetic::Float,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Joint,
    Sequential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[value(rename_all = "kebab-case")]
#[serde(rename_all = "kebab-case")]
pub enum KeyArg {
    DoubleBell,
    HiddenBell,
    GhzControl,
    Auto,
}

impl From<KeyArg> for CatalogKey {
    fn from(k: KeyArg) -> Self {
        match k {
            KeyArg::DoubleBell => CatalogKey::DoubleBell,
            KeyArg::HiddenBell => CatalogKey::HiddenBell,
            KeyArg::GhzControl => CatalogKey::GhzControl,
            KeyArg::Auto => CatalogKey::Auto,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalOpts {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Overrides the verb's numerical tolerance.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Arithmetic for the global-section and contextual-fraction programs.
    #[arg(long, global = true, value_enum, default_value_t = ArithmeticArg::Auto)]
    pub arithmetic: ArithmeticArg,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
}

/// Resolved global options passed to the verbs.
#[derive(Debug, Clone)]
pub struct Options {
    pub tol: Option<f64>,
    pub arithmetic: Arithmetic,
    pub seed: Option<u64>,
    pub shots: Option<u64>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Check the fundamental property of an infomorphism.
    ValidateInfomorphism { file: PathBuf },
    /// Decide whether a diagram of classifications commutes.
    CheckDiagram { file: PathBuf },
    /// Canonical colimit, with its universal property checked.
    Colimit { file: PathBuf },
    /// Canonical limit, with its universal property checked.
    Limit { file: PathBuf },
    /// Verify a cone-cocone diagram.
    VerifyCccd { file: PathBuf },
    /// Build a common core for two verified cone-cocone diagrams.
    MergeCores { a: PathBuf, b: PathBuf },
    /// Interaction Hamiltonian of a reference frame.
    Hamiltonian { qrf: PathBuf },
    /// Largest commutator norm between two frames' observables.
    Commutator { q1: PathBuf, q2: PathBuf },
    /// Von Neumann entropy of a state, or of its reduction to `--keep`.
    Entropy {
        state: PathBuf,
        #[arg(long, value_delimiter = ',')]
        keep: Option<Vec<String>>,
    },
    /// Maximum bipartition entropy of a pure state.
    Entanglement { state: PathBuf },
    /// No-disturbance and global-section check of an empirical model.
    CheckModel {
        model: PathBuf,
        #[arg(long)]
        fraction: bool,
    },
    ContextualFraction { model: PathBuf },
    /// CHSH value of a model on the 2x2x2 Bell scenario.
    Chsh { model: PathBuf },
    /// Born-rule empirical model for two frames on a state.
    ModelFromQrfs {
        state: PathBuf,
        q1: PathBuf,
        q2: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Joint)]
        mode: ModeArg,
    },
    /// Bell test with a misaligned second observer.
    Bell {
        setup: Option<PathBuf>,
        #[arg(long)]
        theta: Option<f64>,
    },
    /// Two environments an agent cannot tell apart.
    QfpPair {
        agent: PathBuf,
        #[arg(long, value_enum)]
        key: Option<KeyArg>,
    },
    /// One frame-problem trial with the statistics-difference agent.
    QfpTrial { instance: PathBuf },
    /// Drift of agent statistics under small random kicks.
    ThermoDemo { descriptor: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::ValidateInfomorphism { .. } => "validate-infomorphism",
            Command::CheckDiagram { .. } => "check-diagram",
            Command::Colimit { .. } => "colimit",
            Command::Limit { .. } => "limit",
            Command::VerifyCccd { .. } => "verify-cccd",
            Command::MergeCores { .. } => "merge-cores",
            Command::Hamiltonian { .. } => "hamiltonian",
            Command::Commutator { .. } => "commutator",
            Command::Entropy { .. } => "entropy",
            Command::Entanglement { .. } => "entanglement",
            Command::CheckModel { .. } => "check-model",
            Command::ContextualFraction { .. } => "contextual-fraction",
            Command::Chsh { .. } => "chsh",
            Command::ModelFromQrfs { .. } => "model-from-qrfs",
            Command::Bell { .. } => "bell",
            Command::QfpPair { .. } => "qfp-pair",
            Command::QfpTrial { .. } => "qfp-trial",
            Command::ThermoDemo { .. } => "thermo-demo",
        }
    }

    /// Verb-specific flags, recorded in the provenance block.
    fn flags(&self) -> Map<String, Value> {
        let mut m = Map::new();
        match self {
            Command::Entropy { keep: Some(k), .. } => {
                m.insert("keep".into(), k.clone().into());
            }
            Command::CheckModel { fraction, .. } => {
                m.insert("fraction".into(), (*fraction).into());
            }
            Command::ModelFromQrfs { mode, .. } => {
                m.insert("mode".into(), serde_json::to_value(mode).expect("enum"));
            }
            Command::Bell { theta: Some(t), .. } => {
                m.insert("theta".into(), (*t).into());
            }
            Command::QfpPair { key: Some(k), .. } => {
                m.insert("key".into(), serde_json::to_value(k).expect("enum"));
            }
            _ => {}
        }
        m
    }
}

#[derive(Debug, Clone, Parser)]
#[command(name = "qframe", version, about = "Classifier diagrams, reference frames and contextuality checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: GlobalOpts,
}

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> verbs::VerbResult {
    use verbs::*;
    match cmd {
        Command::ValidateInfomorphism { file } => validate_infomorphism_verb(ctx, file),
        Command::CheckDiagram { file } => check_diagram(ctx, file),
        Command::Colimit { file } => colimit_verb(ctx, file),
        Command::Limit { file } => limit_verb(ctx, file),
        Command::VerifyCccd { file } => verify_cccd_verb(ctx, file),
        Command::MergeCores { a, b } => merge_cores_verb(ctx, a, b),
        Command::Hamiltonian { qrf } => hamiltonian_verb(ctx, qrf),
        Command::Commutator { q1, q2 } => commutator_verb(ctx, q1, q2),
        Command::Entropy { state, keep } => entropy_verb(ctx, state, keep.as_deref()),
        Command::Entanglement { state } => entanglement_verb(ctx, state),
        Command::CheckModel { model, fraction } => check_model(ctx, model, *fraction),
        Command::ContextualFraction { model } => contextual_fraction_verb(ctx, model),
        Command::Chsh { model } => chsh_verb(ctx, model),
        Command::ModelFromQrfs { state, q1, q2, mode } => {
            let mode = match mode {
                ModeArg::Joint => MeasureMode::Joint,
                ModeArg::Sequential => MeasureMode::Sequential,
            };
            model_from_qrfs_verb(ctx, state, q1, q2, mode)
        }
        Command::Bell { setup, theta } => bell_verb(ctx, setup.as_deref(), *theta),
        Command::QfpPair { agent, key } => qfp_pair_verb(ctx, agent, key.map(Into::into)),
        Command::QfpTrial { instance } => qfp_trial_verb(ctx, instance),
        Command::ThermoDemo { descriptor } => thermo_verb(ctx, descriptor),
    }
}

fn options_value(cli: &Cli) -> Value {
    let mut m = match serde_json::to_value(&cli.opts).expect("options serialize") {
        Value::Object(m) => m,
        _ => unreachable!("struct serializes to an object"),
    };
    m.extend(cli.command.flags());
    Value::Object(m)
}

/// Runs one parsed command. Never panics on bad input; every failure is
/// folded into the report.
pub fn run(cli: &Cli) -> Report {
    let opts = Options {
        tol: cli.opts.tol,
        arithmetic: cli.opts.arithmetic.into(),
        seed: cli.opts.seed,
        shots: cli.opts.shots,
    };
    let mut ctx = Ctx { opts: &opts, digests: Vec::new(), seed: cli.opts.seed };
    let outcome = dispatch(&cli.command, &mut ctx);
    let provenance = Provenance {
        tool: "qframe".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        inputs: ctx.digests,
        seed: ctx.seed,
        options: options_value(cli),
    };
    let verb = cli.command.name().to_string();
    match outcome {
        Ok(o) => {
            let mut result = o.result;
            round_floats(&mut result);
            Report {
                schema: REPORT_SCHEMA.into(),
                verb,
                verdict: o.verdict,
                exit_code: if o.affirmative { 0 } else { 1 },
                result: Some(result),
                error: None,
                provenance,
            }
        }
        Err(f) => Report {
            schema: REPORT_SCHEMA.into(),
            verb,
            verdict: "error".into(),
            exit_code: f.kind.exit_code(),
            result: None,
            error: Some(f),
            provenance,
        },
    }
}

/// A report for a command line that did not parse.
fn usage_report(args: &[OsString], message: String) -> Report {
    let verb = args.get(1).map(|a| a.to_string_lossy().into_owned()).unwrap_or_default();
    Report {
        schema: REPORT_SCHEMA.into(),
        verb,
        verdict: "error".into(),
        exit_code: 2,
        result: None,
        error: Some(Failure::new(ErrorKind::Parse, message)),
        provenance: Provenance {
            tool: "qframe".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            inputs: Vec::new(),
            seed: None,
            options: Value::Object(Map::new()),
        },
    }
}

/// What the binary prints and where, plus its exit code.
pub struct Emission {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: u8,
}

/// Parses `args` (program name first), runs the verb and renders the report.
/// With `--out`, the report goes to that file and stdout stays empty.
pub fn execute<I, T>(args: I) -> Emission
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind as K;
            if matches!(e.kind(), K::DisplayHelp | K::DisplayVersion | K::DisplayHelpOnMissingArgumentOrSubcommand) {
                let code = if e.kind() == K::DisplayHelpOnMissingArgumentOrSubcommand { 2 } else { 0 };
                return Emission { stdout: e.render().to_string(), stderr: String::new(), exit_code: code };
            }
            let text = e.render().to_string();
            let r = usage_report(&args, text.trim_end().to_string());
            return Emission { stdout: r.to_json(), stderr: text, exit_code: 2 };
        }
    };
    let report = run(&cli);
    let body = match cli.opts.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    let mut stderr = String::new();
    if let Some(e) = &report.error {
        stderr = format!("qframe {}: {}\n", report.verb, e.message);
    }
    match &cli.opts.out {
        Some(p) => match std::fs::write(p, &body) {
            Ok(()) => Emission { stdout: String::new(), stderr, exit_code: report.exit_code },
            Err(e) => Emission {
                stdout: body,
                stderr: format!("{stderr}qframe: cannot write {}: {e}\n", p.display()),
                exit_code: 2,
            },
        },
        None => Emission { stdout: body, stderr, exit_code: report.exit_code },
    }
}
