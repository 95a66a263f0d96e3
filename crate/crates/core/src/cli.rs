//! Command-line front end. [`run`] parses arguments, writes the report to the
//! given sink and returns the process exit code:
//! 0 success or witness found, 1 check failed or no witness, 2 input error,
//! 3 resource limit.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::fraisse::{
    back_and_forth, build_fraisse_with, check_extension_property, check_m1, check_m2, check_m3,
    default_cap, verify_certificate, BuildConfig, Catalog, EnumerationOrder, HalfspaceWitness,
    InverseSequence, Search,
};
use crate::io::{self, Document, CERTIFICATES_FILE, SEQUENCE_FILE};
use crate::median::superextension;
use crate::morphism::find_isomorphism;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "median-fraisse",
    version,
    about = "Finite median algebras and their saturation sequences"
)]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json_report: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check an algebra, morphism, sequence or superextension file.
    Validate { input: PathBuf },
    /// Superextension of an n-point set.
    Lambda {
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build an approximation sequence; writes sequence.json and certificates.json.
    Fraisse(FraisseArgs),
    /// Extension property, halfspace conditions or back-and-forth on built sequences.
    Check {
        #[command(subcommand)]
        kind: CheckKind,
    },
    /// Re-emit an algebra (or a sequence stage) as DOT or JSON.
    Export {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        /// Stage to export when the input is a sequence.
        #[arg(long)]
        stage: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Look for an isomorphism between two algebras.
    Iso { first: PathBuf, second: PathBuf },
}

#[derive(Args, Debug, Clone)]
pub struct FraisseArgs {
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    #[arg(long, default_value_t = 2)]
    pub bound: usize,
    /// Largest stage allowed; defaults to $MEDIAN_FRAISSE_CAP or 4096.
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long, default_value = "canonical")]
    pub order: EnumerationOrder,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum CheckKind {
    /// A halfspace containing every `--a` set and missing every `--b` set.
    M1 {
        sequence: PathBuf,
        #[arg(long)]
        stage: usize,
        #[arg(long = "a", value_parser = parse_positions)]
        a: Vec<Positions>,
        #[arg(long = "b", value_parser = parse_positions)]
        b: Vec<Positions>,
    },
    /// A nonempty halfspace inside the meet of the linked `--a` sets.
    M2 {
        sequence: PathBuf,
        #[arg(long)]
        stage: usize,
        #[arg(long = "a", value_parser = parse_positions)]
        a: Vec<Positions>,
    },
    /// Two disjoint nonempty halfspaces inside the halfspace `--a`.
    M3 {
        sequence: PathBuf,
        #[arg(long)]
        stage: usize,
        #[arg(long = "a", value_parser = parse_positions)]
        a: Positions,
    },
    /// Lift a morphism onto stage `--stage` through a later stage.
    Ext {
        sequence: PathBuf,
        #[arg(long)]
        stage: usize,
        #[arg(long)]
        morphism: PathBuf,
    },
    /// Interleave two sequences.
    Baf { first: PathBuf, second: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Dot,
}

/// Validated settings of one `fraisse` run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub size_bound: usize,
    pub levels: usize,
    pub stage_point_cap: usize,
    pub enumeration_order: EnumerationOrder,
    pub output_dir: PathBuf,
    pub format: Format,
}

impl RunConfig {
    pub fn from_args(args: &FraisseArgs) -> Result<Self> {
        let cap = args.cap.unwrap_or_else(default_cap);
        for (name, v) in [("levels", args.levels), ("bound", args.bound), ("cap", cap)] {
            if v == 0 {
                return Err(Error::InvalidArgument(format!("{name} must be positive")));
            }
        }
        Ok(RunConfig {
            size_bound: args.bound,
            levels: args.levels,
            stage_point_cap: cap,
            enumeration_order: args.order,
            output_dir: args.out.clone(),
            format: Format::Json,
        })
    }

    pub fn build_config(&self) -> BuildConfig {
        BuildConfig {
            levels: self.levels,
            size_bound: self.size_bound,
            cap: self.stage_point_cap,
            order: self.enumeration_order,
        }
    }
}

/// Carrier positions of a subset of a stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Positions(pub Vec<usize>);

/// Comma-separated carrier positions; the empty string is the empty set.
fn parse_positions(s: &str) -> std::result::Result<Positions, String> {
    if s.trim().is_empty() {
        return Ok(Positions(Vec::new()));
    }
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<std::result::Result<_, _>>()
        .map(Positions)
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceLimit { .. } | Error::BoundExceeded { .. } => EXIT_RESOURCE,
        Error::Stuck { .. } | Error::InternalInvariantViolation(_) => EXIT_FAILED,
        _ => EXIT_INPUT,
    }
}

fn error_name(e: &Error) -> &'static str {
    match e {
        Error::EmptyCarrier => "EmptyCarrier",
        Error::DimensionMismatch { .. } => "DimensionMismatch",
        Error::DuplicatePoint(_) => "DuplicatePoint",
        Error::NotMedianClosed { .. } => "NotMedianClosed",
        Error::PointNotInCarrier(_) => "PointNotInCarrier",
        Error::IndexOutOfRange { .. } => "IndexOutOfRange",
        Error::NotConvex(_) => "NotConvex",
        Error::NotDisjoint => "NotDisjoint",
        Error::NotCovering => "NotCovering",
        Error::EmptySide(_) => "EmptySide",
        Error::NotAHalfspace(_) => "NotAHalfspace",
        Error::NotLinked { .. } => "NotLinked",
        Error::GroundSizeTooLarge { .. } => "GroundSizeTooLarge",
        Error::AxiomViolation { .. } => "AxiomViolation",
        Error::EmbeddingNotFaithful(_) => "EmbeddingNotFaithful",
        Error::NotSurjective { .. } => "NotSurjective",
        Error::NotMedianPreserving { .. } => "NotMedianPreserving",
        Error::MapLengthMismatch { .. } => "MapLengthMismatch",
        Error::MapValueOutOfRange { .. } => "MapValueOutOfRange",
        Error::TypeMismatch(_) => "TypeMismatch",
        Error::BoundExceeded { .. } => "BoundExceeded",
        Error::ResourceLimit { .. } => "ResourceLimit",
        Error::Stuck { .. } => "Stuck",
        Error::InternalInvariantViolation(_) => "InternalInvariantViolation",
        Error::InvalidArgument(_) => "InvalidArgument",
        Error::Parse(_) => "ParseError",
        Error::SchemaVersion { .. } => "SchemaVersion",
        Error::Io(_) => "Io",
    }
}

/// What a command produced: an exit code, a text line and a JSON report.
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub report: Value,
}

impl Outcome {
    fn ok(text: String, report: Value) -> Self {
        Outcome {
            code: EXIT_OK,
            text,
            report,
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(out, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let outcome = dispatch(&cli.command).unwrap_or_else(|e| Outcome {
        code: exit_code(&e),
        text: format!("error: {e}"),
        report: json!({ "status": "error", "error": error_name(&e), "message": e.to_string() }),
    });
    let _ = if cli.json_report {
        writeln!(
            out,
            "{}",
            serde_json::to_string(&outcome.report).unwrap_or_default()
        )
    } else {
        writeln!(out, "{}", outcome.text)
    };
    outcome.code
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Validate { input } => cmd_validate(input),
        Command::Lambda { n, out } => cmd_lambda(*n, out.as_deref()),
        Command::Fraisse(args) => cmd_fraisse(&RunConfig::from_args(args)?),
        Command::Check { kind } => cmd_check(kind),
        Command::Export {
            input,
            format,
            stage,
            out,
        } => cmd_export(input, *format, *stage, out.as_deref()),
        Command::Iso { first, second } => cmd_iso(first, second),
    }
}

fn cmd_validate(input: &Path) -> Result<Outcome> {
    let (kind, detail) = match io::read_document(input)? {
        Document::Algebra(a) => ("algebra", json!({ "points": a.len(), "dim": a.dim() })),
        Document::Morphism(f) => (
            "morphism",
            json!({ "source_points": f.source().len(), "target_points": f.target().len() }),
        ),
        Document::Lambda(a, systems) => {
            let (expected, _) = superextension(systems[0].ground())?;
            if expected != a {
                return Err(Error::EmbeddingNotFaithful(
                    "algebra differs from the superextension of its ground".into(),
                ));
            }
            (
                "lambda",
                json!({ "points": a.len(), "ground": systems[0].ground() }),
            )
        }
        Document::Certificates(c) => ("certificates", json!({ "slots": c.len() })),
        Document::Sequence(_) => {
            let seq = io::read_sequence(input)?;
            let verified = verify_sequence_certificates(&seq)?;
            let sizes: Vec<usize> = seq.stages().iter().map(|s| s.len()).collect();
            (
                "sequence",
                json!({ "stage_points": sizes, "certificates_verified": verified }),
            )
        }
    };
    Ok(Outcome::ok(
        format!("valid {kind} {detail}"),
        json!({ "status": "valid", "kind": kind, "detail": detail }),
    ))
}

fn verify_sequence_certificates(seq: &InverseSequence) -> Result<usize> {
    let mut verified = 0;
    for (i, cert) in seq.certificates().iter().enumerate() {
        if let Some(cert) = cert {
            if i == 0 {
                return Err(Error::InvalidArgument(
                    "stage 0 cannot carry a certificate".into(),
                ));
            }
            let catalog = Catalog::up_to(cert.size_bound)?;
            verify_certificate(&seq.bonds()[i - 1], cert, &catalog)?;
            verified += 1;
        }
    }
    Ok(verified)
}

fn cmd_lambda(n: usize, out: Option<&Path>) -> Result<Outcome> {
    let (alg, systems) = superextension(n)?;
    if let Some(path) = out {
        std::fs::write(path, io::lambda_to_json(&alg, &systems)?)?;
    }
    Ok(Outcome::ok(
        alg.len().to_string(),
        json!({ "status": "ok", "n": n, "points": alg.len() }),
    ))
}

/// Builds the sequence and writes `sequence.json` and `certificates.json`
/// into the output directory.
pub fn cmd_fraisse(config: &RunConfig) -> Result<Outcome> {
    let build = config.build_config();
    let seq = build_fraisse_with(&build)?;
    std::fs::create_dir_all(&config.output_dir)?;
    std::fs::write(
        config.output_dir.join(SEQUENCE_FILE),
        io::sequence_to_json(&seq, Some(&build))?,
    )?;
    std::fs::write(
        config.output_dir.join(CERTIFICATES_FILE),
        io::certificates_to_json(&seq)?,
    )?;
    let sizes: Vec<usize> = seq.stages().iter().map(|s| s.len()).collect();
    Ok(Outcome::ok(
        format!("stage sizes {sizes:?}"),
        json!({ "status": "ok", "stage_points": sizes, "out": config.output_dir.display().to_string() }),
    ))
}

fn positions_to_set(len: usize, positions: &[usize]) -> Result<Bits> {
    if let Some(&bad) = positions.iter().find(|&&i| i >= len) {
        return Err(Error::IndexOutOfRange { index: bad, len });
    }
    Ok(Bits::from_indices(len, positions.iter().copied()))
}

fn stage_sets(seq: &InverseSequence, stage: usize, sets: &[Positions]) -> Result<Vec<Bits>> {
    let n = seq.stage(stage)?.len();
    sets.iter().map(|s| positions_to_set(n, &s.0)).collect()
}

fn halfspace_outcome(name: &str, search: Search<HalfspaceWitness>) -> Outcome {
    match search {
        Search::Witness { stage, witness } => Outcome::ok(
            format!("{name}: witness at stage {stage}: {:?}", witness.sides),
            json!({ "status": "witness", "check": name, "stage": stage, "halfspaces": witness.sides }),
        ),
        Search::NotFound { from, to } => Outcome {
            code: EXIT_FAILED,
            text: format!("{name}: no witness in stages {from}..={to}"),
            report: json!({ "status": "not_found", "check": name, "from": from, "to": to }),
        },
    }
}

fn cmd_check(kind: &CheckKind) -> Result<Outcome> {
    match kind {
        CheckKind::M1 {
            sequence,
            stage,
            a,
            b,
        } => {
            let seq = io::read_sequence(sequence)?;
            let (a, b) = (stage_sets(&seq, *stage, a)?, stage_sets(&seq, *stage, b)?);
            Ok(halfspace_outcome("m1", check_m1(&seq, *stage, &a, &b)?))
        }
        CheckKind::M2 { sequence, stage, a } => {
            let seq = io::read_sequence(sequence)?;
            let a = stage_sets(&seq, *stage, a)?;
            Ok(halfspace_outcome("m2", check_m2(&seq, *stage, &a)?))
        }
        CheckKind::M3 { sequence, stage, a } => {
            let seq = io::read_sequence(sequence)?;
            let a = positions_to_set(seq.stage(*stage)?.len(), &a.0)?;
            Ok(halfspace_outcome("m3", check_m3(&seq, *stage, &a)?))
        }
        CheckKind::Ext {
            sequence,
            stage,
            morphism,
        } => {
            let seq = io::read_sequence(sequence)?;
            let f = io::read_morphism(morphism)?;
            let k = Arc::clone(f.source());
            Ok(match check_extension_property(&seq, &k, &f, *stage)? {
                Search::Witness {
                    stage: beta,
                    witness,
                } => Outcome::ok(
                    format!("ext: witness at stage {beta}: {:?}", witness.map()),
                    json!({ "status": "witness", "check": "ext", "stage": beta, "map": witness.map() }),
                ),
                Search::NotFound { from, to } => Outcome {
                    code: EXIT_FAILED,
                    text: format!("ext: no witness in stages {from}..={to}"),
                    report: json!({ "status": "not_found", "check": "ext", "from": from, "to": to }),
                },
            })
        }
        CheckKind::Baf { first, second } => {
            let (p, q) = (io::read_sequence(first)?, io::read_sequence(second)?);
            let run = back_and_forth(&p, &q)?;
            Ok(Outcome::ok(
                format!(
                    "baf: depth {} alphas {:?} betas {:?}",
                    run.depth, run.alphas, run.betas
                ),
                json!({ "status": "ok", "check": "baf", "depth": run.depth, "alphas": run.alphas, "betas": run.betas }),
            ))
        }
    }
}

fn cmd_export(
    input: &Path,
    format: Format,
    stage: Option<usize>,
    out: Option<&Path>,
) -> Result<Outcome> {
    let alg = match io::read_document(input)? {
        Document::Algebra(a) | Document::Lambda(a, _) => a,
        Document::Sequence(seq) => {
            let i = stage.unwrap_or(seq.len() - 1);
            (**seq.stage(i)?).clone()
        }
        _ => {
            return Err(Error::InvalidArgument(
                "export needs an algebra, superextension or sequence".into(),
            ))
        }
    };
    let body = match format {
        Format::Dot => io::to_dot(&alg),
        Format::Json => io::algebra_to_json(&alg)?,
    };
    match out {
        Some(path) => {
            std::fs::write(path, &body)?;
            Ok(Outcome::ok(
                format!("wrote {}", path.display()),
                json!({ "status": "ok", "out": path.display().to_string() }),
            ))
        }
        None => Ok(Outcome::ok(
            body.trim_end().to_string(),
            json!({ "status": "ok", "body": body }),
        )),
    }
}

fn cmd_iso(first: &Path, second: &Path) -> Result<Outcome> {
    let a = Arc::new(io::read_algebra(first)?);
    let b = Arc::new(io::read_algebra(second)?);
    Ok(match find_isomorphism(&a, &b) {
        Some(f) => Outcome::ok(
            format!("isomorphic: {:?}", f.map()),
            json!({ "status": "isomorphic", "map": f.map() }),
        ),
        None => Outcome {
            code: EXIT_FAILED,
            text: "not isomorphic".into(),
            report: json!({ "status": "not_isomorphic" }),
        },
    })
}
