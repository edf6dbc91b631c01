//! Command-line front end. Every command can emit a [`Certificate`]: the
//! results together with a digest of the inputs, the parameters used and the
//! one-sidedness caveats attached to them.
//!
//! Exit codes: `0` success, `1` parse or usage error, `2` membership failure,
//! `3` indeterminate classification, `4` ball cap exceeded, `5` oracle
//! mismatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bounds::{bound_report, BoundInputs};
use crate::error::Error;
use crate::hermitian::{GroupElement, SquareMatrix};
use crate::isometry::{self, IsometryKind};
use crate::lattice::{self, BallOptions, EnumerationError, LatticeSpec, PartialBallDocument, WordBall};
use crate::verify::{self, Suite, SuiteConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MEMBERSHIP: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;
pub const EXIT_CAP: i32 = 4;
pub const EXIT_ORACLE: i32 = 5;

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Parser, Debug)]
#[command(name = "cusp-certify", version, about = "Invariants and effective bounds for complex ball quotients")]
pub struct Cli {
    /// Seed for randomised suites; recorded in every certificate.
    #[arg(long, global = true, default_value_t = verify::DEFAULT_SEED)]
    pub seed: u64,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "CUSP_CERTIFY_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify one matrix as elliptic, parabolic or hyperbolic.
    Classify(ClassifyArgs),
    /// Enumerate a word ball of a generator set and print its census.
    Ball(BallArgs),
    /// Evaluate every effective bound for the given inputs.
    Bounds(BoundsArgs),
    /// Run an oracle cross-check suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// JSON matrix: an array of rows of `[re, im]` pairs.
    pub matrix: PathBuf,
    #[arg(long, default_value_t = isometry::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = GroupElement::DEFAULT_TOL)]
    pub membership_tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also write the certificate to this path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BallArgs {
    /// Lattice JSON document.
    pub lattice: PathBuf,
    #[arg(long, short = 'L', value_parser = clap::value_parser!(u64).range(1..=lattice::MAX_WORD_LENGTH as u64))]
    pub length: u64,
    #[arg(long, default_value_t = lattice::DEFAULT_CAP)]
    pub cap: usize,
    /// Overrides the document's deduplication tolerance.
    #[arg(long)]
    pub dedup_tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the certificate here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where a partial ball is written when the cap is hit.
    #[arg(long)]
    pub partial_out: Option<PathBuf>,
    /// Continue from a partial ball written by an earlier run.
    #[arg(long)]
    pub resume: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: usize,
    /// Certified lower bound for the systole.
    #[arg(long)]
    pub sys: f64,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    /// Boundary systole.
    #[arg(long = "sysD", alias = "sys-d")]
    pub sys_d: Option<f64>,
    #[arg(long)]
    pub field_degree: Option<u32>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// metric, trace, length, heisenberg, horoball or all.
    #[arg(long)]
    pub suite: String,
    /// Directory for counterexample files.
    #[arg(long, default_value = ".")]
    pub repro_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    pub tool_version: String,
    pub inputs_digest: String,
    pub command: String,
    pub parameters: serde_json::Value,
    pub results: serde_json::Value,
    /// SHA-256 of the canonical JSON of `results`.
    pub results_digest: String,
    pub one_sidedness_flags: Vec<String>,
    pub timestamp: String,
}

impl Certificate {
    pub fn new(
        command: &str,
        inputs: &[u8],
        parameters: serde_json::Value,
        results: serde_json::Value,
        one_sidedness_flags: Vec<String>,
    ) -> Self {
        Self {
            tool_version: TOOL_VERSION.into(),
            inputs_digest: sha256_hex(inputs),
            command: command.into(),
            parameters,
            results_digest: results_digest(&results),
            results,
            one_sidedness_flags,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Digest of the results; `serde_json::Value` keeps object keys sorted, so
/// equal results always hash equally.
pub fn results_digest(results: &serde_json::Value) -> String {
    sha256_hex(results.to_string().as_bytes())
}

/// Classification summary reported by `classify`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassifyResult {
    pub kind: IsometryKind,
    pub r: f64,
    pub theta: f64,
    pub margin: f64,
    pub translation_length: Option<f64>,
    pub membership_residual: f64,
}

/// Failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotAMember { .. } => EXIT_MEMBERSHIP,
            Error::Indeterminate { .. } => EXIT_INDETERMINATE,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Error::from(e).into()
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure {
        code: EXIT_USAGE,
        message: format!("{}: {e}", path.display()),
    })
}

fn emit(out: &mut dyn Write, cert: &Certificate, path: Option<&Path>) -> Result<(), Failure> {
    let json = serde_json::to_string_pretty(cert)?;
    match path {
        Some(p) => std::fs::write(p, json + "\n")?,
        None => writeln!(out, "{json}")?,
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Classify(a) => classify_cmd(&cli, a, out),
        Command::Ball(a) => ball_cmd(&cli, a, out),
        Command::Bounds(a) => bounds_cmd(&cli, a, out),
        Command::Verify(a) => verify_cmd(&cli, a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn classify_cmd(cli: &Cli, a: &ClassifyArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let bytes = read_input(&a.matrix)?;
    let matrix: SquareMatrix = serde_json::from_slice(&bytes)?;
    let g = GroupElement::new(matrix, a.membership_tol)?;
    let class = isometry::classify(&g, a.tol)?;
    let length = (class.kind == IsometryKind::Hyperbolic).then(|| isometry::length_from_modulus(class.r));
    let result = ClassifyResult {
        kind: class.kind,
        r: class.r,
        theta: class.theta,
        margin: class.margin,
        translation_length: length,
        membership_residual: g.membership_residual(),
    };
    let cert = Certificate::new(
        "classify",
        &bytes,
        serde_json::json!({"tol": a.tol, "membershipTol": a.membership_tol, "seed": cli.seed}),
        serde_json::to_value(&result)?,
        Vec::new(),
    );
    if let Some(p) = &a.out {
        emit(out, &cert, Some(p))?;
    }
    match a.format {
        Format::Json => emit(out, &cert, None)?,
        Format::Text => {
            let mut line = format!("{}", class.kind);
            if let Some(l) = length {
                line.push_str(&format!(" r={:.6} theta={:.6} length≈{l:.6}", class.r, class.theta));
            }
            line.push_str(&format!(" margin={:.3e} residual={:.3e}", class.margin, g.membership_residual()));
            writeln!(out, "{line}")?;
        }
    }
    Ok(())
}

fn ball_cmd(cli: &Cli, a: &BallArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let bytes = read_input(&a.lattice)?;
    let spec = LatticeSpec::from_document(serde_json::from_slice(&bytes)?)?;
    let opts = BallOptions {
        dedup_tol: a.dedup_tol.unwrap_or(spec.tolerances.dedup),
        cap: a.cap,
        threads: cli.threads,
    };
    let length = a.length as usize;
    let start = match &a.resume {
        Some(p) => {
            let doc: PartialBallDocument = serde_json::from_slice(&read_input(p)?)?;
            WordBall::from_document(&spec, &doc)?
        }
        None => WordBall::new(&spec, opts.dedup_tol),
    };
    let ball = match start.extend_to(&spec, length, &opts) {
        Ok(b) => b,
        Err(EnumerationError::CapExceeded { cap, partial, resume }) => {
            let path = a.partial_out.clone().unwrap_or_else(|| PathBuf::from("ball-partial.json"));
            let doc = partial.to_document(&spec, opts.dedup_tol);
            std::fs::write(&path, serde_json::to_string(&doc)?)?;
            return Err(Failure {
                code: EXIT_CAP,
                message: format!(
                    "cap {cap} exceeded; complete through length {} ({} elements); partial ball written to {} (continue with --resume)",
                    resume.completed_length,
                    resume.element_count,
                    path.display()
                ),
            });
        }
        Err(EnumerationError::InvalidLength(l)) => {
            return Err(Failure {
                code: EXIT_USAGE,
                message: format!("length {l} outside 1..={}", lattice::MAX_WORD_LENGTH),
            })
        }
        Err(EnumerationError::Other(e)) => return Err(e.into()),
    };
    let census = lattice::census(&ball, &spec);
    let cert = Certificate::new(
        "ball",
        &bytes,
        serde_json::json!({"length": length, "cap": a.cap, "dedupTol": opts.dedup_tol, "seed": cli.seed}),
        serde_json::to_value(&census)?,
        census.one_sidedness.clone(),
    );
    match a.format {
        Format::Json => emit(out, &cert, a.out.as_deref())?,
        Format::Text => {
            if let Some(p) = &a.out {
                emit(out, &cert, Some(p))?;
            }
            writeln!(out, "length {} elements {}", census.max_length, census.element_count)?;
            let c = census.counts;
            writeln!(
                out,
                "elliptic {} parabolic {} hyperbolic {} indeterminate {}",
                c.elliptic, c.parabolic, c.hyperbolic, c.indeterminate
            )?;
            writeln!(out, "sysUpperEstimate {:?} (upper bound)", census.sys_upper_estimate)?;
            writeln!(out, "lambdaEstimate {:?} (upper bound)", census.lambda_estimate)?;
            if let Some(s) = &census.cusp_stats {
                writeln!(
                    out,
                    "tMinVertical {:?} cMinNonStabilizer {:?} depthEstimate {:?} (empirical)",
                    s.t_min_vertical, s.c_min_non_stabilizer, s.depth_estimate
                )?;
            }
        }
    }
    Ok(())
}

fn bounds_cmd(cli: &Cli, a: &BoundsArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let inputs = BoundInputs {
        n: a.n,
        sys: a.sys,
        m: a.m,
        s: a.s,
        sys_d: a.sys_d,
        field_degree: a.field_degree,
        epsilon: a.epsilon,
    };
    let report = bound_report(&inputs)?;
    let input_bytes = serde_json::to_vec(&inputs)?;
    let cert = Certificate::new(
        "bounds",
        &input_bytes,
        serde_json::json!({"inputs": inputs, "seed": cli.seed}),
        serde_json::to_value(&report)?,
        vec!["sys is taken as a certified lower bound for the systole supplied by the user".into()],
    );
    if let Some(p) = &a.out {
        emit(out, &cert, Some(p))?;
    }
    match a.format {
        Format::Json => emit(out, &cert, None)?,
        Format::Text => write!(out, "{}", report.to_text())?,
    }
    Ok(())
}

fn verify_cmd(cli: &Cli, a: &VerifyArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![a.suite.parse().map_err(|m: String| Failure {
            code: EXIT_USAGE,
            message: m,
        })?]
    };
    let config = SuiteConfig {
        seed: cli.seed,
        ..SuiteConfig::default()
    };
    let run_all = || suites.iter().map(|&s| verify::run(s, &config)).collect::<Vec<_>>();
    let reports = match cli.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Failure {
                code: EXIT_USAGE,
                message: format!("thread pool: {e}"),
            })?
            .install(run_all),
        None => run_all(),
    };
    match a.format {
        Format::Text => {
            for r in &reports {
                write!(out, "{r}")?;
            }
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&reports)?)?,
    }
    let mut failed = Vec::new();
    for r in reports.iter().filter(|r| !r.passed()) {
        let path = r.write_reproduction(&a.repro_dir)?;
        let cx = r.counterexamples.first();
        failed.push(format!(
            "{}: {} (case {}){}",
            r.suite.name(),
            cx.map_or("no cases", |c| c.check.as_str()),
            cx.map_or(0, |c| c.case),
            path.map_or(String::new(), |p| format!(", reproduction written to {}", p.display()))
        ));
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_ORACLE,
            message: format!("oracle mismatch: {}", failed.join("; ")),
        })
    }
}
