//! `permbound`: permanent upper bounds from the command line.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use permbound_core::{parse_rational, Arithmetic, Rational};

use permbound_cli::error::{CliError, EXIT_CHECK_FAILED, EXIT_OK};
use permbound_cli::family::{run_family, ExpParam, FamilyName, FamilySpec};
use permbound_cli::matrix_file::{Format, MatrixFile};
use permbound_cli::report::{build_report, ReportOptions};
use permbound_cli::verify::{self, read_certificate, Suite, VerifyOptions};

/// Caps the worker count for `family`.
const THREADS_ENV: &str = "PERMBOUND_THREADS";

#[derive(Parser)]
#[command(name = "permbound", version, about = "Upper bounds for matrix permanents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound the permanent of one matrix and write a JSON report.
    Bound(BoundArgs),
    /// Generate a family of instances and write one report per line.
    Family(FamilyArgs),
    /// Run property checks on one matrix.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ArithmeticArg {
    Float,
    Rational,
}

impl From<ArithmeticArg> for Arithmetic {
    fn from(a: ArithmeticArg) -> Self {
        match a {
            ArithmeticArg::Float => Arithmetic::Float64,
            ArithmeticArg::Rational => Arithmetic::ExactRational,
        }
    }
}

#[derive(Args)]
struct ReportArgs {
    /// Defaults to rational up to n = 12 and float above.
    #[arg(long, value_enum)]
    arithmetic: Option<ArithmeticArg>,
    /// Largest n for which the exact permanent is computed.
    #[arg(long, value_name = "N")]
    exact_max: Option<usize>,
    /// Symmetric reordering applied before the process, e.g. "3,1,2".
    #[arg(long, value_name = "P1,P2,...")]
    ordering: Option<String>,
    /// Also certify diagonal dominance with this epsilon.
    #[arg(long, value_name = "E")]
    eps: Option<String>,
    /// Include pivots and every intermediate matrix.
    #[arg(long)]
    snapshots: bool,
    /// Include wall-clock time in milliseconds.
    #[arg(long)]
    timing: bool,
    /// Write to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    input: PathBuf,
    /// Inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[command(flatten)]
    report: ReportArgs,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(value_enum)]
    name: FamilyName,
    #[arg(long)]
    n: usize,
    /// Decay parameter for `exp`: a rational literal, or `sqrt` for sqrt(n).
    #[arg(long)]
    c: Option<String>,
    /// Off-diagonal cap for `random-dd`.
    #[arg(long)]
    delta: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of instances: `n` increases for exp and allones, the seed for random-dd.
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[command(flatten)]
    report: ReportArgs,
}

#[derive(Args)]
struct VerifyArgs {
    input: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    /// Majorant certificate: {"b": [[...]], "mode": "inequality" | "equality"}.
    #[arg(long, value_name = "FILE")]
    certificate: Option<PathBuf>,
    #[arg(long, value_name = "E")]
    eps: Option<String>,
}

fn rational_arg(flag: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text)
        .ok_or_else(|| CliError::input("ParameterOutOfRange", format!("--{flag}: cannot parse {text:?}")))
}

fn ordering_arg(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|p| {
            p.trim().parse::<usize>().map_err(|_| {
                CliError::input("ParameterOutOfRange", format!("--ordering: bad index {p:?}"))
            })
        })
        .collect()
}

impl ReportArgs {
    fn options(&self) -> Result<ReportOptions, CliError> {
        Ok(ReportOptions {
            arithmetic: self.arithmetic.map(Into::into),
            exact_max: self.exact_max,
            ordering: self.ordering.as_deref().map(ordering_arg).transpose()?,
            eps: self.eps.as_deref().map(|e| rational_arg("eps", e)).transpose()?,
            snapshots: self.snapshots,
            timing: self.timing,
        })
    }

    fn writer(&self) -> Result<Box<dyn Write>, CliError> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
                CliError::input("IoError", format!("{}: {e}", path.display()))
            })?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

fn threads() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(Some(t)),
            _ => Err(CliError::input(
                "ParameterOutOfRange",
                format!("{THREADS_ENV} must be a positive integer, got {v:?}"),
            )),
        },
    }
}

fn read_input(path: &Path, format: Option<Format>) -> Result<MatrixFile, CliError> {
    MatrixFile::read(path, format)
}

fn cmd_bound(args: &BoundArgs) -> Result<i32, CliError> {
    let file = read_input(&args.input, args.format)?;
    let id = args
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let report = build_report(&id, &file, &args.report.options()?)?;
    let mut out = args.report.writer()?;
    let text = serde_json::to_string_pretty(&report).expect("serializable");
    writeln!(out, "{text}")?;
    out.flush()?;
    Ok(EXIT_OK)
}

fn cmd_family(args: &FamilyArgs) -> Result<i32, CliError> {
    let c = match args.c.as_deref() {
        None => None,
        Some(s) if s.eq_ignore_ascii_case("sqrt") => Some(ExpParam::SqrtN),
        Some(s) => Some(ExpParam::Literal(rational_arg("c", s)?)),
    };
    let opts = args.report.options()?;
    let spec = FamilySpec {
        name: args.name,
        n: args.n,
        count: args.count,
        c,
        eps: opts.eps.clone(),
        delta: args.delta.as_deref().map(|d| rational_arg("delta", d)).transpose()?,
        seed: args.seed,
    };
    let mut out = args.report.writer()?;
    run_family(&spec, &opts, threads()?, &mut out)?;
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32, CliError> {
    let file = read_input(&args.input, args.format)?;
    let opts = VerifyOptions {
        suite: args.suite,
        certificate: args.certificate.as_deref().map(read_certificate).transpose()?,
        eps: args.eps.as_deref().map(|e| rational_arg("eps", e)).transpose()?,
    };
    let result = verify::verify(&file, &opts)?;
    let mut out = io::stdout().lock();
    for line in &result.results {
        writeln!(out, "{line}")?;
    }
    Ok(if result.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bound(args) => cmd_bound(args),
        Command::Family(args) => cmd_family(args),
        Command::Verify(args) => cmd_verify(args),
    };
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code
        }
    };
    ExitCode::from(code as u8)
}
