//! Command-line front end: evaluate the closed forms, draw samples, verify
//! the formulas against simulation, fit polynomials, and export curve data
//! as CSV.
//!
//! Machine-readable output (values, CSV) goes to the `-o` path or standard
//! output; human-readable summaries go to standard error so they never
//! contaminate piped data. Exit codes: 0 success, 1 verification failure,
//! 2 usage error, 3 I/O error.

use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;
use trapdist::{
    cdf, fit_pdf, fmt_f64, pdf, run_verification, sample_distances, write_fit_csv,
    write_report_csv, CaseId, FitConfig, ScaledDistribution, VerificationReport,
};

#[derive(Parser)]
#[command(
    name = "trapdist",
    version,
    about = "Distance distributions within and between neighboring unit trapezoids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the closed-form density or distribution function at a point
    Eval(EvalArgs),
    /// Draw endpoint-pair distances and write them as CSV
    Sample(SampleArgs),
    /// Check the closed forms against simulation and consistency suites
    Verify(VerifyArgs),
    /// Fit least-squares polynomials to the densities
    Fit(FitArgs),
    /// Export density and distribution curves over a uniform grid
    Curves(CurvesArgs),
}

/// One endpoint placement.
#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    Ab,
    Cd,
    Ef,
    Gh,
}

impl From<CaseArg> for CaseId {
    fn from(arg: CaseArg) -> CaseId {
        match arg {
            CaseArg::Ab => CaseId::Ab,
            CaseArg::Cd => CaseId::Cd,
            CaseArg::Ef => CaseId::Ef,
            CaseArg::Gh => CaseId::Gh,
        }
    }
}

/// One endpoint placement, or all four.
#[derive(Clone, Copy, ValueEnum)]
enum CaseSelector {
    Ab,
    Cd,
    Ef,
    Gh,
    All,
}

impl CaseSelector {
    fn cases(self) -> Vec<CaseId> {
        match self {
            CaseSelector::Ab => vec![CaseId::Ab],
            CaseSelector::Cd => vec![CaseId::Cd],
            CaseSelector::Ef => vec![CaseId::Ef],
            CaseSelector::Gh => vec![CaseId::Gh],
            CaseSelector::All => CaseId::ALL.to_vec(),
        }
    }
}

#[derive(Args)]
struct EvalArgs {
    /// Endpoint placement
    case: CaseArg,
    /// Evaluate the probability density function
    #[arg(long, conflicts_with = "cdf", required_unless_present = "cdf")]
    pdf: bool,
    /// Evaluate the cumulative distribution function
    #[arg(long)]
    cdf: bool,
    /// Distance at which to evaluate
    #[arg(short = 'd', long, allow_negative_numbers = true)]
    distance: f64,
    /// Side-length scale factor
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    scale: f64,
}

#[derive(Args)]
struct SampleArgs {
    /// Endpoint placement
    case: CaseArg,
    /// Number of distances to draw
    #[arg(short = 'n', long = "count", default_value_t = 10_000)]
    count: usize,
    /// Random seed
    #[arg(short = 's', long, default_value_t = 1)]
    seed: u64,
    /// Output path (standard output if omitted)
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Endpoint placement, or all four
    case: CaseSelector,
    /// Distances per seed (at least 100)
    #[arg(short = 'n', long = "count", default_value_t = 10_000)]
    count: usize,
    /// Seeds: a single integer, a comma-separated list, or an inclusive
    /// range `a..b`
    #[arg(long, default_value = "1..100")]
    seeds: String,
    /// Report path (standard output if omitted)
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Endpoint placement, or all four
    case: CaseSelector,
    /// Polynomial degree
    #[arg(short = 'D', long, default_value_t = 12)]
    degree: usize,
    /// Grid points over the support (must exceed degree + 1)
    #[arg(short = 'g', long, default_value_t = 1000)]
    grid: usize,
    /// Coefficient CSV path (standard output if omitted)
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CurvesArgs {
    /// Endpoint placement, or all four
    case: CaseSelector,
    /// Grid points spanning [0, largest d_max] (at least 2)
    #[arg(short = 'g', long, default_value_t = 1000)]
    grid: usize,
    /// Curve CSV path (standard output if omitted)
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    fn io(context: impl Into<String>, source: io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Io { .. } => ExitCode::from(3),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Eval(args) => cmd_eval(args).map(|()| ExitCode::SUCCESS),
        Command::Sample(args) => cmd_sample(args).map(|()| ExitCode::SUCCESS),
        Command::Verify(args) => cmd_verify(args),
        Command::Fit(args) => cmd_fit(args).map(|()| ExitCode::SUCCESS),
        Command::Curves(args) => cmd_curves(args).map(|()| ExitCode::SUCCESS),
    }
}

fn cmd_eval(args: EvalArgs) -> Result<(), CliError> {
    let case = CaseId::from(args.case);
    let scaled =
        ScaledDistribution::new(case, args.scale).map_err(|e| CliError::Usage(e.to_string()))?;
    let value = if args.pdf {
        scaled.pdf(args.distance)
    } else {
        scaled.cdf(args.distance)
    };
    println!("{}", fmt_f64(value));
    Ok(())
}

fn cmd_sample(args: SampleArgs) -> Result<(), CliError> {
    if args.count == 0 {
        return Err(CliError::Usage("count must be at least 1".into()));
    }
    let distances = sample_distances(args.case.into(), args.count, args.seed);
    with_output(args.output.as_deref(), |out| {
        writeln!(out, "d")?;
        for d in &distances {
            writeln!(out, "{}", fmt_f64(*d))?;
        }
        Ok(())
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, CliError> {
    if args.count < 100 {
        return Err(CliError::Usage(format!(
            "count must be at least 100 for a meaningful test, got {}",
            args.count
        )));
    }
    let seeds = parse_seeds(&args.seeds)?;
    let reports: Vec<VerificationReport> = args
        .case
        .cases()
        .into_iter()
        .map(|case| run_verification(case, args.count, &seeds))
        .collect();
    with_output(args.output.as_deref(), |out| {
        write_report_csv(out, &reports)
    })?;
    let mut all_passed = true;
    for report in &reports {
        let ks_passed = report.ks.iter().filter(|r| r.pass).count();
        eprintln!(
            "{}: KS {}/{} seeds passed, consistency checks {}",
            report.case,
            ks_passed,
            report.ks.len(),
            if report.all_checks_passed() {
                "all passed"
            } else {
                "FAILED"
            }
        );
        all_passed &= report.passed();
    }
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("verification failed");
        ExitCode::from(1)
    })
}

fn cmd_fit(args: FitArgs) -> Result<(), CliError> {
    let config = FitConfig {
        degree: args.degree,
        grid_points: args.grid,
    };
    let fits = args
        .case
        .cases()
        .into_iter()
        .map(|case| fit_pdf(case, &config))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    with_output(args.output.as_deref(), |out| write_fit_csv(out, &fits))?;
    for fit in &fits {
        eprintln!("{}: NormR {}", fit.case, fmt_f64(fit.norm_residuals));
    }
    Ok(())
}

fn cmd_curves(args: CurvesArgs) -> Result<(), CliError> {
    if args.grid < 2 {
        return Err(CliError::Usage(format!(
            "grid must have at least 2 points, got {}",
            args.grid
        )));
    }
    let cases = args.case.cases();
    let d_top = cases
        .iter()
        .map(|c| c.d_max())
        .fold(f64::NEG_INFINITY, f64::max);
    with_output(args.output.as_deref(), |out| {
        write!(out, "d")?;
        for case in &cases {
            write!(out, ",pdf_{case},cdf_{case}")?;
        }
        writeln!(out)?;
        for i in 0..args.grid {
            let d = d_top * i as f64 / (args.grid - 1) as f64;
            write!(out, "{}", fmt_f64(d))?;
            for &case in &cases {
                write!(out, ",{},{}", fmt_f64(pdf(case, d)), fmt_f64(cdf(case, d)))?;
            }
            writeln!(out)?;
        }
        Ok(())
    })
}

/// Parses the seed argument: a single integer, a comma-separated list, or
/// an inclusive range `a..b`.
fn parse_seeds(text: &str) -> Result<Vec<u64>, CliError> {
    let parse_one = |token: &str| {
        token
            .trim()
            .parse::<u64>()
            .map_err(|_| CliError::Usage(format!("invalid seed {token:?}")))
    };
    let text = text.trim();
    if let Some((lo, hi)) = text.split_once("..") {
        let lo = parse_one(lo)?;
        let hi = parse_one(hi)?;
        if hi < lo {
            return Err(CliError::Usage(format!("empty seed range {lo}..{hi}")));
        }
        if hi - lo >= 1_000_000 {
            return Err(CliError::Usage(format!(
                "seed range {lo}..{hi} is unreasonably large"
            )));
        }
        Ok((lo..=hi).collect())
    } else {
        text.split(',').map(parse_one).collect()
    }
}

/// Streams `write` to standard output, or to a temporary file next to
/// `path` that is renamed into place only after a complete, flushed write;
/// a failing run never leaves a partial file behind.
fn with_output<F>(path: Option<&Path>, write: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match path {
        None => {
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            write(&mut out)
                .and_then(|()| out.flush())
                .map_err(|e| CliError::io("writing to standard output", e))
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(parent) if !parent.as_os_str().is_empty() => parent,
                _ => Path::new("."),
            };
            let mut temp = tempfile::NamedTempFile::new_in(dir).map_err(|e| {
                CliError::io(format!("creating temporary file in {}", dir.display()), e)
            })?;
            {
                let mut out = BufWriter::new(temp.as_file_mut());
                write(&mut out)
                    .and_then(|()| out.flush())
                    .map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
            }
            temp.persist(path)
                .map_err(|e| CliError::io(format!("replacing {}", path.display()), e.error))?;
            Ok(())
        }
    }
}
