//! The `fptlab` command-line front end.
//!
//! [`run_with`] is the whole program minus process plumbing, so it can be
//! driven from tests with in-memory output streams.

mod cache;
mod report;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::basep::{ExactRational, Prime};
use crate::error::Error;
use crate::fedder::{nu_step, FedderOracle, NuTable};
use crate::fpt::{rational_candidate, special_values_with, FptApproximation};
use crate::fptset::{forbidden_intervals, measure, render, RenderFormat};
use crate::poly::Polynomial;
use crate::purity::{classify_at_threshold, classify_table};

pub use cache::{
    cache_lookup_or_compute, cache_lookup_or_compute_with, default_cache_path, CacheEvent, CacheRecord, NuCache,
    CACHE_ENV, LOCK_TIMEOUT, TOOL_VERSION,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fptlab", version, about = "Exact F-pure thresholds of hypersurfaces over F_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Output format
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,

    /// Cache file (default: $FPTLAB_CACHE, else fptlab/nu.jsonl under $XDG_CACHE_HOME or ~/.cache)
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,

    /// Neither read nor write the cache
    #[arg(long, global = true, conflicts_with = "cache")]
    no_cache: bool,

    /// Exit with status 3 when a result is left undecided
    #[arg(long, global = true)]
    strict: bool,

    /// Report cache hits and misses on stderr
    #[arg(long, global = true)]
    trace: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Svg,
    Ascii,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print nu(p^e) and the base-p digits for e = 1..depth
    Nu(PolyArgs),
    /// Print truncations, bounds and the best rational candidate
    Fpt(CandidateArgs),
    /// Decide F-pure / strongly F-pure / sharply F-pure at --lambda
    Classify(ClassifyArgs),
    /// List the forbidden intervals at the given levels
    Intervals(LevelArgs),
    /// Draw the forbidden intervals as ASCII art or SVG
    Render(LevelArgs),
    /// Report how much of the rational candidate is proven
    Certify(CandidateArgs),
}

#[derive(Debug, Args)]
struct PolyArgs {
    #[arg(long)]
    prime: u64,
    /// Polynomial, e.g. "x^2 + y^3" or "x1*x2 + 3*x3^4"
    #[arg(long)]
    poly: String,
    #[arg(long, default_value_t = 6)]
    depth: u32,
}

#[derive(Debug, Args)]
struct CandidateArgs {
    #[command(flatten)]
    poly: PolyArgs,
    /// Largest period searched for (p^d - 1) * candidate to be integral
    #[arg(long, default_value_t = 64)]
    d_max: u32,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[arg(long)]
    prime: u64,
    #[arg(long, required_unless_present = "at_threshold", conflicts_with = "at_threshold")]
    poly: Option<String>,
    /// Parameter as "num/den" or an integer
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    #[arg(long, default_value_t = 6)]
    depth: u32,
    /// Treat --lambda as the exact threshold of some f and classify the pair there
    #[arg(long)]
    at_threshold: bool,
    #[arg(long, default_value_t = 64)]
    d_max: u32,
    /// Accept lambda > 1
    #[arg(long)]
    allow_any_lambda: bool,
}

#[derive(Debug, Args)]
struct LevelArgs {
    #[arg(long)]
    prime: u64,
    /// Levels e, repeated or comma separated
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    level: Vec<u32>,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::DigitOutOfRange { .. } | Error::InconsistentTable { .. } => Failure::Internal(err.to_string()),
            _ => Failure::Input(err.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(err: io::Error) -> Self {
        Failure::Internal(err.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Runs the program on the process arguments and standard streams.
pub fn run() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the program and returns its exit status.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            let code = if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
            return code;
        }
    };
    let mut session = Session::new(&cli.global, err);
    let result = session.dispatch(&cli, out);
    session.flush_warnings();
    match result {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(session.err, "error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(session.err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

struct Session<'w> {
    cache: Option<NuCache>,
    trace: bool,
    strict: bool,
    format: Format,
    err: &'w mut dyn Write,
}

impl<'w> Session<'w> {
    fn new(global: &GlobalArgs, err: &'w mut dyn Write) -> Self {
        let path = if global.no_cache {
            None
        } else {
            global.cache.clone().or_else(default_cache_path)
        };
        let cache = path.and_then(|path| match NuCache::open(&path) {
            Ok(cache) => Some(cache),
            Err(e) => {
                let _ = writeln!(err, "warning: {}: cache disabled: {e}", path.display());
                None
            }
        });
        Session {
            cache,
            trace: global.trace,
            strict: global.strict,
            format: global.format,
            err,
        }
    }

    fn flush_warnings(&mut self) {
        if let Some(cache) = &mut self.cache {
            for w in cache.warnings.drain(..) {
                let _ = writeln!(self.err, "warning: {w}");
            }
        }
    }

    fn dispatch(&mut self, cli: &Cli, out: &mut dyn Write) -> CliResult<i32> {
        match &cli.command {
            Command::Nu(args) => {
                self.require_format(&[Format::Text, Format::Json])?;
                let table = self.table(args)?;
                self.emit(out, &report::nu(&table), report::nu_text(&table))?;
                Ok(EXIT_OK)
            }
            Command::Fpt(args) => {
                self.require_format(&[Format::Text, Format::Json])?;
                let approx = FptApproximation::from_table(self.table(&args.poly)?);
                let candidate = rational_candidate(&approx, args.d_max);
                self.emit(
                    out,
                    &report::fpt(&approx, &candidate),
                    report::fpt_text(&approx, &candidate),
                )?;
                Ok(EXIT_OK)
            }
            Command::Certify(args) => {
                self.require_format(&[Format::Text, Format::Json])?;
                let table = self.table(&args.poly)?;
                let special = special_values_with(&FedderOracle::new(table.polynomial())?, table.depth());
                let approx = FptApproximation::from_table(table);
                let candidate = rational_candidate(&approx, args.d_max);
                self.emit(
                    out,
                    &report::certify(&approx, &candidate, &special, args.d_max),
                    report::certify_text(&approx, &candidate, &special),
                )?;
                let exact = candidate.status == crate::fpt::CandidateStatus::ExactCertified;
                Ok(if self.strict && !exact { EXIT_UNDECIDED } else { EXIT_OK })
            }
            Command::Classify(args) => {
                self.require_format(&[Format::Text, Format::Json])?;
                let p = parse_prime(args.prime)?;
                let lambda = parse_lambda(&args.lambda)?;
                if lambda.is_negative() {
                    return Err(Failure::Input(format!("lambda must be nonnegative, got {lambda}")));
                }
                if lambda > ExactRational::one() && !args.allow_any_lambda {
                    return Err(Failure::Input(format!(
                        "lambda must lie in [0, 1], got {lambda} (pass --allow-any-lambda to accept it)"
                    )));
                }
                let (poly, verdicts) = if args.at_threshold {
                    (None, classify_at_threshold(&lambda, p, args.d_max)?)
                } else {
                    let text = args.poly.as_deref().expect("clap requires --poly here");
                    let table = self.table(&PolyArgs {
                        prime: args.prime,
                        poly: text.to_string(),
                        depth: args.depth,
                    })?;
                    let verdicts = classify_table(&table, &lambda)?;
                    (Some(table.polynomial().clone()), verdicts)
                };
                self.emit(
                    out,
                    &report::classify(p, poly.as_ref(), &lambda, &verdicts),
                    report::classify_text(p, poly.as_ref(), &lambda, &verdicts),
                )?;
                Ok(if self.strict && verdicts.any_undecided() { EXIT_UNDECIDED } else { EXIT_OK })
            }
            Command::Intervals(args) => {
                self.require_format(&[Format::Text, Format::Json])?;
                let p = parse_prime(args.prime)?;
                let mut levels = Vec::with_capacity(args.level.len());
                for &e in &args.level {
                    levels.push((forbidden_intervals(p, e)?, measure(p, e)?));
                }
                self.emit(out, &report::intervals(p, &levels), report::intervals_text(p, &levels))?;
                Ok(EXIT_OK)
            }
            Command::Render(args) => {
                let format = match self.format {
                    Format::Text | Format::Ascii => RenderFormat::Ascii,
                    Format::Svg => RenderFormat::Svg,
                    Format::Json => return Err(Failure::Input("render supports --format ascii or svg".into())),
                };
                let p = parse_prime(args.prime)?;
                out.write_all(render(p, &args.level, format)?.as_bytes())?;
                Ok(EXIT_OK)
            }
        }
    }

    fn require_format(&self, allowed: &[Format]) -> CliResult<()> {
        if allowed.contains(&self.format) {
            Ok(())
        } else {
            let name = self.format.to_possible_value().expect("no skipped variants");
            Err(Failure::Input(format!(
                "--format {} is not supported by this subcommand",
                name.get_name()
            )))
        }
    }

    fn emit<S: serde::Serialize>(&self, out: &mut dyn Write, json: &S, text: String) -> CliResult<()> {
        match self.format {
            Format::Json => {
                let mut rendered = serde_json::to_string_pretty(json).map_err(|e| Failure::Internal(e.to_string()))?;
                rendered.push('\n');
                out.write_all(rendered.as_bytes())?;
            }
            _ => out.write_all(text.as_bytes())?,
        }
        Ok(())
    }

    /// Builds the `nu` table level by level, consulting the cache at each level.
    fn table(&mut self, args: &PolyArgs) -> CliResult<NuTable> {
        let p = parse_prime(args.prime)?;
        let f = Polynomial::parse_nonunit(&args.poly, p)?;
        if args.depth == 0 {
            return Err(Error::ZeroDepth.into());
        }
        p.checked_pow(args.depth).ok_or(Error::Overflow(p.get(), args.depth))?;
        let oracle = FedderOracle::new(&f)?;
        let mut values = Vec::with_capacity(args.depth as usize);
        let mut previous = 0u64;
        for e in 1..=args.depth {
            let value = match &mut self.cache {
                None => nu_step(&oracle, previous, e)?,
                Some(cache) => {
                    let window = previous * p.get()..previous * p.get() + p.get();
                    let (value, event) = match cache.lookup(&f, e) {
                        Some(v) if !window.contains(&v) => {
                            cache.warnings.push(format!(
                                "{}: cached nu = {v} for {f} at e = {e} is inconsistent, recomputing",
                                cache.path().display()
                            ));
                            (nu_step(&oracle, previous, e)?, CacheEvent::Computed { persisted: false })
                        }
                        _ => cache_lookup_or_compute_with(&f, e, cache, || nu_step(&oracle, previous, e))?,
                    };
                    if self.trace {
                        let what = match event {
                            CacheEvent::Hit => "hit",
                            CacheEvent::Computed { persisted: true } => "miss, stored",
                            CacheEvent::Computed { persisted: false } => "miss, not stored",
                        };
                        let _ = writeln!(self.err, "trace: cache {what}: p={p} f={f} e={e} nu={value}");
                    }
                    value
                }
            };
            if self.trace && self.cache.is_none() {
                let _ = writeln!(self.err, "trace: computed: p={p} f={f} e={e} nu={value}");
            }
            values.push(value);
            previous = value;
        }
        Ok(NuTable::from_nu(f, values)?)
    }
}

fn parse_prime(value: u64) -> CliResult<Prime> {
    Ok(Prime::new(value)?)
}

/// Parses `"num/den"` or an integer, with optional signs.
pub fn parse_lambda(text: &str) -> std::result::Result<ExactRational, String> {
    let text = text.trim();
    let bad = || format!("invalid --lambda {text:?}: expected \"num/den\" or an integer");
    let parse = |s: &str| s.trim().parse::<BigInt>().map_err(|_| bad());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (parse(n)?, parse(d)?),
        None => (parse(text)?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(format!("invalid --lambda {text:?}: zero denominator"));
    }
    Ok(ExactRational::new(num, den))
}

impl From<String> for Failure {
    fn from(msg: String) -> Self {
        Failure::Input(msg)
    }
}
