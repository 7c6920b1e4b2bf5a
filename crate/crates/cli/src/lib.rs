//! Command-line driver: streams, block counts, classification and the
//! census experiments, each written as a deterministic report.

pub mod config;
pub mod parse;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use normcat::arith::cache::{load_spf_cache, save_spf_cache};
use normcat::arith::{Arith, SpfSieve};
use normcat::experiments::{self, default_checkpoints, ThinSetSpec};
use normcat::ngram::{count_stream, meager_report, CountOptions};
use normcat::report::Report;
use normcat::wordstream::{render_digits, truncate, write_digit_dump, Alphabet, DigitOrder};

use crate::config::RunConfig;
use crate::parse::{parse_base, parse_chain, parse_checkpoints, parse_primes, parse_set, parse_spec};

/// Environment variable naming the default directory for SPF caches.
pub const CACHE_DIR_ENV: &str = "NF_CACHE_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

const STREAM_SIEVE: u64 = 1 << 16;

#[derive(Parser, Debug)]
#[command(
    name = "normcat",
    version,
    about = "Concatenation streams of arithmetic functions and their digit statistics"
)]
struct Cli {
    /// Worker threads (output does not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// SPF cache file: loaded when present and large enough, written otherwise.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// key=value file supplying defaults for flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the smallest-prime-factor table and save it.
    Sieve {
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Print (or dump) the first N digits of a stream.
    Stream(StreamArgs),
    /// Count every k-block in the first N digits of a stream.
    Count(CountArgs),
    /// Census of integers that are not (eps, k)-normal.
    Classify(ClassifyArgs),
    /// Run one of the census experiments.
    Experiment {
        #[command(subcommand)]
        which: Experiment,
    },
    /// Convert a saved JSON report.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Default)]
struct StreamSel {
    /// Chain, outermost first (`phi.sigma`), or `id`.
    #[arg(long)]
    f: Option<String>,
    /// naturals, primes, odd-shift, order-primes or restricted:<set>.
    #[arg(long)]
    domain: Option<String>,
    #[arg(long)]
    base: Option<u32>,
    /// msf or paper.
    #[arg(long)]
    order: Option<String>,
    #[arg(long)]
    digits: Option<u64>,
}

#[derive(Args, Debug, Default)]
struct Output {
    /// Write the JSON report here instead of printing it.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug, Default)]
struct Range {
    /// Largest x; checkpoints default to powers of ten up to it.
    #[arg(long)]
    limit: Option<u64>,
    /// Explicit comma-separated checkpoints.
    #[arg(long)]
    checkpoints: Option<String>,
}

#[derive(Args, Debug)]
struct StreamArgs {
    #[command(flatten)]
    sel: StreamSel,
    /// Write a binary digit dump instead of printing.
    #[arg(long)]
    dump: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[command(flatten)]
    sel: StreamSel,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    base: Option<u32>,
    #[arg(long)]
    order: Option<String>,
    #[command(flatten)]
    range: Range,
    #[command(flatten)]
    out: Output,
}

#[derive(Subcommand, Debug)]
enum Experiment {
    /// #{n <= x : lambda(n) < sqrt(n)}.
    Fps {
        #[command(flatten)]
        range: Range,
        #[command(flatten)]
        out: Output,
    },
    /// #{n <= x : d | a(n)}.
    Divisor {
        #[arg(long, default_value = "phi")]
        a: String,
        #[arg(long)]
        d: u64,
        #[command(flatten)]
        range: Range,
        #[command(flatten)]
        out: Output,
    },
    /// #{n <= x : Omega(a(n)) > K^2}.
    OmegaTail {
        #[arg(long, default_value = "phi")]
        a: String,
        #[arg(long = "K", default_value_t = 3)]
        big_k: u32,
        #[command(flatten)]
        range: Range,
        #[command(flatten)]
        out: Output,
    },
    /// #{n <= x : f(n) < n^(1/2^j)}.
    SmallValue {
        #[arg(long)]
        f: Option<String>,
        #[arg(long, default_value_t = 0.5)]
        theta: f64,
        #[command(flatten)]
        range: Range,
        #[command(flatten)]
        out: Output,
    },
    /// #{n <= x : a(n) in E} for a thin set E.
    ThinPreimage {
        #[arg(long, default_value = "phi")]
        a: String,
        #[arg(long, default_value = "pow2")]
        set: String,
        #[arg(long, default_value_t = 0.5)]
        theta: f64,
        #[command(flatten)]
        range: Range,
        #[command(flatten)]
        out: Output,
    },
    /// Mean and maximal growth of log f against log n.
    Growth {
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        domain: Option<String>,
        #[command(flatten)]
        range: Range,
        #[command(flatten)]
        out: Output,
    },
    /// Recurrence of the opening block of a G* stream.
    NonNormal {
        /// Comma-separated primes of G.
        #[arg(long, default_value = "2")]
        primes: String,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        base: Option<u32>,
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        digits: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
    /// Extremes of the phi and sigma ratios up to x.
    Extremal {
        #[arg(long)]
        limit: Option<u64>,
        #[command(flatten)]
        out: Output,
    },
    /// Density of a restricted domain against x / (log x)^B.
    DomainDensity {
        #[arg(long, default_value = "primes")]
        set: String,
        #[arg(long, default_value_t = 1.1)]
        b: f64,
        #[command(flatten)]
        range: Range,
        #[command(flatten)]
        out: Output,
    },
}

/// A problem with the invocation rather than with the computation.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
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
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli) {
        Ok(text) => match out.write_all(text.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_FAILURE
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &anyhow::Error) -> i32 {
    for cause in e.chain() {
        if cause.is::<UsageError>() || cause.is::<parse::ParseError>() || cause.is::<config::ConfigError>() {
            return EXIT_USAGE;
        }
        if let Some(core) = cause.downcast_ref::<normcat::Error>() {
            return match core {
                normcat::Error::Overflow(_) | normcat::Error::Capacity { .. } => EXIT_CAPACITY,
                normcat::Error::InvalidInput(_) | normcat::Error::DegenerateInput(_) => EXIT_USAGE,
                _ => EXIT_FAILURE,
            };
        }
    }
    EXIT_FAILURE
}

fn execute(mut cli: Cli) -> Result<String> {
    let cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    if cli.cache.is_none() {
        cli.cache = cfg.cache.as_ref().map(PathBuf::from);
    }
    match cli.threads {
        Some(0) => Err(usage("--threads must be at least 1")),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(t).build()?;
            pool.install(|| dispatch(&cli, &cfg))
        }
        None => dispatch(&cli, &cfg),
    }
}

/// Resolved stream selection, with config values and defaults applied.
struct Selection {
    spec: normcat::arith::CompositionSpec,
    alphabet: Alphabet,
    order: DigitOrder,
    digits: Option<u64>,
}

fn alphabet(g: u32) -> Result<Alphabet> {
    Alphabet::new(g).map_err(|_| usage(format!("base must lie in 2..=256, got {g}")))
}

fn order(text: Option<&str>, cfg: &RunConfig) -> Result<DigitOrder> {
    match text {
        Some(t) => DigitOrder::parse(t).ok_or_else(|| usage(format!("order must be msf or paper, got `{t}`"))),
        None => Ok(cfg.order.unwrap_or_default()),
    }
}

fn select(sel: &StreamSel, cfg: &RunConfig) -> Result<Selection> {
    let chain = sel.f.clone().or_else(|| cfg.f.clone()).unwrap_or_else(|| "id".into());
    let domain = sel.domain.clone().or_else(|| cfg.domain.clone()).unwrap_or_else(|| "naturals".into());
    Ok(Selection {
        spec: parse_spec(&chain, &domain)?,
        alphabet: alphabet(sel.base.or(cfg.base).unwrap_or(10))?,
        order: order(sel.order.as_deref(), cfg)?,
        digits: sel.digits.or(cfg.digits),
    })
}

fn checkpoints(range: &Range, cfg: &RunConfig, default_limit: u64) -> Result<Vec<u64>> {
    match &range.checkpoints {
        Some(list) => parse_checkpoints(list).map_err(usage),
        None => {
            let limit = range.limit.or(cfg.limit).unwrap_or(default_limit);
            if limit == 0 {
                return Err(usage("--limit must be at least 1"));
            }
            Ok(default_checkpoints(limit))
        }
    }
}

fn cache_path(cli: &Cli, limit: u64) -> Option<PathBuf> {
    cli.cache
        .clone()
        .or_else(|| std::env::var_os(CACHE_DIR_ENV).map(|dir| Path::new(&dir).join(format!("spf-{limit}.nfsv1"))))
}

/// Factorization context covering at least `limit`, taken from the cache
/// when one is configured and large enough, and written to it otherwise.
fn arith(cli: &Cli, limit: u64) -> Result<Arith> {
    let limit = limit.max(2);
    let Some(path) = cache_path(cli, limit) else {
        return Ok(Arith::with_limit(limit)?);
    };
    if path.exists() {
        let sieve = load_spf_cache(&path).with_context(|| format!("loading {}", path.display()))?;
        if sieve.limit() >= limit {
            return Ok(Arith::from_sieve(sieve.into()));
        }
    }
    let sieve = SpfSieve::new(limit)?;
    save_spf_cache(&sieve, &path).with_context(|| format!("writing {}", path.display()))?;
    Ok(Arith::from_sieve(sieve.into()))
}

fn emit(report: Report, out: &Output, cfg: &RunConfig) -> Result<String> {
    let json = report.to_json()?;
    let path = out.report.clone().or_else(|| cfg.report.as_ref().map(PathBuf::from));
    let format = out.format.unwrap_or(Format::Json);
    match path {
        Some(path) => {
            std::fs::write(&path, &json).with_context(|| format!("writing {}", path.display()))?;
            Ok(match format {
                Format::Json => format!("wrote {}\n", path.display()),
                Format::Csv => report.to_csv(),
            })
        }
        None => Ok(match format {
            Format::Json => json,
            Format::Csv => report.to_csv(),
        }),
    }
}

fn dispatch(cli: &Cli, cfg: &RunConfig) -> Result<String> {
    match &cli.command {
        Command::Sieve { limit } => {
            let limit = limit.or(cfg.limit).ok_or_else(|| usage("sieve needs --limit"))?;
            let path =
                cache_path(cli, limit).ok_or_else(|| usage(format!("sieve needs --cache or {CACHE_DIR_ENV}")))?;
            let sieve = SpfSieve::new(limit)?;
            save_spf_cache(&sieve, &path).with_context(|| format!("writing {}", path.display()))?;
            Ok(format!("limit={} primes={} cache={}\n", limit, sieve.primes().len(), path.display()))
        }
        Command::Stream(args) => {
            let s = select(&args.sel, cfg)?;
            let n = s.digits.ok_or_else(|| usage("stream needs --digits"))?;
            let len = usize::try_from(n).map_err(|_| usage("--digits is too large"))?;
            if len == 0 {
                return Err(usage("--digits must be at least 1"));
            }
            let t = truncate(&s.spec, s.alphabet, s.order, len, &arith(cli, STREAM_SIEVE)?)?;
            match &args.dump {
                Some(path) => {
                    let file = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
                    write_digit_dump(std::io::BufWriter::new(file), s.alphabet, s.order, &t.digits)?;
                    Ok(format!("wrote {} digits to {}\n", t.digits.len(), path.display()))
                }
                None => Ok(format!("{}\n", render_digits(&t.digits, s.alphabet))),
            }
        }
        Command::Count(args) => {
            let s = select(&args.sel, cfg)?;
            let n = s.digits.ok_or_else(|| usage("count needs --digits"))?;
            let k = args.k.or(cfg.k).unwrap_or(1);
            let options = CountOptions { eps: args.eps.or(cfg.eps).unwrap_or(CountOptions::default().eps) };
            let report = count_stream(&s.spec, s.alphabet, s.order, k, n, options, &arith(cli, STREAM_SIEVE)?)?;
            emit(report.into(), &args.out, cfg)
        }
        Command::Classify(args) => {
            let eps = args.eps.or(cfg.eps).unwrap_or(0.05);
            let k = args.k.or(cfg.k).unwrap_or(1);
            if k == 0 {
                return Err(usage("--k must be at least 1"));
            }
            let g = alphabet(args.base.or(cfg.base).unwrap_or(2))?;
            let ord = order(args.order.as_deref(), cfg)?;
            let points = checkpoints(&args.range, cfg, 1_000_000)?;
            emit(meager_report(eps, k, g, ord, &points)?.into(), &args.out, cfg)
        }
        Command::Experiment { which } => experiment(cli, cfg, which),
        Command::Report { input, format } => {
            let text = std::fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
            let report = Report::from_json(&text)?;
            Ok(match format {
                Format::Csv => report.to_csv(),
                Format::Json => report.to_json()?,
            })
        }
    }
}

fn experiment(cli: &Cli, cfg: &RunConfig, which: &Experiment) -> Result<String> {
    const DEFAULT_LIMIT: u64 = 100_000;
    match which {
        Experiment::Fps { range, out } => {
            let points = checkpoints(range, cfg, DEFAULT_LIMIT)?;
            let ar = arith(cli, *points.last().unwrap_or(&2))?;
            emit(experiments::lemma_fps_census(&points, &ar)?.into(), out, cfg)
        }
        Experiment::Divisor { a, d, range, out } => {
            let points = checkpoints(range, cfg, DEFAULT_LIMIT)?;
            let ar = arith(cli, *points.last().unwrap_or(&2))?;
            let report = experiments::divisor_preimage_census(&parse_base(a)?, *d, &points, &ar)?;
            emit(report.into(), out, cfg)
        }
        Experiment::OmegaTail { a, big_k, range, out } => {
            let points = checkpoints(range, cfg, DEFAULT_LIMIT)?;
            let ar = arith(cli, *points.last().unwrap_or(&2))?;
            let report = experiments::omega_tail_census(&parse_base(a)?, *big_k, &points, &ar)?;
            emit(report.into(), out, cfg)
        }
        Experiment::SmallValue { f, theta, range, out } => {
            let points = checkpoints(range, cfg, DEFAULT_LIMIT)?;
            let ar = arith(cli, *points.last().unwrap_or(&2))?;
            let chain = f.clone().or_else(|| cfg.f.clone()).unwrap_or_else(|| "phi".into());
            let spec = normcat::arith::CompositionSpec::new(parse_chain(&chain)?, normcat::arith::Domain::Naturals);
            emit(experiments::small_value_census(&spec, *theta, &points, &ar)?.into(), out, cfg)
        }
        Experiment::ThinPreimage { a, set, theta, range, out } => {
            let points = checkpoints(range, cfg, DEFAULT_LIMIT)?;
            let ar = arith(cli, *points.last().unwrap_or(&2))?;
            let spec = ThinSetSpec::new(*theta, parse_set(set)?)?;
            emit(experiments::thin_preimage_census(&parse_base(a)?, &spec, &points, &ar)?.into(), out, cfg)
        }
        Experiment::Growth { f, domain, range, out } => {
            let points = checkpoints(range, cfg, DEFAULT_LIMIT)?;
            let chain = f.clone().or_else(|| cfg.f.clone()).unwrap_or_else(|| "id".into());
            let domain = domain.clone().or_else(|| cfg.domain.clone()).unwrap_or_else(|| "naturals".into());
            let spec = parse_spec(&chain, &domain)?;
            let ar = arith(cli, STREAM_SIEVE)?;
            emit(experiments::growth_hypothesis_check(&spec, &points, &ar)?.into(), out, cfg)
        }
        Experiment::NonNormal { primes, k, base, order: ord, digits, out } => {
            let set = parse_primes(primes)?;
            let g = alphabet(base.or(cfg.base).unwrap_or(10))?;
            let ord = order(ord.as_deref(), cfg)?;
            let k = k.or(cfg.k.and_then(|k| u32::try_from(k).ok())).unwrap_or(5);
            let n = digits.or(cfg.digits).unwrap_or(1_000_000);
            let ar = arith(cli, STREAM_SIEVE)?;
            emit(experiments::non_normality_demo(&set, k, g, ord, n, &ar)?.into(), out, cfg)
        }
        Experiment::Extremal { limit, out } => {
            let x = limit.or(cfg.limit).unwrap_or(1_000_000);
            let ar = arith(cli, x)?;
            emit(experiments::extremal_ratio_report(x, &ar)?.into(), out, cfg)
        }
        Experiment::DomainDensity { set, b, range, out } => {
            let points = checkpoints(range, cfg, 1_000_000)?;
            emit(experiments::restricted_domain_density(&parse_set(set)?, *b, &points)?.into(), out, cfg)
        }
    }
}
