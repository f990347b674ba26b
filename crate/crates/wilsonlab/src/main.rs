//! Command-line front end.
//!
//! Four verbs: `eval` (one residue, one n), `scan` (range cross-check),
//! `matrix` (power-matrix determinant/diagonal/row-sum checks), `stats`
//! (quadratic residue statistics for an odd prime).
//!
//! Exit codes are a stable contract: 0 = success/agreement, 1 = a computed
//! mismatch, 2 = usage or domain error. Machine-readable output goes to
//! stdout; diagnostics go to stderr.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use wilsonlab::closedform::{
    df_closed, df_prime, gauss_wilson, hyper_prime, quad_stats, sf_prime, subfactorial_closed,
    wilson_residue,
};
use wilsonlab::matrix::{build_power_matrix, det_mod_p, diagonal_product, giuga_row_sum};
use wilsonlab::modmath::{classify, Mod4, PrimeClassification, MAX_MODULUS};
use wilsonlab::oracles::{
    double_factorial_mod, factorial_mod, gauss_factorial_mod, hyperfactorial_mod, subfactorial_mod,
    superfactorial_mod, unit_product_mod,
};
use wilsonlab::verify::{
    scan_with, IdentityKind, ReportEmitter, ReportFormat, ScanOptions, CATALOG,
};

#[derive(Parser)]
#[command(
    name = "wilsonlab",
    version,
    about = "Cross-checks factorial-family residues mod n: direct modular products vs closed-form predictions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one residue by oracle, closed form, or both
    Eval(EvalArgs),
    /// Cross-check identities over a range of n
    Scan(ScanArgs),
    /// Check power-matrix identities at a prime
    Matrix(MatrixArgs),
    /// Print quadratic residue statistics for an odd prime
    Stats(StatsArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Product family to evaluate
    #[arg(long, value_enum)]
    kind: EvalKind,
    /// The modulus n; Wilson-shaped kinds evaluate their (n-1)-indexed
    /// product mod n, `sub` evaluates !n, `unit` the unit product mod n
    #[arg(long)]
    n: u64,
    /// Evaluate the product up to n under this modulus instead (raw index
    /// mode; oracle engine only)
    #[arg(long)]
    modulus: Option<u64>,
    /// Coprimality base, required by --kind gauss
    #[arg(long)]
    base: Option<u64>,
    #[arg(long, value_enum, default_value_t = Engine::Oracle)]
    engine: Engine,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum EvalKind {
    Factorial,
    Double,
    Hyper,
    Super,
    Sub,
    Gauss,
    Unit,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Engine {
    Oracle,
    Closed,
    Both,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 2)]
    from: u64,
    #[arg(long, default_value_t = 20_000)]
    to: u64,
    /// Comma-separated identity tags, or "all" for the whole catalog
    #[arg(long, default_value = "all", value_delimiter = ',')]
    kinds: Vec<String>,
    /// Write the report to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Omit timing so output is byte-reproducible across runs and workers
    #[arg(long)]
    stable: bool,
    /// List the registered identity tags and exit
    #[arg(long)]
    list_kinds: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Jsonl,
    Csv,
    Text,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Jsonl => ReportFormat::Jsonl,
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Text => ReportFormat::Text,
        }
    }
}

#[derive(Args)]
struct MatrixArgs {
    /// Matrix prime p (entries j^i for 1 <= i, j <= p-1); giuga also
    /// accepts composite values here
    #[arg(long)]
    p: u64,
    #[arg(long, value_enum, default_value_t = MatrixCheck::All)]
    check: MatrixCheck,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MatrixCheck {
    Det,
    Diag,
    Giuga,
    All,
}

#[derive(Args)]
struct StatsArgs {
    /// Odd prime to profile
    #[arg(long)]
    p: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Matrix(args) => cmd_matrix(args),
        Command::Stats(args) => cmd_stats(args),
    }
}

/// Modulus cap, lowered by WILSONLAB_MAX_MODULUS when set.
fn modulus_cap() -> Result<u64> {
    match std::env::var("WILSONLAB_MAX_MODULUS") {
        Ok(raw) => raw
            .trim()
            .parse::<u64>()
            .map_err(|_| anyhow!("WILSONLAB_MAX_MODULUS must be an unsigned integer, got {raw:?}")),
        Err(std::env::VarError::NotPresent) => Ok(MAX_MODULUS),
        Err(err) => Err(err).context("reading WILSONLAB_MAX_MODULUS"),
    }
}

fn ensure_within_cap(value: u64, cap: u64, what: &str) -> Result<()> {
    if value > cap {
        bail!("{what} {value} exceeds the modulus cap {cap}");
    }
    Ok(())
}

fn verdict(agree: bool) -> &'static str {
    if agree {
        "AGREE"
    } else {
        "MISMATCH"
    }
}

fn exit_for(agree: bool) -> ExitCode {
    if agree {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_eval(args: EvalArgs) -> Result<ExitCode> {
    let cap = modulus_cap()?;
    ensure_within_cap(args.n, cap, "--n")?;
    if let Some(m) = args.modulus {
        ensure_within_cap(m, cap, "--modulus")?;
    }
    match (args.kind, args.base) {
        (EvalKind::Gauss, None) => bail!("--kind gauss requires --base"),
        (EvalKind::Gauss, Some(0)) => bail!("--base must be positive"),
        (kind, Some(_)) if kind != EvalKind::Gauss => {
            bail!("--base only applies to --kind gauss")
        }
        _ => {}
    }

    let oracle_value = |n: u64, m: u64| -> Result<u64> {
        Ok(match args.kind {
            EvalKind::Factorial => factorial_mod(n, m),
            EvalKind::Double => double_factorial_mod(n, m),
            EvalKind::Hyper => hyperfactorial_mod(n, m),
            EvalKind::Super => superfactorial_mod(n, m),
            EvalKind::Sub => subfactorial_mod(n, m),
            EvalKind::Gauss => gauss_factorial_mod(n, args.base.unwrap(), m),
            EvalKind::Unit => unit_product_mod(m)?,
        })
    };

    // Raw index mode: the product index and the modulus are decoupled, so
    // the shape-of-n closed forms do not apply.
    if let Some(m) = args.modulus {
        if args.engine != Engine::Oracle {
            bail!("closed forms need the default modulus convention; drop --modulus or use --engine oracle");
        }
        if args.kind == EvalKind::Unit {
            bail!("the unit product is determined by its modulus; drop --modulus and set --n");
        }
        println!("{}", oracle_value(args.n, m)?);
        return Ok(ExitCode::SUCCESS);
    }

    let n = args.n;
    if n < 2 {
        bail!("--n must be at least 2, got {n}");
    }
    // Default convention: one knob, n is the modulus; Wilson-shaped kinds
    // evaluate the (n-1)-indexed product.
    let oracle = || -> Result<u64> {
        let index = match args.kind {
            EvalKind::Factorial | EvalKind::Double | EvalKind::Hyper | EvalKind::Super => n - 1,
            EvalKind::Sub | EvalKind::Gauss | EvalKind::Unit => n,
        };
        oracle_value(index, n)
    };
    let closed = || -> Result<u64> {
        Ok(match args.kind {
            EvalKind::Factorial => wilson_residue(n),
            EvalKind::Double => df_closed(n)?,
            EvalKind::Hyper => hyper_prime(n)?,
            EvalKind::Super => sf_prime(n)?,
            EvalKind::Sub => subfactorial_closed(n)?,
            EvalKind::Unit => gauss_wilson(n)?,
            EvalKind::Gauss => bail!("no closed form is registered for gauss; use --engine oracle"),
        })
    };

    match args.engine {
        Engine::Oracle => {
            println!("{}", oracle()?);
            Ok(ExitCode::SUCCESS)
        }
        Engine::Closed => {
            println!("{}", closed()?);
            Ok(ExitCode::SUCCESS)
        }
        Engine::Both => {
            let o = oracle()?;
            let c = closed()?;
            println!("oracle={o} closed={c} {}", verdict(o == c));
            Ok(exit_for(o == c))
        }
    }
}

fn parse_kinds(raw: &[String]) -> Result<Vec<IdentityKind>> {
    if raw.iter().any(|k| k == "all") {
        return Ok(CATALOG.to_vec());
    }
    raw.iter()
        .map(|k| k.parse::<IdentityKind>().map_err(Into::into))
        .collect()
}

/// A reader closing the pipe mid-stream is normal termination for a
/// streaming report, not a failure.
fn is_broken_pipe(err: &io::Error) -> bool {
    err.kind() == io::ErrorKind::BrokenPipe
}

fn cmd_scan(args: ScanArgs) -> Result<ExitCode> {
    if args.list_kinds {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        for kind in CATALOG {
            if let Err(err) = writeln!(out, "{:<16} {}", kind.tag(), kind.describe()) {
                if is_broken_pipe(&err) {
                    break;
                }
                return Err(err.into());
            }
        }
        return Ok(ExitCode::SUCCESS);
    }
    let cap = modulus_cap()?;
    ensure_within_cap(args.to, cap, "--to")?;
    if args.from < 2 || args.from > args.to {
        // reject before the emitter writes any header
        return Err(wilsonlab::Error::InvalidRange {
            from: args.from,
            to: args.to,
        }
        .into());
    }
    let kinds = parse_kinds(&args.kinds)?;
    let opts = ScanOptions::new(args.from, args.to, &kinds).workers(args.workers);

    let sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    };
    let mut emitter = ReportEmitter::new(args.format.into(), args.stable, sink)?;

    let mut write_err: Option<io::Error> = None;
    let report = scan_with(&opts, |rec| {
        if write_err.is_none() {
            if let Err(err) = emitter.record(rec) {
                write_err = Some(err);
            }
        }
    })?;
    match write_err {
        Some(err) if is_broken_pipe(&err) => {} // reader stopped; keep the verdict below
        Some(err) => return Err(err).context("writing scan report"),
        None => {
            if let Err(err) = emitter.finish(&report) {
                if !is_broken_pipe(&err) {
                    return Err(err).context("writing scan report");
                }
            }
        }
    }

    let mismatches = report.mismatch_count();
    if mismatches > 0 {
        eprintln!(
            "{mismatches} mismatching check(s) in {}..={}",
            report.from, report.to
        );
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_matrix(args: MatrixArgs) -> Result<ExitCode> {
    let cap = modulus_cap()?;
    ensure_within_cap(args.p, cap, "--p")?;
    let p = args.p;
    let mut all_agree = true;

    if matches!(args.check, MatrixCheck::Det | MatrixCheck::All) {
        let matrix = build_power_matrix(p)?;
        let det = det_mod_p(&matrix);
        let sf = superfactorial_mod(p - 1, p);
        let agree = det == sf;
        println!("det={det} sf({}) mod {p}={sf} {}", p - 1, verdict(agree));
        all_agree &= agree;
    }
    if matches!(args.check, MatrixCheck::Diag | MatrixCheck::All) {
        let matrix = build_power_matrix(p)?;
        let diag = diagonal_product(&matrix);
        let hyper = hyperfactorial_mod(p - 1, p);
        let agree = diag == hyper;
        println!(
            "diag={diag} H({}) mod {p}={hyper} {}",
            p - 1,
            verdict(agree)
        );
        all_agree &= agree;
    }
    if matches!(args.check, MatrixCheck::Giuga | MatrixCheck::All) {
        if p < 2 {
            bail!("--p must be at least 2 for the row-sum check, got {p}");
        }
        let sum = giuga_row_sum(p);
        let prime = classify(p)?.is_prime();
        // the row sum attains n-1 exactly at the primes
        let agree = (sum == p - 1) == prime;
        println!("giuga={sum} n-1={} prime={prime} {}", p - 1, verdict(agree));
        all_agree &= agree;
    }
    Ok(exit_for(all_agree))
}

fn cmd_stats(args: StatsArgs) -> Result<ExitCode> {
    let cap = modulus_cap()?;
    ensure_within_cap(args.p, cap, "--p")?;
    let p = args.p;
    let stats = quad_stats(p)?;
    let df_oracle = double_factorial_mod(p - 1, p);
    let df_closed = df_prime(p)?;
    let agree = df_oracle == df_closed;
    let mut line = format!("p={p} nu={} N={} mu={}", stats.nu, stats.big_n, stats.mu);
    if let Some(i_p) = stats.i_p {
        line.push_str(&format!(" i_p={i_p}"));
    }
    line.push_str(&format!(
        " df_oracle={df_oracle} df_closed={df_closed} {}",
        verdict(agree)
    ));
    println!("{line}");
    let class = classify(p)?;
    if class == PrimeClassification::OddPrime(Mod4::Three) {
        // sanity context for the 3 (mod 4) family: the parity of nu
        eprintln!(
            "nu parity: {}",
            if stats.nu % 2 == 0 { "even" } else { "odd" }
        );
    }
    Ok(exit_for(agree))
}
