//! Cross-verification of oracles against closed forms.
//!
//! For each n and each registered identity tag the harness computes the
//! oracle residue (a definitional product) and the closed-form residue (a
//! shape-of-n prediction) and records whether they agree. Tags whose
//! preconditions exclude an n are reported as skipped, never as failed.
//!
//! The catalog:
//!
//! | tag               | applies to               | oracle side           | closed side                   |
//! |-------------------|--------------------------|-----------------------|-------------------------------|
//! | `wilson`          | all n >= 2               | (n-1)! mod n          | `wilson_residue`              |
//! | `double`          | all n >= 2               | (n-1)!! mod n         | `df_closed`                   |
//! | `super-double`    | primes                   | sf(n-1) mod n         | `sf_prime`                    |
//! | `hyper`           | odd primes               | H(n-1) mod n          | `hyper_prime`                 |
//! | `sub`             | all n >= 2               | !n mod n              | `subfactorial_closed`         |
//! | `gauss-wilson`    | all n >= 2               | unit product mod n    | `gauss_wilson`                |
//! | `half-square`     | odd primes               | ((n-1)/2)!^2 mod n    | `half_factorial_square_sign`  |
//! | `legendre-form`   | odd primes               | (n-1)!! mod n         | `df_via_legendre`             |
//! | `matrix-det`      | primes <= 499            | sf(n-1) mod n         | `det_mod_p`                   |
//! | `matrix-diag`     | primes <= 499            | H(n-1) mod n          | `diagonal_product`            |
//! | `giuga`           | primes                   | `giuga_row_sum`       | n-1                           |
//! | `nu-mu-corollary` | primes = 3 (mod 4), > 3  | parity of nu          | parity predicted by mu        |
//!
//! Two tags deserve a note. `giuga` is a value check only where a value is
//! predicted (primes); for composites the claim is a *dis*equation, which is
//! exercised by the test suites instead of being shoehorned into a record.
//! `nu-mu-corollary` compares two parities (0 or 1) rather than residues,
//! and skips p = 3, the one prime of its class where the statistic nu
//! misses the nonresidue 2 (see `closedform::df_prime_3mod4`).

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::closedform::{
    df_closed, df_via_legendre, gauss_wilson, half_factorial_square_sign, hyper_prime, quad_stats,
    sf_prime, subfactorial_closed, wilson_residue,
};
use crate::matrix::{
    build_power_matrix, det_mod_p, diagonal_product, giuga_row_sum, MAX_MATRIX_PRIME,
};
use crate::modmath::{classify, mod_mul, sign_to_residue, Mod4, PrimeClassification};
use crate::oracles::{
    double_factorial_mod, factorial_mod, hyperfactorial_mod, subfactorial_mod, superfactorial_mod,
    unit_product_mod,
};
use crate::{Error, Result};

/// Identity tags registered with the scanner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityKind {
    Wilson,
    Double,
    SuperDouble,
    Hyper,
    Sub,
    GaussWilson,
    HalfSquare,
    LegendreForm,
    MatrixDet,
    MatrixDiag,
    Giuga,
    NuMuCorollary,
}

/// Catalog order; records for one n are always emitted in this order.
pub const CATALOG: [IdentityKind; 12] = [
    IdentityKind::Wilson,
    IdentityKind::Double,
    IdentityKind::SuperDouble,
    IdentityKind::Hyper,
    IdentityKind::Sub,
    IdentityKind::GaussWilson,
    IdentityKind::HalfSquare,
    IdentityKind::LegendreForm,
    IdentityKind::MatrixDet,
    IdentityKind::MatrixDiag,
    IdentityKind::Giuga,
    IdentityKind::NuMuCorollary,
];

impl IdentityKind {
    pub fn tag(self) -> &'static str {
        match self {
            IdentityKind::Wilson => "wilson",
            IdentityKind::Double => "double",
            IdentityKind::SuperDouble => "super-double",
            IdentityKind::Hyper => "hyper",
            IdentityKind::Sub => "sub",
            IdentityKind::GaussWilson => "gauss-wilson",
            IdentityKind::HalfSquare => "half-square",
            IdentityKind::LegendreForm => "legendre-form",
            IdentityKind::MatrixDet => "matrix-det",
            IdentityKind::MatrixDiag => "matrix-diag",
            IdentityKind::Giuga => "giuga",
            IdentityKind::NuMuCorollary => "nu-mu-corollary",
        }
    }

    /// One-line description for catalog listings.
    pub fn describe(self) -> &'static str {
        match self {
            IdentityKind::Wilson => "(n-1)! mod n vs primality closed form",
            IdentityKind::Double => "(n-1)!! mod n vs shape-of-n closed form",
            IdentityKind::SuperDouble => "sf(n-1) collapses onto (n-1)!! at primes",
            IdentityKind::Hyper => "H(n-1) vs signed double factorial at odd primes",
            IdentityKind::Sub => "!n mod n vs parity closed form",
            IdentityKind::GaussWilson => "unit product mod n vs prime-power classification",
            IdentityKind::HalfSquare => "((n-1)/2)!^2 vs sign from n mod 4",
            IdentityKind::LegendreForm => "(n-1)!! vs (2|n) times the half factorial",
            IdentityKind::MatrixDet => "power-matrix determinant vs sf(n-1)",
            IdentityKind::MatrixDiag => "power-matrix diagonal vs H(n-1)",
            IdentityKind::Giuga => "sum of k^(n-1) attains n-1 at primes",
            IdentityKind::NuMuCorollary => "nu parity vs mu mod 4 at primes = 3 (mod 4)",
        }
    }
}

// Display must match the serde tag exactly; both feed the emitters.
impl fmt::Display for IdentityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for IdentityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CATALOG
            .iter()
            .copied()
            .find(|k| k.tag() == s)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

/// One (n, kind) check. `agree` is `oracle == closed` unless `skipped`, in
/// which case the values are zeroed and `agree` is vacuously true.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub n: u64,
    pub kind: IdentityKind,
    pub modulus: u64,
    pub oracle: u64,
    pub closed: u64,
    pub agree: bool,
    pub skipped: bool,
    /// Oracle-side wall time in nanoseconds; excluded from serialization so
    /// emitted reports stay byte-reproducible.
    #[serde(skip)]
    pub oracle_ns: u64,
    #[serde(skip)]
    pub closed_ns: u64,
}

fn applies(kind: IdentityKind, n: u64, class: PrimeClassification) -> bool {
    match kind {
        IdentityKind::Wilson
        | IdentityKind::Double
        | IdentityKind::Sub
        | IdentityKind::GaussWilson => true,
        IdentityKind::SuperDouble | IdentityKind::Giuga => class.is_prime(),
        IdentityKind::Hyper | IdentityKind::HalfSquare | IdentityKind::LegendreForm => {
            class.is_odd_prime()
        }
        IdentityKind::MatrixDet | IdentityKind::MatrixDiag => {
            class.is_prime() && n <= MAX_MATRIX_PRIME
        }
        IdentityKind::NuMuCorollary => class == PrimeClassification::OddPrime(Mod4::Three) && n > 3,
    }
}

fn oracle_side(n: u64, kind: IdentityKind) -> Result<u64> {
    Ok(match kind {
        IdentityKind::Wilson => factorial_mod(n - 1, n),
        IdentityKind::Double | IdentityKind::LegendreForm => double_factorial_mod(n - 1, n),
        IdentityKind::SuperDouble | IdentityKind::MatrixDet => superfactorial_mod(n - 1, n),
        IdentityKind::Hyper | IdentityKind::MatrixDiag => hyperfactorial_mod(n - 1, n),
        IdentityKind::Sub => subfactorial_mod(n, n),
        IdentityKind::GaussWilson => unit_product_mod(n)?,
        IdentityKind::HalfSquare => {
            let half = factorial_mod((n - 1) / 2, n);
            mod_mul(half, half, n)
        }
        IdentityKind::Giuga => giuga_row_sum(n),
        IdentityKind::NuMuCorollary => quad_stats(n)?.nu % 2,
    })
}

fn closed_side(n: u64, kind: IdentityKind) -> Result<u64> {
    Ok(match kind {
        IdentityKind::Wilson => wilson_residue(n),
        IdentityKind::Double => df_closed(n)?,
        IdentityKind::SuperDouble => sf_prime(n)?,
        IdentityKind::Hyper => hyper_prime(n)?,
        IdentityKind::Sub => subfactorial_closed(n)?,
        IdentityKind::GaussWilson => gauss_wilson(n)?,
        IdentityKind::HalfSquare => sign_to_residue(half_factorial_square_sign(n), n),
        IdentityKind::LegendreForm => df_via_legendre(n)?,
        IdentityKind::MatrixDet => det_mod_p(&build_power_matrix(n)?),
        IdentityKind::MatrixDiag => diagonal_product(&build_power_matrix(n)?),
        IdentityKind::Giuga => n - 1,
        IdentityKind::NuMuCorollary => {
            if quad_stats(n)?.mu % 4 == 3 {
                0 // mu = 3 (mod 4) predicts even nu
            } else {
                1
            }
        }
    })
}

/// Runs one check; inapplicable tags come back skipped.
pub fn check_identity(n: u64, kind: IdentityKind) -> Result<CheckRecord> {
    if n < 2 {
        return Err(Error::BelowMinimum { n, min: 2 });
    }
    let class = classify(n)?;
    if !applies(kind, n, class) {
        return Ok(CheckRecord {
            n,
            kind,
            modulus: n,
            oracle: 0,
            closed: 0,
            agree: true,
            skipped: true,
            oracle_ns: 0,
            closed_ns: 0,
        });
    }
    let oracle_start = Instant::now();
    let oracle = oracle_side(n, kind)?;
    let oracle_ns = oracle_start.elapsed().as_nanos() as u64;
    let closed_start = Instant::now();
    let closed = closed_side(n, kind)?;
    let closed_ns = closed_start.elapsed().as_nanos() as u64;
    Ok(CheckRecord {
        n,
        kind,
        modulus: n,
        oracle,
        closed,
        agree: oracle == closed,
        skipped: false,
        oracle_ns,
        closed_ns,
    })
}

/// Deduplicates tags and fixes catalog order.
fn normalize_kinds(kinds: &[IdentityKind]) -> Result<Vec<IdentityKind>> {
    if kinds.is_empty() {
        return Err(Error::EmptyKinds);
    }
    Ok(CATALOG
        .iter()
        .copied()
        .filter(|k| kinds.contains(k))
        .collect())
}

/// Checks a single n against the given tags, one record per tag in catalog
/// order.
pub fn verify_single(n: u64, kinds: &[IdentityKind]) -> Result<Vec<CheckRecord>> {
    normalize_kinds(kinds)?
        .into_iter()
        .map(|kind| check_identity(n, kind))
        .collect()
}

/// How many values of n are processed per parallel batch.
pub const DEFAULT_CHUNK: u64 = 512;
/// Reports retain records only up to this many (n, kind) pairs; larger scans
/// stream to the sink and keep just the counters and mismatches.
pub const DEFAULT_RETAIN: usize = 1 << 20;

/// Scan configuration. Output content and order are independent of
/// `workers`; only wall time changes.
#[derive(Debug, Clone)]
pub struct ScanOptions {
    pub from: u64,
    pub to: u64,
    pub kinds: Vec<IdentityKind>,
    pub workers: usize,
    pub chunk: u64,
    pub retain: usize,
}

impl ScanOptions {
    pub fn new(from: u64, to: u64, kinds: &[IdentityKind]) -> Self {
        ScanOptions {
            from,
            to,
            kinds: kinds.to_vec(),
            workers: 1,
            chunk: DEFAULT_CHUNK,
            retain: DEFAULT_RETAIN,
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }
}

/// Aggregated scan outcome. `records` is populated only when the scan fits
/// under the retain cap; `mismatches` is always complete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub from: u64,
    pub to: u64,
    pub kinds: Vec<IdentityKind>,
    /// All (n, kind) pairs processed, including skipped ones.
    pub total: u64,
    /// Non-skipped pairs where oracle and closed form agree.
    pub agreed: u64,
    pub skipped: u64,
    pub records: Vec<CheckRecord>,
    pub mismatches: Vec<CheckRecord>,
    pub oracle_ns: u128,
    pub closed_ns: u128,
    pub wall: Duration,
}

impl ScanReport {
    pub fn mismatch_count(&self) -> u64 {
        self.total - self.agreed - self.skipped
    }

    /// Oracle time divided by closed-form time over the non-skipped checks.
    pub fn speedup(&self) -> f64 {
        if self.closed_ns == 0 {
            return f64::INFINITY;
        }
        self.oracle_ns as f64 / self.closed_ns as f64
    }
}

/// Runs a scan, invoking `sink` for every record in (n, catalog) order.
pub fn scan_with<F: FnMut(&CheckRecord)>(opts: &ScanOptions, mut sink: F) -> Result<ScanReport> {
    if opts.from < 2 || opts.from > opts.to {
        return Err(Error::InvalidRange {
            from: opts.from,
            to: opts.to,
        });
    }
    let kinds = normalize_kinds(&opts.kinds)?;
    let started = Instant::now();
    let mut report = ScanReport {
        from: opts.from,
        to: opts.to,
        kinds: kinds.clone(),
        total: 0,
        agreed: 0,
        skipped: 0,
        records: Vec::new(),
        mismatches: Vec::new(),
        oracle_ns: 0,
        closed_ns: 0,
        wall: Duration::ZERO,
    };
    let pair_count = (opts.to - opts.from + 1).saturating_mul(kinds.len() as u64);
    let keep_records = pair_count <= opts.retain as u64;
    let chunk = opts.chunk.max(1);
    let mut lo = opts.from;
    loop {
        let hi = lo.saturating_add(chunk - 1).min(opts.to);
        for rec in scan_chunk(lo, hi, &kinds, opts.workers.max(1))? {
            report.total += 1;
            if rec.skipped {
                report.skipped += 1;
            } else if rec.agree {
                report.agreed += 1;
            } else {
                report.mismatches.push(rec.clone());
            }
            report.oracle_ns += rec.oracle_ns as u128;
            report.closed_ns += rec.closed_ns as u128;
            sink(&rec);
            if keep_records {
                report.records.push(rec);
            }
        }
        if hi >= opts.to {
            break;
        }
        lo = hi + 1;
    }
    report.wall = started.elapsed();
    Ok(report)
}

/// Convenience wrapper: scan with records retained (up to the default cap).
pub fn scan_range(
    from: u64,
    to: u64,
    kinds: &[IdentityKind],
    workers: usize,
) -> Result<ScanReport> {
    scan_with(&ScanOptions::new(from, to, kinds).workers(workers), |_| {})
}

/// One chunk, split into contiguous sub-ranges joined in order, so the
/// record sequence is identical for every worker count.
fn scan_chunk(
    lo: u64,
    hi: u64,
    kinds: &[IdentityKind],
    workers: usize,
) -> Result<Vec<CheckRecord>> {
    let count = hi - lo + 1;
    let workers = workers.min(count as usize).max(1);
    let run = |a: u64, b: u64| -> Result<Vec<CheckRecord>> {
        let mut out = Vec::with_capacity(((b - a + 1) as usize) * kinds.len());
        for n in a..=b {
            for &kind in kinds {
                out.push(check_identity(n, kind)?);
            }
        }
        Ok(out)
    };
    if workers == 1 {
        return run(lo, hi);
    }
    let share = count / workers as u64;
    let extra = count % workers as u64;
    let mut bounds = Vec::with_capacity(workers);
    let mut start = lo;
    for w in 0..workers as u64 {
        let len = share + if w < extra { 1 } else { 0 };
        bounds.push((start, start + len - 1));
        start += len;
    }
    let results: Vec<Result<Vec<CheckRecord>>> = thread::scope(|scope| {
        let handles: Vec<_> = bounds
            .iter()
            .map(|&(a, b)| scope.spawn(move || run(a, b)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scan worker panicked"))
            .collect()
    });
    let mut out = Vec::with_capacity(count as usize * kinds.len());
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// Output encodings for scan results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Jsonl,
    Csv,
    Text,
}

/// Incremental report writer, so large scans stream without buffering.
///
/// JSONL and CSV are record-per-line with no trailer and are always
/// byte-reproducible. Text adds a summary line, plus timing when `stable`
/// is off.
pub struct ReportEmitter<W: Write> {
    format: ReportFormat,
    stable: bool,
    out: W,
}

impl<W: Write> ReportEmitter<W> {
    /// Writes any header and returns the emitter.
    pub fn new(format: ReportFormat, stable: bool, mut out: W) -> io::Result<Self> {
        match format {
            ReportFormat::Csv => writeln!(out, "n,kind,modulus,oracle,closed,agree,skipped")?,
            ReportFormat::Text => writeln!(
                out,
                "{:<8} {:>10} {:<16} {:>12} {:>20} {:>20}",
                "status", "n", "kind", "modulus", "oracle", "closed"
            )?,
            ReportFormat::Jsonl => {}
        }
        Ok(ReportEmitter {
            format,
            stable,
            out,
        })
    }

    /// Writes one record line.
    pub fn record(&mut self, rec: &CheckRecord) -> io::Result<()> {
        match self.format {
            ReportFormat::Jsonl => {
                serde_json::to_writer(&mut self.out, rec)?;
                writeln!(self.out)
            }
            ReportFormat::Csv => writeln!(
                self.out,
                "{},{},{},{},{},{},{}",
                rec.n, rec.kind, rec.modulus, rec.oracle, rec.closed, rec.agree, rec.skipped
            ),
            ReportFormat::Text => {
                let status = if rec.skipped {
                    "SKIP"
                } else if rec.agree {
                    "AGREE"
                } else {
                    "MISMATCH"
                };
                writeln!(
                    self.out,
                    "{:<8} {:>10} {:<16} {:>12} {:>20} {:>20}",
                    status, rec.n, rec.kind, rec.modulus, rec.oracle, rec.closed
                )
            }
        }
    }

    /// Writes the trailing summary (text only) and flushes.
    pub fn finish(mut self, report: &ScanReport) -> io::Result<()> {
        if self.format == ReportFormat::Text {
            writeln!(
                self.out,
                "checked={} agree={} skipped={} mismatch={}",
                report.total,
                report.agreed,
                report.skipped,
                report.mismatch_count()
            )?;
            if !self.stable {
                writeln!(
                    self.out,
                    "wall_ms={} oracle_ms={} closed_ms={} speedup={:.1}x",
                    report.wall.as_millis(),
                    report.oracle_ns / 1_000_000,
                    report.closed_ns / 1_000_000,
                    report.speedup()
                )?;
            }
        }
        self.out.flush()
    }
}

/// Renders a retained report in one call.
pub fn emit_report<W: Write>(
    report: &ScanReport,
    format: ReportFormat,
    stable: bool,
    out: W,
) -> io::Result<()> {
    let mut emitter = ReportEmitter::new(format, stable, out)?;
    for rec in &report.records {
        emitter.record(rec)?;
    }
    emitter.finish(report)
}
