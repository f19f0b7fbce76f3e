//! Range scans over derangement and Bell residues: near-miss searches
//! over primes, the odd-composite counterexample search, table
//! reproduction over all n, prime powers, and the Bell-condition scan.
//! Scans run block-parallel over read-only context, merge in ascending
//! order, and can checkpoint/resume at block granularity.

mod checkpoint;
mod report;

pub use report::{csv_header, to_csv_line, to_json_line};

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, ArithError, FactoredInteger, Residue};
use crate::determinants::{self, DetError};
use crate::sequences;
use checkpoint::{Checkpoint, CheckpointHeader};

/// Cost ceiling for the Bell-condition scan; each n costs O(n^2)
/// word additions.
pub const DEFAULT_BELL_CEILING: u64 = 20_000;

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("invalid scan range [{lo}, {hi}): {reason}")]
    InvalidRange { lo: u64, hi: u64, reason: String },
    #[error("scan bound {hi} exceeds the Bell-triangle ceiling {ceiling}; raise the ceiling explicitly to run longer jobs")]
    BellCeiling { hi: u64, ceiling: u64 },
    #[error("checkpoint {path} is corrupt at line {line}: {hint}")]
    CorruptCheckpoint { path: String, line: usize, hint: String },
    #[error("checkpoint {path} was written by a different scan configuration; delete it or pick another path")]
    CheckpointMismatch { path: String },
    #[error("checkpoint io: {0}")]
    Io(#[from] std::io::Error),
    #[error("worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Det(#[from] DetError),
}

/// Which n a scan visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassFilter {
    All,
    Primes,
    OddComposites,
    PrimePowers,
    Even,
    Odd,
}

/// One row of a scan report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub n: u64,
    pub factorization: FactoredInteger,
    pub r_signed: i64,
    pub s_signed: Option<i64>,
    pub near_miss: u64,
    pub ratio: f64,
}

impl ScanRecord {
    fn new(nf: FactoredInteger, r: Residue, s: Option<Residue>) -> Self {
        let n = nf.n();
        let r_signed = r.signed();
        ScanRecord {
            n,
            factorization: nf,
            r_signed,
            s_signed: s.map(|x| x.signed()),
            near_miss: r.near_miss(),
            ratio: r_signed.unsigned_abs() as f64 / n as f64,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub lo: u64,
    pub hi: u64,
    /// Near-miss / balanced-residue emission bound d.
    pub residue_bound: u64,
    /// Optional second emission clause: 0 < |r|/n <= ratio_bound.
    pub ratio_bound: Option<f64>,
    /// Visited-class override; scans that fix their own class ignore it.
    pub class: ClassFilter,
    /// Block size; also the checkpoint commit granularity.
    pub block_size: u64,
    /// Worker threads; 0 picks the host parallelism.
    pub jobs: usize,
    pub checkpoint: Option<PathBuf>,
    pub resume: bool,
    pub bell_ceiling: u64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            lo: 2,
            hi: 100,
            residue_bound: 2,
            ratio_bound: None,
            class: ClassFilter::All,
            block_size: 2048,
            jobs: 0,
            checkpoint: None,
            resume: false,
            bell_ceiling: DEFAULT_BELL_CEILING,
        }
    }
}

impl ScanConfig {
    pub fn range(lo: u64, hi: u64) -> Self {
        ScanConfig {
            lo,
            hi,
            ..Default::default()
        }
    }

    pub fn with_bound(mut self, d: u64) -> Self {
        self.residue_bound = d;
        self
    }

    fn validate(&self, kind: ScanKind) -> Result<(), ScanError> {
        let fail = |reason: &str| {
            Err(ScanError::InvalidRange {
                lo: self.lo,
                hi: self.hi,
                reason: reason.to_string(),
            })
        };
        if self.lo < 2 {
            return fail("lower bound must be at least 2");
        }
        if self.hi <= self.lo {
            return fail("upper bound must exceed the lower bound");
        }
        if self.block_size == 0 {
            return fail("block size must be positive");
        }
        if kind == ScanKind::DetTable && self.lo < 7 {
            return fail("determinant table scans start at 7");
        }
        if kind == ScanKind::BellOne && self.hi > self.bell_ceiling {
            return Err(ScanError::BellCeiling {
                hi: self.hi,
                ceiling: self.bell_ceiling,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanKind {
    /// Primes p with near-miss distance of S_{p-1} mod p within bound.
    KurepaPrimes,
    /// Odd composite n with S_{n-1} ≡ 2 (mod n): each is a strong-
    /// hypothesis counterexample.
    StrongKurepa,
    /// Every n whose balanced residue passes the bound or ratio clause.
    ResidueTable,
    /// Odd n with |(-8 K_n mod n)| within bound.
    DetTable,
    /// Prime powers q^e, e >= 2, with near-miss within bound.
    PrimePowers,
    /// n with B_{n-1} ≡ 1 (mod n), annotated with the derangement residue.
    BellOne,
}

impl ScanKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScanKind::KurepaPrimes => "kurepa",
            ScanKind::StrongKurepa => "strong",
            ScanKind::ResidueTable => "table1",
            ScanKind::DetTable => "table2",
            ScanKind::PrimePowers => "prime-powers",
            ScanKind::BellOne => "bell-one",
        }
    }

    /// The class of n this scan actually visits.
    pub fn class(&self) -> ClassFilter {
        match self {
            ScanKind::KurepaPrimes => ClassFilter::Primes,
            ScanKind::StrongKurepa => ClassFilter::OddComposites,
            ScanKind::ResidueTable => ClassFilter::All,
            ScanKind::DetTable => ClassFilter::Odd,
            ScanKind::PrimePowers => ClassFilter::PrimePowers,
            ScanKind::BellOne => ClassFilter::All,
        }
    }

    /// Whether an emitted record is a counterexample finding.
    pub fn is_finding(&self, record: &ScanRecord) -> bool {
        match self {
            ScanKind::KurepaPrimes => record.n > 2 && record.r_signed == 0,
            ScanKind::StrongKurepa => true,
            _ => false,
        }
    }
}

/// Read-only shared state built once before the block workers start.
struct ScanContext {
    /// Ascending primes up to hi (exclusive upper end of the range).
    primes: Vec<u64>,
    /// q^e -> S_{q^e - 1} mod q^e (canonical value), for every prime
    /// power below hi. Composite residues are CRT combinations of
    /// these, so the per-block work shrinks to lookups.
    residue_cache: HashMap<u64, u64>,
}

fn build_context(kind: ScanKind, cfg: &ScanConfig) -> Result<ScanContext, ScanError> {
    let needs_primes = matches!(
        kind,
        ScanKind::KurepaPrimes | ScanKind::StrongKurepa | ScanKind::ResidueTable
    );
    // hi > lo >= 2 is validated, so hi - 1 >= 2 and the sieve is well-formed
    let primes = if needs_primes {
        arith::sieve_primes(cfg.hi - 1)?
    } else {
        Vec::new()
    };
    let mut residue_cache = HashMap::new();
    let cache_odd_only = match kind {
        ScanKind::StrongKurepa => true,
        ScanKind::ResidueTable => false,
        _ => return Ok(ScanContext { primes, residue_cache }),
    };
    for &q in &primes {
        if cache_odd_only && q == 2 {
            continue;
        }
        let mut pe = q;
        loop {
            residue_cache.insert(pe, sequences::subfactorial_mod(pe - 1, pe).value());
            match pe.checked_mul(q) {
                Some(next) if next < cfg.hi => pe = next,
                _ => break,
            }
        }
    }
    Ok(ScanContext { primes, residue_cache })
}

/// Composite residue S_{n-1} mod n assembled from cached prime-power
/// parts with the parity sign of the divisor-reduction identity.
fn residue_from_cache(nf: &FactoredInteger, cache: &HashMap<u64, u64>) -> Result<Residue, ScanError> {
    let n = nf.n();
    let parts: Vec<Residue> = nf
        .prime_powers()
        .map(|pe| {
            let c = cache[&pe];
            let r = Residue::new(c, pe);
            if (n + pe) % 2 == 0 {
                r
            } else {
                r.negated()
            }
        })
        .collect();
    Ok(arith::crt_combine(&parts)?)
}

fn passes_residue_filter(cfg: &ScanConfig, r: &Residue, n: u64) -> bool {
    let s = r.signed().unsigned_abs();
    if s <= cfg.residue_bound {
        return true;
    }
    match cfg.ratio_bound {
        Some(rb) => s > 0 && (s as f64 / n as f64) <= rb,
        None => false,
    }
}

fn eval_block(
    kind: ScanKind,
    cfg: &ScanConfig,
    ctx: &ScanContext,
    lo: u64,
    hi: u64,
) -> Result<Vec<ScanRecord>, ScanError> {
    let mut out = Vec::new();
    match kind {
        ScanKind::KurepaPrimes => {
            let start = ctx.primes.partition_point(|&p| p < lo);
            for &p in &ctx.primes[start..] {
                if p >= hi {
                    break;
                }
                let r = sequences::subfactorial_mod(p - 1, p);
                if r.near_miss() <= cfg.residue_bound {
                    let nf = arith::factorize(p)?;
                    out.push(ScanRecord::new(nf, r, None));
                }
            }
        }
        ScanKind::StrongKurepa => {
            for n in lo.max(9)..hi {
                if n % 2 == 0 {
                    continue;
                }
                let nf = arith::factorize(n)?;
                if nf.is_prime() {
                    continue;
                }
                // a single prime-power part off residue 2 rules n out
                // before any CRT work
                if !nf.prime_powers().all(|pe| ctx.residue_cache[&pe] == 2) {
                    continue;
                }
                let r = sequences::subfactorial_mod_fast(&nf)?;
                let det = determinants::kurepa_det_mod_via_derangement(n)?;
                // s = -8 K_n mod n; zero exactly at a hit
                let s = Residue::new(arith::mul_mod(8, det.value(), n), n).negated();
                out.push(ScanRecord::new(nf, r, Some(s)));
            }
        }
        ScanKind::ResidueTable => {
            for n in lo..hi {
                let nf = arith::factorize(n)?;
                let r = residue_from_cache(&nf, &ctx.residue_cache)?;
                if passes_residue_filter(cfg, &r, n) {
                    out.push(ScanRecord::new(nf, r, None));
                }
            }
        }
        ScanKind::DetTable => {
            for n in lo.max(7)..hi {
                if n % 2 == 0 {
                    continue;
                }
                let r = sequences::subfactorial_mod(n - 1, n);
                let s = if arith::is_prime(n) {
                    r
                } else {
                    let det = determinants::kurepa_det_mod_via_derangement(n)?;
                    Residue::new((n - arith::mul_mod(8, det.value(), n)) % n, n)
                };
                if s.signed().unsigned_abs() <= cfg.residue_bound {
                    let nf = arith::factorize(n)?;
                    out.push(ScanRecord::new(nf, r, Some(s)));
                }
            }
        }
        ScanKind::PrimePowers => {
            for n in lo..hi {
                let nf = arith::factorize(n)?;
                if !(nf.factors().len() == 1 && nf.factors()[0].1 >= 2) {
                    continue;
                }
                let r = sequences::subfactorial_mod(n - 1, n);
                if r.near_miss() <= cfg.residue_bound {
                    out.push(ScanRecord::new(nf, r, None));
                }
            }
        }
        ScanKind::BellOne => {
            let mut emit = |n: u64, bell_residue: u64| -> Result<(), ScanError> {
                if bell_residue == 1 % n {
                    let nf = arith::factorize(n)?;
                    let r = sequences::subfactorial_mod(n - 1, n);
                    out.push(ScanRecord::new(nf, r, None));
                }
                Ok(())
            };
            for n in lo..hi {
                emit(n, sequences::bell_mod(n - 1, n).value())?;
            }
        }
    }
    Ok(out)
}

/// Scan result plus bookkeeping about how it was produced.
#[derive(Debug)]
pub struct ScanOutcome {
    pub records: Vec<ScanRecord>,
    /// Number of emitted records that are counterexample findings.
    pub findings: usize,
    pub computed_blocks: usize,
    pub resumed_blocks: usize,
}

pub fn run_scan(kind: ScanKind, cfg: &ScanConfig) -> Result<ScanOutcome, ScanError> {
    run_scan_with(kind, cfg, |_| {})
}

/// Run a scan, streaming records in ascending n as blocks complete.
/// Output is deterministic for a fixed config regardless of `jobs`.
pub fn run_scan_with<F: FnMut(&ScanRecord)>(
    kind: ScanKind,
    cfg: &ScanConfig,
    mut sink: F,
) -> Result<ScanOutcome, ScanError> {
    cfg.validate(kind)?;
    let ctx = build_context(kind, cfg)?;

    let mut blocks: Vec<(u64, u64)> = Vec::new();
    let mut lo = cfg.lo;
    while lo < cfg.hi {
        let hi = (lo + cfg.block_size).min(cfg.hi);
        blocks.push((lo, hi));
        lo = hi;
    }

    let header = CheckpointHeader {
        scan: kind.name().to_string(),
        lo: cfg.lo,
        hi: cfg.hi,
        block_size: cfg.block_size,
        residue_bound: cfg.residue_bound,
        ratio_bound: cfg.ratio_bound,
    };
    let mut checkpoint = match &cfg.checkpoint {
        Some(path) => Some(Checkpoint::open(path, &header, cfg.resume)?),
        None => None,
    };

    let mut results: BTreeMap<usize, Vec<ScanRecord>> = BTreeMap::new();
    let mut pending: Vec<usize> = Vec::new();
    let mut resumed_blocks = 0;
    for (idx, &(blo, bhi)) in blocks.iter().enumerate() {
        let committed = checkpoint
            .as_ref()
            .and_then(|c| c.committed().get(&blo))
            .filter(|(chi, _)| *chi == bhi)
            .cloned();
        match committed {
            Some((_, records)) => {
                results.insert(idx, records);
                resumed_blocks += 1;
            }
            None => pending.push(idx),
        }
    }
    let computed_blocks = pending.len();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| ScanError::Pool(e.to_string()))?;

    let wave = pool.current_num_threads().max(1) * 4;
    let mut emitted = 0usize;
    let mut records = Vec::new();
    let mut findings = 0usize;

    let emit_ready = |results: &BTreeMap<usize, Vec<ScanRecord>>,
                          emitted: &mut usize,
                          records: &mut Vec<ScanRecord>,
                          findings: &mut usize,
                          sink: &mut F| {
        while let Some(block) = results.get(&*emitted) {
            for r in block {
                if kind.is_finding(r) {
                    *findings += 1;
                }
                sink(r);
                records.push(r.clone());
            }
            *emitted += 1;
        }
    };

    for chunk in pending.chunks(wave.max(1)) {
        let computed: Vec<(usize, Result<Vec<ScanRecord>, ScanError>)> = pool.install(|| {
            use rayon::prelude::*;
            chunk
                .par_iter()
                .map(|&idx| {
                    let (blo, bhi) = blocks[idx];
                    (idx, eval_block(kind, cfg, &ctx, blo, bhi))
                })
                .collect()
        });
        for (idx, result) in computed {
            let block_records = result?;
            if let Some(cp) = checkpoint.as_mut() {
                let (blo, bhi) = blocks[idx];
                cp.commit_block(blo, bhi, &block_records)?;
            }
            results.insert(idx, block_records);
        }
        emit_ready(&results, &mut emitted, &mut records, &mut findings, &mut sink);
    }
    emit_ready(&results, &mut emitted, &mut records, &mut findings, &mut sink);
    debug_assert_eq!(emitted, blocks.len());

    Ok(ScanOutcome {
        records,
        findings,
        computed_blocks,
        resumed_blocks,
    })
}

/// Near-miss scan over primes: S_{p-1} mod p through the direct modular
/// recurrence, emitting primes within distance d. Any residue-zero
/// prime (a counterexample) is always within every bound.
pub fn kurepa_prime_scan(cfg: &ScanConfig) -> Result<Vec<ScanRecord>, ScanError> {
    Ok(run_scan(ScanKind::KurepaPrimes, cfg)?.records)
}

/// Flags every odd composite n with S_{n-1} ≡ 2 (mod n); the cached
/// prime-power residues eliminate almost all n before any CRT work.
pub fn strong_kurepa_scan(cfg: &ScanConfig) -> Result<Vec<ScanRecord>, ScanError> {
    Ok(run_scan(ScanKind::StrongKurepa, cfg)?.records)
}

/// Emits every n whose balanced residue r = S_{n-1} mod n satisfies
/// |r| <= bound, or 0 < |r|/n <= ratio_bound when the ratio clause is
/// set.
pub fn residue_table_scan(cfg: &ScanConfig) -> Result<Vec<ScanRecord>, ScanError> {
    Ok(run_scan(ScanKind::ResidueTable, cfg)?.records)
}

/// Odd n with s = -8 K_n mod n within the bound, via the derangement
/// congruence for composites and directly from S_{p-1} for primes.
pub fn kurepa_det_table_scan(cfg: &ScanConfig) -> Result<Vec<ScanRecord>, ScanError> {
    Ok(run_scan(ScanKind::DetTable, cfg)?.records)
}

/// Prime powers q^e (e >= 2) whose near-miss distance is within bound.
pub fn prime_power_scan(cfg: &ScanConfig) -> Result<Vec<ScanRecord>, ScanError> {
    Ok(run_scan(ScanKind::PrimePowers, cfg)?.records)
}

/// All n with B_{n-1} ≡ 1 (mod n), annotated with the balanced
/// S_{n-1} mod n residue.
pub fn bell_one_scan(cfg: &ScanConfig) -> Result<Vec<ScanRecord>, ScanError> {
    Ok(run_scan(ScanKind::BellOne, cfg)?.records)
}
