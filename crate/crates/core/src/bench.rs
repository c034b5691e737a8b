//! Deterministic workload generation and instrumented runs across backends.
//!
//! Wall-clock numbers are reported, but the checks that can fail a run are
//! exact operation-counter bounds; timings only feed an advisory trend.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lcs::{
    dp_oracle, lcs_length, lcs_reconstruct, lcs_vector_scan_profiled, LcsError, ReconstructOptions,
};
use crate::match_index::{count_matches, PositionLists, Sequence};
use crate::threshold_set::{Backend, OpCounters};
use crate::DEFAULT_MEMORY_CAP;

/// Stream offset separating the second sequence of a pair from the first.
const SECOND_STREAM: u64 = 0x9E37_79B9_7F4A_7C15;
/// Length of the motif tiled by [`Structure::RepeatedBlock`].
const BLOCK_LEN: usize = 4;
/// One in this many positions is resampled by [`Structure::NearIdentical`].
const PERTURB_ONE_IN: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    /// Independent uniform symbols; expected `R = n m / sigma`.
    UniformRandom,
    /// A short random motif tiled over the whole sequence.
    RepeatedBlock,
    /// The second sequence is a lightly perturbed copy of the first.
    NearIdentical,
}

impl Structure {
    pub const ALL: [Structure; 3] = [
        Structure::UniformRandom,
        Structure::RepeatedBlock,
        Structure::NearIdentical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Structure::UniformRandom => "uniform_random",
            Structure::RepeatedBlock => "repeated_block",
            Structure::NearIdentical => "near_identical",
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Structure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Structure::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| format!("unknown structure `{s}` (expected uniform_random, repeated_block or near_identical)"))
    }
}

/// A backend as seen by the harness: one of the threshold-set backends or
/// the quadratic DP reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchBackend {
    Veb,
    Tree,
    Array,
    DpOracle,
}

impl BenchBackend {
    pub const ALL: [BenchBackend; 4] = [
        BenchBackend::Veb,
        BenchBackend::Tree,
        BenchBackend::Array,
        BenchBackend::DpOracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchBackend::Veb => "veb",
            BenchBackend::Tree => "tree",
            BenchBackend::Array => "array",
            BenchBackend::DpOracle => "dp_oracle",
        }
    }
}

impl From<Backend> for BenchBackend {
    fn from(b: Backend) -> Self {
        match b {
            Backend::Veb => BenchBackend::Veb,
            Backend::Tree => BenchBackend::Tree,
            Backend::Array => BenchBackend::Array,
        }
    }
}

impl fmt::Display for BenchBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchBackend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BenchBackend::ALL
            .into_iter()
            .find(|b| b.name() == s || (s == "dp" && *b == BenchBackend::DpOracle))
            .ok_or_else(|| {
                format!("unknown backend `{s}` (expected veb, tree, array or dp_oracle)")
            })
    }
}

/// One workload: `X` has length `m`, `Y` has length `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchCase {
    pub id: u32,
    pub n: usize,
    pub m: usize,
    pub sigma: u32,
    pub seed: u64,
    pub structure: Structure,
    pub backends: Vec<BenchBackend>,
}

/// Deterministic sequence of length `n` over `sigma` symbols.
///
/// `NearIdentical` yields the unperturbed base sequence; the perturbation is
/// applied by [`gen_pair`] when deriving the second sequence.
pub fn gen_sequence(n: usize, sigma: u32, seed: u64, structure: Structure) -> Sequence {
    assert!(sigma >= 1, "alphabet must be nonempty");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let symbols = match structure {
        Structure::UniformRandom | Structure::NearIdentical => {
            (0..n).map(|_| rng.gen_range(0..sigma)).collect()
        }
        Structure::RepeatedBlock => {
            let block: Vec<u32> = (0..BLOCK_LEN).map(|_| rng.gen_range(0..sigma)).collect();
            let shift = rng.gen_range(0..BLOCK_LEN);
            (0..n).map(|i| block[(i + shift) % BLOCK_LEN]).collect()
        }
    };
    Sequence::from_tokens(symbols)
}

/// The `(X, Y)` pair of a case.
pub fn gen_pair(case: &BenchCase) -> (Sequence, Sequence) {
    let x = gen_sequence(case.m, case.sigma, case.seed, case.structure);
    let y = match case.structure {
        Structure::UniformRandom => gen_sequence(
            case.n,
            case.sigma,
            case.seed ^ SECOND_STREAM,
            case.structure,
        ),
        Structure::RepeatedBlock => {
            // Same motif, independent phase.
            let mut rng = ChaCha8Rng::seed_from_u64(case.seed);
            let block: Vec<u32> = (0..BLOCK_LEN)
                .map(|_| rng.gen_range(0..case.sigma))
                .collect();
            let mut rng = ChaCha8Rng::seed_from_u64(case.seed ^ SECOND_STREAM);
            let shift = rng.gen_range(0..BLOCK_LEN);
            Sequence::from_tokens(
                (0..case.n)
                    .map(|i| block[(i + shift) % BLOCK_LEN])
                    .collect(),
            )
        }
        Structure::NearIdentical => {
            let mut rng = ChaCha8Rng::seed_from_u64(case.seed ^ SECOND_STREAM);
            let symbols = (0..case.n)
                .map(|i| match x.symbols().get(i) {
                    Some(&s) if rng.gen_range(0..PERTURB_ONE_IN) != 0 => s,
                    _ => rng.gen_range(0..case.sigma),
                })
                .collect();
            Sequence::from_tokens(symbols)
        }
    };
    (x, y)
}

/// One row of a report: a single backend on a single case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub case_id: u32,
    pub structure: Structure,
    pub n: usize,
    pub m: usize,
    pub sigma: u32,
    pub seed: u64,
    pub backend: BenchBackend,
    #[serde(rename = "R")]
    pub matches: u64,
    #[serde(rename = "L")]
    pub lcs_len: usize,
    pub time_ns: u64,
    pub ops_succ: u64,
    pub ops_pred: u64,
    pub ops_insert: u64,
    pub ops_delete: u64,
    pub ops_update: u64,
    pub peak_trace_entries: u64,
}

impl BenchRecord {
    /// `time / (R log log n)`.
    pub fn ratio_veb(&self) -> f64 {
        let loglog = (self.n.max(4) as f64).log2().log2();
        self.time_ns as f64 / (self.matches.max(1) as f64 * loglog)
    }

    /// `time / (R log L)`.
    pub fn ratio_tree(&self) -> f64 {
        self.time_ns as f64 / (self.matches.max(1) as f64 * (self.lcs_len.max(2) as f64).log2())
    }

    /// `time / (n L)`.
    pub fn ratio_array(&self) -> f64 {
        self.time_ns as f64 / (self.n.max(1) as f64 * self.lcs_len.max(1) as f64)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("case {case_id}: backends disagree on the LCS length: {details}")]
    Disagreement { case_id: u32, details: String },
    #[error("case {case_id}: {backend} exceeded its counter bound: {details}")]
    CounterBound {
        case_id: u32,
        backend: BenchBackend,
        details: String,
    },
    #[error("case {case_id}: {source}")]
    Resource { case_id: u32, source: LcsError },
}

#[derive(Debug, Clone, Copy)]
pub struct BenchOptions {
    /// Timing repeats per measurement; the minimum is reported.
    pub repeats: u32,
    pub memory_cap: u64,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            repeats: 3,
            memory_cap: DEFAULT_MEMORY_CAP,
        }
    }
}

struct Measurement {
    lcs_len: usize,
    counters: OpCounters,
    peak_trace_entries: u64,
    // First row of the vector scan that went over its comparison budget.
    over_budget_row: Option<String>,
}

fn measure(
    backend: BenchBackend,
    x: &Sequence,
    y: &Sequence,
    matches: u64,
    options: &BenchOptions,
) -> Result<Measurement, LcsError> {
    let reconstruct = |b: Backend| -> Result<Measurement, LcsError> {
        if matches > options.memory_cap {
            let r = lcs_length(x, y, b);
            return Ok(Measurement {
                lcs_len: r.length,
                counters: r.counters,
                peak_trace_entries: 0,
                over_budget_row: None,
            });
        }
        let r = lcs_reconstruct(
            x,
            y,
            ReconstructOptions {
                backend: b,
                memory_cap: options.memory_cap,
            },
        )?;
        Ok(Measurement {
            lcs_len: r.length,
            counters: r.counters,
            peak_trace_entries: matches,
            over_budget_row: None,
        })
    };
    match backend {
        BenchBackend::Veb => reconstruct(Backend::Veb),
        BenchBackend::Tree => reconstruct(Backend::Tree),
        BenchBackend::Array => {
            let (r, rows) = lcs_vector_scan_profiled(x, y);
            let over_budget_row = rows
                .iter()
                .enumerate()
                .find(|(_, row)| row.comparisons > row.budget())
                .map(|(i, row)| {
                    format!(
                        "row {}: {} comparisons, budget {}",
                        i + 1,
                        row.comparisons,
                        row.budget()
                    )
                });
            Ok(Measurement {
                lcs_len: r.length,
                counters: r.counters,
                peak_trace_entries: 0,
                over_budget_row,
            })
        }
        BenchBackend::DpOracle => {
            let table = dp_oracle(x, y, options.memory_cap)?;
            Ok(Measurement {
                lcs_len: table.length(),
                counters: OpCounters::default(),
                peak_trace_entries: (x.len() as u64 + 1) * (y.len() as u64 + 1),
                over_budget_row: None,
            })
        }
    }
}

fn check_counters(
    backend: BenchBackend,
    m: &Measurement,
    matches: u64,
    rows: usize,
) -> Result<(), String> {
    let c = &m.counters;
    let l = m.lcs_len as u64;
    match backend {
        BenchBackend::Veb => {
            if c.primitive_total() > 4 * matches + 2 {
                return Err(format!(
                    "{} primitives for R = {matches}",
                    c.primitive_total()
                ));
            }
        }
        BenchBackend::Tree => {
            if c.primitive_total() > 4 * matches {
                return Err(format!(
                    "{} primitives for R = {matches}",
                    c.primitive_total()
                ));
            }
            let depth_cap = 2.0 * ((l + 2) as f64).log2() + 2.0;
            if c.max_depth as f64 > depth_cap {
                return Err(format!("search depth {} above {depth_cap:.2}", c.max_depth));
            }
        }
        BenchBackend::Array => {
            if let Some(row) = &m.over_budget_row {
                return Err(row.clone());
            }
            // n L + R + n, with n the longer input length.
            let cap = rows as u64 * l + matches + rows as u64;
            if c.comparisons > cap {
                return Err(format!(
                    "{} comparisons above n L + R + n = {cap}",
                    c.comparisons
                ));
            }
        }
        BenchBackend::DpOracle => {}
    }
    if c.delete > c.insert {
        return Err(format!("{} deletes but {} inserts", c.delete, c.insert));
    }
    Ok(())
}

/// Runs every enabled backend on every case, checking that all of them
/// agree on `L` and stay within their operation-count bounds.
pub fn run_bench(cases: &[BenchCase], options: &BenchOptions) -> Result<BenchReport, BenchError> {
    let mut report = BenchReport::default();
    for case in cases {
        let (x, y) = gen_pair(case);
        let matches = count_matches(&x, &PositionLists::build(&y)).matches;
        let mut rows = Vec::with_capacity(case.backends.len());
        for &backend in &case.backends {
            let mut best: Option<(u64, Measurement)> = None;
            for _ in 0..options.repeats.max(1) {
                let start = Instant::now();
                let m = measure(backend, &x, &y, matches, options).map_err(|source| {
                    BenchError::Resource {
                        case_id: case.id,
                        source,
                    }
                })?;
                let elapsed = start.elapsed().as_nanos() as u64;
                if best.as_ref().is_none_or(|(t, _)| elapsed < *t) {
                    best = Some((elapsed, m));
                }
            }
            let (time_ns, m) = best.expect("at least one repeat");
            check_counters(backend, &m, matches, x.len().max(y.len())).map_err(|details| {
                BenchError::CounterBound {
                    case_id: case.id,
                    backend,
                    details,
                }
            })?;
            rows.push(BenchRecord {
                case_id: case.id,
                structure: case.structure,
                n: case.n,
                m: case.m,
                sigma: case.sigma,
                seed: case.seed,
                backend,
                matches,
                lcs_len: m.lcs_len,
                time_ns,
                ops_succ: m.counters.succ,
                ops_pred: m.counters.pred,
                ops_insert: m.counters.insert,
                ops_delete: m.counters.delete,
                ops_update: m.counters.update,
                peak_trace_entries: m.peak_trace_entries,
            });
        }
        if let Some(first) = rows.first() {
            if rows.iter().any(|r| r.lcs_len != first.lcs_len) {
                let details = rows
                    .iter()
                    .map(|r| format!("{}={}", r.backend, r.lcs_len))
                    .collect::<Vec<_>>()
                    .join(", ");
                return Err(BenchError::Disagreement {
                    case_id: case.id,
                    details,
                });
            }
        }
        report.records.extend(rows);
    }
    Ok(report)
}

/// Uniform random cases for `sigma` in {2, 4, 26} and `n` in {256, 512, 1024},
/// each run on all backends.
pub fn default_suite(seed: u64) -> Vec<BenchCase> {
    let mut cases = Vec::new();
    for sigma in [2, 4, 26] {
        for n in [256, 512, 1024] {
            cases.push(BenchCase {
                id: cases.len() as u32,
                n,
                m: n,
                sigma,
                seed,
                structure: Structure::UniformRandom,
                backends: BenchBackend::ALL.to_vec(),
            });
        }
    }
    cases
}

/// Warnings for van Emde Boas runs whose time more than sextuples when `n`
/// doubles (same structure and alphabet). Never an error.
pub fn advisory_trend(report: &BenchReport) -> Vec<String> {
    let mut veb: Vec<&BenchRecord> = report
        .records
        .iter()
        .filter(|r| r.backend == BenchBackend::Veb && r.n == r.m)
        .collect();
    veb.sort_by_key(|r| (r.structure.name(), r.sigma, r.n));
    let mut warnings = Vec::new();
    for pair in veb.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if a.structure == b.structure && a.sigma == b.sigma && b.n == 2 * a.n && a.time_ns > 0 {
            let growth = b.time_ns as f64 / a.time_ns as f64;
            if growth > 6.0 {
                warnings.push(format!(
                    "veb time grew {growth:.1}x from n = {} to n = {} ({}, sigma {})",
                    a.n, b.n, a.structure, a.sigma
                ));
            }
        }
    }
    warnings
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

pub const CSV_COLUMNS: [&str; 16] = [
    "case_id",
    "structure",
    "n",
    "m",
    "sigma",
    "seed",
    "backend",
    "R",
    "L",
    "time_ns",
    "ops_succ",
    "ops_pred",
    "ops_insert",
    "ops_delete",
    "ops_update",
    "peak_trace_entries",
];

pub fn emit_report(report: &BenchReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(Vec::new());
            w.write_record(CSV_COLUMNS).expect("write to memory");
            for r in &report.records {
                w.serialize(r).expect("write to memory");
            }
            w.into_inner().expect("flush to memory")
        }
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report).expect("records serialize");
            out.push(b'\n');
            out
        }
    }
}

pub fn parse_json_report(bytes: &[u8]) -> Result<BenchReport, serde_json::Error> {
    serde_json::from_slice(bytes)
}

pub fn parse_csv_report(bytes: &[u8]) -> Result<BenchReport, csv::Error> {
    let mut r = csv::Reader::from_reader(bytes);
    let records = r.deserialize().collect::<Result<Vec<BenchRecord>, _>>()?;
    Ok(BenchReport { records })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case(
        n: usize,
        sigma: u32,
        seed: u64,
        structure: Structure,
        backends: &[BenchBackend],
    ) -> BenchCase {
        BenchCase {
            id: 0,
            n,
            m: n,
            sigma,
            seed,
            structure,
            backends: backends.to_vec(),
        }
    }

    #[test]
    fn generation_is_deterministic() {
        for st in Structure::ALL {
            assert_eq!(gen_sequence(8, 2, 1, st), gen_sequence(8, 2, 1, st));
            let c = case(50, 5, 9, st, &[]);
            assert_eq!(gen_pair(&c), gen_pair(&c));
        }
    }

    #[test]
    fn unary_alphabet() {
        let s = gen_sequence(8, 1, 1234, Structure::UniformRandom);
        assert!(s.symbols().iter().all(|&c| c == 0));
        let r = crate::lcs_length(&s, &s, Backend::Veb);
        assert_eq!((r.stats.matches, r.length), (64, 8));
    }

    #[test]
    fn structures_shape_the_match_count() {
        let uniform = gen_pair(&case(400, 16, 3, Structure::UniformRandom, &[]));
        let block = gen_pair(&case(400, 16, 3, Structure::RepeatedBlock, &[]));
        let near = gen_pair(&case(400, 16, 3, Structure::NearIdentical, &[]));
        let r = |(x, y): &(Sequence, Sequence)| count_matches(x, &PositionLists::build(y)).matches;
        assert!(r(&block) > r(&uniform));
        let l_near = crate::lcs_length(&near.0, &near.1, Backend::Veb).length;
        let l_uniform = crate::lcs_length(&uniform.0, &uniform.1, Backend::Veb).length;
        assert!(
            l_near > l_uniform && l_near >= 300,
            "{l_near} vs {l_uniform}"
        );
    }

    #[test]
    fn bench_agrees_and_counts() {
        let cases: Vec<_> = Structure::ALL
            .into_iter()
            .enumerate()
            .map(|(i, st)| BenchCase {
                id: i as u32,
                ..case(120, 4, 7, st, &BenchBackend::ALL)
            })
            .collect();
        let report = run_bench(
            &cases,
            &BenchOptions {
                repeats: 1,
                ..BenchOptions::default()
            },
        )
        .unwrap();
        assert_eq!(report.records.len(), 12);
        for r in report
            .records
            .iter()
            .filter(|r| r.backend == BenchBackend::Veb)
        {
            assert!(r.ops_succ + r.ops_pred + r.ops_insert + r.ops_delete <= 4 * r.matches);
            assert_eq!(r.peak_trace_entries, r.matches);
        }
    }

    #[test]
    fn emit_formats() {
        let empty = emit_report(&BenchReport::default(), ReportFormat::Csv);
        assert_eq!(
            String::from_utf8(empty).unwrap(),
            CSV_COLUMNS.join(",") + "\n"
        );

        let c = case(
            30,
            3,
            5,
            Structure::UniformRandom,
            &[BenchBackend::Veb, BenchBackend::Array],
        );
        let report = run_bench(
            &[c],
            &BenchOptions {
                repeats: 1,
                ..BenchOptions::default()
            },
        )
        .unwrap();
        let csv = emit_report(&report, ReportFormat::Csv);
        assert_eq!(String::from_utf8(csv.clone()).unwrap().lines().count(), 3);
        assert_eq!(parse_csv_report(&csv).unwrap(), report);
        let json = emit_report(&report, ReportFormat::Json);
        assert_eq!(parse_json_report(&json).unwrap(), report);
    }

    #[test]
    fn memory_cap_falls_back_to_length_only() {
        let c = case(
            40,
            2,
            1,
            Structure::UniformRandom,
            &[BenchBackend::Veb, BenchBackend::Array],
        );
        let options = BenchOptions {
            repeats: 1,
            memory_cap: 100,
        };
        let report = run_bench(&[c], &options).unwrap();
        assert_eq!(report.records[0].peak_trace_entries, 0);
        assert_eq!(report.records[0].ops_pred, 0);
    }

    #[test]
    fn names_parse() {
        assert_eq!(
            "dp_oracle".parse::<BenchBackend>().unwrap(),
            BenchBackend::DpOracle
        );
        assert_eq!(
            "near_identical".parse::<Structure>().unwrap(),
            Structure::NearIdentical
        );
        assert!("nope".parse::<Structure>().is_err());
    }
}
