//! LCS drivers built on [`ThresholdSet`].
//!
//! All drivers share one loop: for every row `i` of `X`, walk the positions
//! of `x_i` in `Y` from right to left and apply `update(j)` to the threshold
//! set. Processing a row right to left means an update at column `j` never
//! disturbs the prefix maxima consulted by the smaller columns that follow,
//! so the set can be modified in place. After the last row, `|S|` is the
//! LCS length.

mod oracle;
mod shadow;
mod trace;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::match_index::{count_matches, MatchStats, PositionLists, Sequence};
use crate::threshold_set::{
    new_threshold_set, ArrayBackend, Backend, OpCounters, RowCost, ThresholdSet,
};

pub use oracle::{is_common_subsequence, is_subsequence, DpTable};
pub use shadow::{
    break_points, prefix_max, q_from_thresholds, shadow_run, shadow_run_on, shadow_run_with_limit,
    thresholds_from_break_points, ShadowError, ShadowReport, ShadowSnapshot, ShadowState,
    Violation, SHADOW_LIMIT,
};
pub use trace::{extract_lcs, TraceTable};

/// Default limit on trace entries (and DP cells) a single run may allocate.
pub const DEFAULT_MEMORY_CAP: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LcsError {
    #[error("{what} needs {required} entries, above the memory cap of {cap}")]
    MemoryCap {
        what: &'static str,
        required: u64,
        cap: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcsResult {
    pub length: usize,
    pub subsequence: Option<Vec<u32>>,
    pub stats: MatchStats,
    pub counters: OpCounters,
    pub backend: Option<Backend>,
}

fn trivial(stats: MatchStats) -> bool {
    stats.matches == 0
}

fn finish(
    mut stats: MatchStats,
    length: usize,
    counters: OpCounters,
    backend: Option<Backend>,
) -> LcsResult {
    stats.lcs_len = Some(length);
    LcsResult {
        length,
        subsequence: None,
        stats,
        counters,
        backend,
    }
}

/// Runs the update loop on a caller-supplied set, which must have capacity
/// `|y|` and be empty. Returns the match statistics.
pub fn run_updates<T: ThresholdSet + ?Sized>(
    x: &Sequence,
    lists: &PositionLists,
    set: &mut T,
) -> MatchStats {
    let mut stats = count_matches(x, lists);
    for &sym in x.symbols() {
        set.begin_row();
        for &j in lists.positions(sym) {
            set.update(j).expect("column within capacity");
        }
    }
    stats.lcs_len = Some(set.size());
    stats
}

/// LCS length with the chosen threshold-set backend.
pub fn lcs_length(x: &Sequence, y: &Sequence, backend: Backend) -> LcsResult {
    let lists = PositionLists::build(y);
    let stats = count_matches(x, &lists);
    if trivial(stats) {
        return finish(stats, 0, OpCounters::default(), Some(backend));
    }
    let mut set = new_threshold_set(y.len() as u32, backend);
    let stats = run_updates(x, &lists, &mut set);
    finish(
        stats,
        stats.lcs_len.unwrap_or(0),
        set.counters(),
        Some(backend),
    )
}

/// LCS length by the sorted-vector scan, together with its per-row
/// comparison log.
pub fn lcs_vector_scan_profiled(x: &Sequence, y: &Sequence) -> (LcsResult, Vec<RowCost>) {
    let lists = PositionLists::build(y);
    let stats = count_matches(x, &lists);
    if trivial(stats) {
        return (
            finish(stats, 0, OpCounters::default(), Some(Backend::Array)),
            Vec::new(),
        );
    }
    let mut set = ArrayBackend::new(y.len() as u32);
    let stats = run_updates(x, &lists, &mut set);
    let result = finish(
        stats,
        stats.lcs_len.unwrap_or(0),
        set.counters(),
        Some(Backend::Array),
    );
    (result, set.row_costs().to_vec())
}

/// LCS length by the sorted-vector scan: `O(nL)` comparisons in total.
pub fn lcs_vector_scan(x: &Sequence, y: &Sequence) -> LcsResult {
    lcs_vector_scan_profiled(x, y).0
}

/// Options for [`lcs_reconstruct`].
#[derive(Debug, Clone, Copy)]
pub struct ReconstructOptions {
    pub backend: Backend,
    /// Maximum number of trace entries (one per match).
    pub memory_cap: u64,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        ReconstructOptions {
            backend: Backend::Veb,
            memory_cap: DEFAULT_MEMORY_CAP,
        }
    }
}

/// Computes an LCS, recording one trace entry per match.
pub fn lcs_reconstruct(
    x: &Sequence,
    y: &Sequence,
    options: ReconstructOptions,
) -> Result<LcsResult, LcsError> {
    let lists = PositionLists::build(y);
    let stats = count_matches(x, &lists);
    if trivial(stats) {
        let mut result = finish(stats, 0, OpCounters::default(), Some(options.backend));
        result.subsequence = Some(Vec::new());
        return Ok(result);
    }
    if stats.matches > options.memory_cap {
        return Err(LcsError::MemoryCap {
            what: "reconstruction trace",
            required: stats.matches,
            cap: options.memory_cap,
        });
    }
    let mut set = new_threshold_set(y.len() as u32, options.backend);
    let (result, _) = reconstruct_with(x, y, &lists, &mut set);
    Ok(result)
}

/// The tracing driver over an arbitrary set; returns the result and the
/// trace table so callers can inspect chains.
pub fn reconstruct_with<T: ThresholdSet + ?Sized>(
    x: &Sequence,
    y: &Sequence,
    lists: &PositionLists,
    set: &mut T,
) -> (LcsResult, TraceTable) {
    let mut stats = count_matches(x, lists);
    let mut trace = TraceTable::with_capacity(y.len(), stats.matches as usize);
    for (row, &sym) in x.symbols().iter().enumerate() {
        set.begin_row();
        for &j in lists.positions(sym) {
            set.update(j).expect("column within capacity");
            // j is now in S; its predecessor was placed by an earlier row.
            let p = set.pred(j).expect("column within capacity");
            trace.record(row as u32 + 1, j, p);
        }
    }
    let length = set.size();
    let top = set.max();
    let subsequence = extract_lcs(&trace, trace.live_match(top), y);
    stats.lcs_len = Some(length);
    let result = LcsResult {
        length,
        subsequence: Some(subsequence),
        stats,
        counters: set.counters(),
        backend: Some(set.backend()),
    };
    (result, trace)
}

/// Classical quadratic DP, for cross-checking.
pub fn dp_oracle(x: &Sequence, y: &Sequence, memory_cap: u64) -> Result<DpTable, LcsError> {
    DpTable::build(x.symbols(), y.symbols(), memory_cap)
}
