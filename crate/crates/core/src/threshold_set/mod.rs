//! The ordered positive-integer set `S` that drives every LCS algorithm in
//! this crate.
//!
//! `S` holds at most one column per achievable LCS rank: its `t`-th smallest
//! element is the shortest prefix of `Y` that admits a common subsequence of
//! length `t` with the rows processed so far. The only mutation is
//! [`ThresholdSet::update`]: the successor of `x - 1` is replaced by `x`, or
//! `x` is appended when no such successor exists.
//!
//! Queries follow the zero-sentinel convention: `succ` and `pred` return `0`
//! when there is no answer. This is safe because members are always `>= 1`.

mod array;
mod avl;
mod veb_backed;

use std::cell::Cell;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use array::{ArrayBackend, RowCost};
pub use avl::TreeBackend;
pub use veb_backed::VebBackend;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Veb,
    Tree,
    Array,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::Veb, Backend::Tree, Backend::Array];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Veb => "veb",
            Backend::Tree => "tree",
            Backend::Array => "array",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "veb" => Ok(Backend::Veb),
            "tree" => Ok(Backend::Tree),
            "array" => Ok(Backend::Array),
            other => Err(format!(
                "unknown backend `{other}` (expected veb, tree or array)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThresholdError {
    #[error("argument {value} outside the admissible range [{lo}, {hi}]")]
    OutOfRange { value: u32, lo: u32, hi: u32 },
}

/// Result of [`ThresholdSet::update`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateOutcome {
    /// The successor `old` of `x - 1` was replaced by `x` (possibly `old == x`).
    Replaced(u32),
    /// `x` exceeded every member and was added; the size grew by one.
    Appended,
}

/// Snapshot of the operation counters of a threshold set.
///
/// `succ`, `pred`, `insert` and `delete` count the dictionary primitives,
/// including those issued internally by `update`. `comparisons` counts
/// element comparisons made by the sorted-vector scan, and `max_depth` is the
/// deepest search path seen by the balanced tree.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounters {
    pub size: u64,
    pub succ: u64,
    pub pred: u64,
    pub insert: u64,
    pub delete: u64,
    pub update: u64,
    pub comparisons: u64,
    pub max_depth: u64,
}

impl OpCounters {
    /// Succ + Delete + Insert + Pred: the four primitives charged per match.
    pub fn primitive_total(&self) -> u64 {
        self.succ + self.delete + self.insert + self.pred
    }
}

/// Interior-mutable counters so that read-only queries can still be counted.
#[derive(Debug, Default)]
pub(crate) struct Counters {
    size: Cell<u64>,
    succ: Cell<u64>,
    pred: Cell<u64>,
    insert: Cell<u64>,
    delete: Cell<u64>,
    update: Cell<u64>,
    comparisons: Cell<u64>,
    max_depth: Cell<u64>,
}

fn bump(cell: &Cell<u64>, by: u64) {
    cell.set(cell.get() + by);
}

impl Counters {
    pub(crate) fn size(&self) {
        bump(&self.size, 1)
    }
    pub(crate) fn succ(&self) {
        bump(&self.succ, 1)
    }
    pub(crate) fn pred(&self) {
        bump(&self.pred, 1)
    }
    pub(crate) fn insert(&self) {
        bump(&self.insert, 1)
    }
    pub(crate) fn delete(&self) {
        bump(&self.delete, 1)
    }
    pub(crate) fn update(&self) {
        bump(&self.update, 1)
    }
    pub(crate) fn comparisons(&self, n: u64) {
        bump(&self.comparisons, n)
    }
    pub(crate) fn depth(&self, d: u64) {
        if d > self.max_depth.get() {
            self.max_depth.set(d);
        }
    }

    pub(crate) fn snapshot(&self) -> OpCounters {
        OpCounters {
            size: self.size.get(),
            succ: self.succ.get(),
            pred: self.pred.get(),
            insert: self.insert.get(),
            delete: self.delete.get(),
            update: self.update.get(),
            comparisons: self.comparisons.get(),
            max_depth: self.max_depth.get(),
        }
    }
}

/// The ordered set ADT over `{1, .., capacity}`.
pub trait ThresholdSet {
    fn backend(&self) -> Backend;

    fn capacity(&self) -> u32;

    /// Number of members.
    fn size(&self) -> usize;

    /// Smallest member greater than `x`, or 0. Accepts `0 <= x <= capacity`.
    fn succ(&self, x: u32) -> Result<u32, ThresholdError>;

    /// Largest member smaller than `x`, or 0. Accepts `1 <= x <= capacity`.
    fn pred(&self, x: u32) -> Result<u32, ThresholdError>;

    /// Largest member, or 0 when empty. Not counted.
    fn max(&self) -> u32;

    /// Replaces the successor of `x - 1` by `x`, or appends `x` if there is
    /// none. Accepts `1 <= x <= capacity`.
    fn update(&mut self, x: u32) -> Result<UpdateOutcome, ThresholdError>;

    /// Members in ascending order.
    fn contents(&self) -> Vec<u32>;

    fn counters(&self) -> OpCounters;

    /// Marks the start of a new row of strictly decreasing updates.
    fn begin_row(&mut self) {}
}

pub(crate) fn check_range(value: u32, lo: u32, hi: u32) -> Result<(), ThresholdError> {
    if (lo..=hi).contains(&value) {
        Ok(())
    } else {
        Err(ThresholdError::OutOfRange { value, lo, hi })
    }
}

/// Builds an empty set over `{1, .., capacity}` with the requested backend.
pub fn new_threshold_set(capacity: u32, backend: Backend) -> Box<dyn ThresholdSet> {
    match backend {
        Backend::Veb => Box::new(VebBackend::new(capacity)),
        Backend::Tree => Box::new(TreeBackend::new(capacity)),
        Backend::Array => Box::new(ArrayBackend::new(capacity)),
    }
}

impl<T: ThresholdSet + ?Sized> ThresholdSet for Box<T> {
    fn backend(&self) -> Backend {
        (**self).backend()
    }
    fn capacity(&self) -> u32 {
        (**self).capacity()
    }
    fn size(&self) -> usize {
        (**self).size()
    }
    fn succ(&self, x: u32) -> Result<u32, ThresholdError> {
        (**self).succ(x)
    }
    fn pred(&self, x: u32) -> Result<u32, ThresholdError> {
        (**self).pred(x)
    }
    fn max(&self) -> u32 {
        (**self).max()
    }
    fn update(&mut self, x: u32) -> Result<UpdateOutcome, ThresholdError> {
        (**self).update(x)
    }
    fn contents(&self) -> Vec<u32> {
        (**self).contents()
    }
    fn counters(&self) -> OpCounters {
        (**self).counters()
    }
    fn begin_row(&mut self) {
        (**self).begin_row()
    }
}
