//! Longest common subsequence through threshold sets.
//!
//! For inputs `X` (length `m`) and `Y` (length `n`) the LCS problem reduces
//! to maintaining an ordered set `S` of columns of `Y` under one operation,
//! [`ThresholdSet::update`]. Three backends give three cost profiles, where
//! `R` is the number of matching pairs and `L` the LCS length:
//!
//! | backend | structure | time |
//! |---------|-----------|------|
//! | [`Backend::Veb`] | van Emde Boas tree | `O(R log log n + n)` |
//! | [`Backend::Tree`] | AVL tree | `O(R log L + n)` |
//! | [`Backend::Array`] | sorted vector scan | `O(n L)` |
//!
//! Reconstruction records one back pointer per match, so it uses `O(R + n)`
//! space. [`lcs::dp_oracle`] and [`lcs::shadow_run`] are independent
//! references used by the test suites and the `verify` command.
//!
//! ```
//! use lcs_threshold::{lcs_length, Backend, Sequence};
//!
//! let x = Sequence::from_bytes(b"abcbdab");
//! let y = Sequence::from_bytes(b"bdcaba");
//! assert_eq!(lcs_length(&x, &y, Backend::Veb).length, 4);
//! ```

pub mod bench;
pub mod lcs;
pub mod match_index;
pub mod threshold_set;
pub mod veb;

pub use lcs::{
    dp_oracle, lcs_length, lcs_reconstruct, lcs_vector_scan, LcsError, LcsResult,
    ReconstructOptions, DEFAULT_MEMORY_CAP,
};
pub use match_index::{count_matches, MatchStats, PositionLists, Sequence, TokenMode, Tokenizer};
pub use threshold_set::{new_threshold_set, Backend, OpCounters, ThresholdSet, UpdateOutcome};
pub use veb::VebTree;
