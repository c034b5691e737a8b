//! Dense reference state maintained next to the threshold set.
//!
//! `H(l)` is the best rank of any match seen so far in column `l`, `Q` is the
//! prefix maximum of `H`, and `P(t)` is the first column where `Q` reaches
//! `t` (or `n + 1`). The threshold set is exactly the finite part of `P`.
//! [`shadow_run`] keeps `H` and `Q` by their definitions while the compact
//! driver runs, and cross-checks the two representations after every row.
//!
//! All arrays here are column-indexed from 1 and stored 0-based: `q[j - 1]`
//! holds `Q(j)`, and `Q(0)` is implicitly 0.

use std::fmt;

use thiserror::Error;

use super::DpTable;
use crate::match_index::{PositionLists, Sequence};
use crate::threshold_set::{new_threshold_set, Backend, ThresholdSet};

/// Largest `m` and `n` accepted by [`shadow_run`] by default.
pub const SHADOW_LIMIT: usize = 256;

/// Prefix maxima of `h`.
pub fn prefix_max(h: &[u32]) -> Vec<u32> {
    h.iter()
        .scan(0, |best, &v| {
            *best = (*best).max(v);
            Some(*best)
        })
        .collect()
}

/// `P(t) = min { j : Q(j) = t }` for `t <= max Q`, else `n + 1`; `t = 1..=n`.
pub fn break_points(q: &[u32]) -> Vec<u32> {
    let n = q.len();
    let top = q.iter().copied().max().unwrap_or(0);
    (1..=n as u32)
        .map(|t| {
            if t <= top {
                q.iter()
                    .position(|&v| v == t)
                    .map_or(n as u32 + 1, |i| i as u32 + 1)
            } else {
                n as u32 + 1
            }
        })
        .collect()
}

/// The break points that fall inside `1..=n`.
pub fn thresholds_from_break_points(p: &[u32], n: usize) -> Vec<u32> {
    p.iter()
        .copied()
        .filter(|&v| v >= 1 && v as usize <= n)
        .collect()
}

/// Rebuilds `Q` from the threshold set: `Q(j) = k` for `S(k) <= j < S(k+1)`,
/// and `Q(j) = |S|` from the largest threshold onwards.
pub fn q_from_thresholds(s: &[u32], n: usize) -> Vec<u32> {
    (1..=n as u32)
        .map(|j| {
            let mut k = 0;
            while k < s.len() && s[k] <= j {
                k += 1;
            }
            k as u32
        })
        .collect()
}

/// Dense `H` and `Q` arrays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadowState {
    pub h: Vec<u32>,
    pub q: Vec<u32>,
}

impl ShadowState {
    pub fn new(n: usize) -> Self {
        ShadowState {
            h: vec![0; n],
            q: vec![0; n],
        }
    }

    /// A state whose column maxima equal the given prefix maxima.
    pub fn from_prefix_maxima(q: &[u32]) -> Self {
        ShadowState {
            h: q.to_vec(),
            q: q.to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.q.len()
    }

    /// `Q(j)` with `Q(0) = 0`.
    pub fn q_at(&self, j: usize) -> u32 {
        if j == 0 {
            0
        } else {
            self.q[j - 1]
        }
    }

    /// Processes match `(i, j)` for the current row: its rank is
    /// `T = 1 + Q(j - 1)`, and `Q` is raised to `T` on `[j, j' - 1]` where
    /// `j'` is the first column after `j - 1` whose value exceeds `Q(j - 1)`.
    /// Matches of a row must be applied in decreasing column order.
    pub fn apply_match(&mut self, j: usize) -> u32 {
        let base = self.q_at(j - 1);
        let t = base + 1;
        let end = (j..=self.n())
            .find(|&l| self.q[l - 1] > base)
            .unwrap_or(self.n() + 1);
        for l in j..end {
            self.q[l - 1] = t;
        }
        self.h[j - 1] = self.h[j - 1].max(t);
        t
    }
}

/// State after a row has been processed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadowSnapshot {
    pub row: usize,
    pub h: Vec<u32>,
    pub q: Vec<u32>,
    pub p: Vec<u32>,
    pub s: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadowReport {
    pub snapshots: Vec<ShadowSnapshot>,
    /// `(i, j, T(i, j))` for every match in processing order.
    pub ranks: Vec<(u32, u32, u32)>,
    pub thresholds: Vec<u32>,
    pub length: usize,
}

/// A disagreement between two routes to the same quantity.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct Violation {
    pub check: &'static str,
    pub row: usize,
    pub column: usize,
    pub expected: u32,
    pub actual: u32,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} violated at row {}, column {}: expected {}, got {}",
            self.check, self.row, self.column, self.expected, self.actual
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShadowError {
    #[error("inputs of size {m} x {n} exceed the shadow limit of {limit}")]
    TooLarge { m: usize, n: usize, limit: usize },
    #[error(transparent)]
    Violation(#[from] Violation),
}

fn compare(
    check: &'static str,
    row: usize,
    expected: &[u32],
    actual: &[u32],
) -> Result<(), Violation> {
    if expected.len() != actual.len() {
        return Err(Violation {
            check,
            row,
            column: 0,
            expected: expected.len() as u32,
            actual: actual.len() as u32,
        });
    }
    match expected.iter().zip(actual).position(|(e, a)| e != a) {
        None => Ok(()),
        Some(i) => Err(Violation {
            check,
            row,
            column: i + 1,
            expected: expected[i],
            actual: actual[i],
        }),
    }
}

/// Runs the threshold-set driver on `backend` in lock-step with the dense
/// shadow state and checks, after every row:
///
/// - each rank `T(i, j)` equals `1 + max H(1..j-1)` and `1 + LCS(X[..i-1], Y[..j-1])`;
/// - the incrementally maintained `Q` equals the prefix maxima of `H`;
/// - `Q` rebuilt from the threshold set equals the dense `Q`;
/// - the break points of `Q` equal the threshold set padded with `n + 1`;
/// - `H` never decreases from one row to the next;
/// - consecutive values of `Q` differ by 0 or 1.
///
/// After the last row it also checks `Q(j) = LCS(X, Y[..j])` and that the
/// `t`-th threshold is the first `j` with `LCS(X, Y[..j]) = t`.
pub fn shadow_run(
    x: &Sequence,
    y: &Sequence,
    backend: Backend,
) -> Result<ShadowReport, ShadowError> {
    shadow_run_with_limit(x, y, backend, SHADOW_LIMIT)
}

pub fn shadow_run_with_limit(
    x: &Sequence,
    y: &Sequence,
    backend: Backend,
    limit: usize,
) -> Result<ShadowReport, ShadowError> {
    let (m, n) = (x.len(), y.len());
    if m > limit || n > limit {
        return Err(ShadowError::TooLarge { m, n, limit });
    }
    let mut set = new_threshold_set(n.max(1) as u32, backend);
    shadow_run_on(x, y, &mut set)
}

/// [`shadow_run`] on a caller-supplied empty set of capacity `|y|`, with no
/// size limit.
pub fn shadow_run_on<T: ThresholdSet + ?Sized>(
    x: &Sequence,
    y: &Sequence,
    set: &mut T,
) -> Result<ShadowReport, ShadowError> {
    let (m, n) = (x.len(), y.len());
    let dp = DpTable::build(x.symbols(), y.symbols(), u64::MAX).expect("uncapped");
    let lists = PositionLists::build(y);
    let mut state = ShadowState::new(n);
    let mut snapshots = Vec::with_capacity(m);
    let mut ranks = Vec::new();

    for (idx, &sym) in x.symbols().iter().enumerate() {
        let i = idx + 1;
        let h_before = state.h.clone();
        set.begin_row();
        for &j in lists.positions(sym) {
            let j = j as usize;
            let via_rmq = 1 + h_before[..j - 1].iter().copied().max().unwrap_or(0);
            let via_dp = 1 + dp.get(i - 1, j - 1);
            let t = state.apply_match(j);
            if t != via_rmq {
                return Err(Violation {
                    check: "rank vs 1 + RMQ(1, j-1)",
                    row: i,
                    column: j,
                    expected: via_rmq,
                    actual: t,
                }
                .into());
            }
            if t != via_dp {
                return Err(Violation {
                    check: "rank vs dynamic programming",
                    row: i,
                    column: j,
                    expected: via_dp,
                    actual: t,
                }
                .into());
            }
            set.update(j as u32).expect("column within capacity");
            ranks.push((i as u32, j as u32, t));
        }

        let s = set.contents();
        compare(
            "Q equals prefix maxima of H",
            i,
            &prefix_max(&state.h),
            &state.q,
        )?;
        compare(
            "Q rebuilt from thresholds",
            i,
            &state.q,
            &q_from_thresholds(&s, n),
        )?;
        let p = break_points(&state.q);
        let mut padded = s.clone();
        padded.resize(n, n as u32 + 1);
        compare("break points equal padded thresholds", i, &p, &padded)?;
        if let Some(l) = (0..n).find(|&l| state.h[l] < h_before[l]) {
            return Err(Violation {
                check: "H nondecreasing across rows",
                row: i,
                column: l + 1,
                expected: h_before[l],
                actual: state.h[l],
            }
            .into());
        }
        let mut prev = 0;
        for (l, &v) in state.q.iter().enumerate() {
            if v != prev && v != prev + 1 {
                return Err(Violation {
                    check: "Q steps by 0 or 1",
                    row: i,
                    column: l + 1,
                    expected: prev + 1,
                    actual: v,
                }
                .into());
            }
            prev = v;
        }
        snapshots.push(ShadowSnapshot {
            row: i,
            h: state.h.clone(),
            q: state.q.clone(),
            p,
            s,
        });
    }

    let thresholds = set.contents();
    let last = dp.last_row();
    compare("final Q equals LCS(X, Y[..j])", m, &last[1..], &state.q)?;
    for (t, &col) in thresholds.iter().enumerate() {
        let first = last.iter().position(|&v| v as usize == t + 1).unwrap_or(0) as u32;
        if first != col {
            return Err(Violation {
                check: "threshold is first column reaching its rank",
                row: m,
                column: t + 1,
                expected: first,
                actual: col,
            }
            .into());
        }
    }
    let length = set.size();
    if length != dp.length() {
        return Err(Violation {
            check: "threshold count equals LCS length",
            row: m,
            column: n,
            expected: dp.length() as u32,
            actual: length as u32,
        }
        .into());
    }
    Ok(ShadowReport {
        snapshots,
        ranks,
        thresholds,
        length,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_max_example() {
        assert_eq!(
            prefix_max(&[0, 1, 2, 1, 2, 0, 1]),
            vec![0, 1, 2, 2, 2, 2, 2]
        );
    }

    #[test]
    fn break_point_example() {
        let q = [0, 1, 2, 2, 2, 2, 2];
        let p = break_points(&q);
        assert_eq!(p, vec![2, 3, 8, 8, 8, 8, 8]);
        assert_eq!(thresholds_from_break_points(&p, 7), vec![2, 3]);
        assert_eq!(q_from_thresholds(&[2, 3], 7), q.to_vec());
    }

    #[test]
    fn worked_match_example() {
        let mut state = ShadowState::from_prefix_maxima(&[0, 1, 2, 2, 2, 2, 2]);
        assert_eq!(state.apply_match(6), 3);
        assert_eq!(state.q, vec![0, 1, 2, 2, 2, 3, 3]);
    }

    #[test]
    fn shadow_run_small() {
        let x = Sequence::from_bytes(b"abcbdab");
        let y = Sequence::from_bytes(b"bdcaba");
        for backend in Backend::ALL {
            let report = shadow_run(&x, &y, backend).unwrap();
            assert_eq!(report.length, 4);
            assert_eq!(report.snapshots.len(), 7);
        }
    }

    #[test]
    fn shadow_limit() {
        let x = Sequence::from_bytes(&[b'a'; 10]);
        assert!(matches!(
            shadow_run_with_limit(&x, &x, Backend::Veb, 9),
            Err(ShadowError::TooLarge { .. })
        ));
    }
}
