use crate::match_index::Sequence;

/// Per-match back pointers recorded by the tracing driver.
///
/// Matches are numbered `1..=R` in processing order; number 0 is the empty
/// chain. For match `k`, `predecessor(k)` is the match that occupied the
/// predecessor column of `S` when `k` was recorded and `column(k)` is its
/// column in `Y`. `live_match(j)` is the match currently owning column `j`
/// of `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceTable {
    pred: Vec<u32>,
    col: Vec<u32>,
    row: Vec<u32>,
    live: Vec<u32>,
}

impl TraceTable {
    pub fn with_capacity(columns: usize, matches: usize) -> Self {
        let mut t = TraceTable {
            pred: Vec::with_capacity(matches + 1),
            col: Vec::with_capacity(matches + 1),
            row: Vec::with_capacity(matches + 1),
            live: vec![0; columns + 1],
        };
        t.pred.push(0);
        t.col.push(0);
        t.row.push(0);
        t
    }

    /// Builds a table directly from predecessor and column vectors (match
    /// numbers start at 1, so `pred[0]` belongs to match 1).
    pub fn from_parts(pred: &[u32], col: &[u32], columns: usize) -> Self {
        assert_eq!(pred.len(), col.len());
        let mut t = TraceTable::with_capacity(columns, pred.len());
        t.pred.extend_from_slice(pred);
        t.col.extend_from_slice(col);
        t.row.extend(1..=pred.len() as u32);
        for (k, &c) in col.iter().enumerate() {
            t.live[c as usize] = k as u32 + 1;
        }
        t
    }

    /// Records match `(row, column)` whose predecessor column in `S` is
    /// `pred_column` (0 when it has none). Returns its match number.
    pub fn record(&mut self, row: u32, column: u32, pred_column: u32) -> u32 {
        let m = self.pred.len() as u32;
        self.pred.push(self.live[pred_column as usize]);
        self.col.push(column);
        self.row.push(row);
        self.live[column as usize] = m;
        m
    }

    /// Number of recorded matches.
    pub fn len(&self) -> usize {
        self.pred.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn predecessor(&self, k: u32) -> u32 {
        self.pred[k as usize]
    }

    pub fn column(&self, k: u32) -> u32 {
        self.col[k as usize]
    }

    pub fn row(&self, k: u32) -> u32 {
        self.row[k as usize]
    }

    /// Match occupying column `j` (0 for column 0 or an unoccupied column).
    pub fn live_match(&self, j: u32) -> u32 {
        self.live[j as usize]
    }

    /// Match numbers along the chain ending at `k`, first match first.
    pub fn chain(&self, k: u32) -> Vec<u32> {
        let mut out = Vec::new();
        let mut k = k;
        while k > 0 {
            out.push(k);
            k = self.pred[k as usize];
        }
        out.reverse();
        out
    }
}

/// Tokens of `Y` along the chain ending at match `k`, predecessors first.
pub fn extract_lcs(trace: &TraceTable, k: u32, y: &Sequence) -> Vec<u32> {
    trace
        .chain(k)
        .into_iter()
        .map(|m| y.symbols()[trace.column(m) as usize - 1])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extract_examples() {
        let y = Sequence::from_bytes(b"bdcaba");
        let empty = TraceTable::with_capacity(6, 0);
        assert!(extract_lcs(&empty, 0, &y).is_empty());

        let single = TraceTable::from_parts(&[0], &[3], 6);
        assert_eq!(extract_lcs(&single, 1, &y), b"c".map(u32::from));

        let pair = TraceTable::from_parts(&[0, 1], &[2, 5], 6);
        assert_eq!(extract_lcs(&pair, 2, &y), b"db".map(u32::from));
        assert_eq!(pair.chain(2), vec![1, 2]);
    }

    #[test]
    fn record_links_through_live_columns() {
        let mut t = TraceTable::with_capacity(5, 3);
        assert_eq!(t.record(1, 2, 0), 1);
        assert_eq!(t.record(2, 4, 2), 2);
        assert_eq!(t.record(3, 1, 0), 3);
        assert_eq!(t.predecessor(2), 1);
        assert_eq!(t.live_match(2), 1);
        assert_eq!(t.live_match(1), 3);
        assert_eq!(t.len(), 3);
    }
}
