use super::{
    check_range, Backend, Counters, OpCounters, ThresholdError, ThresholdSet, UpdateOutcome,
};

/// Comparison accounting for one row of updates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RowCost {
    /// Set size when the row started.
    pub alpha_start: usize,
    pub updates: u64,
    pub comparisons: u64,
}

impl RowCost {
    /// The per-row budget `alpha + updates + 1` of the downward scan.
    pub fn budget(&self) -> u64 {
        self.alpha_start as u64 + self.updates + 1
    }
}

/// Threshold set kept as a sorted vector with a downward-moving scan cursor.
///
/// Within a row the driver feeds strictly decreasing columns, so the slot
/// for each new column lies at or below the slot of the previous one. The
/// cursor starts at the top of the vector when a row begins and only moves
/// down, making a whole row cost `O(alpha)` comparisons. An update that is
/// not smaller than the previous one implicitly starts a new row, which
/// keeps the structure correct for arbitrary update sequences.
#[derive(Debug)]
pub struct ArrayBackend {
    s: Vec<u32>,
    capacity: u32,
    // Index of the largest slot that may still hold a value < the next x;
    // -1 means every remaining value is >= x.
    cursor: isize,
    last: Option<u32>,
    rows: Vec<RowCost>,
    counters: Counters,
}

impl ArrayBackend {
    pub fn new(capacity: u32) -> Self {
        ArrayBackend {
            s: Vec::new(),
            capacity,
            cursor: -1,
            last: None,
            rows: Vec::new(),
            counters: Counters::default(),
        }
    }

    /// Per-row comparison log, one entry per row started.
    pub fn row_costs(&self) -> &[RowCost] {
        &self.rows
    }

    fn start_row(&mut self) {
        self.cursor = self.s.len() as isize - 1;
        self.last = None;
        self.rows.push(RowCost {
            alpha_start: self.s.len(),
            ..RowCost::default()
        });
    }
}

impl ThresholdSet for ArrayBackend {
    fn backend(&self) -> Backend {
        Backend::Array
    }

    fn capacity(&self) -> u32 {
        self.capacity
    }

    fn size(&self) -> usize {
        self.counters.size();
        self.s.len()
    }

    fn succ(&self, x: u32) -> Result<u32, ThresholdError> {
        check_range(x, 0, self.capacity)?;
        self.counters.succ();
        let i = self.s.partition_point(|&v| v <= x);
        Ok(self.s.get(i).copied().unwrap_or(0))
    }

    fn pred(&self, x: u32) -> Result<u32, ThresholdError> {
        check_range(x, 1, self.capacity)?;
        self.counters.pred();
        let i = self.s.partition_point(|&v| v < x);
        Ok(if i == 0 { 0 } else { self.s[i - 1] })
    }

    fn max(&self) -> u32 {
        self.s.last().copied().unwrap_or(0)
    }

    fn update(&mut self, x: u32) -> Result<UpdateOutcome, ThresholdError> {
        check_range(x, 1, self.capacity)?;
        if self.rows.is_empty() || self.last.is_some_and(|last| x >= last) {
            self.start_row();
        }
        self.counters.update();
        self.last = Some(x);

        let mut comparisons = 0;
        while self.cursor >= 0 {
            comparisons += 1;
            if self.s[self.cursor as usize] >= x {
                self.cursor -= 1;
            } else {
                break;
            }
        }
        let slot = (self.cursor + 1) as usize;
        let outcome = if slot == self.s.len() {
            self.s.push(x);
            UpdateOutcome::Appended
        } else {
            let old = std::mem::replace(&mut self.s[slot], x);
            UpdateOutcome::Replaced(old)
        };

        self.counters.comparisons(comparisons);
        let row = self.rows.last_mut().expect("row started");
        row.updates += 1;
        row.comparisons += comparisons;
        Ok(outcome)
    }

    fn contents(&self) -> Vec<u32> {
        self.s.clone()
    }

    fn counters(&self) -> OpCounters {
        self.counters.snapshot()
    }

    fn begin_row(&mut self) {
        self.start_row();
    }
}
