use super::LcsError;

/// Dense `(m+1) x (n+1)` table with `get(i, j) = LCS(X[..i], Y[..j])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpTable {
    rows: usize,
    cols: usize,
    cells: Vec<u32>,
    x: Vec<u32>,
    y: Vec<u32>,
}

impl DpTable {
    pub fn build(x: &[u32], y: &[u32], memory_cap: u64) -> Result<Self, LcsError> {
        let (rows, cols) = (x.len() + 1, y.len() + 1);
        let required = rows as u64 * cols as u64;
        if required > memory_cap {
            return Err(LcsError::MemoryCap {
                what: "dynamic programming table",
                required,
                cap: memory_cap,
            });
        }
        let mut cells = vec![0u32; rows * cols];
        for i in 1..rows {
            for j in 1..cols {
                cells[i * cols + j] = if x[i - 1] == y[j - 1] {
                    cells[(i - 1) * cols + j - 1] + 1
                } else {
                    cells[(i - 1) * cols + j].max(cells[i * cols + j - 1])
                };
            }
        }
        Ok(DpTable {
            rows,
            cols,
            cells,
            x: x.to_vec(),
            y: y.to_vec(),
        })
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.cells[i * self.cols + j]
    }

    /// LCS length of the full inputs.
    pub fn length(&self) -> usize {
        self.get(self.rows - 1, self.cols - 1) as usize
    }

    /// Last row: `LCS(X, Y[..j])` for `j = 0..=n`.
    pub fn last_row(&self) -> &[u32] {
        &self.cells[(self.rows - 1) * self.cols..]
    }

    /// One LCS by the standard backward walk.
    pub fn traceback(&self) -> Vec<u32> {
        let (mut i, mut j) = (self.rows - 1, self.cols - 1);
        let mut out = Vec::with_capacity(self.length());
        while i > 0 && j > 0 {
            if self.x[i - 1] == self.y[j - 1] {
                out.push(self.x[i - 1]);
                i -= 1;
                j -= 1;
            } else if self.get(i - 1, j) >= self.get(i, j - 1) {
                i -= 1;
            } else {
                j -= 1;
            }
        }
        out.reverse();
        out
    }
}

pub fn is_subsequence(sub: &[u32], of: &[u32]) -> bool {
    let mut it = of.iter();
    sub.iter().all(|s| it.any(|o| o == s))
}

pub fn is_common_subsequence(sub: &[u32], x: &[u32], y: &[u32]) -> bool {
    is_subsequence(sub, x) && is_subsequence(sub, y)
}
