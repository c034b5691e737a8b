//! Tokenization and the per-symbol position lists of the second sequence.
//!
//! The match set itself is never materialized. Row `i` of the match matrix
//! is exactly the position list of `x_i` in `Y`, which is stored in
//! decreasing order so drivers can feed columns right to left.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

/// How raw input is split into symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Bytes,
    Lines,
    ExplicitTokens,
}

/// A sequence of dense token ids `0 <= id < alphabet_size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    symbols: Vec<u32>,
    alphabet_size: u32,
    provenance: Provenance,
}

impl Sequence {
    /// Bytes map to their own value; the alphabet is all 256 byte values.
    pub fn from_bytes(raw: &[u8]) -> Self {
        Sequence {
            symbols: raw.iter().map(|&b| u32::from(b)).collect(),
            alphabet_size: 256,
            provenance: Provenance::Bytes,
        }
    }

    pub fn from_tokens(symbols: Vec<u32>) -> Self {
        let alphabet_size = symbols.iter().max().map_or(0, |&m| m + 1);
        Sequence {
            symbols,
            alphabet_size,
            provenance: Provenance::ExplicitTokens,
        }
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TokenMode {
    Bytes,
    Lines,
}

/// Turns raw inputs into [`Sequence`]s. In line mode the symbol table is
/// shared by every input passed through the same tokenizer, so equal lines
/// in different inputs get the same id.
#[derive(Debug, Clone)]
pub struct Tokenizer {
    mode: TokenMode,
    ids: HashMap<Vec<u8>, u32>,
    lines: Vec<Vec<u8>>,
}

impl Tokenizer {
    pub fn new(mode: TokenMode) -> Self {
        Tokenizer {
            mode,
            ids: HashMap::new(),
            lines: Vec::new(),
        }
    }

    pub fn mode(&self) -> TokenMode {
        self.mode
    }

    /// Lines are split on `\n`; a trailing newline does not start an empty
    /// final line.
    pub fn tokenize(&mut self, raw: &[u8]) -> Sequence {
        match self.mode {
            TokenMode::Bytes => Sequence::from_bytes(raw),
            TokenMode::Lines => {
                let mut symbols = Vec::new();
                for line in raw.split_inclusive(|&b| b == b'\n') {
                    let line = line.strip_suffix(b"\n").unwrap_or(line);
                    let next = self.lines.len() as u32;
                    let id = *self.ids.entry(line.to_vec()).or_insert_with(|| next);
                    if id == next {
                        self.lines.push(line.to_vec());
                    }
                    symbols.push(id);
                }
                Sequence {
                    symbols,
                    alphabet_size: self.lines.len() as u32,
                    provenance: Provenance::Lines,
                }
            }
        }
    }

    /// Raw bytes for a token: the byte itself, or the line without its newline.
    pub fn decode(&self, id: u32) -> Vec<u8> {
        match self.mode {
            TokenMode::Bytes => vec![id as u8],
            TokenMode::Lines => self.lines[id as usize].clone(),
        }
    }

    /// Renders a token sequence back to bytes; lines are newline-terminated.
    pub fn render(&self, tokens: &[u32]) -> Vec<u8> {
        let mut out = Vec::new();
        for &t in tokens {
            out.extend(self.decode(t));
            if self.mode == TokenMode::Lines {
                out.push(b'\n');
            }
        }
        out
    }
}

/// For every symbol, its 1-based positions in `Y`, largest first.
#[derive(Debug, Clone)]
pub struct PositionLists {
    lists: Vec<Vec<u32>>,
    len: usize,
    visits: u64,
}

impl PositionLists {
    /// Single right-to-left scan of `y`.
    pub fn build(y: &Sequence) -> Self {
        let mut lists = vec![Vec::new(); y.alphabet_size() as usize];
        let mut visits = 0;
        for (idx, &sym) in y.symbols().iter().enumerate().rev() {
            visits += 1;
            lists[sym as usize].push(idx as u32 + 1);
        }
        PositionLists {
            lists,
            len: y.len(),
            visits,
        }
    }

    /// Positions of `symbol`, strictly decreasing. Symbols never seen in `Y`
    /// (including ids beyond its alphabet) have no positions.
    pub fn positions(&self, symbol: u32) -> &[u32] {
        self.lists.get(symbol as usize).map_or(&[], Vec::as_slice)
    }

    /// Length of `Y`.
    pub fn target_len(&self) -> usize {
        self.len
    }

    pub fn alphabet_size(&self) -> usize {
        self.lists.len()
    }

    /// Number of symbols inspected while building.
    pub fn visits(&self) -> u64 {
        self.visits
    }

    /// Number of distinct symbols that occur in `Y`.
    pub fn distinct_symbols(&self) -> usize {
        self.lists.iter().filter(|l| !l.is_empty()).count()
    }
}

/// Match count and sequence lengths; `m = |X|`, `n = |Y|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchStats {
    pub matches: u64,
    pub m: usize,
    pub n: usize,
    pub lcs_len: Option<usize>,
}

/// `R = sum_i |L_Y(x_i)|`, computed without enumerating pairs.
pub fn count_matches(x: &Sequence, lists: &PositionLists) -> MatchStats {
    let matches = x
        .symbols()
        .iter()
        .map(|&s| lists.positions(s).len() as u64)
        .sum();
    MatchStats {
        matches,
        m: x.len(),
        n: lists.target_len(),
        lcs_len: None,
    }
}
