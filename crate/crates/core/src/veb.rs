//! A van Emde Boas tree over the integer universe `{0, .., u-1}`.
//!
//! The universe is rounded up to a power of two `2^b`. A node over `b` bits
//! splits keys into `ceil(b/2)` high bits (cluster index, tracked by the
//! summary) and `floor(b/2)` low bits (key inside the cluster). The minimum
//! of every node lives only in the node itself and is never pushed into a
//! cluster, so insert and delete make at most one non-trivial recursive call.
//!
//! Clusters and summaries are allocated on first use and released once they
//! become empty, which keeps memory proportional to the occupied keys rather
//! than the universe.

use std::fmt;

use thiserror::Error;

/// Largest supported universe, as a bit count.
pub const MAX_UNIVERSE_BITS: u32 = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VebError {
    #[error("key {key} is outside the universe [0, {universe})")]
    OutOfUniverse { key: u64, universe: u64 },
    #[error("universe of {requested} keys exceeds the supported maximum of 2^{MAX_UNIVERSE_BITS}")]
    UniverseTooLarge { requested: u64 },
    #[error("universe request must be at least 1")]
    EmptyUniverse,
}

#[derive(Clone)]
pub struct VebTree {
    bits: u32,
    min: Option<u64>,
    max: Option<u64>,
    len: u64,
    summary: Option<Box<VebTree>>,
    clusters: Vec<Option<Box<VebTree>>>,
}

impl fmt::Debug for VebTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VebTree")
            .field("universe", &self.universe())
            .field("len", &self.len)
            .field("keys", &self.iter().collect::<Vec<_>>())
            .finish()
    }
}

impl VebTree {
    /// Creates an empty tree whose universe is the smallest power of two
    /// that is at least `max(universe_request, 2)`.
    pub fn new(universe_request: u64) -> Result<Self, VebError> {
        if universe_request == 0 {
            return Err(VebError::EmptyUniverse);
        }
        let rounded = universe_request.max(2).checked_next_power_of_two().ok_or(
            VebError::UniverseTooLarge {
                requested: universe_request,
            },
        )?;
        let bits = rounded.trailing_zeros();
        if bits > MAX_UNIVERSE_BITS {
            return Err(VebError::UniverseTooLarge {
                requested: universe_request,
            });
        }
        let tree = Self::with_bits(bits);
        debug_assert!(tree.height() <= ceil_log2(u64::from(bits)) + 1);
        Ok(tree)
    }

    fn with_bits(bits: u32) -> Self {
        VebTree {
            bits,
            min: None,
            max: None,
            len: 0,
            summary: None,
            clusters: Vec::new(),
        }
    }

    pub fn universe(&self) -> u64 {
        1u64 << self.bits
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn min(&self) -> Option<u64> {
        self.min
    }

    pub fn max(&self) -> Option<u64> {
        self.max
    }

    /// Number of recursion levels from this node down to a two-key leaf,
    /// following the deepest (summary) chain.
    pub fn height(&self) -> u32 {
        let mut bits = self.bits;
        let mut levels = 1;
        while bits > 1 {
            bits = high_bits(bits);
            levels += 1;
        }
        levels
    }

    fn check(&self, key: u64) -> Result<(), VebError> {
        if key < self.universe() {
            Ok(())
        } else {
            Err(VebError::OutOfUniverse {
                key,
                universe: self.universe(),
            })
        }
    }

    /// Inserts `key`. Returns `true` if it was not already present.
    pub fn insert(&mut self, key: u64) -> Result<bool, VebError> {
        self.check(key)?;
        Ok(self.insert_raw(key))
    }

    /// Removes `key`. Returns `true` if it was present; absent keys are a no-op.
    pub fn delete(&mut self, key: u64) -> Result<bool, VebError> {
        self.check(key)?;
        Ok(self.delete_raw(key))
    }

    pub fn contains(&self, key: u64) -> Result<bool, VebError> {
        self.check(key)?;
        Ok(self.contains_raw(key))
    }

    /// Smallest stored key strictly greater than `key`.
    pub fn successor(&self, key: u64) -> Result<Option<u64>, VebError> {
        self.check(key)?;
        Ok(self.successor_raw(key))
    }

    /// Largest stored key strictly less than `key`.
    pub fn predecessor(&self, key: u64) -> Result<Option<u64>, VebError> {
        self.check(key)?;
        Ok(self.predecessor_raw(key))
    }

    /// Ascending iteration over the stored keys.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let mut next = self.min;
        std::iter::from_fn(move || {
            let cur = next?;
            next = self.successor_raw(cur);
            Some(cur)
        })
    }

    #[inline]
    fn low_bits(&self) -> u32 {
        self.bits / 2
    }

    #[inline]
    fn high(&self, key: u64) -> u64 {
        key >> self.low_bits()
    }

    #[inline]
    fn low(&self, key: u64) -> u64 {
        key & ((1u64 << self.low_bits()) - 1)
    }

    #[inline]
    fn index(&self, cluster: u64, offset: u64) -> u64 {
        (cluster << self.low_bits()) | offset
    }

    fn cluster(&self, c: u64) -> Option<&VebTree> {
        self.clusters
            .get(c as usize)
            .and_then(|slot| slot.as_deref())
    }

    fn insert_raw(&mut self, key: u64) -> bool {
        let mut key = key;
        let min = match self.min {
            None => {
                self.min = Some(key);
                self.max = Some(key);
                self.len = 1;
                return true;
            }
            Some(min) => min,
        };
        if key == min || self.max == Some(key) {
            return false;
        }
        if self.bits == 1 {
            // Two-key leaf holding one key that differs from `key`.
            self.min = Some(min.min(key));
            self.max = Some(min.max(key));
            self.len = 2;
            return true;
        }
        if key < min {
            self.min = Some(key);
            key = min;
        }
        let (c, lo) = (self.high(key), self.low(key));
        let low_bits = self.low_bits();
        if self.clusters.is_empty() {
            self.clusters
                .resize_with(1usize << high_bits(self.bits), || None);
        }
        let slot = &mut self.clusters[c as usize];
        let added = match slot {
            Some(cluster) if !cluster.is_empty() => cluster.insert_raw(lo),
            _ => {
                let mut cluster = Box::new(VebTree::with_bits(low_bits));
                cluster.insert_raw(lo);
                *slot = Some(cluster);
                let high = high_bits(self.bits);
                self.summary
                    .get_or_insert_with(|| Box::new(VebTree::with_bits(high)))
                    .insert_raw(c);
                true
            }
        };
        if added {
            self.len += 1;
            if self.max.is_none_or(|max| key > max) {
                self.max = Some(key);
            }
        }
        added
    }

    fn delete_raw(&mut self, key: u64) -> bool {
        let (min, max) = match (self.min, self.max) {
            (Some(min), Some(max)) => (min, max),
            _ => return false,
        };
        if min == max {
            if key != min {
                return false;
            }
            self.min = None;
            self.max = None;
            self.len = 0;
            self.summary = None;
            self.clusters = Vec::new();
            return true;
        }
        if self.bits == 1 {
            // Both 0 and 1 are present.
            let other = 1 - key;
            self.min = Some(other);
            self.max = Some(other);
            self.len = 1;
            return true;
        }
        let mut key = key;
        if key == min {
            // Pull the smallest clustered key up to become the new minimum.
            let summary = self
                .summary
                .as_ref()
                .expect("non-singleton node has a summary");
            let first = summary.min.expect("non-singleton node has a clustered key");
            let offset = self
                .cluster(first)
                .and_then(|c| c.min)
                .expect("summary lists a live cluster");
            key = self.index(first, offset);
            self.min = Some(key);
        }
        let (c, lo) = (self.high(key), self.low(key));
        let cluster_empty = match self.clusters.get_mut(c as usize).and_then(|s| s.as_mut()) {
            Some(cluster) => {
                if !cluster.delete_raw(lo) {
                    return false;
                }
                cluster.is_empty()
            }
            None => return false,
        };
        self.len -= 1;
        if cluster_empty {
            self.clusters[c as usize] = None;
            let summary = self
                .summary
                .as_mut()
                .expect("summary present while clusters live");
            summary.delete_raw(c);
            if summary.is_empty() {
                self.summary = None;
                self.clusters = Vec::new();
            }
            if key == max {
                self.max = match self.summary.as_ref().and_then(|s| s.max) {
                    None => self.min,
                    Some(last) => {
                        let offset = self
                            .cluster(last)
                            .and_then(|c| c.max)
                            .expect("live cluster");
                        Some(self.index(last, offset))
                    }
                };
            }
        } else if key == max {
            let offset = self.cluster(c).and_then(|cl| cl.max).expect("live cluster");
            self.max = Some(self.index(c, offset));
        }
        true
    }

    fn contains_raw(&self, key: u64) -> bool {
        if self.min == Some(key) || self.max == Some(key) {
            return true;
        }
        if self.bits == 1 {
            return false;
        }
        self.cluster(self.high(key))
            .is_some_and(|c| c.contains_raw(self.low(key)))
    }

    fn successor_raw(&self, key: u64) -> Option<u64> {
        if self.bits == 1 {
            return if key == 0 && self.max == Some(1) {
                Some(1)
            } else {
                None
            };
        }
        if let Some(min) = self.min {
            if key < min {
                return Some(min);
            }
        }
        let (c, lo) = (self.high(key), self.low(key));
        if let Some(cluster) = self.cluster(c) {
            if cluster.max.is_some_and(|max| lo < max) {
                let offset = cluster.successor_raw(lo).expect("cluster max exceeds key");
                return Some(self.index(c, offset));
            }
        }
        let next = self.summary.as_ref()?.successor_raw(c)?;
        let offset = self
            .cluster(next)
            .and_then(|cl| cl.min)
            .expect("summary lists a live cluster");
        Some(self.index(next, offset))
    }

    fn predecessor_raw(&self, key: u64) -> Option<u64> {
        if self.bits == 1 {
            return if key == 1 && self.min == Some(0) {
                Some(0)
            } else {
                None
            };
        }
        if let Some(max) = self.max {
            if key > max {
                return Some(max);
            }
        }
        let (c, lo) = (self.high(key), self.low(key));
        if let Some(cluster) = self.cluster(c) {
            if cluster.min.is_some_and(|min| lo > min) {
                let offset = cluster.predecessor_raw(lo).expect("cluster min below key");
                return Some(self.index(c, offset));
            }
        }
        match self.summary.as_ref().and_then(|s| s.predecessor_raw(c)) {
            Some(prev) => {
                let offset = self
                    .cluster(prev)
                    .and_then(|cl| cl.max)
                    .expect("live cluster");
                Some(self.index(prev, offset))
            }
            None => self.min.filter(|&min| key > min),
        }
    }

    /// Walks the whole structure and checks the representation invariants:
    /// cached min/max consistency, the min-not-in-cluster convention,
    /// summary/cluster agreement and population counts.
    pub fn validate(&self) -> Result<(), String> {
        match (self.min, self.max) {
            (None, None) => {
                if self.len != 0
                    || self.summary.is_some()
                    || self.clusters.iter().any(|c| c.is_some())
                {
                    return Err(format!("empty node over {} bits carries data", self.bits));
                }
                return Ok(());
            }
            (Some(min), Some(max)) => {
                if min > max || max >= self.universe() {
                    return Err(format!(
                        "bad min/max {min}/{max} in universe {}",
                        self.universe()
                    ));
                }
                if (min == max) != (self.len == 1) {
                    return Err(format!("min == max disagrees with population {}", self.len));
                }
            }
            _ => return Err("exactly one of min/max is cached".into()),
        }
        if self.bits == 1 {
            let expected = if self.min == self.max { 1 } else { 2 };
            return if self.len == expected {
                Ok(())
            } else {
                Err(format!("leaf population {} expected {expected}", self.len))
            };
        }
        let mut clustered = 0;
        let mut largest = None;
        for (c, slot) in self.clusters.iter().enumerate() {
            let listed = self
                .summary
                .as_ref()
                .is_some_and(|s| s.contains_raw(c as u64));
            match slot {
                Some(cluster) => {
                    if cluster.is_empty() {
                        return Err(format!("empty cluster {c} retained"));
                    }
                    if !listed {
                        return Err(format!("cluster {c} missing from summary"));
                    }
                    if cluster.bits != self.low_bits() {
                        return Err(format!("cluster {c} has wrong universe"));
                    }
                    cluster.validate()?;
                    if cluster.contains_raw(self.low(self.min.unwrap()))
                        && self.high(self.min.unwrap()) == c as u64
                    {
                        return Err("minimum stored recursively".into());
                    }
                    clustered += cluster.len;
                    largest = Some(self.index(c as u64, cluster.max.unwrap()));
                }
                None if listed => return Err(format!("summary lists absent cluster {c}")),
                None => {}
            }
        }
        if let Some(summary) = &self.summary {
            summary.validate()?;
            if summary.len != self.clusters.iter().filter(|c| c.is_some()).count() as u64 {
                return Err("summary population differs from live cluster count".into());
            }
        }
        if self.len != clustered + 1 {
            return Err(format!(
                "population {} but {} clustered keys plus min",
                self.len, clustered
            ));
        }
        if largest.or(self.min) != self.max {
            return Err("cached max differs from largest stored key".into());
        }
        Ok(())
    }
}

fn high_bits(bits: u32) -> u32 {
    bits - bits / 2
}

fn ceil_log2(v: u64) -> u32 {
    if v <= 1 {
        0
    } else {
        64 - (v - 1).leading_zeros()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn with(keys: &[u64], universe: u64) -> VebTree {
        let mut t = VebTree::new(universe).unwrap();
        for &k in keys {
            t.insert(k).unwrap();
        }
        t
    }

    #[test]
    fn universe_rounding() {
        assert_eq!(VebTree::new(7).unwrap().universe(), 8);
        assert_eq!(VebTree::new(1).unwrap().universe(), 2);
        assert_eq!(VebTree::new(100).unwrap().universe(), 128);
        assert_eq!(VebTree::new(128).unwrap().universe(), 128);
        let t = VebTree::new(7).unwrap();
        assert!(t.is_empty());
        assert_eq!((t.min(), t.max()), (None, None));
    }

    #[test]
    fn universe_errors() {
        assert_eq!(VebTree::new(0).unwrap_err(), VebError::EmptyUniverse);
        assert!(matches!(
            VebTree::new(1 << 41),
            Err(VebError::UniverseTooLarge { .. })
        ));
        assert!(matches!(
            VebTree::new(u64::MAX),
            Err(VebError::UniverseTooLarge { .. })
        ));
        let mut t = VebTree::new(8).unwrap();
        assert_eq!(
            t.insert(8),
            Err(VebError::OutOfUniverse {
                key: 8,
                universe: 8
            })
        );
        assert!(t.delete(9).is_err());
        assert!(t.contains(8).is_err());
        assert!(t.successor(8).is_err());
        assert!(t.predecessor(100).is_err());
    }

    #[test]
    fn insert_examples() {
        let t = with(&[2, 3, 6], 8);
        assert_eq!(t.iter().collect::<Vec<_>>(), vec![2, 3, 6]);
        let mut t = with(&[3], 8);
        assert!(!t.insert(3).unwrap());
        assert_eq!(t.len(), 1);
        let t = with(&[0, 7], 8);
        assert_eq!((t.min(), t.max()), (Some(0), Some(7)));
    }

    #[test]
    fn delete_examples() {
        let mut t = with(&[2, 3, 6], 8);
        assert!(t.delete(3).unwrap());
        assert_eq!(t.iter().collect::<Vec<_>>(), vec![2, 6]);
        assert!(!t.delete(5).unwrap());
        assert_eq!(t.iter().collect::<Vec<_>>(), vec![2, 6]);
        let mut t = with(&[2], 8);
        t.delete(2).unwrap();
        assert!(t.is_empty());
        assert_eq!((t.min(), t.max()), (None, None));
        t.validate().unwrap();
    }

    #[test]
    fn query_examples() {
        let t = with(&[2, 3, 6], 8);
        assert!(t.contains(3).unwrap());
        assert!(!t.contains(4).unwrap());
        assert!(!VebTree::new(8).unwrap().contains(0).unwrap());
        assert_eq!((t.min(), t.max()), (Some(2), Some(6)));
        assert_eq!(t.successor(1).unwrap(), Some(2));
        assert_eq!(t.successor(3).unwrap(), Some(6));
        assert_eq!(t.successor(6).unwrap(), None);
        assert_eq!(t.predecessor(6).unwrap(), Some(3));
        assert_eq!(t.predecessor(2).unwrap(), None);
        assert_eq!(t.predecessor(4).unwrap(), Some(3));
        let t = with(&[5], 8);
        assert_eq!((t.min(), t.max()), (Some(5), Some(5)));
    }

    #[test]
    fn height_is_doubly_logarithmic() {
        for bits in 1..=MAX_UNIVERSE_BITS {
            let t = VebTree::new(1u64 << bits).unwrap();
            assert!(t.height() <= ceil_log2(u64::from(bits)) + 1, "bits {bits}");
        }
    }

    #[test]
    fn empty_clusters_are_released() {
        let mut t = with(&[1, 100, 200, 300], 1024);
        for k in [100, 200, 300, 1] {
            t.delete(k).unwrap();
            t.validate().unwrap();
        }
        assert!(t.clusters.is_empty() && t.summary.is_none());
    }

    #[test]
    fn exhaustive_small_universe() {
        // Every subset of a 16-key universe, built and queried key by key.
        for mask in 0u32..(1 << 16) {
            let keys: BTreeSet<u64> = (0..16).filter(|k| mask >> k & 1 == 1).collect();
            let t = with(&keys.iter().copied().collect::<Vec<_>>(), 16);
            t.validate().unwrap();
            for x in 0..16 {
                assert_eq!(t.contains(x).unwrap(), keys.contains(&x));
                assert_eq!(t.successor(x).unwrap(), keys.range(x + 1..).next().copied());
                assert_eq!(
                    t.predecessor(x).unwrap(),
                    keys.range(..x).next_back().copied()
                );
            }
        }
    }
}
